use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "cubecomp",
    version,
    about = "Concept classes in the binary n-cube"
)]
pub struct Cli {
    /// Machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Run exhaustive modes beyond their size guards.
    #[arg(long, global = true)]
    pub force: bool,

    /// Write the main artifact here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// VC dimension, shattered sets, cube types, maximum / extremal.
    Analyze { class: PathBuf },

    /// Intersection closure, optionally with a change of origin.
    Closure {
        class: PathBuf,
        /// Close with respect to this origin (a bitstring).
        #[arg(long)]
        origin: Option<String>,
        /// Also report the origin minimising the VC dimension of the closure.
        #[arg(long)]
        search_origin: bool,
    },

    /// Least k for which the k-close cube condition holds, with a certificate.
    Kcube {
        class: PathBuf,
        /// Test this k only.
        #[arg(long)]
        k: Option<usize>,
    },

    /// Shortest-path closure of an intersection-closed class and its checks.
    Spc {
        class: PathBuf,
        /// Coordinate order as a comma separated permutation, e.g. 3,1,2.
        #[arg(long, conflicts_with = "shuffle_seed")]
        ordering: Option<String>,
        /// Seeded random coordinate order.
        #[arg(long)]
        shuffle_seed: Option<u64>,
    },

    /// Build an unlabelled compression scheme.
    Scheme {
        class: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Ccc)]
        method: Method,
        /// Print the ccc chain to stderr.
        #[arg(long)]
        trace: bool,
    },

    /// Check a scheme file against a class file.
    Verify {
        class: PathBuf,
        scheme: PathBuf,
        /// Size bound to check against (default: the scheme's own).
        #[arg(long)]
        k: Option<usize>,
    },

    /// compress / reconstruct over every domain and realisable labelling.
    Roundtrip {
        class: PathBuf,
        /// Sample this many domains instead of trying all of them.
        #[arg(long)]
        sample_domains: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Write generated classes.
    Generate(GenerateArgs),

    /// Shortest-path closure growth sweep over generated classes, as CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Ccc,
    Peel,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Generator spec as JSON (with a "family" tag).
    #[arg(long, conflicts_with_all = ["family", "suite"])]
    pub spec: Option<PathBuf>,

    #[arg(long, requires = "n")]
    pub family: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub density: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub terms: Option<usize>,
    #[arg(long)]
    pub max_vc: Option<usize>,
    /// Hyperrectangle point set, one integer point per CSV row.
    #[arg(long)]
    pub points: Option<PathBuf>,

    /// Write a whole suite into this directory instead of one class.
    #[arg(long)]
    pub suite: Option<PathBuf>,
    /// Classes per family in suite mode.
    #[arg(long, default_value_t = 5)]
    pub per_family: usize,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of generated classes.
    #[arg(long, default_value_t = 300)]
    pub count: usize,
    #[arg(long, default_value_t = 12)]
    pub max_n: usize,
    #[arg(long, default_value_t = 3)]
    pub max_d: usize,
    /// Write 0 in the seconds column so runs are byte-identical.
    #[arg(long)]
    pub no_timing: bool,
}
