use std::process::ExitCode;

use clap::Parser;
use cubecomp_cli::{run, Cli};

fn configure_threads() {
    let Ok(value) = std::env::var("CUBECOMP_THREADS") else {
        return;
    };
    match value.parse::<usize>() {
        Ok(n) if n > 0 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
            {
                eprintln!("warning: CUBECOMP_THREADS ignored: {e}");
            }
        }
        _ => eprintln!("warning: CUBECOMP_THREADS={value:?} is not a positive integer"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match run(&cli) {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
