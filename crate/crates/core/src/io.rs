//! The `.cls` text format.
//!
//! ```text
//! n=3
//! # comments run to end of line
//! 000
//! 110   # coordinate 1 is the leftmost character
//! ```
//!
//! [`write_class`] emits the canonical form: the header, then one bitstring
//! per line in lexicographic order. Parsing canonical output reproduces it
//! byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use crate::class::ConceptClass;
use crate::error::{Error, Result};
use crate::vertex::{Vertex, MAX_DIM};

pub fn parse_class(text: &str) -> Result<ConceptClass> {
    let mut n: Option<usize> = None;
    let mut words = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some(dim) = n else {
            let value = content
                .strip_prefix("n=")
                .ok_or_else(|| Error::Parse {
                    line,
                    message: format!("expected header `n=<int>`, found {content:?}"),
                })?
                .trim();
            let dim: usize = value.parse().map_err(|_| Error::Parse {
                line,
                message: format!("bad dimension {value:?}"),
            })?;
            if dim > MAX_DIM {
                return Err(Error::Parse {
                    line,
                    message: format!("dimension {dim} exceeds {MAX_DIM}"),
                });
            }
            n = Some(dim);
            continue;
        };
        let v: Vertex = content.parse().map_err(|e| match e {
            Error::Parse { message, .. } => Error::Parse { line, message },
            other => Error::Parse {
                line,
                message: other.to_string(),
            },
        })?;
        if v.dim() != dim {
            return Err(Error::Parse {
                line,
                message: format!("bitstring has length {} but n={dim}", v.dim()),
            });
        }
        words.push(v.bits());
    }
    let n = n.ok_or(Error::Parse {
        line: text.lines().count().max(1),
        message: "missing header `n=<int>`".into(),
    })?;
    ConceptClass::from_words(n, words)
}

pub fn write_class(class: &ConceptClass) -> String {
    let mut out = String::with_capacity(8 + class.len() * (class.dim() + 1));
    let _ = writeln!(out, "n={}", class.dim());
    for v in class.vertices() {
        let _ = writeln!(out, "{v}");
    }
    out
}

pub fn read_class_file(path: impl AsRef<Path>) -> Result<ConceptClass> {
    parse_class(&std::fs::read_to_string(path)?)
}

pub fn write_class_file(path: impl AsRef<Path>, class: &ConceptClass) -> Result<()> {
    std::fs::write(path, write_class(class))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_comments_and_blank_lines() {
        let text = "# a triangle\nn=2\n\n00\n01 # middle\n10\n";
        let c = parse_class(text).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(write_class(&c), "n=2\n00\n01\n10\n");
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_class("n=2\n00\n0x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_class("n=2\n00\n011\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_class("00\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        assert!(parse_class("# nothing\n").is_err());
        assert!(parse_class("n=64\n").is_err());
    }

    #[test]
    fn empty_class_round_trips() {
        let c = parse_class("n=4\n").unwrap();
        assert!(c.is_empty());
        assert_eq!(write_class(&c), "n=4\n");
    }

    proptest! {
        #[test]
        fn canonical_text_round_trips(n in 1usize..10, seed in proptest::collection::vec(any::<u64>(), 0..40)) {
            let mask = (1u64 << n) - 1;
            let c = ConceptClass::from_words(n, seed.into_iter().map(|w| w & mask).collect()).unwrap();
            let text = write_class(&c);
            let back = parse_class(&text).unwrap();
            prop_assert_eq!(&back, &c);
            prop_assert_eq!(write_class(&back), text);
        }
    }
}
