//! Concept classes in the binary n-cube.
//!
//! Vertices are bit words with coordinate 1 in the lowest bit; classes are
//! kept in lexicographic order of their bitstrings (coordinate 1 leftmost).
//! Around that sit VC analysis, intersection closures and the k-close cube
//! condition, the shortest-path closure embedding with its `11d` growth
//! bound, and unlabelled compression schemes.

pub mod class;
pub mod classgen;
pub mod closure;
pub mod compression;
pub mod coords;
pub mod cube;
pub mod error;
pub mod io;
pub mod spc;
pub mod vc;
pub mod vertex;

pub use class::ConceptClass;
pub use coords::CoordSet;
pub use cube::Cube;
pub use error::{Error, Result};
pub use vertex::Vertex;
