//! Convex state spaces built from real representations of PU(d), with
//! tools to test which operational properties of quantum theory they keep.

pub mod effects;
pub mod error;
pub mod gpt;
pub mod irreps;
pub mod linalg;
pub mod partitions;
pub mod phenomenology;
pub mod summary;
pub mod symtensor;
pub mod tol;

pub use error::{Error, Result};
pub use effects::{Effect, Measurement};
pub use gpt::{PureRay, Restriction, Theory, TheorySpec};
pub use irreps::{IrrepSpec, RepRealization};
