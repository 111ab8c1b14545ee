pub mod cli;
pub mod error;
pub mod invariants;
pub mod lie_core;
pub mod linalg;
pub mod numerics;
pub mod report;
pub mod root_space;
pub mod space;
pub mod suites;

pub use error::{Error, Result};
pub use lie_core::{build_algebra, AlgebraElement, CartanDecomposition, Family, LieAlgebraRealization};
pub use space::{SpaceSpec, SymmetricSpace};
