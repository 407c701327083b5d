//! Exact tools for polymatroids, subspace arrangements over finite fields
//! and linear rank inequalities.

pub mod cone;
pub mod constructs;
pub mod error;
pub mod format;
pub mod gf;
pub mod inequality;
pub mod lattice;
pub mod linalg;
pub mod matroid;
pub mod rational;
pub mod represent;
pub mod verify;

pub use error::{Error, Result};
pub use gf::{Field, FieldElement};
pub use lattice::{GroundSet, RankVector, SubsetMask};
pub use linalg::{Matrix, Subspace};
pub use rational::Rational;
pub use represent::Arrangement;
