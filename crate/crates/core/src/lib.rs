//! Exact arithmetic for the Cullis determinant of rectangular matrices, matroids of
//! linear varieties, and an exhaustive small-field verification harness.
//!
//! Indices are 1-based throughout the public interface.

pub mod bench;
pub mod cli;
pub mod cullis;
pub mod error;
pub mod field;
pub mod index;
pub mod linalg;
pub mod linvar;
pub mod mat;
pub mod matroid;
pub mod verify;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use index::{IndexSet, Select};
pub use mat::Mat;
