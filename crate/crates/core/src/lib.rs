//! Lattice and low-dimensional topology computations for ruling out
//! sliceness of knots in once-punctured complex projective space.

pub mod error;
pub mod lattice;

pub use error::{Error, Result};
pub mod forms;
pub mod lens;
pub mod knots;
pub mod obstruct;
pub mod embed;
