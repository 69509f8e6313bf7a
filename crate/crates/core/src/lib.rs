//! Exact commutative algebra for probing complete-intersection criteria of
//! homogeneous ideals: Gröbner bases, minimal resolutions, Koszul homology,
//! acyclic closures with their homotopy Lie algebra, and conormal modules.

pub mod conormal;
pub mod dgmodel;
pub mod error;
pub mod exactalg;
pub mod groebner;
pub mod homlie;
pub mod koszul;
pub mod linalg;
pub mod resolve;

pub use error::{Error, Result};
