//! Minimal models `A = R[X]` of `R -> R/I`, their stages and fibres, and
//! the dg module of Kähler differentials.

mod algebra;
mod build;
mod kahler;

pub use algebra::{DgAlgebra, DgDerivation, DgElement, DgKey, DgMonomial, DgVariable};
pub use build::{build_minimal_model, DgModel, ModelSlice, SliceEngine};
pub use kahler::{kahler_module, KahlerBase, KahlerBasis, KahlerDgModule};
