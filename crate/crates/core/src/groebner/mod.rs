//! Ideals, Gröbner bases, graded free modules and their slice-wise
//! linear algebra.

mod graded;
mod ideal;
mod module_gb;

pub use graded::{
    hilbert_by_slice_rank, hilbert_by_standard_monomials, kernel_generators, minimal_subset, span_slice, FreeModule, GradedMap, GradedRing,
    ModulePresentation, PolyVec, RingSlice, Subquotient,
};
pub use ideal::{buchberger, height, krull_dimension, GroebnerBasis, Ideal};
pub use module_gb::{module_groebner, syzygies, syzygy_map};
