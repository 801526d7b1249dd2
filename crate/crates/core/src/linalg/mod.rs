//! Dense linear algebra: singular values, condition numbers, linear solves
//! and the block-inverse norm bound.

mod block;
mod complex;
pub(crate) mod dense;
mod solve;
mod svd;

pub use block::{block_inverse_bound_check, BlockBound};
pub use complex::ComplexDenseMatrix;
pub use dense::{axpy, dot, norm2, DenseMatrix};
pub use solve::{determinant, solve_dense, Lu, PIVOT_FLOOR};
pub use svd::{
    condition_number, smallest_singular_value, svd_values, svd_values_complex,
    top_right_singular_vector, ConditionNumber, SingularSpectrum,
};

/// `s_n < SINGULAR_RELATIVE * s_1` counts as singular in counterexample
/// experiments.
pub const SINGULAR_RELATIVE: f64 = 1e-10;
