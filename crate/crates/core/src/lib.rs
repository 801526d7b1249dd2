//! Low-rank Gaussian perturbations of matrices.
//!
//! Adding `U Vᵀ` with Gaussian `n x k` factors to a rank-`(n-k)` matrix makes
//! it well conditioned with high probability, at `O(nk)` extra storage and
//! matvec cost. This crate provides the pieces to check that empirically:
//!
//! | Module | Purpose |
//! |--------|---------|
//! | [`linalg`] | Jacobi SVD, condition numbers, LU solves, block-inverse bound |
//! | [`rng`] | Counter-based `(master, stream)` sampling of the noise models |
//! | [`operator`] | `M + U Vᵀ` over CSR / dense / diagonal bases, Matrix Market I/O |
//! | [`bounds`] | Bound expressions and Monte Carlo tail estimates |
//! | [`krylov`] | Conjugate gradient for the condition-number / iteration link |
//! | [`simplex`] | Dantzig simplex on (perturbed) Klee–Minty cubes |
//! | [`kmeans`] | Ball probabilities for dense vs rank-1 noise |
//! | [`families`] | The ill-conditioned anti-diagonal family and the Rademacher counterexample |

pub mod bounds;
mod error;
pub mod families;
pub mod kmeans;
pub mod krylov;
pub mod linalg;
pub mod operator;
pub mod rng;
pub mod simplex;
pub mod stats;
#[cfg(any(test, feature = "testing"))]
pub mod testing;

pub use error::{Error, Result};
pub use linalg::{ComplexDenseMatrix, DenseMatrix, SingularSpectrum};
pub use operator::{CsrMatrix, LowRankUpdate, PerturbedOperator};
pub use rng::{DistributionSpec, Seed};
