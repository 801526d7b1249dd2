//! The perturbed operator `M + U Vᵀ` over sparse, dense and diagonal bases.

mod csr;
mod mtx;
mod perturbed;

pub use csr::CsrMatrix;
pub use mtx::{read_matrix_market, write_matrix_market};
pub use perturbed::{
    det_rank1_diag, diagonal_model, Base, LowRankUpdate, PerturbedOperator, DEFAULT_DENSIFY_CAP,
};
