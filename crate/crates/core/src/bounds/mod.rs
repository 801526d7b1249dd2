//! Bound expressions of the smoothed-analysis statements and Monte Carlo
//! estimators for the probabilities they control.

mod mc;
mod params;

pub use mc::{
    mc_small_sn, run_trials, tail_lemma_mc, McEstimate, SnStudy, TailDims, TailEvent, MIN_TRIALS,
};
pub use params::{
    beyond_rhs, corollary_params, corollary_rhs, main_rhs, main_rhs_complex, main_threshold,
    BeyondBound, BoundParams, Constants, MainBound,
};
