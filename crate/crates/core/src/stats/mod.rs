//! Chi-square independence tests and BIC local scores.

mod bic;
mod chi2;

pub use bic::{bic_local, total_bic, LocalScore, ScoreCache};
pub use chi2::{chi_sq_pvalue, chi_sq_test, ChiSqResult};
