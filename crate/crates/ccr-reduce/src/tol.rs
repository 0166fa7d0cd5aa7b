//! Tolerance configuration shared by every numerical decision in the crate.
//!
//! Rank and null-space decisions use singular values with a relative cutoff
//! `rank_rel * sigma_max`, so they are scale free. All checkers take their
//! thresholds from here (or from a grid's quadrature tolerance) rather than
//! hard-coding absolute numbers.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative singular-value cutoff for rank decisions.
    pub rank_rel: f64,
    /// Residual threshold for subspace membership and equality tests.
    pub residual: f64,
    /// Phase accuracy for Weyl products and state evaluations.
    pub phase: f64,
    /// Threshold below which a quadratic form value counts as zero.
    pub form_zero: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank_rel: 1e-10,
            residual: 1e-10,
            phase: 1e-12,
            form_zero: 1e-10,
        }
    }
}

impl Tolerances {
    /// Absolute singular-value cutoff for a matrix whose largest singular
    /// value is `sigma_max`.
    pub fn rank_cut(&self, sigma_max: f64) -> f64 {
        if sigma_max == 0.0 {
            // all-zero matrix: any positive cutoff works
            f64::MIN_POSITIVE
        } else {
            self.rank_rel * sigma_max
        }
    }
}
