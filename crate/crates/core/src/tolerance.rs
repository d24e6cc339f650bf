use serde::{Deserialize, Serialize};

/// Numerical thresholds shared across the crate.
///
/// Absolute thresholds are scaled by `max(1, ‖x‖_F)` of the matrix they are
/// compared against, see [`Tolerances::scaled`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Minimum eigenvalue gap for regularity and strong regularity.
    pub gap: f64,
    /// Relative singular value cutoff for numeric rank.
    pub rank: f64,
    /// Hermitian, skew-Hermitian and unitarity defects accepted on input.
    pub structure: f64,
    /// Commutator defect accepted for centralizer and stabilizer membership.
    pub commute: f64,
    /// Spectrum mismatch accepted for points on an orbit.
    pub orbit: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            gap: 1e-8,
            rank: 1e-8,
            structure: 1e-9,
            commute: 1e-8,
            orbit: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn scaled(tol: f64, norm: f64) -> f64 {
        tol * norm.max(1.0)
    }
}
