use thiserror::Error;

use crate::lie::AlgebraKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("algebra kind mismatch: {left} vs {right}")]
    KindMismatch { left: AlgebraKind, right: AlgebraKind },

    #[error("invalid algebra kind: {0}")]
    InvalidKind(String),

    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not skew-Hermitian (defect {defect:.3e})")]
    NotSkewHermitian { defect: f64 },

    #[error("matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("wrong dimensions: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("element is not regular (minimum eigenvalue gap {gap:.3e})")]
    NotRegular { gap: f64 },

    #[error("ladder eigenvalue ({j},{k}) is degenerate (gap {gap:.3e})")]
    DegenerateEigenvalue { j: usize, k: usize, gap: f64 },

    #[error("ladder index ({j},{k}) out of range for {kind}")]
    IndexOutOfRange { kind: AlgebraKind, j: usize, k: usize },

    #[error("point is not strongly regular: {0}")]
    NotStronglyRegular(String),

    #[error("flow left the strongly regular locus at t = {t:.6}")]
    LeftStrongRegularLocus { t: f64 },

    #[error("algebra element does not commute with the base point (defect {defect:.3e})")]
    NotInCentralizer { defect: f64 },

    #[error("group element does not fix the base point (defect {defect:.3e})")]
    NotInStabilizer { defect: f64 },

    #[error("invalid orbit spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("point does not lie on its declared orbits (defect {defect:.3e})")]
    OffOrbit { defect: f64 },

    #[error("tangent vectors are based at different points")]
    PointMismatch,

    #[error("invalid tangent vector (witness residual {residual:.3e})")]
    InvalidTangent { residual: f64 },

    #[error("no convergence after {restarts} restarts (best residual {residual:.3e})")]
    NoConvergence { restarts: usize, residual: f64 },

    #[error("Gelfand-Cetlin patterns differ (defect {defect:.3e})")]
    PatternMismatch { defect: f64 },

    #[error("saturation is ambiguous: a second solution at torus distance {distance:.3e}")]
    AmbiguousSaturation { distance: f64 },

    #[error("invalid value: {0}")]
    InvalidValue(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
