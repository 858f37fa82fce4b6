use thiserror::Error;

/// Errors produced by the Bell-diagonal correlation layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CorrError {
    /// The correlation vector lies outside the physical tetrahedron.
    #[error("unphysical state: λ{label} = {value} < 0")]
    Unphysical {
        /// Two-character label `ij` of the most negative eigenvalue.
        label: &'static str,
        value: f64,
        spectrum: [f64; 4],
    },

    #[error("measurement direction is not a unit vector (norm {norm})")]
    NotUnitVector { norm: f64 },

    #[error("vector {u:?} is not on the probability simplex")]
    OffSimplex { u: [f64; 3] },

    #[error("matrix is not Hermitian (max asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("argument {value} outside domain {domain}")]
    OutOfDomain { value: f64, domain: &'static str },

    #[error("closed-form and matrix paths disagree for {quantity}: {closed} vs {direct}")]
    DualPathMismatch {
        quantity: &'static str,
        closed: f64,
        direct: f64,
    },

    #[error("invariant violated: {0}")]
    InvariantViolated(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, CorrError>;
