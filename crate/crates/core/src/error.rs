//! Error types shared by the library.

use thiserror::Error;

/// Errors produced by sequence construction, synthesis, and analysis.
#[derive(Debug, Clone, Error)]
pub enum PulseError {
    /// An axis or state vector was expected to have unit Euclidean norm.
    #[error("axis must be a unit vector, got norm {norm}")]
    NonUnitAxis { norm: f64 },

    /// The zero vector cannot represent a Bloch direction.
    #[error("zero vector cannot represent a Bloch direction")]
    ZeroVector,

    /// A segment duration must be strictly positive.
    #[error("segment duration must be positive, got {duration}")]
    NonPositiveDuration { duration: f64 },

    /// Axis extraction is undefined for unitaries proportional to the identity.
    #[error("degenerate rotation: axis undefined (angle = 0 mod 2pi)")]
    DegenerateRotation,

    /// A composite proportional to the identity makes every state cyclic, so a
    /// basis Bloch vector must be supplied by the caller.
    #[error("degenerate composite: every state is cyclic; supply n0 explicitly")]
    DegenerateComposite,

    /// A scalar parameter fell outside its valid domain.
    #[error("{param} = {value} outside valid domain {domain}")]
    Domain {
        param: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// The nonlinear solve for a composite family found no acceptable root.
    #[error("synthesis failed: no acceptable root found (best residuals {residuals:?})")]
    SynthesisFailure { residuals: [f64; 3] },

    /// A trajectory did not close, so no enclosed solid angle exists.
    #[error("trajectory is not closed (endpoint gap {gap}); solid angle undefined")]
    OpenTrajectory { gap: f64 },

    /// Too few usable data points survived floor filtering for a scaling fit.
    #[error("only {usable} of {total} sweep rows exceed the infidelity floor; widen the epsilon range")]
    InsufficientFitData { usable: usize, total: usize },

    /// A sweep was requested over an invalid epsilon grid.
    #[error("invalid epsilon grid: {reason}")]
    InvalidGrid { reason: &'static str },

    /// A matrix failed a structural check (unitarity or hermiticity).
    #[error("matrix is not {expected} (defect {defect})")]
    NotStructured { expected: &'static str, defect: f64 },
}

pub type Result<T> = std::result::Result<T, PulseError>;
