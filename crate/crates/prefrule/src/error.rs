//! Crate-wide error type for validation and domain failures.

use thiserror::Error;

use crate::design::DesignViolation;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Validation and domain errors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A quantity declared as a probability fell outside `[0, 1]`.
    #[error("{name} must lie in [0, 1], got {value}")]
    ProbabilityOutOfRange { name: &'static str, value: f64 },

    /// A numeric input was NaN or infinite.
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    /// The tie parameter of the naive rule is a probability.
    #[error("epsilon must lie in [0, 1], got {0}")]
    EpsilonOutOfRange(f64),

    /// Grid oracle step outside `(0, 0.5]`.
    #[error("grid step must lie in (0, 0.5], got {0}")]
    StepOutOfRange(f64),

    /// A kink probe stepped outside the unit square of rules.
    #[error("probe leaves the unit square: base ({base1}, {base0}), offset ({off1}, {off0})")]
    ProbeOutOfDomain {
        base1: f64,
        base0: f64,
        off1: f64,
        off0: f64,
    },

    /// Kink probes are only defined on the diagonal delta(1) == delta(0).
    #[error("kink probe base must satisfy delta(1) == delta(0), got ({0}, {1})")]
    ProbeBaseNotTied(f64, f64),

    /// A kink probe needs at least one strictly positive step size.
    #[error("kink probe needs at least one finite alpha > 0")]
    EmptyProbe,

    /// An experimental design failed validation.
    #[error("invalid design: {}", describe_violations(.0))]
    InvalidDesign(Vec<DesignViolation>),

    /// A population specification failed validation.
    #[error("invalid population: {0}")]
    InvalidPopulation(String),

    /// A trial dataset failed validation.
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    /// Datasets must contain at least one record.
    #[error("dataset must contain at least one record")]
    EmptyDataset,

    /// The free-choice arm is unanimous, so one conditional effect has no
    /// compliers and cannot be identified.
    #[error(
        "degenerate preferences: P(D=1|Z=2) = {0}; a preference type is absent \
         and its conditional effect is unidentified"
    )]
    DegeneratePreference(f64),

    /// The finite-sample regret bound only holds for n >= kappa^-2.
    #[error("sample size {n} is below the bound validity threshold kappa^-2 = {min_n}")]
    BoundOutOfValidity { n: usize, min_n: f64 },

    /// Catch-all for argument contract violations.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

fn describe_violations(violations: &[DesignViolation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
