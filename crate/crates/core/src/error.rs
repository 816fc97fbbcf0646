use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("integration diverged at step {step}: {reason}")]
    IntegrationDiverged { step: usize, reason: String },

    #[error(
        "ambiguous steady state: generator has a {null_dim}-dimensional null space \
         not fixed by the conserved quantities"
    )]
    AmbiguousSteadyState { null_dim: usize },

    #[error(
        "stochastic step unstable at step {step}: minimum eigenvalue {min_eigenvalue:.3e}; \
         reduce dt"
    )]
    StepInstability { step: usize, min_eigenvalue: f64 },
}
