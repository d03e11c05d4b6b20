use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum EsuError {
    /// A model parameter violates its invariant (a > 0, m >= 0, kappa != 0, c > -1, finiteness).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An argument lies outside the domain of the requested function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The renormalised Newton constant is singular (1 - kappa(alpha2 m^2 + beta2 Lambda) = 0).
    #[error("singular renormalisation: denominator 1 - kappa(alpha2 m^2 + beta2 Lambda) = {denominator:e}")]
    SingularRenormalization { denominator: f64 },

    /// The Hadamard parametrix was requested on its singular support.
    #[error("separation lies on the singular support (sigma = {sigma:e})")]
    SingularSupport { sigma: f64 },

    /// The occupation of a mode with vanishing coefficient was requested.
    #[error("mode {n} has a_n = 0 and lies in the kernel of the one-particle Hamiltonian")]
    ModeInKernel { n: u64 },

    /// The semi-classical system has no solution for these targets.
    #[error("no solution: {0}")]
    NoSolution(String),

    /// A two-mode solution does not exist for the chosen upper mode.
    #[error("no two-mode solution with n_high = {n_high}: {reason}")]
    NoSolutionWithN { n_high: u64, reason: String },

    /// A root finder failed to bracket or converge.
    #[error("solver failure: {0}")]
    SolverFailure(String),
}

pub type Result<T> = std::result::Result<T, EsuError>;
