use esu_core::EsuError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] EsuError),

    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    /// Process exit code: 2 invalid input, 3 singular, 4 no solution, 5 solver failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Output(_) => 1,
            CliError::Core(e) => match e {
                EsuError::InvalidParameter(_) | EsuError::Domain(_) | EsuError::ModeInKernel { .. } => 2,
                EsuError::SingularRenormalization { .. } | EsuError::SingularSupport { .. } => 3,
                EsuError::NoSolution(_) | EsuError::NoSolutionWithN { .. } => 4,
                EsuError::SolverFailure(_) => 5,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
