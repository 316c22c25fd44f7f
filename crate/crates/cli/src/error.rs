use phasebound_core::eigen::EigenError;
use phasebound_core::{AsymptoticError, KernelError, OracleError, PovmError, StateError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Numerical(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 3,
            _ => 2,
        }
    }
}

impl From<KernelError> for CliError {
    fn from(e: KernelError) -> Self {
        if e.is_domain() {
            CliError::Domain(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

impl From<AsymptoticError> for CliError {
    fn from(e: AsymptoticError) -> Self {
        match e {
            AsymptoticError::Kernel(k) => k.into(),
            AsymptoticError::NoConvergence { .. }
            | AsymptoticError::Eigen(EigenError::ConvergenceFailure { .. }) => {
                CliError::Numerical(e.to_string())
            }
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<StateError> for CliError {
    fn from(e: StateError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<PovmError> for CliError {
    fn from(e: PovmError) -> Self {
        match e {
            PovmError::Inconsistent(_) => CliError::Numerical(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Kernel(k) => k.into(),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
