use friction_phase::Error;
use thiserror::Error as ThisError;

/// Exit status contract: 0 success, 2 usage or domain error, 3 I/O error.
#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

/// Command-line flag that sets a model parameter.
pub fn flag_for(name: &str) -> &str {
    match name {
        "gamma0" => "--gamma0",
        "lambda" => "--lambda",
        "omega" => "--omega",
        "omega0" => "--omega0",
        "velocity" => "--velocity",
        "theta" => "--theta",
        "time" => "--time",
        "s_final" => "--s-final",
        "tolerance" => "--tolerance",
        "step_count" => "--steps",
        "nodes" => "--nodes",
        "max_depth" => "--max-depth",
        other => other,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain { name, reason, value } => {
                CliError::Usage(format!("{} {reason} (got {value})", flag_for(name)))
            }
            Error::PoleState { theta } => CliError::Usage(format!(
                "--theta {theta} is a pole of the Bloch sphere; the open-system phase is undefined there, use the unitary formula pi(1 + cos theta)"
            )),
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
