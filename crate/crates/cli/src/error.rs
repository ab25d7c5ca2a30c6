use ergochan::Error;

/// Failure of a CLI run, grouped by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("numerical singularity: {0}")]
    Singular(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Io(_) => 2,
            Self::Singular(_) => 3,
            Self::Invariant(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::SingularGrid(times) => {
                let list: Vec<String> = times.iter().map(|t| format!("t = {t}")).collect();
                Self::Singular(format!(
                    "p_t vanishes inside the time grid at {}",
                    list.join(", ")
                ))
            }
            Error::SingularSchedule { .. } | Error::NonInvertibleMap(_) => {
                Self::Singular(e.to_string())
            }
            other => Self::Invariant(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Io(e.to_string())
    }
}
