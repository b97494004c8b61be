use scodes_core::bounds::BoundError;
use scodes_core::constructions::CdcError;

#[derive(Debug)]
pub enum CliError {
    Param(String),
    Verify(String),
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Param(_) => 2,
            CliError::Verify(_) => 3,
            CliError::Data(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Param(s) => write!(f, "error: {s}"),
            CliError::Verify(s) => write!(f, "verification failed: {s}"),
            CliError::Data(s) => write!(f, "data error: {s}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CdcError> for CliError {
    fn from(e: CdcError) -> Self {
        match e {
            CdcError::Data(_) => CliError::Data(e.to_string()),
            _ => CliError::Param(e.to_string()),
        }
    }
}

impl From<BoundError> for CliError {
    fn from(e: BoundError) -> Self {
        match e {
            BoundError::Facts { .. } | BoundError::Inconsistent { .. } => CliError::Data(e.to_string()),
            _ => CliError::Param(e.to_string()),
        }
    }
}
