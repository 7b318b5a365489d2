use std::path::PathBuf;

use ecoepi_core::pde::io::SnapshotIoError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] ecoepi_core::Error),
    #[error(transparent)]
    Snapshot(#[from] SnapshotIoError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    /// 2 for bad input, 3 for numerical failure, 1 for I/O trouble.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) | CliError::Snapshot(_) => 2,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(_) => 2,
            CliError::Io { .. } => 1,
        }
    }
}
