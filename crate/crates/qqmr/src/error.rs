use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    /// Invalid flags or flag combinations, or inputs the solvers cannot take.
    #[error("{0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{line}: {msg}", path.display())]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error(transparent)]
    Core(#[from] qqmr_core::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl AppError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }

    /// 2 for configuration problems, 3 for anything touching files.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Core(_) => 2,
            Self::Io { .. } | Self::Parse { .. } | Self::Csv(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, AppError>;
