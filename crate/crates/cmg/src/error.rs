use std::path::{Path, PathBuf};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: u64, msg: String },
    #[error("{path}: {msg}")]
    Format { path: PathBuf, msg: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] cmg_core::Error),
    #[error("stage {stage} failed: {source}")]
    Stage { stage: &'static str, source: Box<Error> },
    #[error("{0}")]
    Runtime(String),
}

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

impl Error {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Error::Io { path: path.to_path_buf(), source }
    }

    pub fn format(path: &Path, msg: impl Into<String>) -> Self {
        Error::Format { path: path.to_path_buf(), msg: msg.into() }
    }

    pub fn in_stage(self, stage: &'static str) -> Self {
        match self {
            e @ Error::Stage { .. } => e,
            e => Error::Stage { stage, source: Box::new(e) },
        }
    }

    /// Bad input or parameters map to 2, failures while computing to 3.
    pub fn exit_code(&self) -> i32 {
        use cmg_core::Error as C;
        match self {
            Error::Io { .. } | Error::Parse { .. } | Error::Format { .. } | Error::Config(_) => EXIT_VALIDATION,
            Error::Stage { source, .. } => source.exit_code(),
            Error::Runtime(_) => EXIT_RUNTIME,
            Error::Core(c) => match c {
                C::EmptyCluster(_) | C::EmptyFirstLayer | C::Invariant(_) | C::MissingLabel(_) => EXIT_RUNTIME,
                _ => EXIT_VALIDATION,
            },
        }
    }
}

pub trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T, E: Into<Error>> StageExt<T> for std::result::Result<T, E> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| e.into().in_stage(stage))
    }
}
