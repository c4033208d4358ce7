use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed language tag {0:?}: expected `xxx_Yyyy`")]
    MalformedTag(String),
    #[error("unknown language tag {0:?}")]
    UnknownTag(String),
    #[error("malformed language pair {0:?}: expected `xxx_Yyyy-zzz_Wwww`")]
    MalformedPair(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}:{line}: invalid UTF-8")]
    InvalidUtf8 { path: PathBuf, line: u64 },
    #[error("line count mismatch: {source_path} has {source_lines} lines, {target_path} has {target_lines}")]
    LineCountMismatch {
        source_path: PathBuf,
        source_lines: u64,
        target_path: PathBuf,
        target_lines: u64,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("empty lexicon: {0}")]
    EmptyLexicon(PathBuf),
    #[error("empty input: {0}")]
    EmptyInput(String),
    #[error("length mismatch: {hypotheses} hypotheses vs {references} references")]
    LengthMismatch { hypotheses: usize, references: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("direction mismatch: {0}")]
    Direction(String),
    #[error("sampling plan does not match corpus: {0}")]
    PlanMismatch(String),
    #[error("budget {budget} exceeds the {available} available pairs")]
    BudgetExceedsAvailable { budget: u64, available: u64 },
    #[error("unknown seed subset {0:?}")]
    UnknownSubset(String),
    #[error("unknown phase {0:?}: expected `pretrain` or `finetune`")]
    UnknownPhase(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
