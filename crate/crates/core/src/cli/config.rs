//! Defaults file named by `PIPELINE_CONFIG`.
//!
//! One `key = value` per line. Blank lines and lines starting with `#` are
//! ignored; surrounding whitespace and matching double quotes around the
//! value are stripped. Keys use the long flag names without dashes:
//!
//! ```text
//! # shared settings for a run
//! seed = 20240801
//! threads = 4
//! temperature = 5
//! prob = 0.3
//! topk = 4000
//! budget = 2260000
//! format = muse
//! mode = random-language
//! threshold = 10000000
//! factor = 0.5
//! ```
//!
//! Flags on the command line win over the file, the file wins over built-in
//! defaults. Unknown keys are an error.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};

pub const ENV_VAR: &str = "PIPELINE_CONFIG";

pub const KEYS: [&str; 10] = [
    "seed",
    "threads",
    "temperature",
    "prob",
    "topk",
    "budget",
    "format",
    "mode",
    "threshold",
    "factor",
];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PipelineConfig {
    pub path: Option<PathBuf>,
    values: BTreeMap<String, String>,
}

impl PipelineConfig {
    /// Reads the file named by the environment variable, or returns an empty
    /// config when it is unset or empty.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(ENV_VAR) {
            Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::parse(&text, path)?;
        cfg.path = Some(path.to_path_buf());
        Ok(cfg)
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse {
                path: path.to_path_buf(),
                line: i as u64 + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
            let key = key.trim();
            let value = value.trim();
            let value = value
                .strip_prefix('"')
                .and_then(|v| v.strip_suffix('"'))
                .unwrap_or(value);
            if !KEYS.contains(&key) {
                return Err(err(format!("unknown key {key:?}")));
            }
            if values.insert(key.to_string(), value.to_string()).is_some() {
                return Err(err(format!("duplicate key {key:?}")));
            }
        }
        Ok(PipelineConfig { path: None, values })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|e| {
                Error::InvalidParameter(format!("config key {key} = {v:?}: {e}"))
            }),
        }
    }

    /// Flag value, else config value, else `default`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.get(key)?.unwrap_or(default)),
        }
    }
}
