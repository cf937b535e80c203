//! Settings from one JSON file, overridden by command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::recipe::{CohesiveSource, Recipe};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("reading config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config {path}: {message}")]
    Parse { path: PathBuf, message: String },
}

/// Every field is optional; unset fields fall through to the next layer.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub base: Option<String>,
    pub stages: Option<u64>,
    pub budget: Option<u64>,
    pub seed: Option<u64>,
    /// Serialized window file.
    pub cohesive: Option<PathBuf>,
    pub parallel: Option<bool>,
    pub out_dir: Option<PathBuf>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.into(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| ConfigError::Parse {
            path: path.into(),
            message: e.to_string(),
        })
    }

    /// `self` wins wherever it is set.
    pub fn over(self, lower: Config) -> Config {
        Config {
            base: self.base.or(lower.base),
            stages: self.stages.or(lower.stages),
            budget: self.budget.or(lower.budget),
            seed: self.seed.or(lower.seed),
            cohesive: self.cohesive.or(lower.cohesive),
            parallel: self.parallel.or(lower.parallel),
            out_dir: self.out_dir.or(lower.out_dir),
        }
    }

    /// Overwrites the recipe parameters that are set here.
    pub fn apply(&self, r: &mut Recipe) {
        let p = &mut r.params;
        if let Some(b) = &self.base {
            p.base = b.clone();
        }
        p.stages = self.stages.unwrap_or(p.stages);
        p.budget = self.budget.unwrap_or(p.budget);
        p.seed = self.seed.unwrap_or(p.seed);
        if let Some(path) = &self.cohesive {
            r.cohesive = CohesiveSource::File { path: path.clone() };
        }
    }
}
