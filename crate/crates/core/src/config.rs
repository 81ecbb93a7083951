//! Run configuration: the unspecified absolute constants, caps, and output format.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::densecheck::DEFAULT_DENSE_CAP;
use crate::error::{Error, Result};
use crate::jordan::DEFAULT_BLOCK_CAP;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Table,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Constant in the concentration bound for a single free direction.
    pub c: f64,
    /// Constant in the multi-dimensional concentration bound.
    pub c1: f64,
    /// Constant in the return-probability bound used by the planner.
    pub c2: f64,
    pub block_cap: usize,
    pub dense_cap: usize,
    pub max_iters: u32,
    pub format: Format,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            c: 1.0,
            c1: 1.0,
            c2: 1.0,
            block_cap: DEFAULT_BLOCK_CAP,
            dense_cap: DEFAULT_DENSE_CAP,
            max_iters: 8,
            format: Format::Json,
            seed: 0,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("c", self.c), ("c1", self.c1), ("c2", self.c2)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("constant {name} must be positive, got {v}")));
            }
        }
        if self.block_cap == 0 || self.dense_cap == 0 || self.max_iters == 0 {
            return Err(Error::InvalidParameter("caps must be at least 1".into()));
        }
        Ok(())
    }

    /// TOML unless the file ends in `.json`.
    pub fn from_str_with_ext(text: &str, json: bool) -> Result<Self> {
        let cfg: Config = if json {
            serde_json::from_str(text)?
        } else {
            toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
        let json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        Config::from_str_with_ext(&text, json)
    }
}
