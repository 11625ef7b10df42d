use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use vclab_core::Tolerances;

use crate::{Error, Result};

pub const CONFIG_ENV: &str = "VC_LAB_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Text,
}

/// Run settings. Missing JSON fields take their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub solve_tol: f64,
    pub rank_tol: f64,
    pub tight_tol: f64,
    pub max_iters: usize,
    pub output: OutputFormat,
    pub parallel: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let t = Tolerances::default();
        Self {
            solve_tol: t.solve_tol,
            rank_tol: t.rank_tol,
            tight_tol: t.tight_tol,
            max_iters: t.max_iters,
            output: OutputFormat::Json,
            parallel: false,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text).map_err(|e| e.at(path))
    }

    /// An explicit path wins over `VC_LAB_CONFIG`; with neither, defaults.
    pub fn load(explicit: Option<&Path>) -> Result<Self> {
        if let Some(p) = explicit {
            return Self::from_file(p);
        }
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::from_file(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.tolerances()
            .validate()
            .map_err(|_| Error::Config("config must satisfy 0 < solve_tol < rank_tol < 1, tight_tol > 0 and max_iters >= 10".into()))
    }

    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            solve_tol: self.solve_tol,
            rank_tol: self.rank_tol,
            tight_tol: self.tight_tol,
            max_iters: self.max_iters,
            ..Tolerances::default()
        }
    }

    /// Echo for certificates. `output` and `parallel` do not change results
    /// and are left out so certificates compare equal across them.
    pub fn echo(&self) -> Value {
        let t = self.tolerances();
        serde_json::json!({
            "solve_tol": t.solve_tol,
            "rank_tol": t.rank_tol,
            "tight_tol": t.tight_tol,
            "support_tol": t.support_tol,
            "max_iters": t.max_iters,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_partial_files() {
        let c = RunConfig::from_json(r#"{"rank_tol": 1e-5, "output": "text"}"#).unwrap();
        assert_eq!(c.rank_tol, 1e-5);
        assert_eq!(c.solve_tol, 1e-9);
        assert_eq!(c.output, OutputFormat::Text);
        assert_eq!(RunConfig::from_json("{}").unwrap(), RunConfig::default());
    }

    #[test]
    fn invariants_enforced() {
        assert!(RunConfig::from_json(r#"{"solve_tol": 1e-5, "rank_tol": 1e-6}"#).is_err());
        assert!(RunConfig::from_json(r#"{"max_iters": 5}"#).is_err());
        assert!(RunConfig::from_json(r#"{"rank_tol": 1.5}"#).is_err());
        assert!(RunConfig::from_json(r#"{"bogus": 1}"#).is_err());
    }
}
