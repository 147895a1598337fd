//! Settings merged from flags, a JSON config file, the environment and
//! built-in defaults, in that order of precedence.

use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

pub const SEED_ENV: &str = "QFTLAB_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// Everything a config file may set. Unknown keys are an error.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub target: Option<String>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
    pub dense_cap: Option<usize>,
    pub workers: Option<usize>,
    pub format: Option<Format>,
    pub trials: Option<usize>,
    pub orders: Option<Vec<u64>>,
    pub budgets: Option<Vec<u64>>,
    pub quantum_trials: Option<usize>,
    pub maps: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }
}

/// Seed when neither a flag nor the config file sets one.
pub fn env_seed() -> Result<Option<u64>, String> {
    match std::env::var(SEED_ENV) {
        Ok(text) => text
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| format!("{SEED_ENV}={text:?} is not a 64-bit unsigned integer")),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(format!("{SEED_ENV}: {e}")),
    }
}

/// `flag`, else `file`, else `default`.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: impl FnOnce() -> T) -> T {
    flag.or(file).unwrap_or_else(default)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        assert_eq!(pick(Some(1), Some(2), || 3), 1);
        assert_eq!(pick(None, Some(2), || 3), 2);
        assert_eq!(pick(None::<i32>, None, || 3), 3);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(serde_json::from_str::<FileConfig>(r#"{"seed": 1, "colour": "red"}"#).is_err());
        let c: FileConfig = serde_json::from_str(r#"{"seed": 1, "format": "csv", "orders": [31]}"#).unwrap();
        assert_eq!(c.format, Some(Format::Csv));
        assert_eq!(c.orders, Some(vec![31]));
    }
}
