//! Optional TOML configuration. Command-line flags take precedence over the
//! file, and the file over built-in defaults.

use std::path::{Path, PathBuf};

use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub ensemble: EnsembleConfig,
    #[serde(default)]
    pub gridgen: GridgenConfig,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub out_dir: Option<PathBuf>,
    pub steps: Option<usize>,
    pub burn_in: Option<usize>,
    pub seed: Option<u64>,
    pub epsilon: Option<f64>,
    pub deviate: Option<String>,
    pub truth: Option<String>,
    pub belief_1: Option<String>,
    pub belief_2: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridgenConfig {
    pub rows: Option<usize>,
    pub cols: Option<usize>,
    pub m: Option<usize>,
    pub pattern: Option<String>,
    pub seed: Option<u64>,
    pub epsilon: Option<f64>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, String> {
        let Some(path) = path else { return Ok(FileConfig::default()) };
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }
}
