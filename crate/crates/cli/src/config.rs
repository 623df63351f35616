//! Defaults, overridable by the file named in `INDEXFORMS_CONFIG` and then
//! by command-line flags.

use std::path::Path;

use serde::Deserialize;

use crate::error::CliError;

pub const CONFIG_ENV: &str = "INDEXFORMS_CONFIG";

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Tolerance for numeric identities.
    pub tolerance: f64,
    /// Tolerance for asymptotic and summed quantities.
    pub asymptotic_tolerance: f64,
    pub seed: u64,
    /// Instances in a randomized batch.
    pub count: usize,
    /// Symbol-calculus steps.
    pub steps: usize,
    /// Curvature truncation for the Getzler model; `None` follows `--degree`.
    pub truncation: Option<u32>,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            tolerance: 1e-10,
            asymptotic_tolerance: 1e-8,
            seed: 1000,
            count: 25,
            steps: 6,
            truncation: None,
        }
    }
}

impl Config {
    pub fn from_file(path: &Path) -> Result<Config, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Schema(format!("config {}: {e}", path.display())))?;
        let is_toml = path.extension().is_some_and(|e| e == "toml");
        if is_toml {
            toml::from_str(&text)
                .map_err(|e| CliError::Schema(format!("config {}: {e}", path.display())))
        } else {
            serde_json::from_str(&text)
                .map_err(|e| CliError::Schema(format!("config {}: {e}", path.display())))
        }
    }

    pub fn load() -> Result<Config, CliError> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) => Config::from_file(Path::new(&p)),
            None => Ok(Config::default()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_toml_keeps_defaults() {
        let c: Config = toml::from_str("tolerance = 1e-6\nsteps = 4").unwrap();
        assert_eq!(c.tolerance, 1e-6);
        assert_eq!(c.steps, 4);
        assert_eq!(c.seed, Config::default().seed);
        assert!(toml::from_str::<Config>("bogus = 1").is_err());
    }
}
