//! Versioned instance files: `{"schema_version": 1, "kind": …, "payload": …}`.

use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use crate::error::CliError;
use crate::report::SCHEMA_VERSION;

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Superconnection,
    ModelSpectrum,
    GetzlerGeometry,
    SymbolModel,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub schema_version: u32,
    pub kind: Kind,
    pub payload: Value,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl InstanceFile {
    pub fn parse(text: &str, origin: &str) -> Result<InstanceFile, CliError> {
        let file: InstanceFile =
            serde_json::from_str(text).map_err(|e| CliError::Schema(format!("{origin}: {e}")))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(CliError::Schema(format!(
                "{origin}: schema_version {} is not supported (expected {SCHEMA_VERSION})",
                file.schema_version
            )));
        }
        Ok(file)
    }

    pub fn load(path: &Path, expected: Kind) -> Result<InstanceFile, CliError> {
        let origin = path.display().to_string();
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Schema(format!("{origin}: {e}")))?;
        let file = InstanceFile::parse(&text, &origin)?;
        if file.kind != expected {
            return Err(CliError::Schema(format!(
                "{origin}: kind {:?} where {expected:?} is needed",
                file.kind
            )));
        }
        Ok(file)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn version_and_kind_are_validated() {
        let ok = r#"{"schema_version": 1, "kind": "getzler-geometry", "payload": {"n": 2}}"#;
        assert_eq!(
            InstanceFile::parse(ok, "t").unwrap().kind,
            Kind::GetzlerGeometry
        );
        let old = r#"{"schema_version": 0, "kind": "getzler-geometry", "payload": {}}"#;
        assert!(InstanceFile::parse(old, "t").is_err());
        let bad = r#"{"schema_version": 1, "kind": "nothing", "payload": {}}"#;
        assert!(InstanceFile::parse(bad, "t").is_err());
    }
}
