//! Strict JSON configuration documents.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::{to_reduced, PhysicalParams, ReducedOverride, ReducedParams, SpinConfig};

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    physical: PhysicalParams,
    spin: SpinConfig,
    #[serde(default)]
    reduced: Option<ReducedOverride>,
}

/// A validated parameter bundle.
#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub physical: PhysicalParams,
    pub spin: SpinConfig,
    pub reduced_override: Option<ReducedOverride>,
}

impl Config {
    /// Converted rates with the override applied field by field.
    pub fn reduced(&self) -> Result<ReducedParams> {
        let rp = to_reduced(&self.physical, &self.spin)?;
        match &self.reduced_override {
            Some(o) => o.apply(rp),
            None => Ok(rp),
        }
    }
}

/// Parses and validates a configuration document.
///
/// Unknown keys are rejected; syntax errors report line and column.
pub fn parse_config(text: &[u8]) -> Result<Config> {
    let doc: Document = serde_json::from_slice(text).map_err(|e| Error::Config(e.to_string()))?;
    doc.physical.validate()?;
    doc.spin.validate()?;
    let config = Config {
        physical: doc.physical,
        spin: doc.spin,
        reduced_override: doc.reduced,
    };
    config.reduced()?;
    Ok(config)
}

/// One labelled entry of a robustness scenario file: a configuration
/// document with an extra `label` key.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioEntry {
    label: String,
    physical: PhysicalParams,
    spin: SpinConfig,
    #[serde(default)]
    reduced: Option<ReducedOverride>,
}

pub fn parse_scenarios(text: &[u8]) -> Result<Vec<(String, ReducedParams)>> {
    let entries: Vec<ScenarioEntry> =
        serde_json::from_slice(text).map_err(|e| Error::Config(e.to_string()))?;
    if entries.is_empty() {
        return Err(Error::Config("scenario file lists no scenarios".into()));
    }
    entries
        .into_iter()
        .map(|e| {
            e.physical.validate()?;
            e.spin.validate()?;
            let config = Config {
                physical: e.physical,
                spin: e.spin,
                reduced_override: e.reduced,
            };
            Ok((e.label, config.reduced()?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const DOC: &str = r#"{
  "physical": {
    "radius_m": 3e-5,
    "index": 1.4,
    "wavelength_m": 1.55e-6,
    "quality": 1e9,
    "group_velocity_mps": 2.142857e8,
    "coupling_a": 7.2964e6,
    "coupling_b": 7.2964e6,
    "j_rad_s": 2.4e6
  },
  "spin": { "omega1_rad_s": 29e3, "omega2_rad_s": 0 }
}"#;

    #[test]
    fn reads_spin() {
        let c = parse_config(DOC.as_bytes()).unwrap();
        assert_eq!(c.spin.omega_1, 29e3);
        assert_eq!(c.spin.chi_1, 0.0);
        assert!(c.reduced_override.is_none());
    }

    #[test]
    fn override_wins() {
        let doc = DOC.replacen(
            "\"spin\"",
            "\"reduced\": { \"gamma_a\": 0.41e6 },\n  \"spin\"",
            1,
        );
        let c = parse_config(doc.as_bytes()).unwrap();
        let rp = c.reduced().unwrap();
        assert_eq!(rp.gamma_a, 0.41e6);
        assert_ne!(rp.gamma_b, 0.41e6);
    }

    #[test]
    fn unknown_key_is_named() {
        let doc = DOC.replacen(
            "\"spin\"",
            "\"reduced\": { \"gammma_a\": 0.41e6 },\n  \"spin\"",
            1,
        );
        let msg = parse_config(doc.as_bytes()).unwrap_err().to_string();
        assert!(msg.contains("gammma_a"), "{msg}");
    }

    #[test]
    fn syntax_error_has_position() {
        let msg = parse_config(b"{\n  \"physical\": ,\n}")
            .unwrap_err()
            .to_string();
        assert!(msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn invalid_value_names_field() {
        let doc = DOC.replace("\"quality\": 1e9", "\"quality\": -1");
        let msg = parse_config(doc.as_bytes()).unwrap_err().to_string();
        assert!(msg.contains("quality"), "{msg}");
    }

    #[test]
    fn scenarios_parse() {
        let doc = DOC.replacen('{', "{ \"label\": \"a\",", 1);
        let text = format!("[{doc}, {doc}]");
        let s = parse_scenarios(text.as_bytes()).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].0, "a");
        assert!(parse_scenarios(b"[]").is_err());
    }
}
