//! Layered pipeline configuration.
//!
//! Values resolve with precedence: command-line overrides, then
//! environment variables (`AEKG_` prefix, dots become underscores,
//! uppercased), then the configuration file (`section.key = value` lines),
//! then compiled-in defaults. The resolved configuration is printable
//! exactly as in effect via [`PipelineConfig::show`].

use crate::ontology::{
    default_restrictions, CausalLinkPolicy, EntityKind, OntologyConfig, OntologyError,
    PropertyKind, Quantifier, RestrictionSpec, DEFAULT_BASE_IRI,
};
use crate::vaers::VaersColumns;
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed config line {line} in {path}: expected `section.key = value`")]
    MalformedLine { path: String, line: usize },
    #[error("unknown configuration key {0:?}")]
    UnknownKey(String),
    #[error("invalid value {value:?} for {key}: expected {expected}")]
    InvalidValue {
        key: String,
        value: String,
        expected: String,
    },
    #[error(transparent)]
    Ontology(#[from] OntologyError),
}

/// Every key the pipeline understands, with its default.
pub const KNOWN_KEYS: &[(&str, &str)] = &[
    ("acquire.dest_dir", "data"),
    ("acquire.retries", "3"),
    ("acquire.url_template", ""),
    ("ontology.base_iri", DEFAULT_BASE_IRI),
    ("ontology.causal_links", "pairwise"),
    ("ontology.owl_class_typing", "true"),
    ("ontology.restrictions", "default"),
    ("vaers.encoding", "utf-8"),
    ("vaers.fallback_encoding", "windows-1252"),
    ("vaers.id_column", "VAERS_ID"),
    (
        "vaers.symptom_columns",
        "SYMPTOM1,SYMPTOM2,SYMPTOM3,SYMPTOM4,SYMPTOM5",
    ),
    ("vaers.vaccine_column", "VAX_TYPE"),
    ("vocab.dir", ""),
];

/// Environment variable name for a key: `vaers.id_column` becomes
/// `AEKG_VAERS_ID_COLUMN`.
pub fn env_var_name(key: &str) -> String {
    format!("AEKG_{}", key.replace('.', "_").to_ascii_uppercase())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineConfig {
    values: BTreeMap<String, String>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            values: KNOWN_KEYS
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
        }
    }
}

impl PipelineConfig {
    /// Resolves the effective configuration. `env` abstracts environment
    /// lookup so callers can inject a snapshot; `overrides` are the
    /// highest-precedence `key=value` pairs from the command line.
    pub fn resolve(
        file: Option<&Path>,
        env: impl Fn(&str) -> Option<String>,
        overrides: &[(String, String)],
    ) -> Result<Self, ConfigError> {
        let mut config = PipelineConfig::default();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
                path: path.display().to_string(),
                source,
            })?;
            for (idx, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let Some((key, value)) = line.split_once('=') else {
                    return Err(ConfigError::MalformedLine {
                        path: path.display().to_string(),
                        line: idx + 1,
                    });
                };
                config.set(key.trim(), value.trim())?;
            }
        }
        for (key, _) in KNOWN_KEYS {
            if let Some(value) = env(&env_var_name(key)) {
                config.set(key, &value)?;
            }
        }
        for (key, value) in overrides {
            config.set(key, value)?;
        }
        Ok(config)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        if !KNOWN_KEYS.iter().any(|(k, _)| *k == key) {
            return Err(ConfigError::UnknownKey(key.to_string()));
        }
        self.values.insert(key.to_string(), value.to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).unwrap_or_default()
    }

    fn get_parsed<T: std::str::FromStr>(
        &self,
        key: &str,
        expected: &str,
    ) -> Result<T, ConfigError> {
        self.get(key)
            .parse()
            .map_err(|_| ConfigError::InvalidValue {
                key: key.to_string(),
                value: self.get(key).to_string(),
                expected: expected.to_string(),
            })
    }

    pub fn retries(&self) -> Result<u32, ConfigError> {
        self.get_parsed("acquire.retries", "a non-negative integer")
    }

    /// The resolved configuration, one `key = value` line per key.
    pub fn show(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.values {
            out.push_str(&format!("{key} = {value}\n"));
        }
        out
    }

    pub fn vaers_columns(&self) -> VaersColumns {
        VaersColumns {
            id_column: self.get("vaers.id_column").to_string(),
            symptom_columns: self
                .get("vaers.symptom_columns")
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect(),
            vaccine_column: self.get("vaers.vaccine_column").to_string(),
        }
    }

    pub fn ontology_config(&self) -> Result<OntologyConfig, ConfigError> {
        let mut config = OntologyConfig::with_base_iri(self.get("ontology.base_iri"))?;
        config.emit_owl_class_typing = match self.get("ontology.owl_class_typing") {
            "true" => true,
            "false" => false,
            other => {
                return Err(ConfigError::InvalidValue {
                    key: "ontology.owl_class_typing".into(),
                    value: other.to_string(),
                    expected: "true or false".into(),
                })
            }
        };
        config.causal_links = match self.get("ontology.causal_links") {
            "pairwise" => CausalLinkPolicy::Pairwise,
            "none" => CausalLinkPolicy::None,
            other => {
                return Err(ConfigError::InvalidValue {
                    key: "ontology.causal_links".into(),
                    value: other.to_string(),
                    expected: "pairwise or none".into(),
                })
            }
        };
        config.restrictions = parse_restrictions(self.get("ontology.restrictions"))?;
        Ok(config)
    }
}

/// Restriction list syntax: `default`, `none`, or semicolon-separated
/// `Class,property,quantifier,Filler` quadruples.
fn parse_restrictions(value: &str) -> Result<Vec<RestrictionSpec>, ConfigError> {
    let trimmed = value.trim();
    if trimmed.is_empty() || trimmed == "default" {
        return Ok(default_restrictions());
    }
    if trimmed == "none" {
        return Ok(Vec::new());
    }
    let invalid = |value: &str| ConfigError::InvalidValue {
        key: "ontology.restrictions".into(),
        value: value.to_string(),
        expected:
            "`default`, `none`, or `Class,property,quantifier,Filler` quadruples separated by ';'"
                .into(),
    };
    let mut specs = Vec::new();
    for quad in trimmed.split(';') {
        let quad = quad.trim();
        if quad.is_empty() {
            continue;
        }
        let parts: Vec<&str> = quad.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(invalid(quad));
        }
        let on_class = EntityKind::parse(parts[0]).ok_or_else(|| invalid(quad))?;
        let property = PropertyKind::parse(parts[1]).ok_or_else(|| invalid(quad))?;
        let quantifier = Quantifier::parse(parts[2]).ok_or_else(|| invalid(quad))?;
        let filler = EntityKind::parse(parts[3]).ok_or_else(|| invalid(quad))?;
        specs.push(RestrictionSpec {
            on_class,
            property,
            quantifier,
            filler,
        });
    }
    Ok(specs)
}
