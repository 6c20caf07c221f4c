//! Layered run configuration: built-in defaults, then a TOML file, then
//! environment overrides, then command-line flags (applied by the caller).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use wadec::exec::ToolchainConfig;
use wadec::pipeline::{BackendConfig, PromptConfig, STRING_PLACEHOLDER_PREFIX};
use wadec::slicer::{MARKER_CLOSE, MARKER_OPEN};

pub const ENV_ENDPOINT: &str = "WADEC_BACKEND_ENDPOINT";
pub const ENV_API_KEY: &str = "WADEC_API_KEY";

/// Token spellings shared by the slicer, forge and pipeline. They are fixed;
/// the section exists so a config file can state them and have them checked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MarkerConfig {
    pub open: String,
    pub close: String,
    pub string_prefix: String,
    pub local_prefix: String,
}

impl Default for MarkerConfig {
    fn default() -> Self {
        MarkerConfig {
            open: MARKER_OPEN.into(),
            close: MARKER_CLOSE.into(),
            string_prefix: STRING_PLACEHOLDER_PREFIX.into(),
            local_prefix: "local_".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Parallelism {
    /// Worker threads for per-file work.
    pub jobs: usize,
}

impl Default for Parallelism {
    fn default() -> Self {
        Parallelism { jobs: 4 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Paths {
    /// Parent for scratch directories; system temp when unset.
    pub scratch: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub backend: BackendConfig,
    pub prompt: PromptConfig,
    pub toolchain: ToolchainConfig,
    pub markers: MarkerConfig,
    pub parallelism: Parallelism,
    pub paths: Paths,
    /// Record wall-clock timings in reports.
    pub timings: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("reading {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: Box<toml::de::Error> },
    #[error("markers.{key} is `{found}`; only `{expected}` is supported")]
    Marker { key: &'static str, found: String, expected: String },
    #[error("{0}")]
    Invalid(String),
}

impl RunConfig {
    pub fn from_toml(text: &str, path: &Path) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse { path: path.to_path_buf(), source: Box::new(e) })
    }

    /// Defaults, overlaid by `file` and then by `env`.
    pub fn resolve(file: Option<&Path>, env: impl Fn(&str) -> Option<String>) -> Result<Self, ConfigError> {
        let mut cfg = match file {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|source| ConfigError::Read { path: p.into(), source })?;
                Self::from_toml(&text, p)?
            }
            None => RunConfig::default(),
        };
        if let Some(v) = env(ENV_ENDPOINT).filter(|v| !v.is_empty()) {
            cfg.backend.endpoint = v;
        }
        if let Some(v) = env(ENV_API_KEY).filter(|v| !v.is_empty()) {
            cfg.backend.api_key = Some(v);
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let want = MarkerConfig::default();
        let pairs = [
            ("open", &self.markers.open, &want.open),
            ("close", &self.markers.close, &want.close),
            ("string_prefix", &self.markers.string_prefix, &want.string_prefix),
            ("local_prefix", &self.markers.local_prefix, &want.local_prefix),
        ];
        for (key, found, expected) in pairs {
            if found != expected {
                return Err(ConfigError::Marker { key, found: found.clone(), expected: expected.clone() });
            }
        }
        if self.parallelism.jobs == 0 {
            return Err(ConfigError::Invalid("parallelism.jobs must be at least 1".into()));
        }
        if self.backend.max_in_flight == 0 {
            return Err(ConfigError::Invalid("backend.max_in_flight must be at least 1".into()));
        }
        if self.toolchain.timeout_secs <= 0.0 || self.backend.timeout_secs <= 0.0 {
            return Err(ConfigError::Invalid("timeouts must be positive".into()));
        }
        Ok(())
    }

    /// The effective configuration as TOML, secrets omitted.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}
