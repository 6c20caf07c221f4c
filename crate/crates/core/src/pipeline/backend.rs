//! Completion backends: an HTTP client for the open completion API shape and
//! an in-process lookup table keyed by snippet hash.

use std::collections::HashMap;
use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub const MOCK_ENDPOINT: &str = "mock";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BackendConfig {
    /// Completion URL, or `mock`.
    pub endpoint: String,
    pub model: String,
    pub temperature: f64,
    pub max_tokens: u32,
    pub timeout_secs: f64,
    /// Extra attempts after the first failed one.
    pub retries: u32,
    pub retry_backoff_ms: u64,
    pub max_in_flight: usize,
    /// Lookup table for the mock backend.
    pub mock_table: Option<std::path::PathBuf>,
    #[serde(skip_serializing)]
    pub api_key: Option<String>,
}

impl Default for BackendConfig {
    fn default() -> Self {
        BackendConfig {
            endpoint: MOCK_ENDPOINT.to_string(),
            model: "wadec-wat2c".to_string(),
            temperature: 0.0,
            max_tokens: 1024,
            timeout_secs: 60.0,
            retries: 2,
            retry_backoff_ms: 250,
            max_in_flight: 4,
            mock_table: None,
            api_key: None,
        }
    }
}

/// Hex SHA-256 of a snippet's text.
pub fn snippet_hash(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct CompletionRequest<'a> {
    pub model: &'a str,
    pub prompt: &'a str,
    pub temperature: f64,
    pub max_tokens: u32,
    #[serde(skip)]
    pub snippet_hash: &'a str,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransportError {
    #[error("cannot reach backend: {0}")]
    Unreachable(String),
    #[error("backend returned status {0}: {1}")]
    Status(u16, String),
    #[error("malformed backend response: {0}")]
    Malformed(String),
}

impl TransportError {
    pub fn is_retryable(&self) -> bool {
        match self {
            TransportError::Unreachable(_) => true,
            TransportError::Status(code, _) => *code == 429 || *code >= 500,
            TransportError::Malformed(_) => false,
        }
    }
}

pub trait Backend: Send + Sync {
    fn complete(&self, req: &CompletionRequest<'_>) -> Result<String, TransportError>;
}

/// Returns the stored completion for a snippet hash, or an empty completion.
#[derive(Debug, Clone, Default)]
pub struct MockBackend {
    pub table: HashMap<String, String>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum MockLine {
    Hashed { sha256: String, completion: String },
    Pair {
        #[serde(alias = "wat_snippet")]
        wat: String,
        #[serde(alias = "c_snippet")]
        c: String,
    },
}

#[derive(Debug, Error)]
pub enum MockTableError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {source}")]
    Format { line: usize, source: serde_json::Error },
}

impl MockBackend {
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        MockBackend { table: pairs.into_iter().map(|(w, c)| (snippet_hash(w), c.to_string())).collect() }
    }

    /// Reads JSON lines of either `{"sha256", "completion"}` or `{"wat", "c"}`.
    /// Dataset records (`wat_snippet`, `c_snippet`) load as pairs.
    pub fn parse(text: &str) -> Result<Self, MockTableError> {
        let mut table = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str(line).map_err(|source| MockTableError::Format { line: i + 1, source })? {
                MockLine::Hashed { sha256, completion } => table.insert(sha256, completion),
                MockLine::Pair { wat, c } => table.insert(snippet_hash(&wat), c),
            };
        }
        Ok(MockBackend { table })
    }

    pub fn load(path: &Path) -> Result<Self, MockTableError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

impl Backend for MockBackend {
    fn complete(&self, req: &CompletionRequest<'_>) -> Result<String, TransportError> {
        Ok(self.table.get(req.snippet_hash).cloned().unwrap_or_default())
    }
}

/// Blocking client for `POST {endpoint}` with a JSON body of
/// `model, prompt, temperature, max_tokens`, reading `choices[0].text`.
pub struct HttpBackend {
    client: reqwest::blocking::Client,
    endpoint: String,
    api_key: Option<String>,
}

impl HttpBackend {
    pub fn new(cfg: &BackendConfig) -> Result<Self, TransportError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs_f64(cfg.timeout_secs.max(0.001)))
            .build()
            .map_err(|e| TransportError::Unreachable(e.to_string()))?;
        Ok(HttpBackend { client, endpoint: cfg.endpoint.clone(), api_key: cfg.api_key.clone() })
    }
}

#[derive(Deserialize)]
struct CompletionResponse {
    choices: Vec<Choice>,
}

#[derive(Deserialize)]
struct Choice {
    text: String,
}

impl Backend for HttpBackend {
    fn complete(&self, req: &CompletionRequest<'_>) -> Result<String, TransportError> {
        let mut rb = self.client.post(&self.endpoint).json(req);
        if let Some(key) = &self.api_key {
            rb = rb.bearer_auth(key);
        }
        let resp = rb.send().map_err(|e| TransportError::Unreachable(e.to_string()))?;
        let status = resp.status();
        let body = resp.text().map_err(|e| TransportError::Unreachable(e.to_string()))?;
        if !status.is_success() {
            return Err(TransportError::Status(status.as_u16(), body.chars().take(200).collect()));
        }
        let parsed: CompletionResponse =
            serde_json::from_str(&body).map_err(|e| TransportError::Malformed(e.to_string()))?;
        parsed
            .choices
            .into_iter()
            .next()
            .map(|c| c.text)
            .ok_or_else(|| TransportError::Malformed("no choices".into()))
    }
}

/// Backend selected by the endpoint setting.
pub fn backend_from_config(cfg: &BackendConfig) -> Result<Box<dyn Backend>, BackendSetupError> {
    if cfg.endpoint == MOCK_ENDPOINT {
        let table = match &cfg.mock_table {
            Some(p) => MockBackend::load(p)?,
            None => MockBackend::default(),
        };
        return Ok(Box::new(table));
    }
    Ok(Box::new(HttpBackend::new(cfg)?))
}

#[derive(Debug, Error)]
pub enum BackendSetupError {
    #[error("mock table: {0}")]
    MockTable(#[from] MockTableError),
    #[error(transparent)]
    Transport(#[from] TransportError),
}
