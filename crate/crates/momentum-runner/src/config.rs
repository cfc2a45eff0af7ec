//! Plain-text experiment configuration: one `key = value` per line, `#`
//! comments, no quoting. Zero-dependency and diffable, so a config file is
//! its own provenance record.

use crate::error::{Result, RunnerError};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Clone, Debug, Default)]
pub struct Config {
    pub file: String,
    entries: BTreeMap<String, (usize, String)>,
}

impl Config {
    pub fn parse_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| RunnerError::ConfigFile {
            file: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse_str(&text, &path.display().to_string())
    }

    pub fn parse_str(text: &str, file: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| RunnerError::Config {
                file: file.to_string(),
                line: idx + 1,
                message: format!("expected `key = value`, got {raw:?}"),
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() || value.is_empty() {
                return Err(RunnerError::Config {
                    file: file.to_string(),
                    line: idx + 1,
                    message: "empty key or value".into(),
                });
            }
            entries.insert(key, (idx + 1, value));
        }
        Ok(Self { file: file.to_string(), entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    pub fn set(&mut self, key: &str, value: &str) {
        self.entries.insert(key.to_string(), (0, value.to_string()));
    }

    fn err(&self, key: &str, message: String) -> RunnerError {
        match self.entries.get(key) {
            Some((line, _)) => RunnerError::Config { file: self.file.clone(), line: *line, message },
            None => RunnerError::ConfigFile { file: self.file.clone(), message },
        }
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| self.err(key, format!("missing required key `{key}`")))
    }

    pub fn f64_opt(&self, key: &str) -> Result<Option<f64>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<f64>()
                .map(Some)
                .map_err(|e| self.err(key, format!("field `{key}`: bad number {v:?}: {e}"))),
        }
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.f64_opt(key)?.unwrap_or(default))
    }

    pub fn f64_req(&self, key: &str) -> Result<f64> {
        self.f64_opt(key)?
            .ok_or_else(|| self.err(key, format!("missing required key `{key}`")))
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<usize>()
                .map_err(|e| self.err(key, format!("field `{key}`: bad integer {v:?}: {e}"))),
        }
    }

    pub fn u64_or(&self, key: &str, default: u64) -> Result<u64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<u64>()
                .map_err(|e| self.err(key, format!("field `{key}`: bad integer {v:?}: {e}"))),
        }
    }

    pub fn bool_or(&self, key: &str, default: bool) -> Result<bool> {
        match self.get(key) {
            None => Ok(default),
            Some("true") | Some("yes") | Some("1") => Ok(true),
            Some("false") | Some("no") | Some("0") => Ok(false),
            Some(v) => Err(self.err(key, format!("field `{key}`: bad boolean {v:?}"))),
        }
    }

    /// Comma-separated vector of reals.
    pub fn vec_opt(&self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => {
                let parsed: std::result::Result<Vec<f64>, _> =
                    v.split(',').map(|c| c.trim().parse::<f64>()).collect();
                parsed
                    .map(Some)
                    .map_err(|e| self.err(key, format!("field `{key}`: bad vector {v:?}: {e}")))
            }
        }
    }

    pub fn bad_value(&self, key: &str, got: &str, expected: &str) -> RunnerError {
        self.err(key, format!("field `{key}`: unknown value {got:?} (expected {expected})"))
    }
}
