//! Flat key-value config files mirroring the CLI flags.
//!
//! One `key = value` pair per line, `#` starts a comment, keys match the long
//! flag names with `-` or `_` interchangeable. Values given on the command
//! line always win over config values.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use ionvit::error::{Error, Result};

const KNOWN_KEYS: &[&str] = &[
    "case",
    "g_a",
    "g_b",
    "gamma_a",
    "gamma_b",
    "kappa",
    "chi",
    "n_vib",
    "n_eg",
    "delta",
    "omega",
    "delta_range",
    "omega_range",
    "axis1",
    "axis2",
    "quantity",
    "cap",
    "include_drive",
    "threads",
    "out",
    "svg",
    "json",
];

fn normalize(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

/// Parsed config file contents.
#[derive(Debug, Default, Clone)]
pub struct Config {
    values: HashMap<String, String>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::InvalidParams(format!(
                    "{}:{}: expected 'key = value', got '{raw}'",
                    path.display(),
                    lineno + 1
                )));
            };
            let key = normalize(key);
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Error::InvalidParams(format!(
                    "{}:{}: unknown config key '{key}'",
                    path.display(),
                    lineno + 1
                )));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Config { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(&normalize(key)).map(String::as_str)
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>> {
        self.get(key)
            .map(|s| {
                s.parse::<f64>().map_err(|_| {
                    Error::InvalidParams(format!("config key '{key}': '{s}' is not a number"))
                })
            })
            .transpose()
    }

    pub fn get_u32(&self, key: &str) -> Result<Option<u32>> {
        self.get(key)
            .map(|s| {
                s.parse::<u32>().map_err(|_| {
                    Error::InvalidParams(format!("config key '{key}': '{s}' is not an integer"))
                })
            })
            .transpose()
    }

    pub fn get_usize(&self, key: &str) -> Result<Option<usize>> {
        self.get(key)
            .map(|s| {
                s.parse::<usize>().map_err(|_| {
                    Error::InvalidParams(format!("config key '{key}': '{s}' is not an integer"))
                })
            })
            .transpose()
    }

    pub fn get_bool(&self, key: &str) -> Result<Option<bool>> {
        self.get(key)
            .map(|s| match s.to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                other => Err(Error::InvalidParams(format!(
                    "config key '{key}': '{other}' is not a boolean"
                ))),
            })
            .transpose()
    }

    pub fn get_path(&self, key: &str) -> Option<PathBuf> {
        self.get(key).map(PathBuf::from)
    }
}
