//! Flat `key = value` configuration files.
//!
//! The format is deliberately dumb: one assignment per line, `#` starts a
//! comment, keys mirror [`SchemeParams`](crate::scheme::SchemeParams) fields
//! one to one (complex ratios split into `_re`/`_im`). Every parse error
//! carries the offending key and line number, because "invalid config" with
//! no location is how half an afternoon disappears.

use num_complex::Complex64;
use thiserror::Error;

use crate::scheme::{ParamError, Scheme, SchemeParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {detail}")]
    Syntax { line: usize, detail: String },
    #[error("line {line}: duplicate key '{key}'")]
    DuplicateKey { key: String, line: usize },
    #[error("line {line}: unknown key '{key}'")]
    UnknownKey { key: String, line: usize },
    #[error("line {line}: key '{key}': {detail}")]
    InvalidValue {
        key: String,
        line: usize,
        detail: String,
    },
    #[error("missing required key '{key}'")]
    MissingKey { key: String },
    #[error(transparent)]
    Params(#[from] ParamError),
}

/// One `key = value` assignment, remembering where it came from.
#[derive(Debug, Clone)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

impl Entry {
    pub fn as_f64(&self) -> Result<f64, ConfigError> {
        self.value
            .parse::<f64>()
            .map_err(|e| self.invalid(&e.to_string()))
    }

    pub fn as_usize(&self) -> Result<usize, ConfigError> {
        self.value
            .parse::<usize>()
            .map_err(|e| self.invalid(&e.to_string()))
    }

    /// Comma-separated list of floats.
    pub fn as_f64_list(&self) -> Result<Vec<f64>, ConfigError> {
        self.value
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| self.invalid(&e.to_string()))
            })
            .collect()
    }

    pub fn invalid(&self, detail: &str) -> ConfigError {
        ConfigError::InvalidValue {
            key: self.key.clone(),
            line: self.line,
            detail: detail.to_string(),
        }
    }
}

/// Parsed assignments in file order.
#[derive(Debug, Clone, Default)]
pub struct ConfigMap {
    entries: Vec<Entry>,
}

impl ConfigMap {
    pub fn parse(text: &str) -> Result<ConfigMap, ConfigError> {
        let mut entries: Vec<Entry> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let stripped = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let stripped = stripped.trim();
            if stripped.is_empty() {
                continue;
            }
            let (key, value) = stripped
                .split_once('=')
                .ok_or_else(|| ConfigError::Syntax {
                    line,
                    detail: format!("expected 'key = value', got '{stripped}'"),
                })?;
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() {
                return Err(ConfigError::Syntax {
                    line,
                    detail: "empty key".to_string(),
                });
            }
            if entries.iter().any(|e| e.key == key) {
                return Err(ConfigError::DuplicateKey {
                    key: key.to_string(),
                    line,
                });
            }
            entries.push(Entry {
                key: key.to_string(),
                value: value.to_string(),
                line,
            });
        }
        Ok(ConfigMap { entries })
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    pub fn require(&self, key: &str) -> Result<&Entry, ConfigError> {
        self.get(key).ok_or_else(|| ConfigError::MissingKey {
            key: key.to_string(),
        })
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.get(key).map(Entry::as_f64).transpose()
    }

    /// Rejects the first assignment whose key is not in `allowed`.
    pub fn ensure_known(&self, allowed: &[&str]) -> Result<(), ConfigError> {
        for e in &self.entries {
            if !allowed.contains(&e.key.as_str()) {
                return Err(ConfigError::UnknownKey {
                    key: e.key.clone(),
                    line: e.line,
                });
            }
        }
        Ok(())
    }
}

/// Keys that describe the medium itself.
pub const SCHEME_KEYS: &[&str] = &[
    "scheme",
    "gain_m1",
    "gain_m2",
    "delta_cap",
    "rabi_ratio_11_re",
    "rabi_ratio_11_im",
    "rabi_ratio_21_re",
    "rabi_ratio_21_im",
    "cloud_length",
];

fn ratio_from(
    map: &ConfigMap,
    re_key: &str,
    im_key: &str,
) -> Result<Option<Complex64>, ConfigError> {
    let re = map.get_f64(re_key)?;
    let im = map.get_f64(im_key)?;
    Ok(match (re, im) {
        (None, None) => None,
        (re, im) => Some(Complex64::new(re.unwrap_or(0.0), im.unwrap_or(0.0))),
    })
}

/// Builds validated medium parameters from a parsed config. Unknown keys are
/// the caller's concern (`ensure_known`), since scenario files carry extra
/// keys beyond these.
pub fn scheme_params(map: &ConfigMap) -> Result<SchemeParams, ConfigError> {
    let scheme_entry = map.require("scheme")?;
    let scheme = Scheme::from_name(&scheme_entry.value).ok_or_else(|| {
        scheme_entry.invalid(&format!(
            "unknown scheme '{}'; expected one of single_probe_single_pump, \
             single_probe_doublet, two_probe_single_pump_pair, two_probe_double_doublet",
            scheme_entry.value
        ))
    })?;
    let params = SchemeParams {
        scheme,
        gain_m1: map.require("gain_m1")?.as_f64()?,
        gain_m2: map.get_f64("gain_m2")?.unwrap_or(0.0),
        delta_cap: map.get_f64("delta_cap")?.unwrap_or(0.0),
        rabi_ratio_11: ratio_from(map, "rabi_ratio_11_re", "rabi_ratio_11_im")?,
        rabi_ratio_21: ratio_from(map, "rabi_ratio_21_re", "rabi_ratio_21_im")?,
        cloud_length: map.require("cloud_length")?.as_f64()?,
    };
    Ok(params.validate()?)
}
