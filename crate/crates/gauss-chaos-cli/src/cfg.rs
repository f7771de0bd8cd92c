//! Optional JSON config file holding default flag values.
//!
//! Keys are the long flag names, values are the flag values; explicit
//! command-line flags always win. Keys a command does not use are
//! ignored, so one file can serve several commands. A seed can live
//! here; it can never come from the environment.

use serde_json::{Map, Value};

use crate::error::{msg, CliError, Result};

pub struct Resolver {
    map: Map<String, Value>,
    /// Path and raw bytes of the loaded file, for the report inputs.
    pub source: Option<(String, Vec<u8>)>,
}

fn bad(key: &str, want: &str) -> CliError {
    msg(format!("config key \"{key}\": expected {want}"))
}

impl Resolver {
    pub fn load(path: Option<&str>) -> Result<Self> {
        let Some(p) = path else {
            return Ok(Self {
                map: Map::new(),
                source: None,
            });
        };
        let bytes = std::fs::read(p).map_err(|e| CliError::Io {
            path: p.into(),
            source: e,
        })?;
        let v: Value = serde_json::from_str(
            std::str::from_utf8(&bytes).map_err(|_| msg(format!("{p}: not valid UTF-8")))?,
        )?;
        match v {
            Value::Object(map) => Ok(Self {
                map,
                source: Some((p.to_string(), bytes)),
            }),
            _ => Err(msg(format!("config {p}: expected a JSON object"))),
        }
    }

    pub fn u64_or(&self, flag: Option<u64>, key: &str) -> Result<Option<u64>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_u64()
                .map(Some)
                .ok_or_else(|| bad(key, "an unsigned integer")),
        }
    }

    pub fn usize_or(&self, flag: Option<usize>, key: &str) -> Result<Option<usize>> {
        Ok(self
            .u64_or(flag.map(|v| v as u64), key)?
            .map(|v| v as usize))
    }

    pub fn f64_or(&self, flag: Option<f64>, key: &str) -> Result<Option<f64>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v.as_f64().map(Some).ok_or_else(|| bad(key, "a number")),
        }
    }

    pub fn string_or(&self, flag: Option<String>, key: &str) -> Result<Option<String>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.map.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(_) => Err(bad(key, "a string")),
        }
    }

    /// Strings stay strings; a bare number is accepted where a flag
    /// would also accept one (sample counts, M lists).
    pub fn numeric_string_or(&self, flag: Option<String>, key: &str) -> Result<Option<String>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.map.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(Value::Number(n)) => Ok(Some(n.to_string())),
            Some(_) => Err(bad(key, "a string or number")),
        }
    }

    /// A set flag wins; otherwise the config value; otherwise false.
    pub fn bool_or(&self, flag: bool, key: &str) -> Result<bool> {
        if flag {
            return Ok(true);
        }
        match self.map.get(key) {
            None => Ok(false),
            Some(v) => v.as_bool().ok_or_else(|| bad(key, "a boolean")),
        }
    }
}
