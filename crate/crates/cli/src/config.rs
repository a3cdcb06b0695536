//! `--config` files: a subcommand name plus its flags as a JSON object.
//!
//! ```json
//! { "command": "criteria", "options": { "manifold": "so3", "degree": 1, "p": ["-inf", "-10..1:0.05"] } }
//! ```
//!
//! Scalars become `--key value`, arrays repeat the flag, `true` becomes a bare
//! `--key` switch. Keys are emitted in sorted order, which makes the flag
//! string canonical.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    /// Flag name (without dashes) to its values; an empty list is a bare switch.
    #[serde(default)]
    pub options: BTreeMap<String, Vec<String>>,
}

#[derive(Deserialize)]
struct RawConfig {
    command: String,
    #[serde(default)]
    options: BTreeMap<String, Value>,
}

fn scalar(v: &Value) -> Result<String, String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(format!("unsupported option value {other}")),
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, String> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let mut options = BTreeMap::new();
        for (k, v) in raw.options {
            let vals = match &v {
                Value::Bool(true) => vec![],
                Value::Bool(false) | Value::Null => continue,
                Value::Array(items) => items.iter().map(scalar).collect::<Result<_, _>>()?,
                other => vec![scalar(other)?],
            };
            options.insert(k, vals);
        }
        Ok(Self {
            command: raw.command,
            options,
        })
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::from_json(&text)
    }

    /// Canonical argument vector, starting with the subcommand.
    pub fn to_args(&self) -> Vec<String> {
        let mut out = vec![self.command.clone()];
        for (k, vals) in &self.options {
            if vals.is_empty() {
                out.push(format!("--{k}"));
            }
            for v in vals {
                out.push(format!("--{k}"));
                out.push(v.clone());
            }
        }
        out
    }

    pub fn to_flag_string(&self) -> String {
        self.to_args().join(" ")
    }

    /// Inverse of [`RunConfig::to_args`].
    #[cfg(test)]
    pub fn from_args(args: &[String]) -> Result<Self, String> {
        let (command, rest) = args.split_first().ok_or("missing subcommand")?;
        let mut options: BTreeMap<String, Vec<String>> = BTreeMap::new();
        let mut i = 0;
        while i < rest.len() {
            let key = rest[i]
                .strip_prefix("--")
                .ok_or_else(|| format!("expected a flag, found '{}'", rest[i]))?;
            let entry = options.entry(key.to_string()).or_default();
            match rest.get(i + 1) {
                Some(v) if !v.starts_with("--") => {
                    entry.push(v.clone());
                    i += 2;
                }
                _ => i += 1,
            }
        }
        Ok(Self {
            command: command.clone(),
            options,
        })
    }
}
