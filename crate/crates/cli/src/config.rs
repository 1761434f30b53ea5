//! Plain `key=value` config files. Blank lines and `#` comments are skipped;
//! keys use the long flag names.

use std::collections::BTreeMap;
use std::str::FromStr;

pub const KEYS: &[&str] = &[
    "kappa",
    "alpha",
    "m",
    "hbar",
    "x",
    "y",
    "vx",
    "vy",
    "t-end",
    "tol",
    "sample-dt",
    "mu-max",
    "nr-max",
    "levels",
    "cells",
    "delta",
    "tolerance",
    "nr",
    "mu",
    "sign",
    "branch",
    "r-count",
    "phi-count",
    "format",
    "out",
];

pub fn parse(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value", i + 1))?;
        let key = k.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(format!("config line {}: unknown key '{}'", i + 1, k.trim()));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

/// Flag value, else config value, else default.
pub fn pick<T: FromStr>(
    flag: Option<T>,
    config: &BTreeMap<String, String>,
    key: &str,
    default: T,
) -> Result<T, String> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match config.get(key) {
        Some(s) => s
            .parse()
            .map_err(|_| format!("config key '{key}': cannot parse '{s}'")),
        None => Ok(default),
    }
}

/// Comma-separated list from a flag or the config; empty lists are rejected.
pub fn pick_list(
    flag: Option<Vec<f64>>,
    config: &BTreeMap<String, String>,
    key: &str,
    default: &[f64],
) -> Result<Vec<f64>, String> {
    let list = match (flag, config.get(key)) {
        (Some(v), _) => v,
        (None, Some(s)) => s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| format!("config key '{key}': bad number '{t}'"))
            })
            .collect::<Result<_, _>>()?,
        (None, None) => default.to_vec(),
    };
    if list.is_empty() {
        return Err(format!("'{key}' sweep list is empty"));
    }
    if let Some(bad) = list.iter().find(|v| !v.is_finite()) {
        return Err(format!("'{key}' value {bad} is not finite"));
    }
    Ok(list)
}
