//! JSON configuration files.
//!
//! A file either spells out a full scenario or names a `preset` and
//! overrides individual fields:
//!
//! ```json
//! { "preset": "fig5c", "drive": { "z0": 2.2 }, "integrator": { "rel_tol": 1e-9 } }
//! ```
//!
//! Adding a `sweep` object (`axis`, `values`, `reducer`, optional `window`)
//! turns the file into a sweep over the resulting base scenario.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{Map, Value};

use super::{preset, Reducer, Scenario, SweepSpec};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Config {
    Scenario(Scenario),
    Sweep(SweepSpec),
}

impl Config {
    /// The scenario itself, or the base of a sweep.
    pub fn scenario(&self) -> &Scenario {
        match self {
            Config::Scenario(s) => s,
            Config::Sweep(s) => &s.base,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSettings {
    axis: String,
    values: Vec<f64>,
    reducer: Reducer,
    #[serde(default)]
    window: Option<(f64, f64)>,
}

pub fn load_config(path: impl AsRef<Path>) -> Result<Config> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<Config> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Config {
        path: String::new(),
        message: e.to_string(),
    })?;
    let Value::Object(mut root) = value else {
        return Err(Error::Config {
            path: String::new(),
            message: "expected a JSON object".into(),
        });
    };

    // a written-out sweep round-trips through its own layout
    if root.contains_key("base") {
        return deserialize(Value::Object(root), "").map(Config::Sweep);
    }

    let sweep = root.remove("sweep");
    let base = match root.remove("preset") {
        Some(Value::String(name)) => {
            let mut tree = serde_json::to_value(preset(&name)?)?;
            merge(&mut tree, Value::Object(root));
            tree
        }
        Some(other) => {
            return Err(Error::Config {
                path: "preset".into(),
                message: format!("expected a preset name, got {other}"),
            })
        }
        None => Value::Object(root),
    };
    let base: Scenario = deserialize(base, "")?;

    match sweep {
        None => Ok(Config::Scenario(base)),
        Some(v) => {
            let s: SweepSettings = deserialize(v, "sweep.")?;
            Ok(Config::Sweep(SweepSpec {
                base,
                axis: s.axis,
                values: s.values,
                reducer: s.reducer,
                window: s.window,
            }))
        }
    }
}

fn deserialize<T: DeserializeOwned>(value: Value, prefix: &str) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        Error::Config {
            path: if path == "." { prefix.trim_end_matches('.').to_string() } else { format!("{prefix}{path}") },
            message: e.into_inner().to_string(),
        }
    })
}

/// Recursively overlays `patch` onto `base`; objects merge, everything else replaces.
fn merge(base: &mut Value, patch: Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => merge_maps(b, p),
        (slot, p) => *slot = p,
    }
}

fn merge_maps(base: &mut Map<String, Value>, patch: Map<String, Value>) {
    for (k, v) in patch {
        match base.get_mut(&k) {
            Some(slot) => merge(slot, v),
            None => {
                base.insert(k, v);
            }
        }
    }
}
