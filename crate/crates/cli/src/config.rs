//! Experiment configs: a JSON object with an `experiment` field, overlaid by
//! command-line flags, then split into common settings and the parameters of
//! the named experiment.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

/// A config or flag problem; maps to exit code 2.
#[derive(Debug)]
pub struct Invalid(pub String);

impl fmt::Display for Invalid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid config: {}", self.0)
    }
}

impl std::error::Error for Invalid {}

pub fn invalid(msg: impl Into<String>) -> anyhow::Error {
    Invalid(msg.into()).into()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

pub const EXPERIMENTS: [&str; 10] = [
    "generate",
    "phi",
    "witness",
    "estimate-pc",
    "pt-diag",
    "pta-diag",
    "mtp-test",
    "converge",
    "crossing",
    "suite",
];

/// Flag values that overlay the config file.
#[derive(Debug, Default)]
pub struct Overlay {
    pub seed: Option<u64>,
    pub source: Option<String>,
    pub sets: Vec<String>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug)]
pub struct RunConfig {
    pub experiment: String,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    /// Experiment parameters (everything but the common keys).
    pub params: Map<String, Value>,
    /// The merged config as hashed, without output settings.
    pub canonical: Value,
    pub hash: String,
}

fn parse_value(text: &str) -> Value {
    serde_json::from_str(text).unwrap_or_else(|_| Value::String(text.to_string()))
}

pub fn load(path: Option<&Path>, subcommand: Option<&str>, overlay: Overlay) -> anyhow::Result<RunConfig> {
    let mut map = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| invalid(format!("{}: {e}", p.display())))?;
            match serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", p.display())))? {
                Value::Object(m) => m,
                _ => return Err(invalid("config must be a JSON object")),
            }
        }
        None => Map::new(),
    };
    for kv in &overlay.sets {
        let (k, v) = kv.split_once('=').ok_or_else(|| invalid(format!("--set expects key=value, got `{kv}`")))?;
        map.insert(k.to_string(), parse_value(v));
    }
    if let Some(src) = &overlay.source {
        let v: Value = serde_json::from_str(src).map_err(|e| invalid(format!("--source: {e}")))?;
        map.insert("source".into(), v);
    }
    if let Some(seed) = overlay.seed {
        map.insert("seed".into(), Value::from(seed));
    }

    if let Some(sub) = subcommand {
        match map.get("experiment").and_then(Value::as_str) {
            Some(e) if e != sub => return Err(invalid(format!("config is for `{e}`, not `{sub}`"))),
            _ => {
                map.insert("experiment".into(), Value::String(sub.into()));
            }
        }
    }
    let experiment = match map.get("experiment") {
        Some(Value::String(e)) if EXPERIMENTS.contains(&e.as_str()) => e.clone(),
        Some(e) => return Err(invalid(format!("unknown experiment {e}"))),
        None => return Err(invalid("missing `experiment`")),
    };
    let seed = match map.get("seed") {
        None => 0,
        Some(v) => v.as_u64().ok_or_else(|| invalid("`seed` must be an unsigned 64-bit integer"))?,
    };
    let out = match map.remove("out") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(PathBuf::from(s)),
        Some(_) => return Err(invalid("`out` must be a path string")),
    };
    let format = match map.remove("format") {
        None => Format::Csv,
        Some(v) => serde_json::from_value(v).map_err(|e| invalid(format!("format: {e}")))?,
    };
    let canonical = Value::Object(map.clone());
    let hash = hex::encode(Sha256::digest(serde_json::to_string(&canonical)?.as_bytes()));
    let mut params = map;
    params.remove("experiment");
    params.remove("seed");
    Ok(RunConfig {
        experiment,
        seed,
        out: overlay.out.or(out),
        format: overlay.format.unwrap_or(format),
        params,
        canonical,
        hash,
    })
}

impl RunConfig {
    /// Deserializes the parameters into the experiment's schema; unknown
    /// fields are rejected by the schema types.
    pub fn params<T: DeserializeOwned>(&self) -> anyhow::Result<T> {
        serde_json::from_value(Value::Object(self.params.clone()))
            .map_err(|e| invalid(format!("{}: {e}", self.experiment)))
    }
}

/// Accepts either a single value under `one` or a list under `many`.
pub fn one_or_many<T: Clone>(one: &Option<T>, many: &Option<Vec<T>>, name: &str) -> anyhow::Result<Vec<T>> {
    match (one, many) {
        (Some(x), None) => Ok(vec![x.clone()]),
        (None, Some(xs)) if !xs.is_empty() => Ok(xs.clone()),
        (None, Some(_)) => Err(invalid(format!("`{name}s` is empty"))),
        (Some(_), Some(_)) => Err(invalid(format!("give `{name}` or `{name}s`, not both"))),
        (None, None) => Err(invalid(format!("missing `{name}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlay_and_hash() {
        let a = load(None, Some("phi"), Overlay { seed: Some(7), sets: vec!["p=0.5".into()], ..Overlay::default() })
            .unwrap();
        assert_eq!(a.seed, 7);
        assert_eq!(a.params["p"], Value::from(0.5));
        let b = load(
            None,
            Some("phi"),
            Overlay { seed: Some(7), sets: vec!["p=0.5".into()], format: Some(Format::Json), ..Overlay::default() },
        )
        .unwrap();
        assert_eq!(a.hash, b.hash);
        let c = load(None, Some("phi"), Overlay { seed: Some(8), ..Overlay::default() }).unwrap();
        assert_ne!(a.hash, c.hash);
    }

    #[test]
    fn rejects_mismatch_and_unknown() {
        assert!(load(None, None, Overlay::default()).is_err());
        let mut o = Overlay::default();
        o.sets.push("experiment=\"phi\"".into());
        assert!(load(None, Some("witness"), o).is_err());
        let mut o = Overlay::default();
        o.sets.push("experiment=\"nope\"".into());
        assert!(load(None, None, o).is_err());
    }
}
