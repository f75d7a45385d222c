//! Self-contained run manifests and their replay.

use anyhow::{bail, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::{Command, Emit};
use crate::config::Settings;
use crate::run::Certification;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// The full argument record, enough to re-run the command.
    pub parameters: Command,
    pub emit: Emit,
    pub settings: Settings,
    pub version: String,
    pub duration_seconds: f64,
    /// True when every certification passed (vacuously when there are none).
    pub certified: bool,
    pub certifications: Vec<Certification>,
    pub results: Value,
}

/// Compare two result payloads: strings, booleans and integers exactly;
/// floating-point numbers to a relative tolerance (absolute below 1).
/// Returns the JSON path of every mismatch.
pub fn compare(a: &Value, b: &Value, rtol: f64) -> Vec<String> {
    let mut out = Vec::new();
    walk(a, b, rtol, "$", &mut out);
    out
}

fn walk(a: &Value, b: &Value, rtol: f64, path: &str, out: &mut Vec<String>) {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) if x.is_f64() || y.is_f64() => {
            let (x, y) = (x.as_f64().unwrap_or(f64::NAN), y.as_f64().unwrap_or(f64::NAN));
            let close = (x - y).abs() <= rtol * x.abs().max(y.abs()).max(1.0);
            if !close {
                out.push(format!("{path}: {x} vs {y}"));
            }
        }
        (Value::Array(x), Value::Array(y)) => {
            if x.len() != y.len() {
                out.push(format!("{path}: length {} vs {}", x.len(), y.len()));
                return;
            }
            for (i, (u, v)) in x.iter().zip(y).enumerate() {
                walk(u, v, rtol, &format!("{path}[{i}]"), out);
            }
        }
        (Value::Object(x), Value::Object(y)) => {
            for (k, u) in x {
                match y.get(k) {
                    Some(v) => walk(u, v, rtol, &format!("{path}.{k}"), out),
                    None => out.push(format!("{path}.{k}: missing")),
                }
            }
            for k in y.keys().filter(|k| !x.contains_key(*k)) {
                out.push(format!("{path}.{k}: unexpected"));
            }
        }
        _ => {
            if a != b {
                out.push(format!("{path}: {a} vs {b}"));
            }
        }
    }
}

/// Replay tolerance for a manifest: a hundred times the eigenvalue tolerance,
/// never tighter than 1e-8.
pub fn replay_tolerance(s: &Settings) -> f64 {
    (100.0 * s.tol).max(1e-8)
}

pub fn check_replay(stored: &RunManifest, fresh: &RunManifest) -> Result<()> {
    let diffs = compare(&stored.results, &fresh.results, replay_tolerance(&stored.settings));
    if !diffs.is_empty() {
        bail!("replay differs from the manifest:\n  {}", diffs.join("\n  "));
    }
    Ok(())
}
