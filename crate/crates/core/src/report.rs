//! Estimate reports and their CSV/JSON serialization.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Hex sha256 of the canonical JSON form of a source descriptor.
pub fn source_hash(descriptor: &serde_json::Value) -> String {
    let text = serde_json::to_string(descriptor).unwrap_or_default();
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// One row of an estimate table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateReport {
    pub experiment: String,
    pub source_hash: String,
    pub p: f64,
    pub radius: usize,
    pub replicas: usize,
    pub estimate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub seed: u64,
}

pub const CSV_HEADER: &str = "experiment,source_hash,p,radius,replicas,estimate,ci_lo,ci_hi,seed";

/// Float formatting with 12 significant digits.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else {
        format!("{x}")
    }
}

impl EstimateReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            escape(&self.experiment),
            self.source_hash,
            fmt_float(self.p),
            self.radius,
            self.replicas,
            fmt_float(self.estimate),
            fmt_float(self.ci_lo),
            fmt_float(self.ci_hi),
            self.seed
        )
    }
}

fn escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Renders a full CSV document, header included.
pub fn to_csv(rows: &[EstimateReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}
