//! One function per experiment; each validates its parameters, runs the
//! library operation and returns a table plus a structured JSON view.

mod converge;
mod diag;
mod mtp;
mod phi;
mod sample;

use percolab::generators::{source_from_json, GraphSource};
use serde_json::Value;

use crate::config::RunConfig;
use crate::table::Table;

pub struct Output {
    pub table: Table,
    pub json: Value,
    pub seeds: Vec<(String, u64)>,
}

impl Output {
    pub fn new(table: Table, json: Value, seed: u64) -> Self {
        Self { table, json, seeds: vec![("main".into(), seed)] }
    }
}

pub fn dispatch(cfg: &RunConfig) -> anyhow::Result<Output> {
    match cfg.experiment.as_str() {
        "generate" => sample::generate(cfg),
        "phi" => phi::phi(cfg),
        "witness" => phi::witness(cfg),
        "estimate-pc" => diag::estimate_pc(cfg),
        "pt-diag" => diag::pt_diag(cfg, false),
        "pta-diag" => diag::pt_diag(cfg, true),
        "mtp-test" => mtp::mtp(cfg),
        "converge" => converge::converge(cfg),
        "crossing" => sample::crossing(cfg),
        "suite" => sample::suite(cfg),
        other => unreachable!("experiment {other} passed validation"),
    }
}

pub(crate) fn build_source(v: &Value) -> anyhow::Result<Box<dyn GraphSource>> {
    Ok(source_from_json(v)?)
}

pub(crate) fn default_radii() -> Vec<usize> {
    vec![1, 2, 3]
}
