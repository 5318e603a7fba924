//! JSON descriptors `{"kind": ..., "params": {...}}` for graph sources.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::contraction::{ContractionSource, LabelRule};
use super::edge_repl::{EdgeKit, EdgeReplacementSource};
use super::lattice::{BoxSource, CycleSource, PathSource, Z2Source};
use super::law::OffspringLaw;
use super::perc_cluster::PercClusterSource;
use super::tree::{GklSource, UgwSource};
use super::vertex_repl::{BoxLaw, HeavyTail, VertexKit, VertexReplacementSource};
use super::{CanopySource, GraphSource};
use crate::error::{Error, Result};
use crate::graph::VertexId;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceDescriptor {
    pub kind: String,
    #[serde(default = "empty_object")]
    pub params: Value,
}

fn empty_object() -> Value {
    Value::Object(Map::new())
}

impl SourceDescriptor {
    pub fn new(kind: &str, params: Value) -> Self {
        Self { kind: kind.to_string(), params }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("descriptor serializes")
    }

    pub fn build(&self) -> Result<Box<dyn GraphSource>> {
        source_from_json(&self.to_json())
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

/// Keyed access to a params object that rejects unknown keys on `finish`.
struct Params<'a> {
    ctx: String,
    map: &'a Map<String, Value>,
    known: Vec<&'static str>,
}

impl<'a> Params<'a> {
    fn new(ctx: &str, v: Option<&'a Value>) -> Result<Self> {
        static EMPTY: std::sync::OnceLock<Map<String, Value>> = std::sync::OnceLock::new();
        let map = match v {
            None | Some(Value::Null) => EMPTY.get_or_init(Map::new),
            Some(Value::Object(m)) => m,
            Some(_) => return Err(bad(format!("{ctx}: params must be an object"))),
        };
        Ok(Self { ctx: ctx.to_string(), map, known: Vec::new() })
    }

    fn raw(&mut self, key: &'static str) -> Option<&'a Value> {
        self.known.push(key);
        self.map.get(key).filter(|v| !v.is_null())
    }

    /// Informational keys emitted by `descriptor()` and ignored on input.
    fn info(&mut self, keys: &[&'static str]) {
        self.known.extend_from_slice(keys);
    }

    fn f64_or(&mut self, key: &'static str, default: f64) -> Result<f64> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v.as_f64().ok_or_else(|| bad(format!("{}: `{key}` must be a number", self.ctx))),
        }
    }

    fn f64_req(&mut self, key: &'static str) -> Result<f64> {
        let ctx = self.ctx.clone();
        self.raw(key)
            .ok_or_else(|| bad(format!("{ctx}: missing `{key}`")))?
            .as_f64()
            .ok_or_else(|| bad(format!("{ctx}: `{key}` must be a number")))
    }

    fn usize_opt(&mut self, key: &'static str) -> Result<Option<usize>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .as_u64()
                .map(|x| Some(x as usize))
                .ok_or_else(|| bad(format!("{}: `{key}` must be a nonnegative integer", self.ctx))),
        }
    }

    fn usize_or(&mut self, key: &'static str, default: usize) -> Result<usize> {
        Ok(self.usize_opt(key)?.unwrap_or(default))
    }

    fn bool_or(&mut self, key: &'static str, default: bool) -> Result<bool> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v.as_bool().ok_or_else(|| bad(format!("{}: `{key}` must be a boolean", self.ctx))),
        }
    }

    fn required(&mut self, key: &'static str) -> Result<&'a Value> {
        let ctx = self.ctx.clone();
        self.raw(key).ok_or_else(|| bad(format!("{ctx}: missing `{key}`")))
    }

    fn finish(self) -> Result<()> {
        for k in self.map.keys() {
            if !self.known.contains(&k.as_str()) {
                return Err(bad(format!("{}: unknown parameter `{k}`", self.ctx)));
            }
        }
        Ok(())
    }
}

/// Splits `{"kind": ..., "params": ...}`, rejecting other top-level keys.
fn kind_and_params<'a>(v: &'a Value, ctx: &str) -> Result<(&'a str, Option<&'a Value>)> {
    let obj = v.as_object().ok_or_else(|| bad(format!("{ctx}: expected an object")))?;
    for k in obj.keys() {
        if k != "kind" && k != "params" {
            return Err(bad(format!("{ctx}: unknown field `{k}`")));
        }
    }
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| bad(format!("{ctx}: missing string field `kind`")))?;
    Ok((kind, obj.get("params")))
}

/// Builds a graph source from its JSON descriptor.
pub fn source_from_json(v: &Value) -> Result<Box<dyn GraphSource>> {
    let (kind, params) = kind_and_params(v, "source")?;
    let mut p = Params::new(kind, params)?;
    let src: Box<dyn GraphSource> = match kind {
        "canopy" => {
            p.info(&["tail_mass"]);
            let decay = p.f64_or("level_decay", 2.0)?;
            if !(decay > 1.0) {
                return Err(bad("canopy: `level_decay` must exceed 1"));
            }
            match p.usize_opt("max_level")? {
                Some(m) if decay == 2.0 => Box::new(CanopySource::truncated(m)),
                Some(_) => return Err(bad("canopy: `max_level` cannot be combined with `level_decay`")),
                None => Box::new(CanopySource::with_decay(decay)),
            }
        }
        "ugw" => {
            p.info(&["tail_mass", "q"]);
            let law = parse_law(p.required("law")?)?;
            let conditioned = p.bool_or("conditioned", false)?;
            Box::new(UgwSource::new(law, conditioned)?)
        }
        "gkl" => Box::new(GklSource::new(p.usize_or("k", 3)?, p.usize_or("l", 5)?)?),
        "z2" => Box::new(Z2Source),
        "path" => Box::new(PathSource),
        "cycle" => {
            let n = p.usize_or("n", 3)?;
            if n < 3 {
                return Err(bad("cycle: `n` must be at least 3"));
            }
            Box::new(CycleSource(n))
        }
        "box" => {
            let n = p.usize_or("n", 1)?;
            if n == 0 {
                return Err(bad("box: `n` must be at least 1"));
            }
            Box::new(BoxSource(n))
        }
        "gn" => {
            let n = p.usize_or("n", 4)?;
            if n == 0 {
                return Err(bad("gn: `n` must be at least 1"));
            }
            Box::new(EdgeReplacementSource::new(
                Box::new(VertexReplacementSource::constant_boxes(n)),
                EdgeKit::Path { length: 2, labels: vec![1] },
            )?)
        }
        "ptk" => Box::new(VertexReplacementSource::heavy_tail(p.bool_or("uncorrected", false)?)),
        "vertex_repl" => {
            let base = source_from_json(p.required("base")?)?;
            let kit = parse_vertex_kit(p.required("kit")?)?;
            Box::new(VertexReplacementSource::new(base, kit)?)
        }
        "edge_repl" => {
            let base = source_from_json(p.required("base")?)?;
            let kit = parse_edge_kit(p.required("kit")?)?;
            Box::new(EdgeReplacementSource::new(base, kit)?)
        }
        "contraction" => {
            let base = source_from_json(p.required("base")?)?;
            let rule = parse_label_rule(p.required("labels")?)?;
            Box::new(ContractionSource::new(base, rule)?)
        }
        "perc_cluster" => {
            let base = source_from_json(p.required("base")?)?;
            let prob = p.f64_req("p")?;
            let radius = p.usize_opt("condition_radius")?;
            let retries = p.usize_or("max_retries", 100)?;
            Box::new(PercClusterSource::new(base, prob, radius, retries)?)
        }
        other => return Err(bad(format!("unknown source kind `{other}`"))),
    };
    p.finish()?;
    Ok(src)
}

/// Offspring law from `{"pmf": [...]}`, `{"constant": k}`,
/// `{"uniform": [lo, hi]}` or `{"poisson": lambda}`.
pub fn parse_law(v: &Value) -> Result<OffspringLaw> {
    let obj = v.as_object().filter(|o| o.len() == 1).ok_or_else(|| bad("law: expected an object with one key"))?;
    let (k, val) = obj.iter().next().expect("one key");
    match k.as_str() {
        "pmf" => {
            let pmf: Vec<f64> = serde_json::from_value(val.clone()).map_err(|e| bad(format!("law.pmf: {e}")))?;
            OffspringLaw::new(pmf)
        }
        "constant" => Ok(OffspringLaw::constant(val.as_u64().ok_or_else(|| bad("law.constant: integer expected"))? as usize)),
        "uniform" => {
            let [lo, hi]: [usize; 2] = serde_json::from_value(val.clone()).map_err(|e| bad(format!("law.uniform: {e}")))?;
            OffspringLaw::uniform(lo, hi)
        }
        "poisson" => OffspringLaw::poisson(val.as_f64().ok_or_else(|| bad("law.poisson: number expected"))?),
        other => Err(bad(format!("unknown law `{other}`"))),
    }
}

fn parse_vertex_kit(v: &Value) -> Result<VertexKit> {
    let obj = v.as_object().ok_or_else(|| bad("kit: expected an object"))?;
    let kind = obj.get("kind").and_then(Value::as_str).ok_or_else(|| bad("kit: missing `kind`"))?;
    let mut p = Params::new("kit", Some(v))?;
    p.info(&["kind"]);
    let kit = match kind {
        "single" => VertexKit::Single,
        "constant_box" => {
            let n = p.usize_or("n", 1)?;
            VertexKit::Boxes { law: BoxLaw::Constant(n), uncorrected: p.bool_or("uncorrected", false)? }
        }
        "heavy_tail_box" => {
            p.info(&["c", "cap", "tail_mass", "biased_tail_mass"]);
            VertexKit::Boxes { law: BoxLaw::HeavyTail(HeavyTail::get()), uncorrected: p.bool_or("uncorrected", false)? }
        }
        other => return Err(bad(format!("unknown vertex kit `{other}`"))),
    };
    p.finish()?;
    Ok(kit)
}

fn parse_edge_kit(v: &Value) -> Result<EdgeKit> {
    let obj = v.as_object().ok_or_else(|| bad("kit: expected an object"))?;
    let kind = obj.get("kind").and_then(Value::as_str).ok_or_else(|| bad("kit: missing `kind`"))?;
    let mut p = Params::new("kit", Some(v))?;
    p.info(&["kind"]);
    let kit = match kind {
        "edge" => EdgeKit::Identity,
        "path" => {
            let length = p.usize_or("length", 2)?;
            let labels: Vec<i64> = match p.raw("labels") {
                None => Vec::new(),
                Some(l) => serde_json::from_value(l.clone()).map_err(|e| bad(format!("kit.labels: {e}")))?,
            };
            EdgeKit::Path { length, labels }
        }
        "canopy_boxes" => EdgeKit::CanopyBoxes,
        other => return Err(bad(format!("unknown edge kit `{other}`"))),
    };
    p.finish()?;
    Ok(kit)
}

fn parse_label_rule(v: &Value) -> Result<LabelRule> {
    let obj = v.as_object().ok_or_else(|| bad("labels: expected an object"))?;
    let kind = obj.get("kind").and_then(Value::as_str).ok_or_else(|| bad("labels: missing `kind`"))?;
    let mut p = Params::new("labels", Some(v))?;
    p.info(&["kind"]);
    let rule = match kind {
        "base" => LabelRule::Base,
        "bernoulli" => LabelRule::Bernoulli(p.f64_req("rho")?),
        "alternating" => LabelRule::Alternating,
        "edges" => {
            let e: Vec<(VertexId, VertexId)> =
                serde_json::from_value(p.required("edges")?.clone()).map_err(|e| bad(format!("labels.edges: {e}")))?;
            LabelRule::Edges(e)
        }
        other => return Err(bad(format!("unknown label rule `{other}`"))),
    };
    p.finish()?;
    Ok(rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn round_trips() {
        let cases = [
            json!({"kind": "canopy"}),
            json!({"kind": "canopy", "params": {"level_decay": 3.0}}),
            json!({"kind": "ugw", "params": {"law": {"uniform": [1, 3]}, "conditioned": true}}),
            json!({"kind": "gkl", "params": {"k": 3, "l": 5}}),
            json!({"kind": "box", "params": {"n": 2}}),
            json!({"kind": "ptk"}),
            json!({"kind": "gn", "params": {"n": 2}}),
            json!({"kind": "contraction", "params": {"base": {"kind": "path"}, "labels": {"kind": "alternating"}}}),
            json!({"kind": "perc_cluster", "params": {"base": {"kind": "z2"}, "p": 0.7}}),
            json!({"kind": "edge_repl", "params": {"base": {"kind": "canopy", "params": {"max_level": 3}}, "kit": {"kind": "canopy_boxes"}}}),
        ];
        for c in cases {
            let s = source_from_json(&c).unwrap();
            let d = s.descriptor();
            let again = source_from_json(&d.to_json()).unwrap();
            assert_eq!(again.descriptor(), d, "{c}");
        }
    }

    #[test]
    fn rejects_typos() {
        assert!(source_from_json(&json!({"kind": "canoppy"})).is_err());
        assert!(source_from_json(&json!({"kind": "canopy", "params": {"levle_decay": 3}})).is_err());
        assert!(source_from_json(&json!({"kind": "canopy", "extra": 1})).is_err());
        assert!(source_from_json(&json!({"kind": "ugw", "params": {"law": {"pmf": [0.5, 0.2]}}})).is_err());
        assert!(source_from_json(&json!({"kind": "ugw", "params": {"law": {"constant": 1}, "conditioned": true}})).is_err());
    }
}
