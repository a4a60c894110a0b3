//! Deterministic JSON/CSV shaping of reports.

use descent_core::axioms::{AxiomReport, Witness};
use descent_core::classify::{ZAxiomReport, ZWitness};
use descent_core::exact::rat_to_string;
use descent_core::{FiniteSpace, ScalarField};
use serde_json::{json, Map, Value};
use std::path::Path;

pub fn field_json(f: &ScalarField) -> Value {
    json!(f.values().iter().map(rat_to_string).collect::<Vec<_>>())
}

pub fn labels_json(space: &FiniteSpace, vertices: &[usize]) -> Value {
    json!(vertices.iter().map(|&x| space.label(x)).collect::<Vec<_>>())
}

pub fn witness_json(space: &FiniteSpace, w: &Witness) -> Value {
    let mut obj = Map::new();
    obj.insert("f".into(), field_json(&w.f));
    if let Some(g) = &w.g {
        obj.insert("g".into(), field_json(g));
    }
    obj.insert("vertex".into(), json!(space.label(w.vertex)));
    if let Some(s) = &w.scalar {
        obj.insert("scalar".into(), json!(rat_to_string(s)));
    }
    obj.insert("note".into(), json!(w.note));
    Value::Object(obj)
}

pub fn axiom_report_json(space: &FiniteSpace, r: &AxiomReport) -> Value {
    let mut obj = Map::new();
    obj.insert("axiom".into(), json!(r.axiom.label()));
    obj.insert(
        "verdict".into(),
        json!(if r.holds_on_grid() { "holds-on-grid" } else { "fails" }),
    );
    obj.insert("cases".into(), json!(r.cases));
    if let Some(w) = &r.witness {
        obj.insert("witness".into(), witness_json(space, w));
    }
    Value::Object(obj)
}

pub fn z_witness_json(space: &FiniteSpace, w: &ZWitness) -> Value {
    let mut obj = Map::new();
    if let Some(f) = &w.f {
        obj.insert("f".into(), field_json(f));
    }
    if let Some(s) = &w.scalar {
        obj.insert("scalar".into(), json!(rat_to_string(s)));
    }
    if let Some(k) = &w.subset {
        obj.insert("subset".into(), labels_json(space, k));
    }
    if let Some(x) = w.vertex {
        obj.insert("vertex".into(), json!(space.label(x)));
    }
    obj.insert("note".into(), json!(w.note));
    Value::Object(obj)
}

pub fn z_report_json(space: &FiniteSpace, r: &ZAxiomReport) -> Value {
    let mut obj = Map::new();
    obj.insert("axiom".into(), json!(r.axiom.label()));
    obj.insert("verdict".into(), json!(if r.holds { "holds-on-grid" } else { "fails" }));
    obj.insert("cases".into(), json!(r.cases));
    if let Some(w) = &r.witness {
        obj.insert("witness".into(), z_witness_json(space, w));
    }
    Value::Object(obj)
}

/// Write an artifact file under the output directory, if one is set.
pub fn emit(out: Option<&Path>, name: &str, contents: &str) -> anyhow::Result<()> {
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(name), contents)?;
    }
    Ok(())
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable report");
    s.push('\n');
    s
}
