//! JSON building blocks shared by the reports.

use std::str::FromStr;

use semigroupoid::derivation::DerivationSpec;
use semigroupoid::fourier::{FourierSeries, C64};
use semigroupoid::graph::DirectedMultigraph;
use semigroupoid::linalg::{q_display, QC};
use semigroupoid::path::Path;
use serde_json::{json, Map, Number, Value};

pub const SCHEMA: u64 = 1;

/// A float with 17 significant digits; non-finite values become strings.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(Number::from_str(&format!("{x:.16e}")).expect("formatted floats are valid JSON numbers"))
    } else if x.is_nan() {
        Value::String("nan".into())
    } else if x > 0.0 {
        Value::String("inf".into())
    } else {
        Value::String("-inf".into())
    }
}

pub fn complex(z: C64) -> Value {
    json!([num(z.re), num(z.im)])
}

pub fn exact_complex(z: &QC) -> Value {
    json!([q_display(&z.re), q_display(&z.im)])
}

/// A bound together with the side it is certified on.
pub fn bound(value: f64, side: &str) -> Value {
    json!({ "value": num(value), "side": side })
}

pub fn path(g: &DirectedMultigraph, p: &Path) -> Value {
    Value::String(p.display(g))
}

pub fn paths(g: &DirectedMultigraph, ps: &[Path]) -> Value {
    Value::Array(ps.iter().map(|p| path(g, p)).collect())
}

pub fn vertex_ids(g: &DirectedMultigraph, vs: &[usize]) -> Value {
    Value::Array(vs.iter().map(|&v| Value::String(g.vertex_id(v).to_string())).collect())
}

pub fn edge_ids(g: &DirectedMultigraph, es: &[usize]) -> Value {
    Value::Array(es.iter().map(|&e| Value::String(g.edge(e).id.clone())).collect())
}

/// Terms in basis order as `{"path": …, "coefficient": [re, im]}`.
pub fn series(g: &DirectedMultigraph, s: &FourierSeries) -> Value {
    Value::Array(
        s.iter()
            .map(|(p, c)| json!({ "path": path(g, p), "coefficient": complex(*c) }))
            .collect(),
    )
}

pub fn spec(s: &DerivationSpec) -> Value {
    let g = s.graph();
    let values = |items: Vec<(String, &FourierSeries)>| {
        let mut m = Map::new();
        for (id, v) in items {
            if !v.is_zero() {
                m.insert(id, series(g, v));
            }
        }
        Value::Object(m)
    };
    let vertices = (0..g.vertex_count()).map(|v| (g.vertex_id(v).to_string(), s.vertex_value(v))).collect();
    let edges = (0..g.edge_count()).map(|e| (g.edge(e).id.clone(), s.edge_value(e))).collect();
    json!({
        "grade": s.grade(),
        "vertex_values": values(vertices),
        "edge_values": values(edges),
    })
}

pub fn render(v: &Value) -> String {
    let mut out = serde_json::to_string_pretty(v).expect("values serialize");
    out.push('\n');
    out
}
