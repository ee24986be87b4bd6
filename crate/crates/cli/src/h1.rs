use std::sync::Arc;

use semigroupoid::cohomology::{graded_h1, h1_verdict, ComponentH1, GradedH1Report, H1Verdict};
use semigroupoid::graph::{to_json, ClassifyBudget, DirectedMultigraph};
use serde_json::{json, Value};

use crate::classify::verdict;
use crate::graphs::GraphArgs;
use crate::json::{paths, spec, vertex_ids, SCHEMA};
use crate::CliError;

pub fn run(source: &GraphArgs, max_degree: usize, budget: usize, cap: usize) -> Result<Value, CliError> {
    let g = Arc::new(source.load()?);
    let v = h1_verdict(&g, ClassifyBudget { polygons: budget, lines: budget })?;
    let report = graded_h1(&g, max_degree, cap)?;
    Ok(json!({
        "schema": SCHEMA,
        "command": "h1",
        "config": { "graph": source.describe(), "max_degree": max_degree, "budget": budget, "cap": cap },
        "graph": to_json(&g),
        "result": {
            "verdict": verdict_json(&g, &v),
            "graded": graded_json(&g, &report),
        },
    }))
}

fn verdict_json(g: &DirectedMultigraph, v: &H1Verdict) -> Value {
    let components: Vec<Value> = v
        .components
        .iter()
        .map(|c| {
            let sub = g.induced(&c.vertices).0;
            let h1 = match &c.h1 {
                ComponentH1::Trivial => json!({ "kind": "trivial" }),
                ComponentH1::Nontrivial { property, adversary } => json!({
                    "kind": "nontrivial",
                    "property": property.map(|p| p.label()),
                    "adversary": adversary.as_ref().map(spec),
                }),
                ComponentH1::Unknown(reason) => json!({ "kind": "unknown", "reason": reason }),
            };
            json!({ "vertices": vertex_ids(g, &c.vertices), "verdict": verdict(&sub, &c.verdict), "h1": h1 })
        })
        .collect();
    json!({ "trivial": v.trivial(), "components": components })
}

fn graded_json(g: &DirectedMultigraph, r: &GradedH1Report) -> Value {
    let normalization: Vec<Value> =
        r.normalization.iter().map(|(v, cs)| json!({ "vertex": g.vertex_id(*v), "circles": paths(g, cs) })).collect();
    let degrees: Vec<Value> = r
        .degrees
        .iter()
        .map(|d| {
            json!({
                "degree": d.degree,
                "der": d.der,
                "inn": d.inn,
                "h1": d.h1,
                "witnesses": d.witnesses.iter().map(spec).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "dims": r.h1_dims(),
        "all_zero": r.all_zero(),
        "graded_model_caveat": r.graded_model_caveat,
        "circle_maxlen": r.circle_maxlen,
        "circles_truncated": r.truncated,
        "normalization": normalization,
        "degrees": degrees,
    })
}
