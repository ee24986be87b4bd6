use semigroupoid::graph::{
    classify, to_json, ClassificationReport, ClassifyBudget, ComponentReport, DirectedMultigraph, FruitDecomposition,
    Orientation, Polygon, Verdict, Witness,
};
use serde_json::{json, Value};

use crate::graphs::GraphArgs;
use crate::json::{edge_ids, vertex_ids, SCHEMA};
use crate::CliError;

pub fn run(source: &GraphArgs, budget: usize) -> Result<Value, CliError> {
    let g = source.load()?;
    let report = classify(&g, ClassifyBudget { polygons: budget, lines: budget })?;
    if let Some(reason) = report.components.iter().find_map(|c| match &c.verdict {
        Verdict::Unknown(reason) => Some(reason.clone()),
        _ => None,
    }) {
        return Err(CliError::budget(reason));
    }
    if report.components.iter().any(|c| c.alternating.is_none()) {
        return Err(CliError::budget(format!("more than {budget} lines")));
    }
    Ok(json!({
        "schema": SCHEMA,
        "command": "classify",
        "config": { "graph": source.describe(), "budget": budget },
        "graph": to_json(&g),
        "result": classification(&report),
    }))
}

pub fn classification(report: &ClassificationReport) -> Value {
    json!({
        "components": report.components.iter().map(component).collect::<Vec<_>>(),
        "all_trivial": report.all_trivial(),
    })
}

pub fn verdict(g: &DirectedMultigraph, v: &Verdict) -> Value {
    match v {
        Verdict::CircleGraph(n) => json!({ "kind": v.tag(), "n": n }),
        Verdict::NotFruitTree(violation) => json!({
            "kind": v.tag(),
            "property": violation.property.label(),
            "witness": witness(g, &violation.witness),
        }),
        Verdict::Unknown(reason) => json!({ "kind": v.tag(), "reason": reason }),
        _ => json!({ "kind": v.tag() }),
    }
}

fn polygon(g: &DirectedMultigraph, p: &Polygon) -> Value {
    json!({ "vertices": vertex_ids(g, &p.vertices), "edges": edge_ids(g, &p.edges) })
}

fn witness(g: &DirectedMultigraph, w: &Witness) -> Value {
    match w {
        Witness::Component(vs) => json!({ "component": vertex_ids(g, vs) }),
        Witness::Edge(e) => json!({ "edge": g.edge(*e).id }),
        Witness::Attachments { component, edges } => {
            json!({ "component": vertex_ids(g, component), "attaching_edges": edge_ids(g, edges) })
        }
        Witness::FakeCircle(p) => json!({ "fake_circle": polygon(g, p) }),
    }
}

fn decomposition(g: &DirectedMultigraph, d: &FruitDecomposition) -> Value {
    let fruits: Vec<Value> = d
        .fruits
        .iter()
        .map(|f| {
            json!({
                "attachment": g.vertex_id(f.attachment),
                "attaching_edge": g.edge(f.attaching_edge).id,
                "orientation": match f.orientation { Orientation::In => "in", Orientation::Out => "out" },
                "vertices": vertex_ids(g, &f.vertices),
                "edges": edge_ids(g, &f.edges),
            })
        })
        .collect();
    json!({
        "trunk_vertices": vertex_ids(g, &d.trunk_vertices),
        "trunk_edges": edge_ids(g, &d.trunk_edges),
        "fruits": fruits,
    })
}

fn component(c: &ComponentReport) -> Value {
    let g = &c.graph;
    let alternating = c.alternating.as_ref().map(|a| {
        json!({
            "value": a.value,
            "witness": a.witness.as_ref().map(|l| json!({
                "vertices": vertex_ids(g, &l.vertices),
                "edges": edge_ids(g, &l.edges),
            })),
            "parallel_sensitive": a.parallel_sensitive,
        })
    });
    json!({
        "vertices": g.vertices(),
        "edges": edge_ids(g, &(0..g.edge_count()).collect::<Vec<_>>()),
        "verdict": verdict(g, &c.verdict),
        "alternating_number": alternating,
        "acyclic_edges": edge_ids(g, &c.acyclic_edges),
        "fake_circle": c.fake_circle.as_ref().map(|p| polygon(g, p)),
        "decomposition": c.decomposition.as_ref().map(|d| decomposition(g, d)),
    })
}
