//! Acyclic edges and polygons (undirected simple cycles).

use serde::Serialize;

use super::{reachability_matrix, DirectedMultigraph};
use crate::error::{Error, Result};

/// Edges lying on no directed circle: no path leads from `r(e)` back to `s(e)`.
pub fn acyclic_edges(g: &DirectedMultigraph) -> Vec<usize> {
    let reach = reachability_matrix(g);
    (0..g.edge_count()).filter(|&e| !reach[g.range(e)][g.source(e)]).collect()
}

/// A polygon `{v_j, e_j}`: distinct vertices, distinct edges, `e_j` joining
/// `v_j` and `v_{j+1 mod n}` in either direction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Polygon {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Polygon {
    /// True when all edges point the same way around the polygon.
    pub fn is_directed_circle(&self, g: &DirectedMultigraph) -> bool {
        let n = self.vertices.len();
        let forward = |j: usize| {
            let e = self.edges[j];
            g.source(e) == self.vertices[j] && g.range(e) == self.vertices[(j + 1) % n]
        };
        let backward = |j: usize| {
            let e = self.edges[j];
            g.range(e) == self.vertices[j] && g.source(e) == self.vertices[(j + 1) % n]
        };
        (0..n).all(forward) || (0..n).all(backward)
    }
}

/// Every polygon once. Each polygon starts at its least vertex and is walked
/// in the direction whose first edge has the smaller index. `budget` bounds
/// the number of search steps.
pub fn polygons(g: &DirectedMultigraph, budget: usize) -> Result<Vec<Polygon>> {
    let mut out = Vec::new();
    let mut steps = 0usize;
    for e in 0..g.edge_count() {
        if g.source(e) == g.range(e) {
            out.push(Polygon { vertices: vec![g.source(e)], edges: vec![e] });
        }
    }
    let neighbors = |v: usize| {
        g.out_edges(v)
            .iter()
            .map(move |&e| (e, g.range(e)))
            .chain(g.in_edges(v).iter().map(move |&e| (e, g.source(e))))
            .filter(|&(e, _)| g.source(e) != g.range(e))
    };
    for start in 0..g.vertex_count() {
        let mut verts = vec![start];
        let mut edges: Vec<usize> = Vec::new();
        let mut on_path = vec![false; g.vertex_count()];
        on_path[start] = true;
        let mut iters: Vec<Vec<(usize, usize)>> = vec![neighbors(start).collect()];
        while let Some(frame) = iters.last_mut() {
            steps += 1;
            if steps > budget {
                return Err(Error::Budget(format!("polygon enumeration exceeded {budget} steps")));
            }
            let Some((e, w)) = frame.pop() else {
                iters.pop();
                if let Some(v) = verts.pop() {
                    on_path[v] = false;
                }
                edges.pop();
                continue;
            };
            if w == start && !edges.is_empty() && e != edges[0] && edges[0] < e {
                let mut p_edges = edges.clone();
                p_edges.push(e);
                out.push(Polygon { vertices: verts.clone(), edges: p_edges });
                continue;
            }
            if w <= start || on_path[w] {
                continue;
            }
            on_path[w] = true;
            verts.push(w);
            edges.push(e);
            iters.push(neighbors(w).filter(|&(f, _)| f != e).collect());
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureProbes {
    pub acyclic_edges: Vec<usize>,
    pub fake_circle: Option<Polygon>,
    pub polygon_count: usize,
    /// Set when the polygon budget ran out; counts are then partial.
    pub partial: bool,
}

pub fn structure_probes(g: &DirectedMultigraph, budget: usize) -> StructureProbes {
    let acyclic = acyclic_edges(g);
    match polygons(g, budget) {
        Ok(ps) => StructureProbes {
            acyclic_edges: acyclic,
            fake_circle: ps.iter().find(|p| !p.is_directed_circle(g)).cloned(),
            polygon_count: ps.len(),
            partial: false,
        },
        Err(_) => StructureProbes { acyclic_edges: acyclic, fake_circle: None, polygon_count: 0, partial: true },
    }
}
