//! Finite directed multigraphs.
//!
//! An edge `e` points from its source `s(e)` to its range `r(e)`. Loops and
//! parallel edges are allowed. Vertices and edges keep their declaration
//! order, which is the canonical order for every report.

mod alternating;
mod classify;
mod enumerate;
mod families;
mod parse;
mod probes;
mod reduced;
mod scc;

use std::collections::HashMap;

use crate::error::{Error, Result};

pub use alternating::{alternating_number, lines, AlternatingNumber, Line};
pub use classify::{
    check_fruit_properties, classify, classify_component, fruit_tree_decomposition, ClassificationReport,
    ClassifyBudget, ComponentReport, Fruit, FruitDecomposition, FruitProperty, Orientation, Verdict, Violation,
    Witness,
};
pub use enumerate::{connected_multigraphs, isomorphic, oriented_trees};
pub use families::{
    amalgamate, circle, free_semigroup, in_fruit_minimal, loop_and_two_edges, out_fruit_minimal, parallel_edges,
    star_in_tree, two_loops_one_edge, upper_triangle_tree, zigzag,
};
pub use parse::{parse_graph, parse_graph_json, parse_graph_text, to_json, to_text};
pub use probes::{acyclic_edges, polygons, structure_probes, Polygon, StructureProbes};
pub use reduced::{reduced_subgraph, ReducedSubgraph};
pub(crate) use classify::is_circle_graph;
pub use scc::{reachability_matrix, reachable_from, scc_decomposition};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub source: usize,
    pub range: usize,
}

#[derive(Clone, Debug, Default)]
pub struct DirectedMultigraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_lookup: HashMap<String, usize>,
    edge_lookup: HashMap<String, usize>,
    by_source: Vec<Vec<usize>>,
    by_range: Vec<Vec<usize>>,
}

impl PartialEq for DirectedMultigraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for DirectedMultigraph {}

pub(crate) fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl DirectedMultigraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, id: &str) -> Result<usize> {
        if self.vertex_lookup.contains_key(id) {
            return Err(Error::DuplicateId { kind: "vertex", id: id.to_string() });
        }
        let index = self.vertices.len();
        self.vertices.push(id.to_string());
        self.vertex_lookup.insert(id.to_string(), index);
        self.by_source.push(Vec::new());
        self.by_range.push(Vec::new());
        Ok(index)
    }

    /// Adds an edge `id: src -> dst`, so `s(e) = src` and `r(e) = dst`.
    pub fn add_edge(&mut self, id: &str, src: &str, dst: &str) -> Result<usize> {
        if self.edge_lookup.contains_key(id) {
            return Err(Error::DuplicateId { kind: "edge", id: id.to_string() });
        }
        let lookup = |v: &str| {
            self.vertex_lookup.get(v).copied().ok_or_else(|| Error::UndeclaredVertex {
                edge: id.to_string(),
                vertex: v.to_string(),
            })
        };
        let source = lookup(src)?;
        let range = lookup(dst)?;
        Ok(self.push_edge(id, source, range))
    }

    pub fn add_edge_by_index(&mut self, id: &str, source: usize, range: usize) -> Result<usize> {
        if self.edge_lookup.contains_key(id) {
            return Err(Error::DuplicateId { kind: "edge", id: id.to_string() });
        }
        assert!(source < self.vertices.len() && range < self.vertices.len());
        Ok(self.push_edge(id, source, range))
    }

    fn push_edge(&mut self, id: &str, source: usize, range: usize) -> usize {
        let index = self.edges.len();
        self.edges.push(Edge { id: id.to_string(), source, range });
        self.edge_lookup.insert(id.to_string(), index);
        self.by_source[source].push(index);
        self.by_range[range].push(index);
        index
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertex_lookup.get(id).copied()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edge_lookup.get(id).copied()
    }

    pub fn source(&self, e: usize) -> usize {
        self.edges[e].source
    }

    pub fn range(&self, e: usize) -> usize {
        self.edges[e].range
    }

    /// Edges `e` with `s(e) = v`.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.by_source[v]
    }

    /// Edges `e` with `r(e) = v`.
    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.by_range[v]
    }

    /// Undirected degree, counting a loop twice.
    pub fn degree(&self, v: usize) -> usize {
        self.by_source[v].len() + self.by_range[v].len()
    }

    /// Connected components of the underlying undirected graph, each sorted,
    /// ordered by their least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut label = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![start];
            label[start] = id;
            let mut members = Vec::new();
            while let Some(v) = stack.pop() {
                members.push(v);
                for &e in self.by_source[v].iter().chain(&self.by_range[v]) {
                    for w in [self.edges[e].source, self.edges[e].range] {
                        if label[w] == usize::MAX {
                            label[w] = id;
                            stack.push(w);
                        }
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() > 0 && self.components().len() == 1
    }

    /// The subgraph on `vertices` with every edge whose endpoints both lie in
    /// it. Ids are kept; returns the new graph and the old indices of its
    /// vertices and edges.
    pub fn induced(&self, vertices: &[usize]) -> (DirectedMultigraph, Vec<usize>, Vec<usize>) {
        let mut keep = vec![usize::MAX; self.vertex_count()];
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut g = DirectedMultigraph::new();
        for &v in &sorted {
            keep[v] = g.add_vertex(&self.vertices[v]).expect("ids are unique");
        }
        let mut edge_map = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if keep[e.source] != usize::MAX && keep[e.range] != usize::MAX {
                g.push_edge(&e.id, keep[e.source], keep[e.range]);
                edge_map.push(i);
            }
        }
        (g, sorted, edge_map)
    }

    /// The subgraph with the given vertices and edges; every listed edge must
    /// have both endpoints among the vertices.
    pub fn edge_subgraph(&self, vertices: &[usize], edges: &[usize]) -> DirectedMultigraph {
        let mut keep = vec![usize::MAX; self.vertex_count()];
        let mut g = DirectedMultigraph::new();
        for &v in vertices {
            keep[v] = g.add_vertex(&self.vertices[v]).expect("ids are unique");
        }
        for &e in edges {
            let edge = &self.edges[e];
            g.push_edge(&edge.id, keep[edge.source], keep[edge.range]);
        }
        g
    }

    /// True when some vertex carries a directed circle.
    pub fn has_directed_circle(&self) -> bool {
        (0..self.vertex_count()).any(|v| self.on_circle(v))
    }

    /// True when a path of positive length leads from `v` back to `v`.
    pub fn on_circle(&self, v: usize) -> bool {
        let reach = reachable_from(self, v);
        self.by_range[v].iter().any(|&e| reach[self.edges[e].source])
    }

    /// No polygon, connected, at least two vertices.
    pub fn is_tree(&self) -> bool {
        self.vertex_count() >= 2 && self.is_connected() && self.edge_count() + 1 == self.vertex_count()
    }

    /// Length of the longest directed path, or `None` when a circle exists.
    pub fn longest_path(&self) -> Option<usize> {
        let order = self.topological_order()?;
        let mut best = vec![0usize; self.vertex_count()];
        for &v in &order {
            for &e in &self.by_source[v] {
                let r = self.edges[e].range;
                best[r] = best[r].max(best[v] + 1);
            }
        }
        Some(best.into_iter().max().unwrap_or(0))
    }

    /// Kahn order in which every edge goes from an earlier vertex to a later
    /// one; `None` when a circle exists.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.vertex_count();
        let mut indeg: Vec<usize> = (0..n).map(|v| self.by_range[v].len()).collect();
        let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for &e in &self.by_source[v] {
                let r = self.edges[e].range;
                indeg[r] -= 1;
                if indeg[r] == 0 {
                    ready.insert(r);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Root of an out-tree: a tree with a vertex from which every vertex is
    /// reachable.
    pub fn out_tree_root(&self) -> Option<usize> {
        if !self.is_tree() {
            return None;
        }
        (0..self.vertex_count()).find(|&v| reachable_from(self, v).iter().all(|&b| b))
    }

    /// Root of an in-tree: a tree with a vertex reachable from every vertex.
    pub fn in_tree_root(&self) -> Option<usize> {
        if !self.is_tree() {
            return None;
        }
        let reach = reachability_matrix(self);
        (0..self.vertex_count()).find(|&v| (0..self.vertex_count()).all(|u| reach[u][v]))
    }
}
