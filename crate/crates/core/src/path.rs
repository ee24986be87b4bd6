//! Paths of a graph and the truncated path basis.
//!
//! A path `e1 e2 … en` needs `s(e_j) = r(e_{j+1})`; its range is `r(e1)` and
//! its source `s(en)`. Vertices are the paths of length zero. The product
//! `pq` is defined when `s(p) = r(q)`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{reduced_subgraph, DirectedMultigraph};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    range: usize,
    source: usize,
    edges: Vec<usize>,
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.edges
            .len()
            .cmp(&other.edges.len())
            .then_with(|| self.edges.cmp(&other.edges))
            .then_with(|| self.range.cmp(&other.range))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Path {
    pub fn vertex(v: usize) -> Path {
        Path { range: v, source: v, edges: Vec::new() }
    }

    pub fn edge(g: &DirectedMultigraph, e: usize) -> Path {
        Path { range: g.range(e), source: g.source(e), edges: vec![e] }
    }

    /// `None` unless consecutive edges compose.
    pub fn from_edges(g: &DirectedMultigraph, edges: &[usize]) -> Option<Path> {
        let (&first, &last) = (edges.first()?, edges.last()?);
        if edges.windows(2).any(|w| g.source(w[0]) != g.range(w[1])) {
            return None;
        }
        Some(Path { range: g.range(first), source: g.source(last), edges: edges.to_vec() })
    }

    /// Parses `v` (a vertex id) or `e1.e2.e3`.
    pub fn parse(g: &DirectedMultigraph, text: &str) -> Result<Path> {
        let bad = |msg: String| Error::Precondition(msg);
        if let Some(v) = g.vertex_index(text) {
            if g.edge_index(text).is_none() {
                return Ok(Path::vertex(v));
            }
        }
        let edges = text
            .split('.')
            .map(|id| g.edge_index(id).ok_or_else(|| bad(format!("unknown edge `{id}` in path `{text}`"))))
            .collect::<Result<Vec<_>>>()?;
        Path::from_edges(g, &edges).ok_or_else(|| bad(format!("path `{text}` is not composable")))
    }

    pub fn display(&self, g: &DirectedMultigraph) -> String {
        if self.edges.is_empty() {
            g.vertex_id(self.range).to_string()
        } else {
            self.edges.iter().map(|&e| g.edge(e).id.as_str()).collect::<Vec<_>>().join(".")
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_vertex(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn range(&self) -> usize {
        self.range
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    /// A path of positive length with equal range and source.
    pub fn is_circle(&self) -> bool {
        !self.edges.is_empty() && self.range == self.source
    }

    /// `self^k`; `k = 0` gives the vertex.
    pub fn power(&self, k: usize) -> Path {
        assert_eq!(self.range, self.source, "only circles have powers");
        Path { range: self.range, source: self.source, edges: self.edges.repeat(k) }
    }

    /// The segment `e_{from+1} … e_{to}` (empty segments give the vertex
    /// between them).
    pub fn slice(&self, g: &DirectedMultigraph, from: usize, to: usize) -> Path {
        assert!(from <= to && to <= self.len());
        if from == to {
            let v = if from == 0 {
                self.range
            } else {
                g.source(self.edges[from - 1])
            };
            return Path::vertex(v);
        }
        Path { range: g.range(self.edges[from]), source: g.source(self.edges[to - 1]), edges: self.edges[from..to].to_vec() }
    }
}

/// `pq` when `s(p) = r(q)`.
pub fn compose(p: &Path, q: &Path) -> Option<Path> {
    if p.source != q.range {
        return None;
    }
    let mut edges = Vec::with_capacity(p.len() + q.len());
    edges.extend_from_slice(&p.edges);
    edges.extend_from_slice(&q.edges);
    Some(Path { range: p.range, source: q.source, edges })
}

/// True when `pw` and `wp` are both defined and equal.
pub fn commutes_with(p: &Path, w: &Path) -> bool {
    match (compose(p, w), compose(w, p)) {
        (Some(a), Some(b)) => a == b,
        _ => false,
    }
}

/// Circles at `v` that do not pass through `v` in between, up to `maxlen`;
/// the flag is set when a longer one exists.
pub fn minimal_circles_at(g: &DirectedMultigraph, v: usize, maxlen: usize) -> (Vec<Path>, bool) {
    let r = reduced_subgraph(g, &[v], maxlen);
    let circles = r.paths.iter().map(|p| Path::from_edges(g, p).expect("minimal paths compose")).collect();
    (circles, r.truncated)
}

/// `w = w1^m` with `m` maximal.
pub fn root_power_decomposition(g: &DirectedMultigraph, w: &Path) -> (Path, usize) {
    assert!(w.is_circle(), "root of a non-circle");
    let n = w.len();
    for d in 1..=n {
        if n % d == 0 && (d..n).all(|i| w.edges[i] == w.edges[i - d]) {
            return (w.slice(g, 0, d), n / d);
        }
    }
    unreachable!("d = n always works")
}

/// All paths of length exactly `len` in basis order.
pub fn paths_of_length(g: &DirectedMultigraph, len: usize) -> Vec<Path> {
    if len == 0 {
        return (0..g.vertex_count()).map(Path::vertex).collect();
    }
    let mut layer: Vec<Path> = (0..g.edge_count()).map(|e| Path::edge(g, e)).collect();
    for _ in 1..len {
        let mut next = Vec::new();
        for p in &layer {
            for &e in g.in_edges(p.source) {
                let mut edges = p.edges.clone();
                edges.push(e);
                next.push(Path { range: p.range, source: g.source(e), edges });
            }
        }
        layer = next;
    }
    layer
}

/// All paths of length at most `depth`, ordered by length and then
/// lexicographically by edge index (vertices by index).
#[derive(Debug)]
pub struct PathBasis {
    graph: Arc<DirectedMultigraph>,
    depth: usize,
    paths: Vec<Path>,
    index: HashMap<Path, usize>,
    /// `offsets[n]` is the first index of length `n`; one extra entry at the end.
    offsets: Vec<usize>,
}

pub const DEFAULT_BASIS_CAP: usize = 50_000;

/// Number of paths of each length `0..=depth`, saturating.
pub fn path_counts(g: &DirectedMultigraph, depth: usize) -> Vec<u128> {
    let mut by_source = vec![1u128; g.vertex_count()];
    let mut out = vec![g.vertex_count() as u128];
    for _ in 0..depth {
        let next: Vec<u128> = (0..g.vertex_count())
            .map(|v| g.out_edges(v).iter().fold(0u128, |acc, &e| acc.saturating_add(by_source[g.range(e)])))
            .collect();
        out.push(next.iter().fold(0u128, |a, &b| a.saturating_add(b)));
        by_source = next;
    }
    out
}

impl PathBasis {
    pub fn new(graph: Arc<DirectedMultigraph>, depth: usize, cap: usize) -> Result<PathBasis> {
        let required = path_counts(&graph, depth).iter().fold(0u128, |a, &b| a.saturating_add(b));
        if required > cap as u128 {
            return Err(Error::Cap { required: usize::try_from(required).unwrap_or(usize::MAX), cap });
        }
        let mut paths: Vec<Path> = (0..graph.vertex_count()).map(Path::vertex).collect();
        let mut offsets = vec![0, paths.len()];
        if depth >= 1 {
            paths.extend((0..graph.edge_count()).map(|e| Path::edge(&graph, e)));
            offsets.push(paths.len());
        }
        for _ in 2..=depth {
            let (lo, hi) = (offsets[offsets.len() - 2], offsets[offsets.len() - 1]);
            for i in lo..hi {
                let p = paths[i].clone();
                for &e in graph.in_edges(p.source) {
                    let mut edges = p.edges.clone();
                    edges.push(e);
                    paths.push(Path { range: p.range, source: graph.source(e), edges });
                }
            }
            offsets.push(paths.len());
        }
        let index = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Ok(PathBasis { graph, depth, paths, index, offsets })
    }

    pub fn enumerate(g: &DirectedMultigraph, depth: usize) -> Result<Arc<PathBasis>> {
        Ok(Arc::new(PathBasis::new(Arc::new(g.clone()), depth, DEFAULT_BASIS_CAP)?))
    }

    pub fn graph(&self) -> &DirectedMultigraph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<DirectedMultigraph> {
        &self.graph
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn path(&self, i: usize) -> &Path {
        &self.paths[i]
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn index_of(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Basis indices of the paths of length `n`.
    pub fn length_range(&self, n: usize) -> std::ops::Range<usize> {
        if n > self.depth {
            return self.paths.len()..self.paths.len();
        }
        self.offsets[n]..self.offsets[n + 1]
    }

    /// Length of basis element `i`.
    pub fn length(&self, i: usize) -> usize {
        self.paths[i].len()
    }

    pub fn same_as(&self, other: &PathBasis) -> bool {
        std::ptr::eq(self, other) || (self.depth == other.depth && *self.graph == *other.graph)
    }
}
