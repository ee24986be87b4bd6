//! Lines (undirected simple paths) and the alternating number.

use serde::Serialize;

use super::DirectedMultigraph;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Line {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Line {
    /// Interior vertices where both line edges leave or both enter.
    pub fn alternating_vertices(&self, g: &DirectedMultigraph) -> Vec<usize> {
        (1..self.vertices.len().saturating_sub(1))
            .filter(|&j| {
                let v = self.vertices[j];
                let outs = [self.edges[j - 1], self.edges[j]].iter().filter(|&&e| g.source(e) == v).count();
                outs != 1
            })
            .map(|j| self.vertices[j])
            .collect()
    }

    pub fn alternating_count(&self, g: &DirectedMultigraph) -> usize {
        self.alternating_vertices(g).len()
    }

    pub fn reversed(&self) -> Line {
        let mut vertices = self.vertices.clone();
        let mut edges = self.edges.clone();
        vertices.reverse();
        edges.reverse();
        Line { vertices, edges }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AlternatingNumber {
    pub value: usize,
    pub witness: Option<Line>,
    /// True when choosing among parallel edges changes the maximum compared
    /// with always using the first declared edge between two vertices.
    pub parallel_sensitive: bool,
}

/// Every line with at least one edge, in both directions, by depth-first
/// search from each vertex. Fails once more than `budget` lines are produced.
pub fn lines(g: &DirectedMultigraph, budget: usize) -> Result<Vec<Line>> {
    let mut out = Vec::new();
    for start in 0..g.vertex_count() {
        let mut on_path = vec![false; g.vertex_count()];
        let mut line = Line { vertices: vec![start], edges: vec![] };
        on_path[start] = true;
        extend(g, &mut line, &mut on_path, &mut out, budget)?;
    }
    Ok(out)
}

fn extend(
    g: &DirectedMultigraph,
    line: &mut Line,
    on_path: &mut [bool],
    out: &mut Vec<Line>,
    budget: usize,
) -> Result<()> {
    let v = *line.vertices.last().expect("nonempty line");
    let steps: Vec<(usize, usize)> = g
        .out_edges(v)
        .iter()
        .map(|&e| (e, g.range(e)))
        .chain(g.in_edges(v).iter().map(|&e| (e, g.source(e))))
        .collect();
    let mut steps = steps;
    steps.sort_unstable();
    for (e, w) in steps {
        if on_path[w] {
            continue;
        }
        on_path[w] = true;
        line.vertices.push(w);
        line.edges.push(e);
        out.push(line.clone());
        if out.len() > budget {
            return Err(Error::Budget(format!("line enumeration exceeded {budget} lines")));
        }
        extend(g, line, on_path, out, budget)?;
        line.vertices.pop();
        line.edges.pop();
        on_path[w] = false;
    }
    Ok(())
}

/// Unique paths between leaf pairs of a tree.
fn tree_leaf_lines(g: &DirectedMultigraph) -> Vec<Line> {
    let leaves: Vec<usize> = (0..g.vertex_count()).filter(|&v| g.degree(v) == 1).collect();
    let mut out = Vec::new();
    for (i, &a) in leaves.iter().enumerate() {
        // parent pointers from a
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; g.vertex_count()];
        let mut seen = vec![false; g.vertex_count()];
        seen[a] = true;
        let mut queue = std::collections::VecDeque::from([a]);
        while let Some(x) = queue.pop_front() {
            for &e in g.out_edges(x).iter().chain(g.in_edges(x)) {
                let y = if g.source(e) == x { g.range(e) } else { g.source(e) };
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some((x, e));
                    queue.push_back(y);
                }
            }
        }
        for &b in &leaves[i + 1..] {
            let mut vertices = vec![b];
            let mut edges = Vec::new();
            let mut cur = b;
            while let Some((p, e)) = parent[cur] {
                vertices.push(p);
                edges.push(e);
                cur = p;
            }
            vertices.reverse();
            edges.reverse();
            out.push(Line { vertices, edges });
        }
    }
    out
}

fn first_parallel_only(g: &DirectedMultigraph, line: &Line) -> bool {
    line.edges.iter().all(|&e| {
        let (a, b) = (g.source(e), g.range(e));
        let first = g
            .out_edges(a)
            .iter()
            .chain(g.in_edges(a))
            .copied()
            .filter(|&f| {
                let (c, d) = (g.source(f), g.range(f));
                (c == a && d == b) || (c == b && d == a)
            })
            .min();
        first == Some(e)
    })
}

/// `A(G)`: the maximum over lines of the number of alternating vertices.
/// Trees use the exact leaf-pair enumeration; other graphs enumerate all
/// lines up to `budget`.
pub fn alternating_number(g: &DirectedMultigraph, budget: usize) -> Result<AlternatingNumber> {
    let all = if g.is_tree() { tree_leaf_lines(g) } else { lines(g, budget)? };
    let mut best: Option<(usize, &Line)> = None;
    let mut best_simple = 0usize;
    for l in &all {
        let a = l.alternating_count(g);
        if best.map_or(true, |(b, _)| a > b) {
            best = Some((a, l));
        }
        if a > best_simple && first_parallel_only(g, l) {
            best_simple = a;
        }
    }
    let value = best.map_or(0, |(a, _)| a);
    Ok(AlternatingNumber {
        value,
        witness: best.map(|(_, l)| l.clone()),
        parallel_sensitive: value != best_simple,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_graph_text, star_in_tree, upper_triangle_tree, zigzag};

    #[test]
    fn examples() {
        assert_eq!(alternating_number(&upper_triangle_tree(3), 1000).unwrap().value, 0);
        assert_eq!(alternating_number(&zigzag(5), 1000).unwrap().value, 3);
        assert_eq!(alternating_number(&star_in_tree(4), 1000).unwrap().value, 1);
    }

    #[test]
    fn antiparallel_pair_changes_value() {
        // a -> b, b -> a (antiparallel), b -> c: using the second a-b edge
        // makes b alternate
        let g = parse_graph_text("vertex a\nvertex b\nvertex c\nedge x: a -> b\nedge y: b -> a\nedge z: b -> c").unwrap();
        let a = alternating_number(&g, 1000).unwrap();
        assert_eq!(a.value, 1);
        assert!(a.parallel_sensitive);
    }

    #[test]
    fn budget() {
        let g = parse_graph_text("vertex a\nvertex b\nedge x: a -> b\nedge y: a -> b").unwrap();
        assert!(alternating_number(&g, 1).is_err());
    }
}
