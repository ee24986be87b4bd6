//! Reduced subgraphs: vertices `F`, one edge per minimal path at `F`.

use super::DirectedMultigraph;

#[derive(Clone, Debug)]
pub struct ReducedSubgraph {
    pub graph: DirectedMultigraph,
    /// For each new edge, the original edge sequence (range end first).
    pub paths: Vec<Vec<usize>>,
    /// Set when a minimal path longer than `maxlen` exists.
    pub truncated: bool,
}

/// A minimal path at `F` has both ends in `F` and every interior vertex
/// outside `F`. Interior vertices may repeat.
pub fn reduced_subgraph(g: &DirectedMultigraph, f: &[usize], maxlen: usize) -> ReducedSubgraph {
    assert!(maxlen >= 1);
    let mut in_f = vec![false; g.vertex_count()];
    for &v in f {
        in_f[v] = true;
    }
    let mut found: Vec<Vec<usize>> = Vec::new();
    // grow paths on the source side: p·e needs r(e) = s(p)
    let mut stack: Vec<Vec<usize>> = (0..g.edge_count()).rev().filter(|&e| in_f[g.range(e)]).map(|e| vec![e]).collect();
    while let Some(p) = stack.pop() {
        let s = g.source(*p.last().expect("nonempty"));
        if in_f[s] {
            if p.len() <= maxlen {
                found.push(p);
            }
            continue;
        }
        if p.len() > maxlen {
            continue;
        }
        for &e in g.in_edges(s).iter().rev() {
            let mut q = p.clone();
            q.push(e);
            stack.push(q);
        }
    }
    let truncated = longer_minimal_path(g, &in_f, maxlen);
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

    let mut graph = DirectedMultigraph::new();
    let mut new_index = vec![usize::MAX; g.vertex_count()];
    for v in (0..g.vertex_count()).filter(|&v| in_f[v]) {
        new_index[v] = graph.add_vertex(g.vertex_id(v)).expect("unique ids");
    }
    for p in &found {
        let base: Vec<&str> = p.iter().map(|&e| g.edge(e).id.as_str()).collect();
        let mut id = base.join("_");
        let mut k = 1;
        while graph.edge_index(&id).is_some() {
            k += 1;
            id = format!("{}_{k}", base.join("_"));
        }
        let r = new_index[g.range(p[0])];
        let s = new_index[g.source(*p.last().expect("nonempty"))];
        graph.add_edge_by_index(&id, s, r).expect("fresh id");
    }
    ReducedSubgraph { graph, paths: found, truncated }
}

/// A longer minimal path can be shortened by cutting interior circles until
/// its length lies in `maxlen + 1 ..= maxlen + |V|`, so a bounded state search
/// over (source vertex, length) decides it.
fn longer_minimal_path(g: &DirectedMultigraph, in_f: &[bool], maxlen: usize) -> bool {
    let limit = maxlen + g.vertex_count();
    let mut seen = vec![vec![false; limit + 1]; g.vertex_count()];
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for e in (0..g.edge_count()).filter(|&e| in_f[g.range(e)]) {
        if !seen[g.source(e)][1] {
            seen[g.source(e)][1] = true;
            stack.push((g.source(e), 1));
        }
    }
    while let Some((v, k)) = stack.pop() {
        if in_f[v] {
            if k > maxlen {
                return true;
            }
            continue;
        }
        if k == limit {
            continue;
        }
        for &e in g.in_edges(v) {
            let w = g.source(e);
            if !seen[w][k + 1] {
                seen[w][k + 1] = true;
                stack.push((w, k + 1));
            }
        }
    }
    false
}
