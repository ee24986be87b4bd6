//! Strongly connected components (Tarjan) and plain reachability.

use super::DirectedMultigraph;

/// Vertices reachable from `v` by a directed path of length ≥ 0.
pub fn reachable_from(g: &DirectedMultigraph, v: usize) -> Vec<bool> {
    let mut seen = vec![false; g.vertex_count()];
    let mut stack = vec![v];
    seen[v] = true;
    while let Some(x) = stack.pop() {
        for &e in g.out_edges(x) {
            let y = g.range(e);
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

/// `m[u][v]` is true when a directed path (possibly empty) leads from `u` to `v`.
pub fn reachability_matrix(g: &DirectedMultigraph) -> Vec<Vec<bool>> {
    (0..g.vertex_count()).map(|v| reachable_from(g, v)).collect()
}

/// Maximal strongly connected components, each sorted, ordered by least vertex.
pub fn scc_decomposition(g: &DirectedMultigraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next = 0usize;
    let mut comps = Vec::new();

    // Iterative Tarjan: frames hold (vertex, position in its out-edge list).
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut frames: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(top) = frames.last_mut() {
            let v = top.0;
            let out = g.out_edges(v);
            if top.1 < out.len() {
                let w = g.range(out[top.1]);
                top.1 += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            frames.pop();
            if let Some(&(parent, _)) = frames.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps.sort_by_key(|c| c[0]);
    comps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{circle, parse_graph_text, two_loops_one_edge};

    #[test]
    fn examples() {
        assert_eq!(scc_decomposition(&circle(3)), vec![vec![0, 1, 2]]);
        assert_eq!(scc_decomposition(&two_loops_one_edge()), vec![vec![0], vec![1]]);
        let g = parse_graph_text("vertex a\nvertex b").unwrap();
        assert_eq!(scc_decomposition(&g), vec![vec![0], vec![1]]);
    }
}
