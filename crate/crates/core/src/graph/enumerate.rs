//! Exhaustive small-graph corpora, deduplicated up to isomorphism.

use std::collections::BTreeSet;

use super::DirectedMultigraph;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Lexicographically least sorted edge list over all vertex relabelings.
pub(crate) fn canonical_key(edges: &[(usize, usize)], perms: &[Vec<usize>]) -> Vec<(usize, usize)> {
    perms
        .iter()
        .map(|p| {
            let mut k: Vec<_> = edges.iter().map(|&(s, r)| (p[s], p[r])).collect();
            k.sort_unstable();
            k
        })
        .min()
        .unwrap_or_default()
}

fn from_pairs(n: usize, edges: &[(usize, usize)]) -> DirectedMultigraph {
    let mut g = DirectedMultigraph::new();
    for i in 1..=n {
        g.add_vertex(&format!("v{i}")).expect("fresh");
    }
    for (j, &(s, r)) in edges.iter().enumerate() {
        g.add_edge_by_index(&format!("e{}", j + 1), s, r).expect("fresh");
    }
    g
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(s, r) in edges {
        let (a, b) = (find(&mut parent, s), find(&mut parent, r));
        parent[a] = b;
    }
    let root = find(&mut parent, 0);
    (0..n).all(|v| find(&mut parent, v) == root)
}

/// All connected directed multigraphs (loops and parallel edges allowed) with
/// `1..=max_vertices` vertices and at most `max_edges` edges, one per
/// isomorphism class.
pub fn connected_multigraphs(max_vertices: usize, max_edges: usize) -> Vec<DirectedMultigraph> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        let perms = permutations(n);
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|s| (0..n).map(move |r| (s, r))).collect();
        let mut seen = BTreeSet::new();
        // multisets of slots as nondecreasing index sequences
        let mut stack: Vec<Vec<usize>> = vec![vec![]];
        while let Some(seq) = stack.pop() {
            let edges: Vec<_> = seq.iter().map(|&i| slots[i]).collect();
            if connected(n, &edges) {
                let key = canonical_key(&edges, &perms);
                if seen.insert(key.clone()) {
                    out.push((n, key));
                }
            }
            if seq.len() < max_edges {
                let from = seq.last().copied().unwrap_or(0);
                for i in (from..slots.len()).rev() {
                    let mut next = seq.clone();
                    next.push(i);
                    stack.push(next);
                }
            }
        }
    }
    out.sort();
    out.into_iter().map(|(n, e)| from_pairs(n, &e)).collect()
}

fn prufer_tree(n: usize, seq: &[usize]) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::new();
    for &x in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("prufer leaf");
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Every orientation of every tree on `n ≥ 2` vertices, one per isomorphism
/// class of directed trees.
pub fn oriented_trees(n: usize) -> Vec<DirectedMultigraph> {
    assert!(n >= 2);
    let perms = permutations(n);
    // undirected shapes first
    let mut shapes = BTreeSet::new();
    let total = n.pow(n as u32 - 2);
    for code in 0..total {
        let mut seq = Vec::with_capacity(n - 2);
        let mut c = code;
        for _ in 0..n - 2 {
            seq.push(c % n);
            c /= n;
        }
        let edges: Vec<_> = prufer_tree(n, &seq).into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        let key = perms
            .iter()
            .map(|p| {
                let mut k: Vec<_> = edges.iter().map(|&(a, b)| (p[a].min(p[b]), p[a].max(p[b]))).collect();
                k.sort_unstable();
                k
            })
            .min()
            .expect("nonempty");
        shapes.insert(key);
    }
    let mut seen = BTreeSet::new();
    for shape in shapes {
        for mask in 0..(1u32 << (n - 1)) {
            let edges: Vec<_> = shape
                .iter()
                .enumerate()
                .map(|(i, &(a, b))| if mask >> i & 1 == 1 { (a, b) } else { (b, a) })
                .collect();
            seen.insert(canonical_key(&edges, &perms));
        }
    }
    seen.into_iter().map(|e| from_pairs(n, &e)).collect()
}

/// Isomorphism test for small graphs by canonical forms.
pub fn isomorphic(a: &DirectedMultigraph, b: &DirectedMultigraph) -> bool {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let perms = permutations(a.vertex_count());
    let pairs = |g: &DirectedMultigraph| g.edges().iter().map(|e| (e.source, e.range)).collect::<Vec<_>>();
    canonical_key(&pairs(a), &perms) == canonical_key(&pairs(b), &perms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_counts() {
        // oriented trees (unlabeled): 1, 3, 8, 27 for n = 2..5 (OEIS A000238)
        assert_eq!(oriented_trees(2).len(), 1);
        assert_eq!(oriented_trees(3).len(), 3);
        assert_eq!(oriented_trees(4).len(), 8);
        assert_eq!(oriented_trees(5).len(), 27);
    }

    #[test]
    fn small_multigraph_counts() {
        // one vertex: loops 0..=2; two vertices with at most one edge: one edge
        let g = connected_multigraphs(1, 2);
        assert_eq!(g.len(), 3);
        let g2: Vec<_> = connected_multigraphs(2, 1).into_iter().filter(|g| g.vertex_count() == 2).collect();
        assert_eq!(g2.len(), 1);
    }
}
