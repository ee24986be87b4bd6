//! Named graph families used as fixtures.

use super::DirectedMultigraph;
use crate::error::{Error, Result};

fn build(vertices: &[String], edges: &[(String, usize, usize)]) -> DirectedMultigraph {
    let mut g = DirectedMultigraph::new();
    for v in vertices {
        g.add_vertex(v).expect("fresh vertex ids");
    }
    for (id, s, r) in edges {
        g.add_edge_by_index(id, *s, *r).expect("fresh edge ids");
    }
    g
}

fn names(prefix: &str, range: std::ops::RangeInclusive<usize>) -> Vec<String> {
    range.map(|i| format!("{prefix}{i}")).collect()
}

/// The n-circle graph: `r(e_j) = v_j`, `s(e_j) = v_{j+1 mod n}`.
pub fn circle(n: usize) -> DirectedMultigraph {
    assert!(n >= 1, "circle needs at least one vertex");
    let edges: Vec<_> = (0..n).map(|j| (format!("e{}", j + 1), (j + 1) % n, j)).collect();
    build(&names("v", 1..=n), &edges)
}

/// Path on `v1..vm` whose orientation flips at every interior vertex:
/// `v2 -> v1`, `v2 -> v3`, `v4 -> v3`, `v4 -> v5`, ...
pub fn zigzag(m: usize) -> DirectedMultigraph {
    assert!(m >= 2, "zigzag needs at least two vertices");
    let edges: Vec<_> = (0..m - 1)
        .map(|j| {
            // vertices j and j+1 (0-based); the odd 0-based one is the source
            let (s, r) = if j % 2 == 0 { (j + 1, j) } else { (j, j + 1) };
            (format!("e{}", j + 1), s, r)
        })
        .collect();
    build(&names("v", 1..=m), &edges)
}

/// Root `v0` with leaves `v1..vn`, `e_j: v_j -> v0`.
pub fn star_in_tree(n: usize) -> DirectedMultigraph {
    assert!(n >= 1, "star needs at least one leaf");
    let edges: Vec<_> = (1..=n).map(|j| (format!("e{j}"), j, 0)).collect();
    build(&names("v", 0..=n), &edges)
}

/// Directed line `v1 <- v2 <- ... <- vn`.
pub fn upper_triangle_tree(n: usize) -> DirectedMultigraph {
    assert!(n >= 2, "line needs at least two vertices");
    let edges: Vec<_> = (0..n - 1).map(|j| (format!("e{}", j + 1), j + 1, j)).collect();
    build(&names("v", 1..=n), &edges)
}

/// `n` parallel edges `f_j: v2 -> v1`.
pub fn parallel_edges(n: usize) -> DirectedMultigraph {
    assert!(n >= 1, "need at least one edge");
    let edges: Vec<_> = (1..=n).map(|j| (format!("f{j}"), 1, 0)).collect();
    build(&names("v", 1..=2), &edges)
}

/// Loops `e1` at `v1` and `e2` at `v2`, joined by `e: v2 -> v1`.
pub fn two_loops_one_edge() -> DirectedMultigraph {
    let edges = [("e1".to_string(), 0, 0), ("e2".to_string(), 1, 1), ("e".to_string(), 1, 0)];
    build(&names("v", 1..=2), &edges)
}

/// Loop `w` at `v3` with `e1: v1 -> v3` and `e2: v2 -> v3`.
pub fn loop_and_two_edges() -> DirectedMultigraph {
    let edges = [("w".to_string(), 2, 2), ("e1".to_string(), 0, 2), ("e2".to_string(), 1, 2)];
    build(&names("v", 1..=3), &edges)
}

/// One vertex `v` with `k` loops named `a`, `b`, `c`, ...
pub fn free_semigroup(k: usize) -> DirectedMultigraph {
    assert!((1..=26).contains(&k));
    let edges: Vec<_> = (0..k).map(|i| (((b'a' + i as u8) as char).to_string(), 0, 0)).collect();
    build(&["v".to_string()], &edges)
}

/// Trunk edge `e: u -> v` into a 1-circle (loop `w`) at `v`.
pub fn in_fruit_minimal() -> DirectedMultigraph {
    let edges = [("w".to_string(), 1, 1), ("e".to_string(), 0, 1)];
    build(&["u".to_string(), "v".to_string()], &edges)
}

/// Trunk edge `f: v -> u` out of a 1-circle (loop `w`) at `v`.
pub fn out_fruit_minimal() -> DirectedMultigraph {
    let edges = [("w".to_string(), 1, 1), ("f".to_string(), 1, 0)];
    build(&["u".to_string(), "v".to_string()], &edges)
}

/// Glues an `n_λ`-circle onto each listed leaf of `trunk`. The leaf becomes
/// the circle's first vertex; new vertices are `<leaf>_c2..` and new edges
/// `<leaf>_f1..`, oriented like [`circle`].
pub fn amalgamate(trunk: &DirectedMultigraph, fruits: &[usize], attachments: &[&str]) -> Result<DirectedMultigraph> {
    if fruits.len() != attachments.len() {
        return Err(Error::Precondition("one attachment vertex per fruit".into()));
    }
    if !trunk.is_tree() {
        return Err(Error::Precondition("trunk must be a tree".into()));
    }
    let mut leaves = Vec::new();
    for &a in attachments {
        let v = trunk
            .vertex_index(a)
            .ok_or_else(|| Error::Precondition(format!("unknown attachment vertex `{a}`")))?;
        if trunk.degree(v) != 1 {
            return Err(Error::Precondition(format!("attachment `{a}` is not a leaf")));
        }
        if leaves.contains(&v) {
            return Err(Error::Precondition(format!("attachment `{a}` used twice")));
        }
        leaves.push(v);
    }
    if leaves.len() == trunk.vertex_count() {
        return Err(Error::Precondition("every trunk vertex would carry a fruit".into()));
    }
    if let Some(&n) = fruits.iter().find(|&&n| n < 1) {
        return Err(Error::Precondition(format!("fruit size {n} < 1")));
    }
    let mut g = trunk.clone();
    for (&n, &leaf) in fruits.iter().zip(&leaves) {
        let base = trunk.vertex_id(leaf).to_string();
        let mut cycle = vec![leaf];
        for j in 2..=n {
            cycle.push(g.add_vertex(&format!("{base}_c{j}"))?);
        }
        for j in 0..n {
            g.add_edge_by_index(&format!("{base}_f{}", j + 1), cycle[(j + 1) % n], cycle[j])?;
        }
    }
    Ok(g)
}
