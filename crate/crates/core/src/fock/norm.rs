//! Spectral norms of truncated operators.
//!
//! The matrix splits into independent blocks (connected components of the
//! row/column incidence graph); the norm is the largest block norm. Blocks
//! up to `DENSE_LIMIT` use a dense SVD, larger ones power iteration.

use nalgebra::DMatrix;

use super::FockOperator;
use crate::fourier::C64;

const DENSE_LIMIT: usize = 2000;

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Largest singular value on inputs of length at most `max_len`, with a unit
/// input vector attaining it (in basis coordinates).
pub(crate) fn spectral_norm(op: &FockOperator, max_len: i64) -> (f64, Vec<C64>) {
    let dim = op.dim();
    let basis = op.basis();
    let active: Vec<usize> =
        (0..dim).filter(|&j| basis.length(j) as i64 <= max_len && !op.column(j).is_empty()).collect();
    let mut best = (0.0, vec![C64::new(0.0, 0.0); dim]);
    if active.is_empty() {
        if let Some(j) = (0..dim).find(|&j| basis.length(j) as i64 <= max_len) {
            best.1[j] = C64::new(1.0, 0.0);
        }
        return best;
    }
    // nodes: columns 0..dim, rows dim..2dim
    let mut parent: Vec<usize> = (0..2 * dim).collect();
    for &j in &active {
        for &(i, _) in op.column(j) {
            let (a, b) = (find(&mut parent, j), find(&mut parent, dim + i));
            parent[a] = b;
        }
    }
    let mut blocks: std::collections::BTreeMap<usize, Vec<usize>> = std::collections::BTreeMap::new();
    for &j in &active {
        blocks.entry(find(&mut parent, j)).or_default().push(j);
    }
    for cols in blocks.values() {
        let (s, v) = block_norm(op, cols);
        if s > best.0 {
            best = (s, v);
        }
    }
    best
}

fn block_norm(op: &FockOperator, cols: &[usize]) -> (f64, Vec<C64>) {
    let dim = op.dim();
    let mut rows: Vec<usize> = cols.iter().flat_map(|&j| op.column(j).iter().map(|&(i, _)| i)).collect();
    rows.sort_unstable();
    rows.dedup();
    if rows.len().max(cols.len()) <= DENSE_LIMIT {
        let mut m = DMatrix::<C64>::zeros(rows.len(), cols.len());
        for (c, &j) in cols.iter().enumerate() {
            for &(i, a) in op.column(j) {
                let r = rows.binary_search(&i).expect("row collected");
                m[(r, c)] = a;
            }
        }
        let svd = m.svd(false, true);
        let (k, &s) = svd
            .singular_values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty block");
        let vt = svd.v_t.expect("requested");
        let mut v = vec![C64::new(0.0, 0.0); dim];
        for (c, &j) in cols.iter().enumerate() {
            v[j] = vt[(k, c)].conj();
        }
        return (s, v);
    }
    power_iteration(op, cols)
}

fn power_iteration(op: &FockOperator, cols: &[usize]) -> (f64, Vec<C64>) {
    let dim = op.dim();
    let mut x = vec![C64::new(0.0, 0.0); dim];
    for (k, &j) in cols.iter().enumerate() {
        // fixed, non-degenerate start vector
        x[j] = C64::new(1.0 + (k % 7) as f64 * 0.1, (k % 5) as f64 * 0.05);
    }
    let mask: Vec<bool> = {
        let mut m = vec![false; dim];
        for &j in cols {
            m[j] = true;
        }
        m
    };
    normalize(&mut x);
    let mut sigma = 0.0;
    for _ in 0..50_000 {
        let y = op.apply(&x);
        let next_sigma = y.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let mut z = op.apply_adjoint(&y);
        for (j, zj) in z.iter_mut().enumerate() {
            if !mask[j] {
                *zj = C64::new(0.0, 0.0);
            }
        }
        if normalize(&mut z) == 0.0 {
            return (0.0, x);
        }
        x = z;
        if (next_sigma - sigma).abs() <= 1e-14 * next_sigma.max(1.0) {
            sigma = next_sigma;
            break;
        }
        sigma = next_sigma;
    }
    (sigma, x)
}

fn normalize(x: &mut [C64]) -> f64 {
    let n = x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        for c in x.iter_mut() {
            *c /= n;
        }
    }
    n
}
