//! Dixmier averages over explicit isometries.

use num_integer::Integer;

use super::{CreationKind, FockOperator};
use crate::error::{Error, Result};
use crate::fourier::C64;
use crate::graph::{is_circle_graph, DirectedMultigraph};
use crate::path::{minimal_circles_at, Path};

/// Edges of a circle graph in cyclic order `e_1, e_2, …` with
/// `s(e_j) = r(e_{j+1})`, starting at the edge with range vertex 0.
pub(crate) fn circle_order(g: &DirectedMultigraph) -> Vec<usize> {
    let mut order = vec![g.in_edges(0)[0]];
    while order.len() < g.edge_count() {
        let last = *order.last().expect("nonempty");
        order.push(g.in_edges(g.source(last))[0]);
    }
    order
}

/// `α(A) = 2^{-n} n^{-1} ∑_{π,i} W_{π,i}^* A W_{π,i}` with
/// `W_{π,i} = ∑_j π(j) L_{e_j ⋯ e_{j+i−1}}`, summed literally over every sign
/// pattern `π` and shift `i`.
pub fn dixmier_circle(a: &FockOperator) -> Result<FockOperator> {
    let basis = a.basis();
    let g = basis.graph();
    if !is_circle_graph(g) {
        return Err(Error::Precondition("circle-mode averaging needs an n-circle graph".into()));
    }
    let n = g.vertex_count();
    if basis.depth() < n {
        return Err(Error::Window(format!("depth {} is below the circle length {n}", basis.depth())));
    }
    let order = circle_order(g);
    let segment = |j: usize, i: usize| {
        let edges: Vec<usize> = (0..i).map(|t| order[(j + t) % n]).collect();
        Path::from_edges(g, &edges).expect("consecutive circle edges compose")
    };
    let mut total = FockOperator::zero(basis);
    for i in 1..=n {
        let pieces = (0..n).map(|j| FockOperator::left(basis, &segment(j, i))).collect::<Result<Vec<_>>>()?;
        for signs in 0u64..(1u64 << n) {
            let mut w = FockOperator::zero(basis);
            for (j, piece) in pieces.iter().enumerate() {
                let sign = if signs >> j & 1 == 1 { -1.0 } else { 1.0 };
                w = w.add(&piece.scale(C64::new(sign, 0.0)))?;
            }
            total = total.add(&w.adjoint().multiply(&a.multiply(&w)?)?)?;
        }
    }
    Ok(total.scale(C64::new(1.0 / ((1u64 << n) as f64 * n as f64), 0.0)))
}

#[derive(Clone, Debug)]
pub struct DixmierReport {
    pub result: FockOperator,
    /// The vertex set `F`, in the order used for the shifts.
    pub vertices: Vec<usize>,
    /// Coefficients of the result at `L_v`, `v ∈ F`.
    pub vertex_coefficients: Vec<C64>,
    /// Mean of the coefficients of `A` at `L_v`, `v ∈ F`.
    pub mean: C64,
    /// Largest distance of a vertex coefficient from the mean.
    pub drift: f64,
    /// Largest non-vertex coefficient touching `F`.
    pub off_center: f64,
    /// The two least minimal circles `(c_j, d_j)` at each vertex.
    pub circles: Vec<(Path, Path)>,
    /// Exponents `m_j = j·L/ℓ(c_j)` with `L` the lcm of the `ℓ(c_j)`.
    pub exponents: Vec<usize>,
    pub k: usize,
}

/// `(1/|F|) ∑_i V_i^* A V_i` with `V_i = I − L_F + U_{i,k}` and
/// `U_{i,k} = ∑_j L_{w_j^k d_j p_{j,j+i}}`, where `w_j = c_j^{m_j}` and
/// `p_{j,j+i}` is the least path from `v_{j+i}` to `v_j`.
pub fn dixmier_finite(a: &FockOperator, f: &[usize], k: usize) -> Result<DixmierReport> {
    let basis = a.basis();
    let g = basis.graph();
    let depth = basis.depth();
    if f.is_empty() {
        return Err(Error::Precondition("empty vertex set".into()));
    }
    let n = f.len();
    let mut circles = Vec::with_capacity(n);
    for &v in f {
        let (mut cs, _) = minimal_circles_at(g, v, depth.max(1));
        cs.sort();
        if cs.len() < 2 {
            return Err(Error::Precondition(format!(
                "vertex {} has fewer than two minimal circles within depth {depth}",
                g.vertex_id(v)
            )));
        }
        circles.push((cs[0].clone(), cs[1].clone()));
    }
    let lcm = circles.iter().fold(1usize, |l, (c, _)| l.lcm(&c.len()));
    let exponents: Vec<usize> = circles.iter().enumerate().map(|(j, (c, _))| (j + 1) * lcm / c.len()).collect();
    let connector = |to: usize, from: usize| -> Result<Path> {
        basis
            .paths()
            .iter()
            .find(|p| p.range() == to && p.source() == from)
            .cloned()
            .ok_or_else(|| {
                Error::Precondition(format!("no path from {} to {} within depth {depth}", g.vertex_id(from), g.vertex_id(to)))
            })
    };
    let mut words = Vec::with_capacity(n);
    for i in 1..=n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let (c, d) = &circles[j];
            let p = connector(f[j], f[(j + i) % n])?;
            let word = c.power(exponents[j] * k);
            let word = crate::path::compose(&word, d).expect("circles at v_j");
            row.push(crate::path::compose(&word, &p).expect("p ends at v_j"));
        }
        words.push(row);
    }
    let longest = words.iter().flatten().map(Path::len).max().unwrap_or(0) as i64;
    if longest + a.window().max_shift.max(0) > depth as i64 {
        return Err(Error::Window(format!(
            "isometries of length {longest} plus the shift of A exceed depth {depth}"
        )));
    }
    let mut lf = FockOperator::zero(basis);
    for &v in f {
        lf = lf.add(&FockOperator::creation(basis, CreationKind::VertexProj, &Path::vertex(v))?)?;
    }
    let id = FockOperator::identity(basis);
    let mut total = FockOperator::zero(basis);
    for row in &words {
        let mut v = id.sub(&lf)?;
        for word in row {
            v = v.add(&FockOperator::left(basis, word)?)?;
        }
        total = total.add(&v.adjoint().multiply(&a.multiply(&v)?)?)?;
    }
    let result = total.scale(C64::new(1.0 / n as f64, 0.0));

    let input = a.fourier()?;
    let output = result.fourier()?;
    let mean = f.iter().map(|&v| input.coefficient(&Path::vertex(v))).sum::<C64>() / n as f64;
    let vertex_coefficients: Vec<C64> = f.iter().map(|&v| output.coefficient(&Path::vertex(v))).collect();
    let drift = vertex_coefficients.iter().map(|c| (c - mean).norm()).fold(0.0, f64::max);
    let in_f = |v: usize| f.contains(&v);
    let off_center = output
        .iter()
        .filter(|(p, _)| !p.is_vertex() && (in_f(p.range()) || in_f(p.source())))
        .map(|(_, c)| c.norm())
        .fold(0.0, f64::max);
    Ok(DixmierReport { result, vertices: f.to_vec(), vertex_coefficients, mean, drift, off_center, circles, exponents, k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::FourierSeries;
    use crate::graph::{circle, free_semigroup};
    use crate::path::PathBasis;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn two_circle_closed_forms() {
        let g = circle(2);
        let b = PathBasis::enumerate(&g, 8).unwrap();
        let e1 = FockOperator::left(&b, &Path::edge(&g, 0)).unwrap();
        assert_eq!(dixmier_circle(&e1).unwrap().fourier().unwrap().prune(1e-15), FourierSeries::zero());
        let c1 = Path::from_edges(&g, &[0, 1]).unwrap();
        let c2 = Path::from_edges(&g, &[1, 0]).unwrap();
        let out = dixmier_circle(&FockOperator::left(&b, &c1).unwrap()).unwrap().fourier().unwrap();
        let expect = FourierSeries::from_terms([(c1, re(0.5)), (c2, re(0.5))]);
        assert!(out.max_diff(&expect) < 1e-15);
        let v1 = FockOperator::creation(&b, CreationKind::VertexProj, &Path::vertex(0)).unwrap();
        let out = dixmier_circle(&v1).unwrap().fourier().unwrap();
        assert!(out.max_diff(&FourierSeries::scalar(&g, re(0.5))) < 1e-15);
    }

    #[test]
    fn finite_mode_on_free_semigroup() {
        let g = free_semigroup(2);
        let b = PathBasis::enumerate(&g, 8).unwrap();
        let a = FourierSeries::from_terms([
            (Path::vertex(0), re(2.0)),
            (Path::edge(&g, 0), re(1.0)),
            (Path::from_edges(&g, &[1, 0]).unwrap(), re(-3.0)),
        ]);
        let op = FockOperator::from_fourier(&b, &a).unwrap();
        let r = dixmier_finite(&op, &[0], 3).unwrap();
        assert_eq!(r.mean, re(2.0));
        assert!(r.drift < 1e-15);
        assert!(r.off_center < 1e-15);
        assert!(dixmier_finite(&op, &[0], 7).is_err());
    }
}
