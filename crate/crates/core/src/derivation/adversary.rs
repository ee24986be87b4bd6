//! Derivations that obstruct innerness or force large implementers.

use std::sync::Arc;

use super::DerivationSpec;
use crate::error::{Error, Result};
use crate::fourier::{FourierSeries, C64};
use crate::graph::{acyclic_edges, alternating_number, fruit_tree_decomposition, DirectedMultigraph, Fruit, Line, Orientation};
use crate::path::{compose, Path};

#[derive(Clone, Debug)]
pub struct AlternatingAdversary {
    pub spec: DerivationSpec,
    pub line: Line,
    /// The alternating vertices `λ_1, …, λ_{2m}` in line order; `λ_1` has
    /// both line edges leaving it.
    pub alternating: Vec<usize>,
    /// Edges with `δ(L_e) = L_e`: the line edge leaving each `λ_{2j−1}`
    /// towards `λ_{2j}`.
    pub edges: Vec<usize>,
}

/// Positions `j` on the line whose vertex alternates, with a flag for
/// "both edges leave".
fn alternating_positions(g: &DirectedMultigraph, line: &Line) -> Vec<(usize, bool)> {
    (1..line.vertices.len().saturating_sub(1))
        .filter_map(|j| {
            let v = line.vertices[j];
            let outs = [line.edges[j - 1], line.edges[j]].iter().filter(|&&e| g.source(e) == v).count();
            (outs != 1).then_some((j, outs == 2))
        })
        .collect()
}

/// `δ(L_e) = L_e` on the edge after every other alternating vertex of a
/// line with at least `2m` alternating vertices, zero elsewhere. Any
/// implementer `T` then has `λ_1 − λ_{2m} = m` for its vertex coefficients.
pub fn adversary_alternating(g: &Arc<DirectedMultigraph>, m: usize, line_budget: usize) -> Result<AlternatingAdversary> {
    if m == 0 {
        return Err(Error::Precondition("m must be positive".into()));
    }
    let a = alternating_number(g, line_budget)?;
    let Some(witness) = a.witness.filter(|_| a.value >= 2 * m) else {
        return Err(Error::Precondition(format!("alternating number {} is below 2m = {}", a.value, 2 * m)));
    };
    // the run must start at a vertex with both edges leaving; types
    // alternate along the line, so one of these choices works
    for line in [witness.clone(), witness.reversed()] {
        let pos = alternating_positions(g, &line);
        for offset in 0..pos.len() {
            if pos.len() < offset + 2 * m {
                break;
            }
            if !pos[offset].1 {
                continue;
            }
            let run = &pos[offset..offset + 2 * m];
            let alternating = run.iter().map(|&(j, _)| line.vertices[j]).collect();
            let edges: Vec<usize> = run.iter().step_by(2).map(|&(j, _)| line.edges[j]).collect();
            let values = edges.iter().map(|&e| (e, FourierSeries::monomial(Path::edge(g, e), C64::new(1.0, 0.0)))).collect();
            let spec = DerivationSpec::from_edge_values(g, values)?;
            return Ok(AlternatingAdversary { spec, line, alternating, edges });
        }
    }
    Err(Error::Internal("no run of alternating vertices starts at a source".into()))
}

/// `δ(L_{e₀}) = L_{w₁e₀w₂}`, zero on every other generator.
pub fn adversary_acyclic_edge(g: &Arc<DirectedMultigraph>, e0: usize, w1: &Path, w2: &Path) -> Result<DerivationSpec> {
    if e0 >= g.edge_count() || !acyclic_edges(g).contains(&e0) {
        return Err(Error::Precondition("the edge lies on a directed circle".into()));
    }
    let at = |w: &Path, v: usize| w.range() == v && w.source() == v;
    if !at(w1, g.range(e0)) || !at(w2, g.source(e0)) {
        return Err(Error::Precondition("w₁ must be a circle at r(e₀) and w₂ one at s(e₀)".into()));
    }
    let e = Path::edge(g, e0);
    let word = compose(&compose(w1, &e).expect("w₁ ends at r(e₀)"), w2).expect("w₂ starts at s(e₀)");
    DerivationSpec::from_edge_values(g, vec![(e0, FourierSeries::monomial(word, C64::new(1.0, 0.0)))])
}

#[derive(Clone, Debug)]
pub struct InFruitAdversary {
    pub spec: DerivationSpec,
    pub fruit: Fruit,
    /// The minimal circle `w` of the fruit at its attachment vertex.
    pub circle: Path,
}

/// `δ(L_e) = f(L_w)L_e = ∑_k f_k L_{w^k e}` for the attaching edge `e` of an
/// in-fruit with minimal circle `w`; `f[k]` is the coefficient of `z^k`.
/// Picks the fruit attached at `attachment`, or the first in-fruit.
pub fn adversary_in_fruit(
    g: &Arc<DirectedMultigraph>,
    attachment: Option<usize>,
    f: &[C64],
    budget: usize,
) -> Result<InFruitAdversary> {
    let decomposition = fruit_tree_decomposition(g, budget)?
        .map_err(|v| Error::Precondition(format!("not a fruit tree: property ({}) fails", v.property.label())))?;
    let fruit = decomposition
        .fruits
        .into_iter()
        .find(|fr| attachment.map_or(fr.orientation == Orientation::In, |a| fr.attachment == a))
        .ok_or_else(|| Error::Precondition("no such fruit".into()))?;
    if fruit.orientation != Orientation::In {
        return Err(Error::Precondition("the fruit is an out-fruit".into()));
    }
    let circle = Path::from_edges(g, &fruit.edges).expect("fruit edges form a circle");
    let e = Path::edge(g, fruit.attaching_edge);
    let value = FourierSeries::from_terms(
        f.iter().enumerate().map(|(k, &c)| (compose(&circle.power(k), &e).expect("w^k ends at r(e)"), c)),
    );
    let spec = DerivationSpec::from_edge_values(g, vec![(fruit.attaching_edge, value)])?;
    Ok(InFruitAdversary { spec, fruit, circle })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::{solve_inner, solve_inner_exact, ExactVerdict};
    use crate::graph::{in_fruit_minimal, out_fruit_minimal, two_loops_one_edge, zigzag};
    use crate::linalg::{qc_int, QC};
    use num_traits::Zero;

    #[test]
    fn alternating_gap_is_m() {
        for m in 1..=3 {
            let g = Arc::new(zigzag(2 * m + 2));
            let adv = adversary_alternating(&g, m, 10_000).unwrap();
            let sol = solve_inner(&adv.spec).unwrap();
            let sol = sol.solution().unwrap();
            let gap = sol.vertex_coefficient(adv.alternating[0]) - sol.vertex_coefficient(adv.alternating[2 * m - 1]);
            assert!((gap - C64::new(m as f64, 0.0)).norm() < 1e-10, "m = {m}");
        }
        assert!(adversary_alternating(&Arc::new(zigzag(4)), 2, 10_000).is_err());
    }

    #[test]
    fn loop_before_acyclic_edge_is_not_inner() {
        let g = Arc::new(two_loops_one_edge());
        let (e1, e2, e) = (Path::edge(&g, 0), Path::edge(&g, 1), 2);
        let spec = adversary_acyclic_edge(&g, e, &e1, &e2).unwrap();
        assert!(!solve_inner(&spec).unwrap().is_inner());
        let trivial = adversary_acyclic_edge(&g, e, &Path::vertex(0), &Path::vertex(1)).unwrap();
        assert!(solve_inner(&trivial).unwrap().is_inner());
        assert!(adversary_acyclic_edge(&g, 0, &Path::vertex(0), &Path::vertex(0)).is_err());
    }

    #[test]
    fn in_fruit_forces_minus_f() {
        let g = Arc::new(in_fruit_minimal());
        let adv = adversary_in_fruit(&g, None, &[C64::default(), C64::new(1.0, 0.0)], 10_000).unwrap();
        let ExactVerdict::Inner(sol) = solve_inner_exact(&adv.spec).unwrap() else { panic!("inner") };
        assert_eq!(sol.coefficient(&adv.circle), qc_int(-1));
        assert_eq!(sol.coefficient(&adv.circle.power(2)), QC::zero());
        assert!(adversary_in_fruit(&Arc::new(out_fruit_minimal()), None, &[], 10_000).is_err());
    }
}
