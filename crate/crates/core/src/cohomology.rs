//! First cohomology: the verdict from the graph classification, and graded
//! dimensions relative to the vertex projections and corner algebras.
//!
//! At degree `d` a derivation vanishing on the vertex projections is a tuple
//! of edge values `δ(L_e) = ∑ a^e_q L_q` over paths `q` parallel to `e` of
//! length `1 + d`. Vanishing on the corner algebras means `δ(L_c) = 0` for
//! every minimal circle `c`. The inner ones come from corner-diagonal `T` of
//! degree `d` commuting with every minimal circle.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use rayon::prelude::*;

use crate::derivation::{adversary_acyclic_edge, solve_inner, DerivationSpec, InnerVerdict};
use crate::error::{Error, Result};
use crate::fourier::{FourierSeries, C64};
use crate::graph::{acyclic_edges, classify, ClassifyBudget, DirectedMultigraph, FruitProperty, Verdict};
use crate::linalg::{self, q_int, q_to_f64, Q};
use crate::path::{compose, minimal_circles_at, path_counts, paths_of_length, Path};

#[derive(Clone, Debug)]
pub enum ComponentH1 {
    Trivial,
    Nontrivial {
        /// The failed fruit-tree property, if the component is not strongly
        /// connected.
        property: Option<FruitProperty>,
        /// A derivation the solver rejects, when one was found among the
        /// acyclic-edge adversaries.
        adversary: Option<DerivationSpec>,
    },
    Unknown(String),
}

#[derive(Clone, Debug)]
pub struct ComponentVerdict {
    pub vertices: Vec<usize>,
    pub verdict: Verdict,
    pub h1: ComponentH1,
}

#[derive(Clone, Debug)]
pub struct H1Verdict {
    pub components: Vec<ComponentVerdict>,
}

impl H1Verdict {
    /// `Some(true)` when every component is trivial, `Some(false)` when one
    /// is not, `None` when some component is unknown and none is nontrivial.
    pub fn trivial(&self) -> Option<bool> {
        if self.components.iter().any(|c| matches!(c.h1, ComponentH1::Nontrivial { .. })) {
            Some(false)
        } else if self.components.iter().any(|c| matches!(c.h1, ComponentH1::Unknown(_))) {
            None
        } else {
            Some(true)
        }
    }
}

/// Trivial exactly for strongly connected components and fruit trees;
/// other components get an acyclic-edge adversary where one is found.
pub fn h1_verdict(g: &DirectedMultigraph, budget: ClassifyBudget) -> Result<H1Verdict> {
    let report = classify(g, budget)?;
    let components = report
        .components
        .into_iter()
        .map(|c| {
            let h1 = match &c.verdict {
                v if v.is_strongly_connected() || v.is_fruit_tree() => ComponentH1::Trivial,
                Verdict::NotFruitTree(violation) => {
                    let sub = Arc::new(c.graph.clone());
                    ComponentH1::Nontrivial { property: Some(violation.property), adversary: find_adversary(&sub) }
                }
                Verdict::Unknown(reason) => ComponentH1::Unknown(reason.clone()),
                _ => unreachable!("every verdict is covered"),
            };
            ComponentVerdict { vertices: c.vertex_map.clone(), verdict: c.verdict, h1 }
        })
        .collect();
    Ok(H1Verdict { components })
}

/// The first `δ(L_{e₀}) = L_{w₁e₀w₂}` that does not solve, trying each
/// acyclic edge with short minimal circles (or vertices) on either side.
fn find_adversary(g: &Arc<DirectedMultigraph>) -> Option<DerivationSpec> {
    let options = |v: usize| {
        let (mut cs, _) = minimal_circles_at(g, v, g.vertex_count() + 1);
        cs.sort();
        cs.truncate(3);
        cs
    };
    for e0 in acyclic_edges(g) {
        let (r, s) = (g.range(e0), g.source(e0));
        let (left, right) = (options(r), options(s));
        let mut pairs: Vec<(Path, Path)> = Vec::new();
        pairs.extend(left.iter().map(|c| (c.clone(), Path::vertex(s))));
        pairs.extend(right.iter().map(|c| (Path::vertex(r), c.clone())));
        for c in &left {
            pairs.extend(right.iter().map(|d| (c.clone(), d.clone())));
        }
        pairs.push((Path::vertex(r), Path::vertex(s)));
        for (w1, w2) in pairs {
            let Ok(spec) = adversary_acyclic_edge(g, e0, &w1, &w2) else { continue };
            if matches!(solve_inner(&spec), Ok(InnerVerdict::NotInner(_))) {
                return Some(spec);
            }
        }
    }
    None
}

#[derive(Clone, Debug)]
pub struct DegreeDims {
    pub degree: usize,
    pub der: usize,
    pub inn: usize,
    pub h1: usize,
    /// Graded derivations spanning a complement of the inner ones.
    pub witnesses: Vec<DerivationSpec>,
}

#[derive(Clone, Debug)]
pub struct GradedH1Report {
    pub degrees: Vec<DegreeDims>,
    /// The minimal circles `δ` is required to annihilate, per vertex.
    pub normalization: Vec<(usize, Vec<Path>)>,
    /// Circles up to this length were used.
    pub circle_maxlen: usize,
    /// Some vertex has a longer minimal circle than `circle_maxlen`.
    pub truncated: bool,
    /// Some corner algebra has two or more minimal circles, where the graded
    /// model may differ from the bounded theory.
    pub graded_model_caveat: bool,
}

impl GradedH1Report {
    pub fn h1_dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.h1).collect()
    }

    pub fn all_zero(&self) -> bool {
        self.degrees.iter().all(|d| d.h1 == 0)
    }
}

/// Sparse row of integer coefficients keyed by the output path.
type Rows = BTreeMap<Path, Vec<(usize, i64)>>;

fn dense(rows: &Rows, ncols: usize) -> Vec<Vec<Q>> {
    rows.values()
        .map(|row| {
            let mut v = vec![Q::zero(); ncols];
            for &(k, c) in row {
                v[k] += q_int(c);
            }
            v
        })
        .collect()
}

/// Graded `H¹` for degrees `0..=max_degree`, with exact rational ranks.
/// Fails with a cap error when a degree would need more than `cap` unknowns.
pub fn graded_h1(g: &Arc<DirectedMultigraph>, max_degree: usize, cap: usize) -> Result<GradedH1Report> {
    let circle_maxlen = g.vertex_count() + max_degree + 1;
    let mut normalization = Vec::new();
    let mut truncated = false;
    for v in 0..g.vertex_count() {
        let (cs, t) = minimal_circles_at(g, v, circle_maxlen);
        truncated |= t;
        if !cs.is_empty() {
            normalization.push((v, cs));
        }
    }
    let graded_model_caveat = normalization.iter().any(|(_, cs)| cs.len() >= 2);
    let circles: Vec<Path> = normalization.iter().flat_map(|(_, cs)| cs.iter().cloned()).collect();
    let degrees = (0..=max_degree)
        .into_par_iter()
        .map(|d| degree_dims(g, &circles, d, cap))
        .collect::<Result<Vec<_>>>()?;
    Ok(GradedH1Report { degrees, normalization, circle_maxlen, truncated, graded_model_caveat })
}

fn degree_dims(g: &Arc<DirectedMultigraph>, circles: &[Path], d: usize, cap: usize) -> Result<DegreeDims> {
    let count = path_counts(g, d + 1)[d + 1];
    if count > cap as u128 {
        return Err(Error::Cap { required: usize::try_from(count).unwrap_or(usize::MAX), cap });
    }
    // Der_d coordinates: (edge, parallel path of length 1 + d)
    let long = paths_of_length(g, d + 1);
    let mut coords: Vec<(usize, Path)> = Vec::new();
    for e in 0..g.edge_count() {
        for q in long.iter().filter(|q| q.range() == g.range(e) && q.source() == g.source(e)) {
            coords.push((e, q.clone()));
        }
    }
    if coords.len() > cap {
        return Err(Error::Cap { required: coords.len(), cap });
    }
    let index: BTreeMap<(usize, Path), usize> = coords.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();

    // δ(L_c) = ∑_j L_{c_{<j}} δ(L_{c_j}) L_{c_{>j}} = 0
    let mut constraints = Rows::new();
    for c in circles {
        for (j, &e) in c.edges().iter().enumerate() {
            let prefix = c.slice(g, 0, j);
            let suffix = c.slice(g, j + 1, c.len());
            for (k, (ek, q)) in coords.iter().enumerate() {
                if *ek != e {
                    continue;
                }
                let out = compose(&compose(&prefix, q).expect("q starts at r(e)"), &suffix).expect("q ends at s(e)");
                constraints.entry(out).or_default().push((k, 1));
            }
        }
    }
    let der_basis = if constraints.is_empty() {
        (0..coords.len())
            .map(|i| {
                let mut v = vec![Q::zero(); coords.len()];
                v[i] = q_int(1);
                v
            })
            .collect()
    } else {
        linalg::nullspace(&dense(&constraints, coords.len()), coords.len())
    };

    // K_d: corner-diagonal T of degree d commuting with every minimal circle
    let t_unknowns: Vec<Path> = paths_of_length(g, d).into_iter().filter(|q| q.range() == q.source()).collect();
    let mut commutation = Rows::new();
    for c in circles {
        for (k, q) in t_unknowns.iter().enumerate() {
            if let Some(p) = compose(c, q) {
                commutation.entry(p).or_default().push((k, 1));
            }
            if let Some(p) = compose(q, c) {
                commutation.entry(p).or_default().push((k, -1));
            }
        }
    }
    let kernel = if commutation.is_empty() {
        (0..t_unknowns.len())
            .map(|i| {
                let mut v = vec![Q::zero(); t_unknowns.len()];
                v[i] = q_int(1);
                v
            })
            .collect()
    } else {
        linalg::nullspace(&dense(&commutation, t_unknowns.len()), t_unknowns.len())
    };
    // Φ(T)_e = L_eT − TL_e in Der_d coordinates
    let images: Vec<Vec<Q>> = kernel
        .iter()
        .map(|t| {
            let mut out = vec![Q::zero(); coords.len()];
            for (k, q) in t_unknowns.iter().enumerate() {
                if t[k].is_zero() {
                    continue;
                }
                for e in 0..g.edge_count() {
                    let le = Path::edge(g, e);
                    if let Some(p) = compose(&le, q) {
                        out[index[&(e, p)]] += &t[k];
                    }
                    if let Some(p) = compose(q, &le) {
                        out[index[&(e, p)]] -= &t[k];
                    }
                }
            }
            out
        })
        .collect();
    let mut span = linalg::Echelon::new();
    for image in images {
        span.insert(image);
    }
    let inn = span.rank();
    let der = der_basis.len();
    if inn > der {
        return Err(Error::Internal(format!("degree {d}: inner rank {inn} exceeds derivation dimension {der}")));
    }
    let mut witnesses = Vec::new();
    for x in &der_basis {
        if witnesses.len() == der - inn {
            break;
        }
        if span.insert(x.clone()) {
            witnesses.push(witness_spec(g, &coords, x, d)?);
        }
    }
    Ok(DegreeDims { degree: d, der, inn, h1: der - inn, witnesses })
}

fn witness_spec(g: &Arc<DirectedMultigraph>, coords: &[(usize, Path)], x: &[Q], d: usize) -> Result<DerivationSpec> {
    let mut edge_values = vec![FourierSeries::zero(); g.edge_count()];
    for ((e, q), c) in coords.iter().zip(x) {
        if !c.is_zero() {
            edge_values[*e].add_term(q.clone(), C64::new(q_to_f64(c), 0.0));
        }
    }
    DerivationSpec::new(g, vec![FourierSeries::zero(); g.vertex_count()], edge_values, Some(d))
}

/// A connected component as a graph of its own, with the parent indices of
/// its vertices and edges.
#[derive(Clone, Debug)]
pub struct Subproblem {
    pub graph: Arc<DirectedMultigraph>,
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

/// Per-component subproblems. Graded dimensions add over them and the
/// verdict is trivial iff it is trivial on each.
pub fn decompose_by_components(g: &DirectedMultigraph) -> Vec<Subproblem> {
    g.components()
        .into_iter()
        .map(|c| {
            let (sub, vertex_map, edge_map) = g.induced(&c);
            Subproblem { graph: Arc::new(sub), vertex_map, edge_map }
        })
        .collect()
}
