//! Degree-by-degree solution of `δ(L_e) = L_eT − TL_e`.
//!
//! For a vertex-vanishing `δ` every implementer is corner-diagonal, so the
//! unknowns at degree `d` are the coefficients `t_q` of circles `q` of length
//! `d` (vertices when `d = 0`). The equation for edge `e` at a path `p` of
//! length `d + 1` reads `a^e_p = ∑_q t_q([p = eq] − [p = qe])`.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;

use super::DerivationSpec;
use crate::error::{Error, Result};
use crate::fock::FockOperator;
use crate::fourier::{FourierSeries, C64};
use crate::linalg::{self, qc_from_c64, qc_int, QC};
use crate::path::{compose, paths_of_length, Path, PathBasis};

pub const DAG_TOLERANCE: f64 = 1e-9;
pub const CYCLIC_TOLERANCE: f64 = 1e-7;

#[derive(Clone, Debug)]
pub struct InnerSolution {
    /// The least-squares (minimum coefficient norm) implementer.
    pub implementer: FourierSeries,
    /// A basis of the degree-`≤ max_degree` solutions of the homogeneous
    /// system; the implementers are `implementer + span(center_basis)`.
    pub center_basis: Vec<FourierSeries>,
    /// Euclidean norm of the coefficient residual over all equations.
    pub residual: f64,
    pub tolerance: f64,
    pub max_degree: usize,
}

impl InnerSolution {
    /// Coefficient of the implementer at `L_v`.
    pub fn vertex_coefficient(&self, v: usize) -> C64 {
        self.implementer.coefficient(&Path::vertex(v))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NotInner {
    /// The worst-fitting equation: edge `e` at path `p`.
    pub edge: usize,
    pub path: Path,
    pub degree: usize,
    pub residual: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug)]
pub enum InnerVerdict {
    Inner(InnerSolution),
    NotInner(NotInner),
}

impl InnerVerdict {
    pub fn is_inner(&self) -> bool {
        matches!(self, InnerVerdict::Inner(_))
    }

    pub fn solution(&self) -> Option<&InnerSolution> {
        match self {
            InnerVerdict::Inner(s) => Some(s),
            InnerVerdict::NotInner(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactSolution {
    /// The implementer with free unknowns set to zero.
    pub implementer: BTreeMap<Path, QC>,
}

impl ExactSolution {
    pub fn coefficient(&self, p: &Path) -> QC {
        self.implementer.get(p).cloned().unwrap_or_else(QC::zero)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExactVerdict {
    Inner(ExactSolution),
    /// The first equation that cannot be met.
    NotInner { edge: usize, path: Path, degree: usize },
}

/// An edge equation, or a vertex equation (full-unknown systems only).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Label {
    Edge(usize),
    Vertex(usize),
}

struct DegreeSystem {
    unknowns: Vec<Path>,
    rows: Vec<(Label, Path)>,
    entries: Vec<Vec<(usize, i64)>>,
    rhs: Vec<C64>,
}

impl DegreeSystem {
    fn dense(&self) -> (DMatrix<C64>, DVector<C64>) {
        let mut a = DMatrix::zeros(self.rows.len(), self.unknowns.len());
        for (i, row) in self.entries.iter().enumerate() {
            for &(k, c) in row {
                a[(i, k)] += C64::new(c as f64, 0.0);
            }
        }
        (a, DVector::from_vec(self.rhs.clone()))
    }

    fn exact_rows(&self) -> Vec<Vec<QC>> {
        self.entries
            .iter()
            .map(|row| {
                let mut dense = vec![QC::zero(); self.unknowns.len()];
                for &(k, c) in row {
                    dense[k] = &dense[k] + qc_int(c);
                }
                dense
            })
            .collect()
    }
}

fn build_system(spec: &DerivationSpec, d: usize, full: bool) -> DegreeSystem {
    let g = spec.graph();
    let unknowns: Vec<Path> = if full {
        paths_of_length(g, d)
    } else {
        paths_of_length(g, d).into_iter().filter(|q| q.range() == q.source()).collect()
    };
    let mut index: BTreeMap<(Label, Path), usize> = BTreeMap::new();
    let mut rows = Vec::new();
    let mut entries: Vec<Vec<(usize, i64)>> = Vec::new();
    let mut row_of = |label: Label, p: Path, rows: &mut Vec<(Label, Path)>, entries: &mut Vec<Vec<(usize, i64)>>| {
        *index.entry((label.clone(), p.clone())).or_insert_with(|| {
            rows.push((label, p));
            entries.push(Vec::new());
            rows.len() - 1
        })
    };
    for (k, q) in unknowns.iter().enumerate() {
        for e in 0..g.edge_count() {
            let le = Path::edge(g, e);
            if let Some(p) = compose(&le, q) {
                let i = row_of(Label::Edge(e), p, &mut rows, &mut entries);
                entries[i].push((k, 1));
            }
            if let Some(p) = compose(q, &le) {
                let i = row_of(Label::Edge(e), p, &mut rows, &mut entries);
                entries[i].push((k, -1));
            }
        }
        if full {
            for v in 0..g.vertex_count() {
                let c = (q.range() == v) as i64 - (q.source() == v) as i64;
                if c != 0 {
                    let i = row_of(Label::Vertex(v), q.clone(), &mut rows, &mut entries);
                    entries[i].push((k, c));
                }
            }
        }
    }
    for e in 0..g.edge_count() {
        for (p, _) in spec.edge_value(e).iter().filter(|(p, _)| p.len() == d + 1) {
            row_of(Label::Edge(e), p.clone(), &mut rows, &mut entries);
        }
    }
    let rhs = rows
        .iter()
        .map(|(label, p)| match label {
            Label::Edge(e) => spec.edge_value(*e).coefficient(p),
            Label::Vertex(_) => C64::default(),
        })
        .collect();
    DegreeSystem { unknowns, rows, entries, rhs }
}

fn top_degree(spec: &DerivationSpec) -> usize {
    spec.edge_values().iter().filter_map(FourierSeries::max_len).max().unwrap_or(1).saturating_sub(1)
}

fn require_vertex_vanishing(spec: &DerivationSpec) -> Result<()> {
    if spec.is_vertex_vanishing() {
        Ok(())
    } else {
        Err(Error::Precondition("normalize the vertex values before solving".into()))
    }
}

/// Edge terms of length 0 cannot be met by any corner-diagonal `T`.
fn degree_minus_one_witness(spec: &DerivationSpec) -> Option<(usize, Path, f64)> {
    (0..spec.graph().edge_count()).find_map(|e| {
        spec.edge_value(e).iter().find(|(p, _)| p.is_vertex()).map(|(p, c)| (e, p.clone(), c.norm()))
    })
}

pub fn solve_inner(spec: &DerivationSpec) -> Result<InnerVerdict> {
    solve_inner_with(spec, None)
}

/// Least-squares solve; `tol` overrides the default (`DAG_TOLERANCE` when
/// the graph has no directed circle, `CYCLIC_TOLERANCE` otherwise).
pub fn solve_inner_with(spec: &DerivationSpec, tol: Option<f64>) -> Result<InnerVerdict> {
    require_vertex_vanishing(spec)?;
    let g = spec.graph();
    let tolerance = tol.unwrap_or(if g.has_directed_circle() { CYCLIC_TOLERANCE } else { DAG_TOLERANCE });
    if let Some((edge, path, residual)) = degree_minus_one_witness(spec) {
        return Ok(InnerVerdict::NotInner(NotInner { edge, path, degree: 0, residual, tolerance }));
    }
    let max_degree = top_degree(spec);
    let mut implementer = FourierSeries::zero();
    let mut center_basis = Vec::new();
    let mut squared = 0.0;
    let mut worst: Option<(f64, usize, usize, Path)> = None;
    for d in 0..=max_degree {
        let sys = build_system(spec, d, false);
        let (a, b) = sys.dense();
        let (x, r) = linalg::least_squares(&a, &b, 1e-12);
        squared += r * r;
        let fitted = &a * &x - &b;
        for (i, (label, p)) in sys.rows.iter().enumerate() {
            let Label::Edge(e) = label else { continue };
            let err = fitted[i].norm();
            if worst.as_ref().map_or(true, |w| err > w.0) {
                worst = Some((err, d, *e, p.clone()));
            }
        }
        for (q, c) in sys.unknowns.iter().zip(x.iter()) {
            implementer.add_term(q.clone(), *c);
        }
        for v in linalg::nullspace(&sys.exact_rows(), sys.unknowns.len()) {
            center_basis.push(FourierSeries::from_terms(
                sys.unknowns.iter().cloned().zip(v.iter().map(linalg::qc_to_c64)),
            ));
        }
    }
    let residual = squared.sqrt();
    if residual > tolerance {
        let (_, degree, edge, path) = worst.expect("a positive residual has a row");
        return Ok(InnerVerdict::NotInner(NotInner { edge, path, degree, residual, tolerance }));
    }
    Ok(InnerVerdict::Inner(InnerSolution { implementer, center_basis, residual, tolerance, max_degree }))
}

/// Exact solve over `ℚ(i)`, reading each float coefficient as the rational
/// it represents.
pub fn solve_inner_exact(spec: &DerivationSpec) -> Result<ExactVerdict> {
    require_vertex_vanishing(spec)?;
    if let Some((edge, path, _)) = degree_minus_one_witness(spec) {
        return Ok(ExactVerdict::NotInner { edge, path, degree: 0 });
    }
    let mut implementer = BTreeMap::new();
    for d in 0..=top_degree(spec) {
        let sys = build_system(spec, d, false);
        let rhs: Vec<QC> = sys.rhs.iter().map(|&c| qc_from_c64(c)).collect();
        match linalg::solve(&sys.exact_rows(), &rhs, sys.unknowns.len()) {
            Ok(x) => {
                for (q, c) in sys.unknowns.iter().zip(x) {
                    if !c.is_zero() {
                        implementer.insert(q.clone(), c);
                    }
                }
            }
            Err(i) => {
                let (Label::Edge(edge), path) = sys.rows[i].clone() else {
                    return Err(Error::Internal("vertex row in a corner system".into()));
                };
                return Ok(ExactVerdict::NotInner { edge, path, degree: d });
            }
        }
    }
    Ok(ExactVerdict::Inner(ExactSolution { implementer }))
}

/// Residual of the least-squares solve with every path of each degree as
/// an unknown and the vertex equations `L_vT − TL_v = 0` added.
pub fn solve_inner_full(spec: &DerivationSpec) -> Result<f64> {
    require_vertex_vanishing(spec)?;
    if let Some((_, _, r)) = degree_minus_one_witness(spec) {
        return Ok(r);
    }
    let mut squared = 0.0;
    for d in 0..=top_degree(spec) {
        let sys = build_system(spec, d, true);
        let (a, b) = sys.dense();
        let (_, r) = linalg::least_squares(&a, &b, 1e-12);
        squared += r * r;
    }
    Ok(squared.sqrt())
}

/// `max_x ‖δ(L_x) − (L_xT − TL_x)‖` over vertices and edges, as truncated
/// operators on `basis`.
pub fn implementation_residual(spec: &DerivationSpec, t: &FourierSeries, basis: &Arc<PathBasis>) -> Result<f64> {
    let inner = DerivationSpec::inner(spec.graph_arc(), t);
    let diff = spec.sub(&inner);
    let mut worst: f64 = 0.0;
    for value in diff.vertex_values().iter().chain(diff.edge_values()) {
        worst = worst.max(FockOperator::from_fourier(basis, value)?.operator_norm());
    }
    Ok(worst)
}
