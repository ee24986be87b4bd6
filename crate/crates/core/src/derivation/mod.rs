//! Derivations of the tensor algebra into the free semigroupoid algebra,
//! given on generators and extended by the Leibniz rule.

mod adversary;
mod bounds;
mod minimize;
mod probe;
mod solve;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fourier::{FourierSeries, C64};
use crate::graph::DirectedMultigraph;
use crate::path::Path;

pub use adversary::{
    adversary_acyclic_edge, adversary_alternating, adversary_in_fruit, AlternatingAdversary, InFruitAdversary,
};
pub use bounds::{certified_lower_bound, derivation_norm_bounds, NormBounds};
pub use minimize::{minimal_inner_norm, ComponentMinimum, MinimalNorm};
pub use probe::{conjecture_probe, ProbeReport, ProbeTrial};
pub use solve::{
    implementation_residual, solve_inner, solve_inner_exact, solve_inner_full, solve_inner_with, ExactSolution,
    ExactVerdict, InnerSolution, InnerVerdict, NotInner, DAG_TOLERANCE, CYCLIC_TOLERANCE,
};

/// `δ` through its values `δ(L_v)` and `δ(L_e)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivationSpec {
    graph: Arc<DirectedMultigraph>,
    vertex_values: Vec<FourierSeries>,
    edge_values: Vec<FourierSeries>,
    grade: Option<usize>,
}

impl DerivationSpec {
    pub fn zero(g: &Arc<DirectedMultigraph>) -> Self {
        DerivationSpec {
            graph: g.clone(),
            vertex_values: vec![FourierSeries::zero(); g.vertex_count()],
            edge_values: vec![FourierSeries::zero(); g.edge_count()],
            grade: None,
        }
    }

    /// Validates the corner and grade constraints. The corner constraint is
    /// only enforced when every vertex value vanishes; otherwise edge values
    /// are arbitrary (for instance those of an inner derivation before
    /// normalization).
    pub fn new(
        g: &Arc<DirectedMultigraph>,
        vertex_values: Vec<FourierSeries>,
        edge_values: Vec<FourierSeries>,
        grade: Option<usize>,
    ) -> Result<Self> {
        if vertex_values.len() != g.vertex_count() || edge_values.len() != g.edge_count() {
            return Err(Error::Precondition("one value per vertex and per edge is required".into()));
        }
        let spec = DerivationSpec { graph: g.clone(), vertex_values, edge_values, grade };
        if spec.is_vertex_vanishing() {
            for (e, value) in spec.edge_values.iter().enumerate() {
                for (p, _) in value.iter() {
                    if p.range() != g.range(e) || p.source() != g.source(e) {
                        return Err(Error::Precondition(format!(
                            "value at edge {} has term {} outside its corner",
                            g.edge(e).id,
                            p.display(g)
                        )));
                    }
                    if p.is_vertex() {
                        return Err(Error::Precondition(format!(
                            "value at edge {} has a vertex term (degree −1)",
                            g.edge(e).id
                        )));
                    }
                }
            }
        }
        if let Some(d) = grade {
            for (e, value) in spec.edge_values.iter().enumerate() {
                if let Some((p, _)) = value.iter().find(|(p, _)| p.len() != d + 1) {
                    return Err(Error::Precondition(format!(
                        "value at edge {} has term {} outside degree {d}",
                        g.edge(e).id,
                        p.display(g)
                    )));
                }
            }
            if spec.vertex_values.iter().any(|v| !v.is_zero()) {
                return Err(Error::Precondition("graded specs have zero vertex values".into()));
            }
        }
        Ok(spec)
    }

    /// Vertex-vanishing spec from `(edge, value)` pairs; other edges map to 0.
    pub fn from_edge_values(g: &Arc<DirectedMultigraph>, values: Vec<(usize, FourierSeries)>) -> Result<Self> {
        let mut edge_values = vec![FourierSeries::zero(); g.edge_count()];
        for (e, v) in values {
            if e >= g.edge_count() {
                return Err(Error::Precondition(format!("edge index {e} out of range")));
            }
            edge_values[e] = edge_values[e].add(&v);
        }
        Self::new(g, vec![FourierSeries::zero(); g.vertex_count()], edge_values, None)
    }

    /// The inner derivation `δ_T(A) = AT − TA`.
    pub fn inner(g: &Arc<DirectedMultigraph>, t: &FourierSeries) -> Self {
        let commutator = |p: Path| {
            let l = FourierSeries::monomial(p, C64::new(1.0, 0.0));
            l.mul(t).sub(&t.mul(&l))
        };
        DerivationSpec {
            graph: g.clone(),
            vertex_values: (0..g.vertex_count()).map(|v| commutator(Path::vertex(v))).collect(),
            edge_values: (0..g.edge_count()).map(|e| commutator(Path::edge(g, e))).collect(),
            grade: None,
        }
    }

    pub fn graph(&self) -> &DirectedMultigraph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<DirectedMultigraph> {
        &self.graph
    }

    pub fn vertex_value(&self, v: usize) -> &FourierSeries {
        &self.vertex_values[v]
    }

    pub fn edge_value(&self, e: usize) -> &FourierSeries {
        &self.edge_values[e]
    }

    pub fn vertex_values(&self) -> &[FourierSeries] {
        &self.vertex_values
    }

    pub fn edge_values(&self) -> &[FourierSeries] {
        &self.edge_values
    }

    pub fn grade(&self) -> Option<usize> {
        self.grade
    }

    pub fn is_vertex_vanishing(&self) -> bool {
        self.vertex_values.iter().all(FourierSeries::is_zero)
    }

    pub fn is_zero(&self) -> bool {
        self.is_vertex_vanishing() && self.edge_values.iter().all(FourierSeries::is_zero)
    }

    /// Largest amount by which `δ` raises path length on a generator.
    pub fn max_shift(&self) -> i64 {
        let vertex = self.vertex_values.iter().filter_map(FourierSeries::max_len).map(|l| l as i64);
        let edge = self.edge_values.iter().filter_map(FourierSeries::max_len).map(|l| l as i64 - 1);
        vertex.chain(edge).max().unwrap_or(0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        DerivationSpec {
            graph: self.graph.clone(),
            vertex_values: self.vertex_values.iter().zip(&other.vertex_values).map(|(a, b)| a.sub(b)).collect(),
            edge_values: self.edge_values.iter().zip(&other.edge_values).map(|(a, b)| a.sub(b)).collect(),
            grade: if self.grade == other.grade { self.grade } else { None },
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        DerivationSpec {
            graph: self.graph.clone(),
            vertex_values: self.vertex_values.iter().map(|a| a.scale(c)).collect(),
            edge_values: self.edge_values.iter().map(|a| a.scale(c)).collect(),
            grade: self.grade,
        }
    }

    /// `δ(L_p)` by the Leibniz rule.
    pub fn apply_path(&self, p: &Path) -> FourierSeries {
        let g = &*self.graph;
        if p.is_vertex() {
            return self.vertex_values[p.range()].clone();
        }
        let n = p.len();
        let mut out = FourierSeries::zero();
        for j in 0..n {
            let mut term = self.edge_values[p.edges()[j]].clone();
            if j > 0 {
                term = FourierSeries::monomial(p.slice(g, 0, j), C64::new(1.0, 0.0)).mul(&term);
            }
            if j + 1 < n {
                term = term.mul(&FourierSeries::monomial(p.slice(g, j + 1, n), C64::new(1.0, 0.0)));
            }
            out = out.add(&term);
        }
        out
    }

    /// `δ(A)` for a finite Fourier series `A`.
    pub fn extend(&self, a: &FourierSeries) -> FourierSeries {
        let mut out = FourierSeries::zero();
        for (p, c) in a.iter() {
            out = out.add(&self.apply_path(p).scale(*c));
        }
        out
    }

    /// `δ(A)`, failing when a term of the result is longer than `depth`.
    pub fn extend_within(&self, a: &FourierSeries, depth: usize) -> Result<FourierSeries> {
        let out = self.extend(a);
        match out.max_len() {
            Some(l) if l > depth => Err(Error::Window(format!("δ(A) has a term of length {l} beyond depth {depth}"))),
            _ => Ok(out),
        }
    }

    /// Subtracts `δ_{T₀}` with `T₀ = ∑_j P_j δ(P_j)`, `P_j = ∑_{v ∈ block j} L_v`.
    /// `None` uses singleton blocks, after which every vertex value is zero.
    pub fn normalize_vertices(&self, partition: Option<&[Vec<usize>]>) -> Result<(DerivationSpec, FourierSeries)> {
        let g = &*self.graph;
        let singletons: Vec<Vec<usize>> = (0..g.vertex_count()).map(|v| vec![v]).collect();
        let blocks = partition.unwrap_or(&singletons);
        let mut seen = vec![false; g.vertex_count()];
        for &v in blocks.iter().flatten() {
            if v >= seen.len() || std::mem::replace(&mut seen[v], true) {
                return Err(Error::Precondition("blocks must partition the vertex set".into()));
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::Precondition("blocks must partition the vertex set".into()));
        }
        let mut t0 = FourierSeries::zero();
        for block in blocks {
            let p = FourierSeries::from_terms(block.iter().map(|&v| (Path::vertex(v), C64::new(1.0, 0.0))));
            let dp = block.iter().fold(FourierSeries::zero(), |acc, &v| acc.add(&self.vertex_values[v]));
            t0 = t0.add(&p.mul(&dp));
        }
        let mut normalized = self.sub(&DerivationSpec::inner(&self.graph, &t0));
        for v in &mut normalized.vertex_values {
            *v = v.prune(0.0);
        }
        normalized.grade = self.grade;
        Ok((normalized, t0))
    }
}
