//! Random inner derivations on in-trees: smallest implementer norm against
//! the certified derivation norm.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{certified_lower_bound, minimal_inner_norm, solve_inner, DerivationSpec, InnerSolution};
use crate::error::{Error, Result};
use crate::fourier::{FourierSeries, C64};
use crate::graph::DirectedMultigraph;
use crate::path::PathBasis;

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeTrial {
    pub trial: usize,
    /// `min_Z ‖S − Z‖`, exact on a DAG.
    pub min_norm: f64,
    /// Certified `‖δ_S‖ ≥ lower_bound`.
    pub lower_bound: f64,
    /// `min‖T‖ / lower_bound`; an upper bound for the true ratio.
    pub ratio: f64,
    /// `‖δ_S‖ ≤ 2‖T‖` for every implementer, so the true ratio is at least
    /// this (1/2 unless `δ_S = 0`).
    pub ratio_floor: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeReport {
    pub trials: Vec<ProbeTrial>,
    pub sup_ratio: f64,
    pub min_ratio: f64,
    pub depth: usize,
    pub seed: u64,
}

/// For each trial draws `S` with independent real coefficients uniform on
/// `[−1, 1]` at every path, and compares `min‖T‖` over implementers of
/// `δ_S` with the certified lower bound of `‖δ_S‖`. Trial `i` draws from
/// stream `i` of the generator seeded with `seed`, so the report does not
/// depend on how trials are scheduled.
pub fn conjecture_probe(g: &Arc<DirectedMultigraph>, trials: usize, seed: u64, budget: usize) -> Result<ProbeReport> {
    if g.in_tree_root().is_none() {
        return Err(Error::Precondition("the probe needs an in-tree".into()));
    }
    let depth = g.longest_path().unwrap_or(0);
    let basis = PathBasis::enumerate(g, depth)?;
    let results = (0..trials).into_par_iter().map(|i| run_trial(g, &basis, seed, i, budget)).collect::<Result<Vec<_>>>()?;
    let sup_ratio = results.iter().map(|t| t.ratio).fold(0.0, f64::max);
    let min_ratio = results.iter().map(|t| t.ratio).fold(f64::INFINITY, f64::min);
    Ok(ProbeReport { trials: results, sup_ratio, min_ratio, depth, seed })
}

fn run_trial(g: &Arc<DirectedMultigraph>, basis: &Arc<PathBasis>, seed: u64, trial: usize, budget: usize) -> Result<ProbeTrial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let s = FourierSeries::from_terms(basis.paths().iter().map(|p| (p.clone(), C64::new(rng.gen_range(-1.0..1.0), 0.0))));
    let spec = DerivationSpec::inner(g, &s);
    let (normalized, t0) = spec.normalize_vertices(None)?;
    let sol = solve_inner(&normalized)?;
    let sol = sol.solution().ok_or_else(|| Error::Internal("an inner derivation failed to solve".into()))?;
    // implementers of `δ_S` itself, not only of its vertex-vanishing part
    let full = InnerSolution { implementer: sol.implementer.add(&t0), ..sol.clone() };
    let min_norm = minimal_inner_norm(&full, basis)?.value;
    let (lower_bound, _, _, _) = certified_lower_bound(&spec, basis, budget, rng.gen())?;
    let ratio = if lower_bound > 0.0 { min_norm / lower_bound } else { f64::INFINITY };
    let ratio_floor = if min_norm > 0.0 { 0.5 } else { 0.0 };
    Ok(ProbeTrial { trial, min_norm, lower_bound, ratio, ratio_floor })
}
