//! Operator averaging, conditional expectations, adversarial derivations
//! and the in-tree norm probe.

use std::sync::Arc;

use clap::{Args, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use semigroupoid::derivation::{
    adversary_acyclic_edge, adversary_alternating, adversary_in_fruit, conjecture_probe, derivation_norm_bounds,
    minimal_inner_norm, solve_inner_exact, solve_inner_with, DerivationSpec, ExactVerdict, InnerVerdict,
};
use semigroupoid::fock::{
    center_test, conditional_expectation, dixmier_circle, dixmier_finite, ExpectationMode, FockOperator,
};
use semigroupoid::fourier::{FourierSeries, C64};
use semigroupoid::graph::{circle, free_semigroup, in_fruit_minimal, star_in_tree, to_json, zigzag, DirectedMultigraph};
use semigroupoid::path::{Path, PathBasis};
use serde_json::{json, Value};

use crate::graphs::GraphArgs;
use crate::json::{bound, complex, exact_complex, num, path, series, spec, vertex_ids, SCHEMA};
use crate::CliError;

#[derive(Subcommand, Debug)]
pub enum ExperimentCommand {
    /// Dixmier averages: circle mode over sign-twisted shifts, or finite mode over a vertex set.
    Dixmier(DixmierArgs),
    /// Finite-k conditional expectations against the Fourier filter.
    Expectation(ExpectationArgs),
    /// Derivations that obstruct innerness or force large implementers.
    Adversary {
        #[command(subcommand)]
        kind: AdversaryKind,
    },
    /// Smallest implementer norm against the certified derivation norm on an in-tree.
    Probe(ProbeArgs),
}

#[derive(Args, Debug)]
pub struct DixmierArgs {
    /// Circle graph size for circle mode.
    #[arg(long, conflicts_with_all = ["input", "graph"])]
    pub n: Option<usize>,
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Comma-separated vertex ids; selects finite mode.
    #[arg(long)]
    pub vertices: Option<String>,
    /// Power of the isometries in finite mode.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 8)]
    pub depth: usize,
    /// Random operators whose averages are tested for centrality (circle mode).
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Centrality tolerance.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct ExpectationArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// The circle `w`, as a dotted edge path.
    #[arg(long)]
    pub circle: String,
    #[arg(long, default_value_t = 8)]
    pub depth: usize,
    /// Longest path carrying a random coefficient.
    #[arg(long, default_value_t = 2)]
    pub terms_len: usize,
    /// A single power; by default every power that fits the depth.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum AdversaryKind {
    /// `δ(L_e) = L_e` on every other edge of an alternating line.
    Alternating {
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        graph: GraphArgs,
        /// Random candidates for the norm lower bound.
        #[arg(long, default_value_t = 200)]
        budget: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// `δ(L_e) = L_{w₁ e w₂}` on an acyclic edge.
    AcyclicEdge {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        edge: String,
        #[arg(long)]
        w1: String,
        #[arg(long)]
        w2: String,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// `δ(L_e) = f(L_w) L_e` on the attaching edge of an in-fruit.
    InFruit {
        #[command(flatten)]
        graph: GraphArgs,
        /// Attachment vertex id; by default the first in-fruit.
        #[arg(long)]
        attachment: Option<String>,
        /// Integer coefficients of `f`, constant term first.
        #[arg(long, value_delimiter = ',', default_value = "0,1")]
        coeffs: Vec<i64>,
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
}

#[derive(Args, Debug)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Random candidates per trial for the norm lower bound.
    #[arg(long, default_value_t = 200)]
    pub budget: usize,
}

fn seed(seed: Option<u64>) -> Result<u64, CliError> {
    seed.ok_or_else(|| CliError::usage("this experiment is randomized; --seed is required"))
}

fn envelope(name: &str, config: Value, g: &DirectedMultigraph, result: Value) -> Value {
    json!({
        "schema": SCHEMA,
        "command": format!("experiment {name}"),
        "config": config,
        "graph": to_json(g),
        "result": result,
    })
}

pub fn run(cmd: &ExperimentCommand) -> Result<Value, CliError> {
    match cmd {
        ExperimentCommand::Dixmier(a) if a.vertices.is_some() => dixmier_finite_mode(a),
        ExperimentCommand::Dixmier(a) => dixmier_circle_mode(a),
        ExperimentCommand::Expectation(a) => expectation(a),
        ExperimentCommand::Adversary { kind } => match kind {
            AdversaryKind::Alternating { m, graph, budget, seed: s, tol } => alternating(*m, graph, *budget, *s, *tol),
            AdversaryKind::AcyclicEdge { graph, edge, w1, w2, tol } => acyclic_edge(graph, edge, w1, w2, *tol),
            AdversaryKind::InFruit { graph, attachment, coeffs, budget } => {
                in_fruit(graph, attachment.as_deref(), coeffs, *budget)
            }
        },
        ExperimentCommand::Probe(a) => probe(a),
    }
}

/// Random coefficients in `[−1, 1]²` on every basis path of length at most `max_len`.
fn random_series(basis: &PathBasis, max_len: usize, rng: &mut ChaCha8Rng) -> FourierSeries {
    FourierSeries::from_terms(
        basis
            .paths()
            .iter()
            .filter(|p| p.len() <= max_len)
            .map(|p| (p.clone(), C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))),
    )
}

fn dixmier_circle_mode(a: &DixmierArgs) -> Result<Value, CliError> {
    let g = match a.n {
        Some(0) => return Err(CliError::usage("--n must be positive")),
        Some(n) => circle(n),
        None => a.graph.load()?,
    };
    let n = g.vertex_count();
    let basis = PathBasis::enumerate(&g, a.depth)?;
    if a.depth < n {
        return Err(CliError::precondition(format!("depth {} is below the circle length {n}", a.depth)));
    }
    // isometries have length at most n, so these inputs keep exact columns
    let room = a.depth - n;
    let table = basis
        .paths()
        .par_iter()
        .filter(|p| p.len() <= room)
        .map(|p| -> Result<Value, CliError> {
            let avg = dixmier_circle(&FockOperator::left(&basis, p)?)?;
            Ok(json!({ "path": path(&g, p), "average": series(&g, &avg.fourier()?.prune(1e-15)) }))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut samples = Vec::new();
    if a.samples > 0 {
        let seed = seed(a.seed)?;
        samples = (0..a.samples)
            .into_par_iter()
            .map(|i| -> Result<Value, CliError> {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64);
                let x = FockOperator::from_fourier(&basis, &random_series(&basis, room, &mut rng))?;
                let avg = FockOperator::from_fourier(&basis, &dixmier_circle(&x)?.fourier()?)?;
                let t = center_test(&avg, a.tol)?;
                Ok(json!({ "sample": i, "central": t.central, "residual": bound(t.residual, "lower"), "window": t.window }))
            })
            .collect::<Result<Vec<_>, _>>()?;
    }
    let worst = samples.iter().filter_map(|s| s["residual"]["value"].as_f64()).fold(0.0, f64::max);
    let config = json!({
        "mode": "circle", "graph": a.n.map_or_else(|| a.graph.describe(), |n| format!("circle{n}")),
        "depth": a.depth, "samples": a.samples, "seed": a.seed, "tol": num(a.tol),
    });
    let result = json!({
        "n": n,
        "table": table,
        "samples": samples,
        "max_center_residual": bound(worst, "lower"),
    });
    Ok(envelope("dixmier", config, &g, result))
}

fn dixmier_finite_mode(a: &DixmierArgs) -> Result<Value, CliError> {
    let g = a.graph.load()?;
    let ids = a.vertices.as_deref().unwrap_or_default();
    let f = ids
        .split(',')
        .map(|id| g.vertex_index(id.trim()).ok_or_else(|| CliError::precondition(format!("unknown vertex `{id}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let basis = PathBasis::enumerate(&g, a.depth)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed(a.seed)?);
    let x = FourierSeries::from_terms(
        (0..g.vertex_count()).map(|v| (Path::vertex(v), C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))),
    );
    let report = dixmier_finite(&FockOperator::from_fourier(&basis, &x)?, &f, a.k)?;
    let config = json!({
        "mode": "finite", "graph": a.graph.describe(), "vertices": ids, "k": a.k, "depth": a.depth, "seed": a.seed,
    });
    let circles: Vec<Value> =
        report.circles.iter().map(|(c, d)| json!({ "c": path(&g, c), "d": path(&g, d) })).collect();
    let result = json!({
        "vertices": vertex_ids(&g, &report.vertices),
        "circles": circles,
        "exponents": report.exponents,
        "input": series(&g, &x),
        "mean": complex(report.mean),
        "vertex_coefficients": report.vertex_coefficients.iter().map(|&z| complex(z)).collect::<Vec<_>>(),
        "drift": bound(report.drift, "exact"),
        "off_center": bound(report.off_center, "exact"),
    });
    Ok(envelope("dixmier", config, &g, result))
}

fn expectation(a: &ExpectationArgs) -> Result<Value, CliError> {
    let g = a.graph.load_or(|| free_semigroup(2))?;
    let w = Path::parse(&g, &a.circle)?;
    if !w.is_circle() {
        return Err(CliError::precondition(format!("`{}` is not a circle", a.circle)));
    }
    let basis = PathBasis::enumerate(&g, a.depth)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed(a.seed)?);
    let x = random_series(&basis, a.terms_len.min(a.depth), &mut rng);
    let op = FockOperator::from_fourier(&basis, &x)?;
    let limit = conditional_expectation(&op, &w, ExpectationMode::Limit)?.fourier()?;
    let fits = |k: usize| k * w.len() + a.terms_len <= a.depth;
    let ks: Vec<usize> = match a.k {
        Some(k) => vec![k],
        None => (1..).take_while(|&k| fits(k)).collect(),
    };
    let finite = ks
        .par_iter()
        .map(|&k| -> Result<Value, CliError> {
            let e = conditional_expectation(&op, &w, ExpectationMode::FiniteK(k))?;
            let coeffs = e.fourier()?.prune(0.0);
            let diff = coeffs.max_diff(&limit);
            Ok(json!({
                "k": k,
                "exact_window": e.window().exact,
                "coefficients": series(&g, &coeffs),
                "max_diff_from_limit": bound(diff, "exact"),
                "agrees": diff == 0.0,
            }))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let config = json!({
        "graph": a.graph.describe_or("free2"), "circle": a.circle, "depth": a.depth, "terms_len": a.terms_len,
        "k": a.k, "seed": a.seed,
    });
    let result = json!({ "input": series(&g, &x), "limit": series(&g, &limit), "finite": finite });
    Ok(envelope("expectation", config, &g, result))
}

fn norm_report(spec_: &DerivationSpec, g: &Arc<DirectedMultigraph>, budget: usize, seed: u64) -> Result<Value, CliError> {
    let depth = g.longest_path().ok_or_else(|| CliError::precondition("norm bounds need a graph without circles"))?;
    let basis = PathBasis::enumerate(g, depth)?;
    let bounds = derivation_norm_bounds(spec_, &basis, budget, seed)?;
    let min = match solve_inner_with(spec_, None)?.solution() {
        Some(sol) => {
            let m = minimal_inner_norm(sol, &basis)?;
            Some(bound(m.value, if m.exact { "exact" } else { "upper" }))
        }
        None => None,
    };
    Ok(json!({
        "depth": depth,
        "derivation_norm": bound(bounds.lower, "lower"),
        "derivation_norm_estimate": bounds.upper_estimate.map(|u| bound(u, "estimate")),
        "exact_denominator": bounds.exact_denominator,
        "candidates": bounds.candidates,
        "minimal_inner_norm": min,
    }))
}

fn alternating(
    m: usize,
    source: &GraphArgs,
    budget: usize,
    seed_: Option<u64>,
    tol: Option<f64>,
) -> Result<Value, CliError> {
    if m == 0 {
        return Err(CliError::usage("--m must be positive"));
    }
    let seed = seed_.unwrap_or(0);
    if budget > 0 && seed_.is_none() {
        return Err(CliError::usage("random lower-bound candidates need --seed (or --budget 0)"));
    }
    let g = Arc::new(source.load_or(|| zigzag(2 * m + 2))?);
    let adv = adversary_alternating(&g, m, 1_000_000)?;
    let verdict = solve_inner_with(&adv.spec, tol)?;
    let sol = verdict
        .solution()
        .ok_or_else(|| CliError::precondition("the alternating derivation did not solve as inner"))?;
    let lambdas: Vec<Value> = adv
        .alternating
        .iter()
        .map(|&v| json!({ "vertex": g.vertex_id(v), "coefficient": complex(sol.vertex_coefficient(v)) }))
        .collect();
    let gap = sol.vertex_coefficient(adv.alternating[0]) - sol.vertex_coefficient(adv.alternating[2 * m - 1]);
    let config = json!({
        "kind": "alternating", "m": m, "graph": source.describe_or(&format!("zigzag{}", 2 * m + 2)),
        "budget": budget, "seed": seed_, "tol": tol.map(num),
    });
    let result = json!({
        "spec": spec(&adv.spec),
        "line": { "vertices": vertex_ids(&g, &adv.line.vertices) },
        "lambdas": lambdas,
        "gap": complex(gap),
        "residual": num(sol.residual),
        "norms": norm_report(&adv.spec, &g, budget, seed)?,
    });
    Ok(envelope("adversary", config, &g, result))
}

fn acyclic_edge(source: &GraphArgs, edge: &str, w1: &str, w2: &str, tol: Option<f64>) -> Result<Value, CliError> {
    let g = Arc::new(source.load()?);
    let e0 = g.edge_index(edge).ok_or_else(|| CliError::precondition(format!("unknown edge `{edge}`")))?;
    let (p1, p2) = (Path::parse(&g, w1)?, Path::parse(&g, w2)?);
    let s = adversary_acyclic_edge(&g, e0, &p1, &p2)?;
    let verdict = match solve_inner_with(&s, tol)? {
        InnerVerdict::Inner(sol) => json!({
            "inner": true,
            "implementer": series(&g, &sol.implementer.prune(1e-14)),
            "residual": num(sol.residual),
            "tolerance": num(sol.tolerance),
        }),
        InnerVerdict::NotInner(why) => json!({
            "inner": false,
            "edge": g.edge(why.edge).id,
            "path": path(&g, &why.path),
            "degree": why.degree,
            "residual": num(why.residual),
            "tolerance": num(why.tolerance),
        }),
    };
    let config = json!({
        "kind": "acyclic-edge", "graph": source.describe(), "edge": edge, "w1": w1, "w2": w2, "tol": tol.map(num),
    });
    Ok(envelope("adversary", config, &g, json!({ "spec": spec(&s), "verdict": verdict })))
}

fn in_fruit(source: &GraphArgs, attachment: Option<&str>, coeffs: &[i64], budget: usize) -> Result<Value, CliError> {
    let g = Arc::new(source.load_or(in_fruit_minimal)?);
    let at = attachment
        .map(|id| g.vertex_index(id).ok_or_else(|| CliError::precondition(format!("unknown vertex `{id}`"))))
        .transpose()?;
    let f: Vec<C64> = coeffs.iter().map(|&c| C64::new(c as f64, 0.0)).collect();
    let adv = adversary_in_fruit(&g, at, &f, budget)?;
    let ExactVerdict::Inner(sol) = solve_inner_exact(&adv.spec)? else {
        return Err(CliError::precondition("the in-fruit derivation is not inner"));
    };
    // coefficients of g(z) = ∑ g_k z^k with T's fruit corner = g(L_w)
    let corner: Vec<Value> = (0..=coeffs.len())
        .map(|k| json!({ "k": k, "coefficient": exact_complex(&sol.coefficient(&adv.circle.power(k))) }))
        .collect();
    let config = json!({
        "kind": "in-fruit", "graph": source.describe_or("in-fruit"),
        "attachment": attachment, "coeffs": coeffs, "budget": budget,
    });
    let result = json!({
        "spec": spec(&adv.spec),
        "circle": path(&g, &adv.circle),
        "attaching_edge": g.edge(adv.fruit.attaching_edge).id,
        "f": coeffs,
        "implementer_fruit_corner": corner,
    });
    Ok(envelope("adversary", config, &g, result))
}

fn probe(a: &ProbeArgs) -> Result<Value, CliError> {
    let g = Arc::new(a.graph.load_or(|| star_in_tree(5))?);
    let seed = seed(a.seed)?;
    let report = conjecture_probe(&g, a.trials, seed, a.budget)?;
    let trials: Vec<Value> = report
        .trials
        .iter()
        .map(|t| {
            json!({
                "trial": t.trial,
                "min_norm": bound(t.min_norm, "exact"),
                "derivation_norm": bound(t.lower_bound, "lower"),
                "ratio": bound(t.ratio, "upper"),
                "ratio_floor": bound(t.ratio_floor, "lower"),
            })
        })
        .collect();
    let config = json!({
        "graph": a.graph.describe_or("star5"),
        "trials": a.trials, "seed": seed, "budget": a.budget,
    });
    let result = json!({
        "depth": report.depth,
        "sup_ratio": bound(report.sup_ratio, "upper"),
        "min_ratio": bound(report.min_ratio, "upper"),
        "trials": trials,
    });
    Ok(envelope("probe", config, &g, result))
}
