//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semigroupoid::cohomology::{graded_h1, h1_verdict};
use semigroupoid::derivation::{
    adversary_alternating, adversary_in_fruit, certified_lower_bound, minimal_inner_norm, solve_inner,
    solve_inner_exact, DerivationSpec, ExactVerdict, InnerSolution,
};
use semigroupoid::fock::{center_test, conditional_expectation, dixmier_circle, ut_embed, ExpectationMode, FockOperator};
use semigroupoid::fourier::{FourierSeries, C64};
use semigroupoid::graph::{
    check_fruit_properties, circle, connected_multigraphs, free_semigroup, fruit_tree_decomposition, in_fruit_minimal,
    loop_and_two_edges, oriented_trees, parallel_edges, star_in_tree, two_loops_one_edge, zigzag, ClassifyBudget,
    DirectedMultigraph,
};
use semigroupoid::linalg::qc_int;
use semigroupoid::path::{Path, PathBasis, DEFAULT_BASIS_CAP};

const BUDGET: ClassifyBudget = ClassifyBudget { polygons: 100_000, lines: 100_000 };

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn dims(g: DirectedMultigraph, max_degree: usize) -> Vec<usize> {
    graded_h1(&Arc::new(g), max_degree, DEFAULT_BASIS_CAP).unwrap().h1_dims()
}

fn parallel_fixture() -> Outcome {
    let mut bad = Vec::new();
    for n in 2..=4 {
        let got = dims(parallel_edges(n), 6);
        let want: Vec<usize> = (0..=6).map(|d| if d == 0 { n * n - 1 } else { 0 }).collect();
        if got != want {
            bad.push(format!("n={n}: {got:?}"));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "n=2,3,4 exact, degrees 0..6".into() } else { bad.join("; ") })
}

fn trees() -> Outcome {
    let mut count = 0;
    let mut bad = Vec::new();
    for n in 2..=6 {
        for g in oriented_trees(n) {
            count += 1;
            let g = Arc::new(g);
            let r = graded_h1(&g, 4, DEFAULT_BASIS_CAP).unwrap();
            let trivial = h1_verdict(&g, BUDGET).unwrap().trivial() == Some(true);
            let d0 = &r.degrees[0];
            if !r.all_zero() || !trivial || d0.der != g.edge_count() || d0.inn != g.vertex_count() - 1 {
                bad.push(format!("{} vertices: dims {:?}, trivial {trivial}", n, r.h1_dims()));
            }
        }
    }
    // the one-vertex tree has no edges and nothing to derive
    let single = {
        let mut g = DirectedMultigraph::new();
        g.add_vertex("v").unwrap();
        Arc::new(g)
    };
    count += 1;
    if dims(single.as_ref().clone(), 4).iter().any(|&d| d != 0) || h1_verdict(&single, BUDGET).unwrap().trivial() != Some(true) {
        bad.push("single vertex".into());
    }
    let detail = format!("{count} trees, {} failures{}", bad.len(), bad.first().map(|b| format!(", first: {b}")).unwrap_or_default());
    outcome(bad.is_empty(), detail)
}

fn loop_fixture() -> Outcome {
    let got = dims(loop_and_two_edges(), 8);
    let want: Vec<usize> = (0..=8).map(|d| usize::from(d >= 1)).collect();
    outcome(got == want, format!("dims {got:?}"))
}

fn two_loop_fixture() -> Outcome {
    let got = dims(two_loops_one_edge(), 8);
    let want: Vec<usize> = (0..=8).map(|d: usize| d.saturating_sub(1)).collect();
    outcome(got == want, format!("dims {got:?}"))
}

fn strongly_connected(g: &DirectedMultigraph) -> bool {
    let n = g.vertex_count();
    let reach = |from: usize, forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(v) = stack.pop() {
            for e in 0..g.edge_count() {
                let (a, b) = if forward { (g.source(e), g.range(e)) } else { (g.range(e), g.source(e)) };
                if a == v && !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach(0, true) && reach(0, false)
}

fn classifier_equivalence() -> Outcome {
    let corpus = connected_multigraphs(4, 5);
    let mut disagreements = 0;
    let mut wrong_verdicts = 0;
    for g in &corpus {
        let fruit = if g.vertex_count() >= 2 && !strongly_connected(g) {
            let by_properties = check_fruit_properties(g, BUDGET.polygons).unwrap().is_none();
            let by_construction = fruit_tree_decomposition(g, BUDGET.polygons).unwrap().is_ok();
            if by_properties != by_construction {
                disagreements += 1;
            }
            by_construction
        } else {
            false
        };
        let expected = strongly_connected(g) || fruit;
        if h1_verdict(g, BUDGET).unwrap().trivial() != Some(expected) {
            wrong_verdicts += 1;
        }
    }
    outcome(
        disagreements == 0 && wrong_verdicts == 0,
        format!("{} graphs, {disagreements} property/construction disagreements, {wrong_verdicts} wrong verdicts", corpus.len()),
    )
}

fn alternating_adversary() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for m in 1..=3 {
        let g = Arc::new(zigzag(2 * m + 2));
        let adv = adversary_alternating(&g, m, BUDGET.lines).unwrap();
        let sol = solve_inner(&adv.spec).unwrap();
        let sol = sol.solution().expect("adversary on a tree is inner");
        let gap = sol.vertex_coefficient(adv.alternating[0]) - sol.vertex_coefficient(adv.alternating[2 * m - 1]);
        let basis = PathBasis::enumerate(&g, g.longest_path().unwrap()).unwrap();
        let min_norm = minimal_inner_norm(sol, &basis).unwrap().value;
        let (lower, ..) = certified_lower_bound(&adv.spec, &basis, 200, 17).unwrap();
        let ok = (gap - c(m as f64)).norm() < 1e-10 && min_norm >= m as f64 / 2.0 - 1e-9 && lower >= 1.0 - 1e-9;
        pass &= ok;
        parts.push(format!("m={m}: gap {:.3e} off, min norm {min_norm:.6}, lower bound {lower:.6}", (gap - c(m as f64)).norm()));
    }
    outcome(pass, parts.join("; "))
}

fn star_in_tree_norms() -> Outcome {
    let g = Arc::new(star_in_tree(5));
    let basis = PathBasis::enumerate(&g, 1).unwrap();
    let root = Path::vertex(g.vertex_index("v0").unwrap());
    // ‖T‖ = √(max_j |s_j|² + |t_j|²) for T = ∑ s_j L_{v_j} + t_j L_{e_j}, read
    // after subtracting `shift` from every vertex coefficient
    let formula = |t: &FourierSeries, shift: C64| {
        (1..=5)
            .map(|j| {
                let v = Path::vertex(g.vertex_index(&format!("v{j}")).unwrap());
                let e = Path::edge(&g, g.edge_index(&format!("e{j}")).unwrap());
                (t.coefficient(&v) - shift).norm_sqr() + t.coefficient(&e).norm_sqr()
            })
            .fold(0.0, f64::max)
            .sqrt()
    };
    let mut formula_err: f64 = 0.0;
    let mut bound_err: f64 = 0.0;
    let mut bound_over_root_zero = f64::INFINITY;
    let mut root_zero_vs_operator: f64 = 0.0;
    for trial in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + trial);
        let s = FourierSeries::from_terms(basis.paths().iter().map(|p| (p.clone(), c(rng.gen_range(-1.0..1.0)))));
        let spec = DerivationSpec::inner(&g, &s);
        let (normalized, t0) = spec.normalize_vertices(None).unwrap();
        let verdict = solve_inner(&normalized).unwrap();
        let sol = verdict.solution().expect("derivations on a tree are inner");
        let full = InnerSolution { implementer: sol.implementer.add(&t0), ..sol.clone() };
        let min = minimal_inner_norm(&full, &basis).unwrap();
        formula_err = formula_err.max((min.value - formula(&min.recentered, C64::default())).abs());
        let (lower, ..) = certified_lower_bound(&spec, &basis, 200, trial).unwrap();
        bound_err = bound_err.max((min.value - lower).abs());
        // the implementer with zero root coefficient
        let shift = min.recentered.coefficient(&root);
        let root_zero = formula(&min.recentered, shift);
        let as_operator = min.recentered.sub(&FourierSeries::scalar(&g, shift));
        root_zero_vs_operator =
            root_zero_vs_operator.max((root_zero - FockOperator::from_fourier(&basis, &as_operator).unwrap().operator_norm()).abs());
        bound_over_root_zero = bound_over_root_zero.min(lower - root_zero);
    }
    outcome(
        formula_err < 1e-8 && bound_err < 1e-6,
        format!(
            "max |min norm - formula| = {formula_err:.3e} (tol 1e-8), max |min norm - lower bound| = {bound_err:.3e} (tol 1e-6); \
             root-zero implementer: formula vs operator norm {root_zero_vs_operator:.3e}, min(lower bound - its norm) = {bound_over_root_zero:.3e}"
        ),
    )
}

fn dixmier() -> Outcome {
    let mut table_err: f64 = 0.0;
    let mut residual: f64 = 0.0;
    for n in [2usize, 3] {
        let g = circle(n);
        let basis = PathBasis::enumerate(&g, 8).unwrap();
        let room = 8 - n;
        for p in basis.paths().iter().filter(|p| p.len() <= room) {
            let avg = dixmier_circle(&FockOperator::left(&basis, p).unwrap()).unwrap().fourier().unwrap();
            let expected = if p.len() % n == 0 {
                // 1/n times the sum of the n closed paths of this length (vertices when it is 0)
                let same: Vec<&Path> = basis.paths().iter().filter(|q| q.len() == p.len()).collect();
                assert_eq!(same.len(), n);
                FourierSeries::from_terms(same.into_iter().map(|q| (q.clone(), c(1.0 / n as f64))))
            } else {
                FourierSeries::zero()
            };
            table_err = table_err.max(avg.max_diff(&expected));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        for _ in 0..100 {
            let x = FourierSeries::from_terms(
                basis
                    .paths()
                    .iter()
                    .filter(|p| p.len() <= room)
                    .map(|p| (p.clone(), C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))),
            );
            let avg = dixmier_circle(&FockOperator::from_fourier(&basis, &x).unwrap()).unwrap().fourier().unwrap();
            let t = center_test(&FockOperator::from_fourier(&basis, &avg).unwrap(), 1e-12).unwrap();
            residual = residual.max(t.residual);
        }
    }
    outcome(
        table_err < 1e-12 && residual < 1e-12,
        format!("table error {table_err:.3e}, max center residual {residual:.3e} (tol 1e-12)"),
    )
}

fn expectation() -> Outcome {
    let g = free_semigroup(2);
    let basis = PathBasis::enumerate(&g, 8).unwrap();
    let terms_len = 3;
    let mut compared = 0;
    let mut mismatches = Vec::new();
    for (name, seed) in [("a", 1u64), ("b", 2), ("a.b", 3), ("a.a.b", 4)] {
        let w = Path::parse(&g, name).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = FourierSeries::from_terms(
            basis
                .paths()
                .iter()
                .filter(|p| p.len() <= terms_len)
                .map(|p| (p.clone(), C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))),
        );
        let a = FockOperator::from_fourier(&basis, &x).unwrap();
        let limit = conditional_expectation(&a, &w, ExpectationMode::Limit).unwrap().fourier().unwrap();
        // k·ℓ(w) ≥ ℓ(p) makes p·w^k = w^k·q force p = q, with pw = wp
        let threshold = terms_len.div_ceil(w.len());
        for k in (threshold..).take_while(|k| k * w.len() + terms_len <= 8) {
            let e = conditional_expectation(&a, &w, ExpectationMode::FiniteK(k)).unwrap().fourier().unwrap();
            compared += 1;
            if e.prune(0.0) != limit.prune(0.0) {
                mismatches.push(format!("w={name} k={k}: diff {:.3e}", e.max_diff(&limit)));
            }
        }
    }
    outcome(
        compared > 0 && mismatches.is_empty(),
        format!("{compared} (w, k) pairs compared exactly{}", mismatches.first().map(|m| format!(", first mismatch {m}")).unwrap_or_default()),
    )
}

fn random_out_tree(rng: &mut ChaCha8Rng) -> DirectedMultigraph {
    let n = rng.gen_range(2..=6);
    let mut g = DirectedMultigraph::new();
    for i in 0..n {
        g.add_vertex(&format!("v{i}")).unwrap();
    }
    for i in 1..n {
        let parent = rng.gen_range(0..i);
        g.add_edge_by_index(&format!("e{i}"), parent, i).unwrap();
    }
    g
}

fn out_tree_isometry() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut norm_err: f64 = 0.0;
    let mut products = 0;
    let mut product_failures = 0;
    for _ in 0..50 {
        let g = random_out_tree(&mut rng);
        assert!(g.out_tree_root().is_some());
        let basis = PathBasis::enumerate(&g, g.longest_path().unwrap()).unwrap();
        for _ in 0..4 {
            let x = FourierSeries::from_terms(
                basis.paths().iter().map(|p| (p.clone(), C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))),
            );
            let a = FockOperator::from_fourier(&basis, &x).unwrap();
            let (m, _) = ut_embed(&a).unwrap();
            norm_err = norm_err.max((a.operator_norm() - m.svd(false, false).singular_values[0]).abs());
        }
        let ops: Vec<FockOperator> = basis.paths().iter().map(|p| FockOperator::left(&basis, p).unwrap()).collect();
        let images: Vec<_> = ops.iter().map(|a| ut_embed(a).unwrap().0).collect();
        for (i, a) in ops.iter().enumerate() {
            for (j, b) in ops.iter().enumerate() {
                products += 1;
                let (ab, _) = ut_embed(&a.multiply(b).unwrap()).unwrap();
                if ab != &images[i] * &images[j] {
                    product_failures += 1;
                }
            }
        }
    }
    outcome(
        norm_err < 1e-9 && product_failures == 0,
        format!("200 elements, max norm gap {norm_err:.3e} (tol 1e-9); {products} basis products, {product_failures} inexact"),
    )
}

fn in_fruit_obstruction() -> Outcome {
    let g = Arc::new(in_fruit_minimal());
    let mut pass = true;
    let mut parts = Vec::new();
    for degree in 1..=3usize {
        let f: Vec<C64> = (0..=degree).map(|k| c(f64::from(u8::from(k == degree)))).collect();
        let adv = adversary_in_fruit(&g, None, &f, BUDGET.polygons).unwrap();
        let ExactVerdict::Inner(sol) = solve_inner_exact(&adv.spec).unwrap() else {
            pass = false;
            parts.push(format!("z^{degree}: not inner"));
            continue;
        };
        // g = λ − f on the fruit corner: coefficient −f_k at w^k for k ≥ 1
        let ok = (1..=degree + 3).all(|k| sol.coefficient(&adv.circle.power(k)) == qc_int(-i64::from(k == degree)));
        pass &= ok;
        parts.push(format!("z^{degree}: {}", if ok { "exact" } else { "mismatch" }));
    }
    outcome(pass, parts.join(", "))
}

fn run_cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_semigroupoid")).args(args).output().expect("run the CLI");
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn determinism() -> Outcome {
    let commands: &[&[&str]] = &[
        &["classify", "--graph", "zigzag6"],
        &["classify", "--graph", "3v-1l-2e"],
        &["h1", "--graph", "2v-2l-1e", "--max-degree", "6"],
        &["experiment", "dixmier", "--n", "3", "--samples", "20", "--seed", "5"],
        &["experiment", "dixmier", "--graph", "free2", "--vertices", "v", "--k", "2", "--seed", "5"],
        &["experiment", "expectation", "--circle", "a", "--seed", "2"],
        &["experiment", "adversary", "alternating", "--m", "2", "--seed", "4"],
        &["experiment", "adversary", "acyclic-edge", "--graph", "2v-2l-1e", "--edge", "e", "--w1", "e1", "--w2", "e2"],
        &["experiment", "adversary", "in-fruit", "--coeffs", "0,0,1"],
        &["experiment", "probe", "--trials", "20", "--seed", "9"],
    ];
    let mut differing = Vec::new();
    for cmd in commands {
        let with_jobs = |jobs: &str| {
            let mut args = vec!["--jobs", jobs];
            args.extend_from_slice(cmd);
            run_cli(&args)
        };
        let (a, b, c) = (with_jobs("1"), with_jobs("1"), with_jobs("4"));
        if a != b || a != c {
            differing.push(cmd.join(" "));
        }
    }
    outcome(
        differing.is_empty(),
        format!("{} commands, jobs 1/1/4{}", commands.len(), differing.first().map(|d| format!(", differs: {d}")).unwrap_or_default()),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("parallel edges", parallel_fixture),
        ("trees", trees),
        ("loop with two edges", loop_fixture),
        ("two loops and an edge", two_loop_fixture),
        ("classifier equivalence", classifier_equivalence),
        ("alternating adversary", alternating_adversary),
        ("star in-tree norms", star_in_tree_norms),
        ("Dixmier averaging", dixmier),
        ("conditional expectation", expectation),
        ("out-tree isometry", out_tree_isometry),
        ("in-fruit obstruction", in_fruit_obstruction),
        ("determinism", determinism),
    ];
    // failures are reported through `catch_unwind`
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        let verdict = if result.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {verdict} {name}: {} [{:.1}s]", i + 1, result.detail, start.elapsed().as_secs_f64());
        if !result.pass {
            failed.push(i + 1);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
