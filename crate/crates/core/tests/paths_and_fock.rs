//! Path combinatorics and truncated Fock operator identities.

use std::sync::Arc;

use proptest::prelude::*;
use semigroupoid::fock::{
    center_test, conditional_expectation, dixmier_circle, ut_embed, CreationKind, ExpectationMode, FockOperator,
};
use semigroupoid::fourier::{FourierSeries, C64};
use semigroupoid::graph::{circle, connected_multigraphs, free_semigroup, oriented_trees, DirectedMultigraph};
use semigroupoid::path::{
    commutes_with, compose, minimal_circles_at, paths_of_length, root_power_decomposition, Path, PathBasis,
};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn word(g: &DirectedMultigraph, letters: &[usize]) -> Path {
    if letters.is_empty() {
        Path::vertex(0)
    } else {
        Path::from_edges(g, letters).unwrap()
    }
}

fn words(max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..2, 0..=max_len)
}

fn series(basis: &PathBasis, max_len: usize, coeffs: &[(f64, f64)]) -> FourierSeries {
    let paths = basis.paths().iter().filter(|p| p.len() <= max_len);
    FourierSeries::from_terms(paths.zip(coeffs.iter().cycle()).map(|(p, &(a, b))| (p.clone(), c(a, b))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative(a in words(4), b in words(4), d in words(4)) {
        let g = free_semigroup(2);
        let (p, q, r) = (word(&g, &a), word(&g, &b), word(&g, &d));
        let left = compose(&compose(&p, &q).unwrap(), &r).unwrap();
        let right = compose(&p, &compose(&q, &r).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(left.len(), a.len() + b.len() + d.len());
    }

    /// Two words commute exactly when their concatenations agree as strings.
    #[test]
    fn commutation_matches_strings(a in words(6), b in prop::collection::vec(0usize..2, 1..=4)) {
        let g = free_semigroup(2);
        let (p, w) = (word(&g, &a), word(&g, &b));
        let ab: Vec<usize> = a.iter().chain(&b).copied().collect();
        let ba: Vec<usize> = b.iter().chain(&a).copied().collect();
        prop_assert_eq!(commutes_with(&p, &w), ab == ba);
        let (root, m) = root_power_decomposition(&g, &w);
        prop_assert_eq!(root.power(m), w.clone());
        let period = (1..=b.len()).find(|&d| b.len() % d == 0 && b.chunks(d).all(|ch| ch == &b[..d])).unwrap();
        prop_assert_eq!(root.len(), period);
    }
}

#[test]
fn ranges_and_sources_of_compositions() {
    for g in connected_multigraphs(3, 4) {
        let paths: Vec<Path> = (0..=2).flat_map(|l| paths_of_length(&g, l)).collect();
        for p in &paths {
            for q in &paths {
                match compose(p, q) {
                    Some(pq) => {
                        assert_eq!(p.source(), q.range());
                        assert_eq!((pq.range(), pq.source()), (p.range(), q.source()));
                    }
                    None => assert_ne!(p.source(), q.range()),
                }
            }
        }
    }
}

/// Circles at `v` of each length are counted by compositions of minimal
/// circles, which the corner must be freely generated by.
#[test]
fn circles_factor_uniquely_into_minimal_circles() {
    let max = 6;
    for g in connected_multigraphs(3, 4) {
        for v in 0..g.vertex_count() {
            let (minimal, _) = minimal_circles_at(&g, v, max);
            let mut by_len = vec![0u64; max + 1];
            for m in &minimal {
                by_len[m.len()] += 1;
            }
            let mut ways = vec![0u64; max + 1];
            ways[0] = 1;
            for n in 1..=max {
                ways[n] = (1..=n).map(|l| by_len[l] * ways[n - l]).sum();
            }
            for (n, &expected) in ways.iter().enumerate().skip(1) {
                let circles = paths_of_length(&g, n).into_iter().filter(|p| p.range() == v && p.source() == v).count();
                assert_eq!(circles as u64, expected, "length {n} at {v} in {:?}", g.edges());
            }
        }
    }
}

#[test]
fn left_and_right_creations_commute() {
    let g = free_semigroup(2);
    let b = PathBasis::enumerate(&g, 5).unwrap();
    for p in paths_of_length(&g, 2) {
        for q in paths_of_length(&g, 1).into_iter().chain(paths_of_length(&g, 2)) {
            let l = FockOperator::creation(&b, CreationKind::Left, &p).unwrap();
            let r = FockOperator::creation(&b, CreationKind::Right, &q).unwrap();
            assert_eq!(l.commutator(&r).unwrap().nnz(), 0);
            let lq = FockOperator::left(&b, &q).unwrap();
            let product = l.multiply(&lq).unwrap();
            assert_eq!(product.max_diff(&FockOperator::left(&b, &compose(&p, &q).unwrap()).unwrap()), 0.0);
        }
    }
    let g = circle(3);
    let b = PathBasis::enumerate(&g, 4).unwrap();
    let (e0, e1) = (Path::edge(&g, 0), Path::edge(&g, 1));
    let (l0, l1) = (FockOperator::left(&b, &e0).unwrap(), FockOperator::left(&b, &e1).unwrap());
    let expected = compose(&e0, &e1).map_or(0, |_| 1);
    assert_eq!((l0.multiply(&l1).unwrap().nnz() > 0) as usize, expected);
    let reversed = compose(&e1, &e0).map_or(0, |_| 1);
    assert_eq!((l1.multiply(&l0).unwrap().nnz() > 0) as usize, reversed);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn expectation_is_an_idempotent_bimodule_map(
        coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..16),
        w in prop::collection::vec(0usize..2, 1..=2),
        a in 0usize..3,
        d in 0usize..3,
    ) {
        let g = free_semigroup(2);
        let b = PathBasis::enumerate(&g, 8).unwrap();
        let w = word(&g, &w);
        let x = series(&b, 2, &coeffs);
        let e = |s: &FourierSeries| {
            let op = FockOperator::from_fourier(&b, s).unwrap();
            conditional_expectation(&op, &w, ExpectationMode::Limit).unwrap().fourier().unwrap()
        };
        let once = e(&x);
        prop_assert_eq!(&e(&once), &once);
        prop_assert!(once.iter().all(|(p, _)| commutes_with(p, &w)));
        let (root, _) = root_power_decomposition(&g, &w);
        let left = FourierSeries::monomial(root.power(a), c(1.0, 0.0));
        let right = FourierSeries::monomial(root.power(d), c(1.0, 0.0));
        let sandwiched = left.mul(&x).mul(&right);
        prop_assume!(sandwiched.max_len().unwrap_or(0) <= 8);
        prop_assert!(e(&sandwiched).max_diff(&left.mul(&once).mul(&right)) == 0.0);
    }

    #[test]
    fn dixmier_average_is_central(
        n in 2usize..=3,
        coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..20),
    ) {
        let g = circle(n);
        let b = PathBasis::enumerate(&g, 8).unwrap();
        let a = FockOperator::from_fourier(&b, &series(&b, 3, &coeffs)).unwrap();
        let avg = dixmier_circle(&a).unwrap();
        prop_assert!(center_test(&avg, 1e-12).unwrap().residual < 1e-12);
        let central = avg.fourier().unwrap();
        let again = dixmier_circle(&FockOperator::from_fourier(&b, &central).unwrap()).unwrap();
        prop_assert!(again.fourier().unwrap().max_diff(&central) < 1e-12);
    }
}

#[test]
fn truncated_norms_increase_with_depth() {
    let g = Arc::new(free_semigroup(2));
    let mut previous = 0.0;
    let x = FourierSeries::from_terms([
        (Path::vertex(0), c(0.3, 0.0)),
        (Path::edge(&g, 0), c(1.0, 0.0)),
        (Path::from_edges(&g, &[1, 0]).unwrap(), c(-0.5, 0.25)),
    ]);
    for depth in 4..=6 {
        let b = PathBasis::enumerate(&g, depth).unwrap();
        let norm = FockOperator::from_fourier(&b, &x).unwrap().operator_norm();
        assert!(norm >= previous - 1e-12, "depth {depth}: {norm} < {previous}");
        previous = norm;
    }
}

#[test]
fn out_trees_embed_isometrically() {
    let mut state = 0x2545_f491_4f6c_dd1du64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    for n in 2..=5 {
        for g in oriented_trees(n).into_iter().filter(|g| g.out_tree_root().is_some()) {
            let depth = g.longest_path().unwrap();
            let b = PathBasis::enumerate(&g, depth).unwrap();
            for _ in 0..3 {
                let x = FourierSeries::from_terms(b.paths().iter().map(|p| (p.clone(), c(next(), next()))));
                let y = FourierSeries::from_terms(b.paths().iter().map(|p| (p.clone(), c(next(), next()))));
                let (ox, oy) = (FockOperator::from_fourier(&b, &x).unwrap(), FockOperator::from_fourier(&b, &y).unwrap());
                let (mx, _) = ut_embed(&ox).unwrap();
                let (my, _) = ut_embed(&oy).unwrap();
                assert!((ox.operator_norm() - mx.clone().svd(false, false).singular_values[0]).abs() < 1e-9);
                let (mxy, _) = ut_embed(&ox.multiply(&oy).unwrap()).unwrap();
                assert!((mxy - mx * my).iter().all(|z| z.norm() < 1e-12));
            }
        }
    }
}
