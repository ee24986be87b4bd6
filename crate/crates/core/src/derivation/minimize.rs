//! Smallest implementer norm over the center span, component by component.

use std::sync::Arc;

use super::InnerSolution;
use crate::error::Result;
use crate::fock::FockOperator;
use crate::fourier::{FourierSeries, C64};
use crate::path::PathBasis;

#[derive(Clone, Debug)]
pub struct ComponentMinimum {
    pub vertices: Vec<usize>,
    /// Center elements of the component and the coefficients subtracted.
    pub centers: Vec<FourierSeries>,
    pub shift: Vec<C64>,
    pub value: f64,
    /// False when several center directions forced a coordinate search.
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub struct MinimalNorm {
    /// `T − Z*`.
    pub recentered: FourierSeries,
    /// `‖T − Z*‖` on the basis; the largest component value.
    pub value: f64,
    pub components: Vec<ComponentMinimum>,
    pub exact: bool,
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

fn golden(f: &mut dyn FnMut(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if b - a <= 1e-14 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Minimizes a convex `f` on `[a, b]`; when the minimum is attained on an
/// interval its midpoint is returned.
fn convex_min(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let (x0, f0) = golden(f, a, b);
    let level = f0 + 1e-12 * (1.0 + f0);
    let mut edge = |far: f64| {
        if f(far) <= level {
            return far;
        }
        let (mut inside, mut outside) = (x0, far);
        for _ in 0..100 {
            let mid = 0.5 * (inside + outside);
            if f(mid) <= level {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        inside
    };
    let (lo, hi) = (edge(a), edge(b));
    let mid = 0.5 * (lo + hi);
    let value = f(mid);
    if value <= f0 {
        (mid, value)
    } else {
        (x0, f0)
    }
}

/// `min_z ‖T − zZ‖`, over real `z` when `real` is set.
fn line_min(t: &FockOperator, z: &FockOperator, real: bool, radius: f64) -> (C64, f64) {
    let norm_at = |c: C64| t.sub(&z.scale(c)).expect("same basis").operator_norm();
    if real {
        let (x, v) = convex_min(&mut |x| norm_at(C64::new(x, 0.0)), -radius, radius);
        return (C64::new(x, 0.0), v);
    }
    let inner_best = |re: f64| convex_min(&mut |im| norm_at(C64::new(re, im)), -radius, radius);
    let (re, _) = convex_min(&mut |re| inner_best(re).1, -radius, radius);
    let (im, v) = inner_best(re);
    (C64::new(re, im), v)
}

fn is_real(s: &FourierSeries) -> bool {
    s.iter().all(|(_, c)| c.im == 0.0)
}

fn minimize_component(
    basis: &Arc<PathBasis>,
    vertices: Vec<usize>,
    t: &FourierSeries,
    centers: Vec<FourierSeries>,
) -> Result<(ComponentMinimum, FourierSeries)> {
    let t_op = FockOperator::from_fourier(basis, t)?;
    let t_norm = t_op.operator_norm();
    let center_ops =
        centers.iter().map(|c| FockOperator::from_fourier(basis, c)).collect::<Result<Vec<_>>>()?;
    let mut shift = vec![C64::default(); centers.len()];
    let exact = centers.len() <= 1;
    if t_norm == 0.0 || centers.is_empty() {
        return Ok((ComponentMinimum { vertices, centers, shift, value: t_norm, exact }, t.clone()));
    }
    let real = is_real(t) && centers.iter().all(is_real);
    let mut current = t_op.clone();
    let mut value = t_norm;
    for sweep in 0..if exact { 1 } else { 30 } {
        let before = value;
        for (k, z) in center_ops.iter().enumerate() {
            let z_norm = z.operator_norm();
            if z_norm == 0.0 {
                continue;
            }
            // every minimizer lies within 2‖T‖/‖Z‖ of the origin
            let radius = 2.0 * value / z_norm + 1e-12;
            let (c, v) = line_min(&current, z, real, radius);
            if v < value || exact {
                shift[k] += c;
                current = current.sub(&z.scale(c))?;
                value = v;
            }
        }
        if before - value <= 1e-13 * (1.0 + value) && sweep > 0 {
            break;
        }
    }
    let mut recentered = t.clone();
    for (c, z) in shift.iter().zip(&centers) {
        recentered = recentered.sub(&z.scale(*c));
    }
    let value = FockOperator::from_fourier(basis, &recentered)?.operator_norm();
    Ok((ComponentMinimum { vertices, centers, shift, value, exact }, recentered))
}

/// Minimizes `‖T − Z‖` over `Z` in the span of the solution's center basis,
/// separately on each connected component (the norm of the sum is the
/// largest component norm). With a single center direction per component
/// the search is a convex line search and the value is exact on the basis;
/// otherwise a coordinate search gives an estimate.
pub fn minimal_inner_norm(sol: &InnerSolution, basis: &Arc<PathBasis>) -> Result<MinimalNorm> {
    let g = basis.graph();
    let components = g.components();
    let mut component_of = vec![0; g.vertex_count()];
    for (i, c) in components.iter().enumerate() {
        for &v in c {
            component_of[v] = i;
        }
    }
    let mut recentered = FourierSeries::zero();
    let mut parts = Vec::with_capacity(components.len());
    for (i, vertices) in components.iter().enumerate() {
        let inside = |s: &FourierSeries| s.filter(|p| component_of[p.range()] == i);
        let t = inside(&sol.implementer);
        let centers: Vec<FourierSeries> =
            sol.center_basis.iter().map(inside).filter(|c| !c.is_zero()).collect();
        let (part, rec) = minimize_component(basis, vertices.clone(), &t, centers)?;
        recentered = recentered.add(&rec);
        parts.push(part);
    }
    let value = parts.iter().map(|p| p.value).fold(0.0, f64::max);
    let exact = parts.iter().all(|p| p.exact);
    Ok(MinimalNorm { recentered, value, components: parts, exact })
}
