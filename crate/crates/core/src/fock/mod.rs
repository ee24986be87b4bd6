//! Truncated operators on `ℓ²` of the paths of length at most `N`.
//!
//! Every operator carries window metadata: the range of length shifts of the
//! untruncated operator it approximates, and the largest input length `ℓ`
//! such that every column `ξ_w` with `ℓ(w) ≤ ℓ` equals the truncation of the
//! untruncated column. Products and adjoints propagate the window, so callers
//! can tell which matrix entries are trustworthy.

mod center;
mod dixmier;
mod expectation;
mod norm;
mod ut;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fourier::{FourierSeries, C64};
use crate::path::{compose, Path, PathBasis};

pub use center::{center_test, CenterTest};
pub use dixmier::{dixmier_circle, dixmier_finite, DixmierReport};
pub use expectation::{conditional_expectation, ExpectationMode};
pub use ut::ut_embed;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CreationKind {
    Left,
    Right,
    VertexProj,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub min_shift: i64,
    pub max_shift: i64,
    /// Columns of input length at most this are exact; `-1` means none.
    pub exact: i64,
}

#[derive(Clone, Debug)]
pub struct FockOperator {
    basis: Arc<PathBasis>,
    /// Column-major, each column sorted by row.
    cols: Vec<Vec<(usize, C64)>>,
    window: Window,
}

fn zero_c() -> C64 {
    C64::new(0.0, 0.0)
}

impl FockOperator {
    pub fn zero(basis: &Arc<PathBasis>) -> Self {
        let n = basis.depth() as i64;
        FockOperator {
            basis: basis.clone(),
            cols: vec![Vec::new(); basis.len()],
            window: Window { min_shift: 0, max_shift: 0, exact: n },
        }
    }

    pub fn identity(basis: &Arc<PathBasis>) -> Self {
        let mut op = Self::zero(basis);
        for (j, col) in op.cols.iter_mut().enumerate() {
            col.push((j, C64::new(1.0, 0.0)));
        }
        op
    }

    /// Builds an operator from explicit columns; the caller vouches for the window.
    pub(crate) fn from_columns(basis: &Arc<PathBasis>, mut cols: Vec<Vec<(usize, C64)>>, window: Window) -> Self {
        for col in &mut cols {
            col.sort_by_key(|&(i, _)| i);
            col.retain(|&(_, c)| c != zero_c());
        }
        FockOperator { basis: basis.clone(), cols, window }
    }

    pub fn creation(basis: &Arc<PathBasis>, kind: CreationKind, p: &Path) -> Result<Self> {
        if basis.index_of(p).is_none() {
            return Err(Error::Precondition(format!(
                "path `{}` is not in the depth-{} basis",
                p.display(basis.graph()),
                basis.depth()
            )));
        }
        let n = basis.depth() as i64;
        let mut cols = vec![Vec::new(); basis.len()];
        for (j, w) in basis.paths().iter().enumerate() {
            let image = match kind {
                CreationKind::Left => compose(p, w),
                CreationKind::Right => compose(w, p),
                CreationKind::VertexProj => (w.range() == p.range()).then(|| w.clone()),
            };
            if let Some(i) = image.and_then(|q| basis.index_of(&q)) {
                cols[j].push((i, C64::new(1.0, 0.0)));
            }
        }
        let shift = if kind == CreationKind::VertexProj { 0 } else { p.len() as i64 };
        Ok(FockOperator {
            basis: basis.clone(),
            cols,
            window: Window { min_shift: shift, max_shift: shift, exact: n },
        })
    }

    pub fn left(basis: &Arc<PathBasis>, p: &Path) -> Result<Self> {
        Self::creation(basis, CreationKind::Left, p)
    }

    /// `∑ a_p L_p`; every path of the series must lie in the basis.
    pub fn from_fourier(basis: &Arc<PathBasis>, series: &FourierSeries) -> Result<Self> {
        let n = basis.depth() as i64;
        let mut cols = vec![Vec::new(); basis.len()];
        for (p, &a) in series.iter() {
            if p.len() > basis.depth() {
                return Err(Error::Window(format!(
                    "term `{}` exceeds depth {}",
                    p.display(basis.graph()),
                    basis.depth()
                )));
            }
            for w in basis.length_range(0).start..basis.length_range(basis.depth() - p.len()).end {
                if let Some(pw) = compose(p, basis.path(w)) {
                    let i = basis.index_of(&pw).expect("length fits the basis");
                    cols[w].push((i, a));
                }
            }
        }
        let window = Window {
            min_shift: series.min_len().unwrap_or(0) as i64,
            max_shift: series.max_len().unwrap_or(0) as i64,
            exact: n,
        };
        Ok(Self::from_columns(basis, merge_duplicates(cols), window))
    }

    pub fn basis(&self) -> &Arc<PathBasis> {
        &self.basis
    }

    pub fn depth(&self) -> usize {
        self.basis.depth()
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, C64)] {
        &self.cols[j]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        let col = &self.cols[j];
        match col.binary_search_by_key(&i, |&(r, _)| r) {
            Ok(k) => col[k].1,
            Err(_) => zero_c(),
        }
    }

    fn check_basis(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.basis, &other.basis) || self.basis.same_as(&other.basis) {
            Ok(())
        } else {
            Err(Error::Precondition("operators live on different path bases".into()))
        }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_basis(other)?;
        let dim = self.dim();
        let mut scratch = vec![zero_c(); dim];
        let mut touched = Vec::new();
        let mut cols = Vec::with_capacity(dim);
        for bcol in &other.cols {
            for &(k, b) in bcol {
                for &(i, a) in &self.cols[k] {
                    if scratch[i] == zero_c() {
                        touched.push(i);
                    }
                    scratch[i] += a * b;
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let mut col = Vec::with_capacity(touched.len());
            for &i in &touched {
                if scratch[i] != zero_c() {
                    col.push((i, scratch[i]));
                }
                scratch[i] = zero_c();
            }
            touched.clear();
            cols.push(col);
        }
        let window = product_window(self.window, other.window, self.depth() as i64);
        Ok(FockOperator { basis: self.basis.clone(), cols, window })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_basis(other)?;
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| {
                let mut out = Vec::with_capacity(a.len() + b.len());
                let (mut x, mut y) = (0, 0);
                while x < a.len() || y < b.len() {
                    let take_a = y == b.len() || (x < a.len() && a[x].0 < b[y].0);
                    let take_b = x == a.len() || (y < b.len() && b[y].0 < a[x].0);
                    let (i, c) = if take_a {
                        x += 1;
                        a[x - 1]
                    } else if take_b {
                        y += 1;
                        b[y - 1]
                    } else {
                        x += 1;
                        y += 1;
                        (a[x - 1].0, a[x - 1].1 + b[y - 1].1)
                    };
                    if c != zero_c() {
                        out.push((i, c));
                    }
                }
                out
            })
            .collect();
        let (wa, wb) = (self.window, other.window);
        let window = Window {
            min_shift: wa.min_shift.min(wb.min_shift),
            max_shift: wa.max_shift.max(wb.max_shift),
            exact: wa.exact.min(wb.exact),
        };
        Ok(FockOperator { basis: self.basis.clone(), cols, window })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C64) -> Self {
        let cols = if c == zero_c() {
            vec![Vec::new(); self.dim()]
        } else {
            self.cols.iter().map(|col| col.iter().map(|&(i, a)| (i, a * c)).collect()).collect()
        };
        FockOperator { basis: self.basis.clone(), cols, window: self.window }
    }

    pub fn adjoint(&self) -> Self {
        let mut cols = vec![Vec::new(); self.dim()];
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, a) in col {
                cols[i].push((j, a.conj()));
            }
        }
        let n = self.depth() as i64;
        let w = self.window;
        let exact = if w.exact >= n {
            n
        } else if w.exact < 0 {
            -1
        } else {
            (w.exact + w.min_shift).clamp(-1, n)
        };
        FockOperator {
            basis: self.basis.clone(),
            cols,
            window: Window { min_shift: -w.max_shift, max_shift: -w.min_shift, exact },
        }
    }

    /// `AB − BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.multiply(other)?.sub(&other.multiply(self)?)
    }

    /// Drops the columns of input length above `max_len`.
    pub fn restrict_inputs(&self, max_len: i64) -> Self {
        let cols = self
            .cols
            .iter()
            .enumerate()
            .map(|(j, col)| if self.basis.length(j) as i64 <= max_len { col.clone() } else { Vec::new() })
            .collect();
        FockOperator { basis: self.basis.clone(), cols, window: self.window }
    }

    /// Fourier coefficients `a_p = ⟨A ξ_{s(p)}, ξ_p⟩`, read from the vertex columns.
    pub fn fourier(&self) -> Result<FourierSeries> {
        if self.window.exact < 0 {
            return Err(Error::Window("no exact columns; Fourier coefficients are unreliable".into()));
        }
        let mut out = FourierSeries::zero();
        for v in self.basis.length_range(0) {
            for &(i, a) in &self.cols[v] {
                let p = self.basis.path(i);
                if p.source() == v {
                    out.add_term(p.clone(), a);
                }
            }
        }
        Ok(out)
    }

    /// Largest entry modulus of `self − other` over columns of input length at most `max_len`.
    pub fn max_diff_on(&self, other: &Self, max_len: i64) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..self.dim() {
            if self.basis.length(j) as i64 > max_len {
                continue;
            }
            for &(i, a) in &self.cols[j] {
                worst = worst.max((a - other.entry(i, j)).norm());
            }
            for &(i, b) in &other.cols[j] {
                worst = worst.max((self.entry(i, j) - b).norm());
            }
        }
        worst
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        self.max_diff_on(other, self.depth() as i64)
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![zero_c(); self.dim()];
        for (j, col) in self.cols.iter().enumerate() {
            if x[j] != zero_c() {
                for &(i, a) in col {
                    y[i] += a * x[j];
                }
            }
        }
        y
    }

    pub fn apply_adjoint(&self, y: &[C64]) -> Vec<C64> {
        self.cols.iter().map(|col| col.iter().map(|&(i, a)| a.conj() * y[i]).sum()).collect()
    }

    /// Spectral norm of the truncated matrix.
    pub fn operator_norm(&self) -> f64 {
        norm::spectral_norm(self, self.depth() as i64).0
    }

    /// Spectral norm on the inputs of length at most `max_len`.
    pub fn norm_on_inputs(&self, max_len: i64) -> f64 {
        norm::spectral_norm(self, max_len).0
    }

    /// Norm together with a maximizing input vector and its image.
    pub fn norm_with_vectors(&self, max_len: i64) -> (f64, Vec<C64>, Vec<C64>) {
        let (s, v) = norm::spectral_norm(self, max_len);
        let u = self.apply(&v);
        (s, v, u)
    }
}

/// Largest exact input length of `AB`.
fn product_window(a: Window, b: Window, n: i64) -> Window {
    let exact = if a.exact < 0 || b.exact < 0 {
        -1
    } else {
        let bound = if a.min_shift >= 0 {
            if a.exact >= n {
                n
            } else {
                a.exact - b.max_shift
            }
        } else {
            a.exact.min(n) - b.max_shift
        };
        b.exact.min(bound).clamp(-1, n)
    };
    Window { min_shift: a.min_shift + b.min_shift, max_shift: a.max_shift + b.max_shift, exact }
}

fn merge_duplicates(cols: Vec<Vec<(usize, C64)>>) -> Vec<Vec<(usize, C64)>> {
    cols.into_iter()
        .map(|mut col| {
            col.sort_by_key(|&(i, _)| i);
            let mut out: Vec<(usize, C64)> = Vec::with_capacity(col.len());
            for (i, c) in col {
                match out.last_mut() {
                    Some(last) if last.0 == i => last.1 += c,
                    _ => out.push((i, c)),
                }
            }
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{circle, free_semigroup, upper_triangle_tree};

    fn one() -> C64 {
        C64::new(1.0, 0.0)
    }

    #[test]
    fn left_creation_on_circle() {
        let g = circle(3);
        let b = PathBasis::enumerate(&g, 3).unwrap();
        let l1 = FockOperator::left(&b, &Path::edge(&g, 0)).unwrap();
        let e2 = b.index_of(&Path::edge(&g, 1)).unwrap();
        let e12 = b.index_of(&Path::from_edges(&g, &[0, 1]).unwrap()).unwrap();
        assert_eq!(l1.entry(e12, e2), one());
        assert!(l1.column(b.index_of(&Path::edge(&g, 0)).unwrap()).is_empty());
        let v2 = b.index_of(&Path::vertex(1)).unwrap();
        assert_eq!(l1.column(v2), &[(b.index_of(&Path::edge(&g, 0)).unwrap(), one())]);
    }

    #[test]
    fn vertex_projections_are_orthogonal() {
        let g = upper_triangle_tree(3);
        let b = PathBasis::enumerate(&g, 2).unwrap();
        let p0 = FockOperator::creation(&b, CreationKind::VertexProj, &Path::vertex(0)).unwrap();
        let p1 = FockOperator::creation(&b, CreationKind::VertexProj, &Path::vertex(1)).unwrap();
        assert_eq!(p0.multiply(&p1).unwrap().nnz(), 0);
        assert!(p0.multiply(&p0).unwrap().max_diff(&p0) == 0.0);
    }

    #[test]
    fn concatenation_and_windows() {
        let g = free_semigroup(2);
        let b = PathBasis::enumerate(&g, 4).unwrap();
        let a = FockOperator::left(&b, &Path::edge(&g, 0)).unwrap();
        let bb = FockOperator::left(&b, &Path::edge(&g, 1)).unwrap();
        let ab = FockOperator::left(&b, &Path::from_edges(&g, &[0, 1]).unwrap()).unwrap();
        assert_eq!(a.multiply(&bb).unwrap().max_diff(&ab), 0.0);
        // L_a* L_a is the vertex projection on inputs of length ≤ N − 1
        let q = a.adjoint().multiply(&a).unwrap();
        assert_eq!(q.window().exact, 3);
        assert_eq!(q.max_diff_on(&FockOperator::identity(&b), 3), 0.0);
        assert!(q.max_diff(&FockOperator::identity(&b)) > 0.5);
        // L_a L_a* has a lowering factor on the right
        let r = a.multiply(&a.adjoint()).unwrap();
        assert_eq!(r.window().exact, 4);
    }

    #[test]
    fn adjoint_is_involutive() {
        let g = circle(2);
        let b = PathBasis::enumerate(&g, 3).unwrap();
        let s = FourierSeries::from_terms([
            (Path::vertex(0), C64::new(1.0, 2.0)),
            (Path::from_edges(&g, &[0, 1]).unwrap(), C64::new(-0.5, 0.25)),
        ]);
        let a = FockOperator::from_fourier(&b, &s).unwrap();
        assert_eq!(a.adjoint().adjoint().max_diff(&a), 0.0);
        assert_eq!(a.fourier().unwrap(), s);
    }

    #[test]
    fn norms() {
        let g = upper_triangle_tree(2);
        let b = PathBasis::enumerate(&g, 1).unwrap();
        let t = FockOperator::from_fourier(
            &b,
            &FourierSeries::from_terms([(Path::vertex(0), C64::new(0.5, 0.0)), (Path::vertex(1), C64::new(-0.5, 0.0))]),
        )
        .unwrap();
        assert!((t.operator_norm() - 0.5).abs() < 1e-12);
        let e = FockOperator::left(&b, &Path::edge(&g, 0)).unwrap();
        assert!((e.operator_norm() - 1.0).abs() < 1e-12);
    }
}
