//! Dense Gaussian elimination over exact fields, plus complex least squares.

use std::ops::Neg;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

use crate::fourier::C64;

pub type Q = BigRational;
pub type QC = Complex<BigRational>;

/// Row-reduces `rows` (each of length `ncols`) in place to reduced echelon
/// form; returns the pivot columns.
pub fn rref<T>(rows: &mut Vec<Vec<T>>, ncols: usize) -> Vec<usize>
where
    T: Clone + Num + Neg<Output = T>,
{
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = T::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in c..ncols {
                    let v = rows[r][k].clone();
                    if !v.is_zero() {
                        rows[i][k] = rows[i][k].clone() - f.clone() * v;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank<T>(rows: &[Vec<T>], ncols: usize) -> usize
where
    T: Clone + Num + Neg<Output = T>,
{
    rref(&mut rows.to_vec(), ncols).len()
}

/// Rows in echelon form, grown one vector at a time. Each row is reduced
/// against the earlier ones, so it vanishes at their pivot columns.
#[derive(Clone, Debug, Default)]
pub struct Echelon<T> {
    rows: Vec<(usize, Vec<T>)>,
}

impl<T> Echelon<T>
where
    T: Clone + Num + Neg<Output = T>,
{
    pub fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `x` if it is independent of the rows so far; returns whether it was.
    pub fn insert(&mut self, mut x: Vec<T>) -> bool {
        for (p, row) in &self.rows {
            if x[*p].is_zero() {
                continue;
            }
            let f = x[*p].clone();
            for (xi, ri) in x.iter_mut().zip(row) {
                if !ri.is_zero() {
                    *xi = xi.clone() - f.clone() * ri.clone();
                }
            }
        }
        let Some(p) = x.iter().position(|v| !v.is_zero()) else {
            return false;
        };
        let inv = T::one() / x[p].clone();
        for v in x.iter_mut() {
            *v = v.clone() * inv.clone();
        }
        self.rows.push((p, x));
        true
    }
}

/// A basis of `{x : Mx = 0}`, one vector per free column.
pub fn nullspace<T>(rows: &[Vec<T>], ncols: usize) -> Vec<Vec<T>>
where
    T: Clone + Num + Neg<Output = T>,
{
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut x = vec![T::zero(); ncols];
            x[free] = T::one();
            for (row, &p) in m.iter().zip(&pivots) {
                x[p] = -row[free].clone();
            }
            x
        })
        .collect()
}

/// A solution of `Mx = b` with free variables set to zero, or the index of
/// the first equation that cannot be met.
pub fn solve<T>(rows: &[Vec<T>], b: &[T], ncols: usize) -> std::result::Result<Vec<T>, usize>
where
    T: Clone + Num + Neg<Output = T>,
{
    let aug: Vec<Vec<T>> = rows
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut v = r.clone();
            v.push(bi.clone());
            v
        })
        .collect();
    let mut m = aug.clone();
    let pivots = rref(&mut m, ncols + 1);
    if pivots.last() == Some(&ncols) {
        // the first equation that makes the prefix inconsistent
        let first = (0..aug.len())
            .find(|&i| rref(&mut aug[..=i].to_vec(), ncols + 1).last() == Some(&ncols))
            .unwrap_or(0);
        return Err(first);
    }
    let mut x = vec![T::zero(); ncols];
    for (row, &p) in m.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Ok(x)
}

/// The exact rational value of a finite float.
pub fn q_from_f64(x: f64) -> Q {
    Q::from_f64(x).expect("finite value")
}

pub fn qc_from_c64(z: C64) -> QC {
    QC::new(q_from_f64(z.re), q_from_f64(z.im))
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn qc_to_c64(z: &QC) -> C64 {
    C64::new(q_to_f64(&z.re), q_to_f64(&z.im))
}

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qc_int(n: i64) -> QC {
    QC::new(q_int(n), Q::zero())
}

pub fn qc_is_real(z: &QC) -> bool {
    z.im.is_zero()
}

/// Displays a rational as `p/q` or `p`.
pub fn q_display(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn q_abs(x: &Q) -> Q {
    x.abs()
}

/// Minimum-norm least-squares solution of `Ax ≈ b` (singular values below
/// `eps` relative to the largest are dropped) and the residual `‖Ax − b‖₂`.
pub fn least_squares(a: &DMatrix<C64>, b: &DVector<C64>, eps: f64) -> (DVector<C64>, f64) {
    if a.ncols() == 0 || a.nrows() == 0 {
        return (DVector::zeros(a.ncols()), b.norm());
    }
    let svd = a.clone().svd(true, true);
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let x = svd.solve(b, eps * top.max(1.0)).expect("u and v were computed");
    let r = (a * &x - b).norm();
    (x, r)
}
