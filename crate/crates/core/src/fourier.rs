//! Finite Fourier series `∑ a_p L_p` over the free semigroupoid.
//!
//! Products are computed on words, so they are exact and independent of any
//! truncation depth.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::graph::DirectedMultigraph;
use crate::path::{compose, Path};

pub type C64 = Complex64;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct FourierSeries {
    terms: BTreeMap<Path, C64>,
}

impl FourierSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(p: Path, c: C64) -> Self {
        let mut s = Self::zero();
        s.add_term(p, c);
        s
    }

    /// `∑_v c L_v`.
    pub fn scalar(g: &DirectedMultigraph, c: C64) -> Self {
        let mut s = Self::zero();
        for v in 0..g.vertex_count() {
            s.add_term(Path::vertex(v), c);
        }
        s
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Path, C64)>) -> Self {
        let mut s = Self::zero();
        for (p, c) in terms {
            s.add_term(p, c);
        }
        s
    }

    /// Adds `c` to the coefficient of `p`; exact zeros are dropped.
    pub fn add_term(&mut self, p: Path, c: C64) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(p) {
            Entry::Vacant(slot) => {
                if c != C64::default() {
                    slot.insert(c);
                }
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if *slot.get() == C64::default() {
                    slot.remove();
                }
            }
        }
    }

    pub fn coefficient(&self, p: &Path) -> C64 {
        self.terms.get(p).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Path, &C64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Longest path in the support, `None` for the zero series.
    pub fn max_len(&self) -> Option<usize> {
        self.terms.keys().map(Path::len).max()
    }

    pub fn min_len(&self) -> Option<usize> {
        self.terms.keys().map(Path::len).min()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::from_terms(self.terms.iter().map(|(p, a)| (p.clone(), a * c)))
    }

    /// `(∑ a_p L_p)(∑ b_q L_q) = ∑ a_p b_q L_{pq}`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                if let Some(pq) = compose(p, q) {
                    out.add_term(pq, a * b);
                }
            }
        }
        out
    }

    /// Keeps the terms whose path satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Path) -> bool) -> Self {
        Self { terms: self.terms.iter().filter(|(p, _)| keep(p)).map(|(p, c)| (p.clone(), *c)).collect() }
    }

    /// Drops coefficients of modulus at most `tol`.
    pub fn prune(&self, tol: f64) -> Self {
        Self { terms: self.terms.iter().filter(|(_, c)| c.norm() > tol).map(|(p, c)| (p.clone(), *c)).collect() }
    }

    /// Largest coefficient modulus of `self − other`.
    pub fn max_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for (p, c) in &self.terms {
            worst = worst.max((c - other.coefficient(p)).norm());
        }
        for (p, c) in &other.terms {
            if !self.terms.contains_key(p) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }

    /// `ℓ¹` norm of the coefficients; an upper bound for the operator norm.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `L_x A L_y`.
    pub fn corner(&self, range: usize, source: usize) -> Self {
        self.filter(|p| p.range() == range && p.source() == source)
    }

    pub fn display(&self, g: &DirectedMultigraph) -> Vec<(String, C64)> {
        self.terms.iter().map(|(p, c)| (p.display(g), *c)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::free_semigroup;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn algebra() {
        let g = free_semigroup(2);
        let a = FourierSeries::monomial(Path::edge(&g, 0), c(2.0));
        let b = FourierSeries::monomial(Path::edge(&g, 1), c(3.0));
        let ab = a.mul(&b);
        assert_eq!(ab.coefficient(&Path::from_edges(&g, &[0, 1]).unwrap()), c(6.0));
        assert!(a.sub(&a).is_zero());
        let one = FourierSeries::scalar(&g, c(1.0));
        assert_eq!(one.mul(&ab), ab);
        assert_eq!(ab.mul(&one), ab);
    }

    #[test]
    fn cancellation_removes_terms() {
        let g = free_semigroup(1);
        let mut s = FourierSeries::monomial(Path::edge(&g, 0), c(1.0));
        s.add_term(Path::vertex(0), c(4.0));
        s.add_term(Path::edge(&g, 0), c(-1.0));
        assert_eq!(s.len(), 1);
    }
}
