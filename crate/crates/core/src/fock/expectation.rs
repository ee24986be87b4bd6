//! Conditional expectation onto the relative commutant of `L_w`.

use super::FockOperator;
use crate::error::{Error, Result};
use crate::path::{commutes_with, Path};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpectationMode {
    /// `L_w^{*k} A L_w^k` as a matrix product.
    FiniteK(usize),
    /// Keeps the Fourier terms `a_p` with `pw = wp`.
    Limit,
}

pub fn conditional_expectation(a: &FockOperator, w: &Path, mode: ExpectationMode) -> Result<FockOperator> {
    if !w.is_circle() {
        return Err(Error::Precondition("conditional expectation needs a circle".into()));
    }
    let basis = a.basis();
    match mode {
        ExpectationMode::Limit => {
            let series = a.fourier()?.filter(|p| commutes_with(p, w));
            FockOperator::from_fourier(basis, &series)
        }
        ExpectationMode::FiniteK(k) => {
            let need = (k * w.len()) as i64 + a.window().max_shift;
            if need > basis.depth() as i64 {
                return Err(Error::Window(format!(
                    "k·ℓ(w) + max shift = {need} exceeds depth {}",
                    basis.depth()
                )));
            }
            let lk = FockOperator::left(basis, &w.power(k))?;
            lk.adjoint().multiply(&a.multiply(&lk)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{FourierSeries, C64};
    use crate::graph::free_semigroup;
    use crate::path::PathBasis;

    #[test]
    fn filter_examples() {
        let g = free_semigroup(2);
        let b = PathBasis::enumerate(&g, 6).unwrap();
        let a = Path::edge(&g, 0);
        let lb = FockOperator::left(&b, &Path::edge(&g, 1)).unwrap();
        let e = conditional_expectation(&lb, &a, ExpectationMode::Limit).unwrap();
        assert_eq!(e.nnz(), 0);
        let la2 = FockOperator::left(&b, &a.power(2)).unwrap();
        let e = conditional_expectation(&la2, &a, ExpectationMode::Limit).unwrap();
        assert_eq!(e.max_diff(&la2), 0.0);
        let id = FockOperator::identity(&b);
        let e = conditional_expectation(&id, &a, ExpectationMode::FiniteK(3)).unwrap();
        assert_eq!(
            e.fourier().unwrap(),
            FourierSeries::monomial(Path::vertex(0), C64::new(1.0, 0.0))
        );
    }

    #[test]
    fn window_is_enforced() {
        let g = free_semigroup(1);
        let b = PathBasis::enumerate(&g, 3).unwrap();
        let la = FockOperator::left(&b, &Path::edge(&g, 0)).unwrap();
        assert!(conditional_expectation(&la, &Path::edge(&g, 0), ExpectationMode::FiniteK(3)).is_err());
    }
}
