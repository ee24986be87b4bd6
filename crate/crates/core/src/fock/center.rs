//! Commutation with every generator, on the inputs where truncation is harmless.

use super::{CreationKind, FockOperator};
use crate::error::{Error, Result};
use crate::path::Path;

#[derive(Clone, Debug, PartialEq)]
pub struct CenterTest {
    pub central: bool,
    /// Largest commutator norm over the generators.
    pub residual: f64,
    /// Largest input length used.
    pub window: i64,
}

pub fn center_test(a: &FockOperator, tol: f64) -> Result<CenterTest> {
    let basis = a.basis();
    let g = basis.graph();
    let n = basis.depth() as i64;
    let mut gens = Vec::new();
    for v in 0..g.vertex_count() {
        gens.push(FockOperator::creation(basis, CreationKind::VertexProj, &Path::vertex(v))?);
    }
    if basis.depth() >= 1 {
        for e in 0..g.edge_count() {
            gens.push(FockOperator::left(basis, &Path::edge(g, e))?);
        }
    }
    let comms = gens.iter().map(|l| a.commutator(l)).collect::<Result<Vec<_>>>()?;
    let mut window = n - a.window().max_shift.max(0) - 1;
    for c in &comms {
        window = window.min(c.window().exact);
    }
    if window < 0 {
        return Err(Error::Window("no degree-safe inputs for the commutator".into()));
    }
    let residual = comms.iter().map(|c| c.norm_on_inputs(window)).fold(0.0, f64::max);
    Ok(CenterTest { central: residual <= tol, residual, window })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{FourierSeries, C64};
    use crate::graph::circle;
    use crate::path::PathBasis;

    #[test]
    fn circle_center() {
        let g = circle(3);
        let b = PathBasis::enumerate(&g, 8).unwrap();
        let one = C64::new(1.0, 0.0);
        let c = |j: usize| Path::from_edges(&g, &[j % 3, (j + 1) % 3, (j + 2) % 3]).unwrap();
        let sum = FourierSeries::from_terms((0..3).map(|j| (c(j), one)));
        let t = center_test(&FockOperator::from_fourier(&b, &sum).unwrap(), 1e-12).unwrap();
        assert!(t.central);
        assert_eq!(t.residual, 0.0);
        let single = FockOperator::from_fourier(&b, &FourierSeries::monomial(c(0), one)).unwrap();
        assert!(!center_test(&single, 1e-12).unwrap().central);
        assert!(center_test(&FockOperator::identity(&b), 0.0).unwrap().central);
    }
}
