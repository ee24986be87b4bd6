//! Out-trees embed in upper-triangular matrices.

use nalgebra::DMatrix;

use super::FockOperator;
use crate::error::{Error, Result};
use crate::fourier::C64;

/// Maps `∑ a_p L_p` to `∑ a_p E_{r(p) s(p)}`, with vertices ordered so that
/// every edge runs from a later index to an earlier one (the root is last).
/// Returns the matrix and the vertex order.
pub fn ut_embed(a: &FockOperator) -> Result<(DMatrix<C64>, Vec<usize>)> {
    let g = a.basis().graph();
    if g.out_tree_root().is_none() {
        return Err(Error::Precondition("ut_embed needs an out-tree".into()));
    }
    let longest = g.longest_path().expect("trees have no circles");
    if a.depth() < longest {
        return Err(Error::Window(format!("depth {} is below the longest path {longest}", a.depth())));
    }
    let mut order = g.topological_order().expect("trees have no circles");
    order.reverse();
    let mut position = vec![0; g.vertex_count()];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let n = g.vertex_count();
    let mut m = DMatrix::zeros(n, n);
    for (p, c) in a.fourier()?.iter() {
        m[(position[p.range()], position[p.source()])] += *c;
    }
    Ok((m, order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph_text;
    use crate::path::{Path, PathBasis};

    #[test]
    fn single_edge() {
        let g = parse_graph_text("vertex root\nvertex leaf\nedge e: root -> leaf").unwrap();
        let b = PathBasis::enumerate(&g, 1).unwrap();
        let (m, order) = ut_embed(&FockOperator::left(&b, &Path::edge(&g, 0)).unwrap()).unwrap();
        assert_eq!(order, vec![1, 0]);
        assert_eq!(m[(0, 1)], C64::new(1.0, 0.0));
        assert_eq!(m.iter().filter(|c| c.norm() > 0.0).count(), 1);
        let (id, _) = ut_embed(&FockOperator::identity(&b)).unwrap();
        assert_eq!(id, DMatrix::identity(2, 2));
    }
}
