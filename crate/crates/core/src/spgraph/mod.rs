//! Symplectic graphs, strong regularity certificates and exact eigenfunctions.

mod graph;
pub mod graph6;
mod srg;

use std::sync::Arc;

use serde::Serialize;

pub use graph::{iter_bits, Graph, GraphSummary};
pub use srg::{srg_spectrum, verify_srg, SpectrumReport, SrgParams};

use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::projgeom::forms::Polarity;
use crate::projgeom::{linalg, ProjectiveSpace, SymplecticForm};

/// Sp(2e,q): the points of PG(2e-1,q), adjacent when distinct and orthogonal
/// under the standard symplectic form. Vertex `i` is point `i`.
pub fn build_sp_graph(e: usize, field: Arc<FieldSpec>) -> Result<(Graph, ProjectiveSpace)> {
    if e < 2 {
        return Err(Error::Domain("Sp(2e,q) needs e >= 2".into()));
    }
    let space = ProjectiveSpace::new(2 * e - 1, field)?;
    let g = sp_graph_on(&space, &SymplecticForm::standard(space.field(), e));
    Ok((g, space))
}

/// Orthogonality graph of a symplectic form on the points of `space`.
pub fn sp_graph_on(space: &ProjectiveSpace, form: &SymplecticForm) -> Graph {
    let f = space.field();
    let n = space.num_points();
    let images: Vec<_> =
        (0..n).map(|p| linalg::vec_mat(f, space.coords(p), form.gram())).collect();
    Graph::from_fn(n, |i, j| linalg::dot(f, &images[i], space.coords(j)).is_zero())
}

/// An integer vector on the vertices with a claimed eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenFunction {
    pub values: Vec<i64>,
    pub theta: i64,
}

impl EigenFunction {
    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| self.values[i] != 0).collect()
    }
}

/// Exact check of `theta f(u) = sum over neighbours w of f(w)` at every vertex.
pub fn check_eigenfunction(g: &Graph, f: &EigenFunction) -> Result<bool> {
    if f.values.len() != g.n() {
        return Err(Error::Validation("eigenfunction length differs from vertex count".into()));
    }
    if f.values.iter().all(|&x| x == 0) {
        return Err(Error::Domain("the zero vector is not an eigenfunction".into()));
    }
    Ok((0..g.n()).all(|u| {
        let s: i64 = g.neighbors(u).map(|w| f.values[w]).sum();
        s == f.theta * f.values[u]
    }))
}

/// `+1` on `l`, `-1` on `l_perp`, zero elsewhere, with eigenvalue `-|l|`.
/// The two sets must be disjoint and completely joined in `g`.
pub fn build_pair_eigenfunction(g: &Graph, l: &[usize], l_perp: &[usize]) -> Result<EigenFunction> {
    if l.is_empty() || l.len() != l_perp.len() {
        return Err(Error::Domain("halves must be nonempty and of equal size".into()));
    }
    for &a in l {
        for &b in l_perp {
            if a == b || !g.has_edge(a, b) {
                return Err(Error::Domain(format!("vertices {a} and {b} are not orthogonal")));
            }
        }
    }
    let mut values = vec![0i64; g.n()];
    for &a in l {
        values[a] = 1;
    }
    for &b in l_perp {
        values[b] = -1;
    }
    Ok(EigenFunction { values, theta: -(l.len() as i64) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(e: usize, q: u32) -> (Graph, ProjectiveSpace) {
        build_sp_graph(e, Arc::new(FieldSpec::new(q).unwrap())).unwrap()
    }

    #[test]
    fn sp_graph_sizes() {
        let (g, _) = sp(2, 3);
        assert_eq!((g.n(), g.regular_degree()), (40, Some(12)));
        let (g, _) = sp(2, 5);
        assert_eq!((g.n(), g.regular_degree()), (156, Some(30)));
    }

    #[test]
    fn sp43_parameters_and_complement() {
        let (g, _) = sp(2, 3);
        let p = verify_srg(&g).unwrap();
        assert_eq!(p, SrgParams::new(40, 12, 2, 4));
        assert_eq!(verify_srg(&g.complement()).unwrap(), SrgParams::new(40, 27, 18, 18));
        let s = srg_spectrum(&p).unwrap();
        assert_eq!((s.r, s.s), (2, -4));
    }

    #[test]
    fn principal_eigenfunction() {
        let (g, _) = sp(2, 3);
        let ones = EigenFunction { values: vec![1; 40], theta: 12 };
        assert!(check_eigenfunction(&g, &ones).unwrap());
        let zero = EigenFunction { values: vec![0; 40], theta: 12 };
        assert!(check_eigenfunction(&g, &zero).is_err());
    }

    #[test]
    fn pair_function_on_a_hyperbolic_pair() {
        let (g, s) = sp(2, 3);
        let f = s.field();
        let j = SymplecticForm::standard(f, 2);
        let l = s.line_through(s.id_of_ints(&[1, 0, 0, 0]).unwrap(), s.id_of_ints(&[0, 1, 0, 0]).unwrap()).unwrap();
        let lp = l.perp(f, &j).unwrap();
        let mut ef = build_pair_eigenfunction(&g, &s.points_of(&l), &s.points_of(&lp)).unwrap();
        assert_eq!(ef.theta, -4);
        assert_eq!(ef.support().len(), 8);
        assert!(check_eigenfunction(&g, &ef).unwrap());
        ef.theta = 4;
        assert!(!check_eigenfunction(&g, &ef).unwrap());
        // a non-orthogonal pair is rejected
        assert!(build_pair_eigenfunction(&g, &s.points_of(&l), &s.points_of(&l)).is_err());
    }
}
