//! The field-model symplectic spread: on GF(q^e)^2 with the form
//! Tr(x1 y2 - x2 y1), the subspaces {(x, mx)} for m in GF(q^e) together with
//! {(0, y)} are totally isotropic and partition the nonzero vectors.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::poly;
use crate::gf::{FieldElement, FieldSpec};
use crate::projgeom::forms::Polarity;
use crate::projgeom::linalg::{self, Matrix};
use crate::projgeom::{PointId, ProjectiveSpace, Subspace, SymplecticForm};
use crate::spgraph::Graph;

#[derive(Clone, Debug, Serialize)]
pub struct SymplecticSpread {
    pub q: usize,
    pub e: usize,
    /// Member subspaces in standard-form coordinates.
    pub members: Vec<Subspace>,
    /// Point sets of the members, each sorted.
    pub member_points: Vec<Vec<PointId>>,
    /// Rows map field-model coordinates to standard-form coordinates
    /// (`w_std = w_model * base_change`).
    pub base_change: Matrix,
}

/// Matrix of multiplication by `a` on GF(q^e) = GF(q)[x]/(f), in the basis
/// 1, x, ..., x^(e-1), acting on row vectors.
fn mult_matrix(f: &FieldSpec, modulus: &[FieldElement], a: &[FieldElement]) -> Matrix {
    let e = modulus.len() - 1;
    (0..e)
        .map(|i| {
            let mut xi = vec![FieldElement::ZERO; i + 1];
            xi[i] = FieldElement::ONE;
            let mut r = poly::rem(f, &poly::mul(f, &xi, a), modulus);
            r.resize(e, FieldElement::ZERO);
            r
        })
        .collect()
}

fn trace(f: &FieldSpec, m: &Matrix) -> FieldElement {
    (0..m.len()).fold(FieldElement::ZERO, |acc, i| f.add(acc, m[i][i]))
}

/// Rows `p_0..p_{2n-1}` with `P G P^T = J` (the standard form).
pub fn symplectic_basis(f: &FieldSpec, gram: &Matrix) -> Result<Matrix> {
    let n = gram.len();
    let b = |u: &[FieldElement], v: &[FieldElement]| linalg::bilinear(f, gram, u, v);
    let mut work = linalg::identity(n);
    let mut out = Vec::with_capacity(n);
    while !work.is_empty() {
        let u = work.remove(0);
        let j = work
            .iter()
            .position(|v| !b(&u, v).is_zero())
            .ok_or_else(|| Error::Domain("form is degenerate".into()))?;
        let mut v = work.remove(j);
        let c = f.inv_nz(b(&u, &v));
        v = linalg::scale(f, c, &v);
        for w in work.iter_mut() {
            let wv = b(w, &v);
            let wu = b(w, &u);
            let t = linalg::sub_vec(f, w, &linalg::scale(f, wv, &u));
            *w = linalg::add_vec(f, &t, &linalg::scale(f, wu, &v));
        }
        out.push(u);
        out.push(v);
    }
    Ok(out)
}

pub fn build_symplectic_spread(e: usize, field: Arc<FieldSpec>) -> Result<SymplecticSpread> {
    if e < 2 {
        return Err(Error::Domain("symplectic spreads need e >= 2".into()));
    }
    let f = &*field;
    let q = f.order();
    let modulus = poly::find_irreducible_over(f, e)?;
    let elements: Vec<Vec<FieldElement>> = (0..q.pow(e as u32))
        .map(|mut m| {
            (0..e)
                .map(|_| {
                    let c = FieldElement::from_raw(m % q);
                    m /= q;
                    c
                })
                .collect()
        })
        .collect();
    // Gram of Tr(x1 y2 - x2 y1) in coordinates (x-coeffs, y-coeffs).
    let mut gram = linalg::zero_matrix(2 * e, 2 * e);
    for i in 0..e {
        for j in 0..e {
            let mut xij = vec![FieldElement::ZERO; i + j + 1];
            xij[i + j] = FieldElement::ONE;
            let t = trace(f, &mult_matrix(f, &modulus, &xij));
            gram[i][e + j] = t;
            gram[e + j][i] = f.neg(t);
        }
    }
    let p = symplectic_basis(f, &gram)?;
    let std_form = SymplecticForm::standard(f, e);
    let check = linalg::mat_mul(f, &linalg::mat_mul(f, &p, &gram), &linalg::transpose(&p));
    if &check != std_form.gram() {
        return Err(Error::Internal("symplectic basis does not reach the standard Gram".into()));
    }
    let base_change = linalg::inverse(f, &p).ok_or_else(|| Error::Internal("singular basis".into()))?;
    let to_std = |rows: Matrix| -> Subspace {
        Subspace::span(f, rows.iter().map(|r| linalg::vec_mat(f, r, &base_change)).collect())
    };
    let mut members = Vec::with_capacity(elements.len() + 1);
    for m in &elements {
        let mm = mult_matrix(f, &modulus, m);
        let rows: Matrix = (0..e)
            .map(|i| {
                let mut r = vec![FieldElement::ZERO; 2 * e];
                r[i] = FieldElement::ONE;
                r[e..].copy_from_slice(&mm[i]);
                r
            })
            .collect();
        members.push(to_std(rows));
    }
    let vertical: Matrix = (0..e)
        .map(|i| {
            let mut r = vec![FieldElement::ZERO; 2 * e];
            r[e + i] = FieldElement::ONE;
            r
        })
        .collect();
    members.push(to_std(vertical));
    let space = ProjectiveSpace::new(2 * e - 1, field.clone())?;
    let member_points = members.iter().map(|s| space.points_of(s)).collect();
    Ok(SymplecticSpread { q, e, members, member_points, base_change })
}

/// Exhaustive certificate: isotropy, disjointness, coverage and the clique
/// condition in `graph` (Sp(2e,q) on the points of `space`).
pub fn verify_symplectic_spread(
    space: &ProjectiveSpace,
    form: &SymplecticForm,
    graph: &Graph,
    members: &[Subspace],
) -> Result<()> {
    let f = space.field();
    let e = space.dim() / 2;
    let q = space.q();
    let expected = q.pow(e as u32) + 1;
    for (i, m) in members.iter().enumerate() {
        if m.rank() != e {
            return Err(Error::cert("dimension", format!("member {i} has rank {}", m.rank())));
        }
        if !m.is_totally_isotropic(f, form) {
            return Err(Error::cert("isotropy", format!("member {i} is not totally isotropic")));
        }
    }
    let mut owner = vec![usize::MAX; space.num_points()];
    for (i, m) in members.iter().enumerate() {
        let pts = space.points_of(m);
        if !graph.is_clique(&pts) {
            return Err(Error::cert("clique", format!("member {i} is not a clique")));
        }
        for p in pts {
            if owner[p] != usize::MAX {
                return Err(Error::cert(
                    "disjointness",
                    format!("point {p} lies on members {} and {i}", owner[p]),
                ));
            }
            owner[p] = i;
        }
    }
    if let Some(p) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(Error::cert("coverage", format!("point {p} is uncovered")));
    }
    if members.len() != expected {
        return Err(Error::cert("size", format!("{} members, expected {expected}", members.len())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spgraph::{build_sp_graph, srg_spectrum, verify_srg};

    fn setup(e: usize, q: u32) -> (SymplecticSpread, ProjectiveSpace, Graph, SymplecticForm) {
        let field = Arc::new(FieldSpec::new(q).unwrap());
        let s = build_symplectic_spread(e, field.clone()).unwrap();
        let (g, space) = build_sp_graph(e, field).unwrap();
        let form = SymplecticForm::standard(space.field(), e);
        (s, space, g, form)
    }

    #[test]
    fn w3_spread() {
        let (s, space, g, form) = setup(2, 3);
        assert_eq!(s.members.len(), 10);
        assert!(s.member_points.iter().all(|m| m.len() == 4));
        verify_symplectic_spread(&space, &form, &g, &s.members).unwrap();
        // Delsarte clique size 1 - k/s = 4
        let sp = srg_spectrum(&verify_srg(&g).unwrap()).unwrap();
        assert_eq!(1 - sp.k / sp.s, 4);
    }

    #[test]
    fn sp63_spread() {
        let (s, space, g, form) = setup(3, 3);
        assert_eq!(s.members.len(), 28);
        assert!(s.member_points.iter().all(|m| m.len() == 13));
        verify_symplectic_spread(&space, &form, &g, &s.members).unwrap();
    }

    #[test]
    fn other_fields() {
        for q in [4, 5, 7, 9] {
            let (s, space, g, form) = setup(2, q);
            verify_symplectic_spread(&space, &form, &g, &s.members).unwrap();
        }
    }

    #[test]
    fn negative_controls() {
        let (s, space, g, form) = setup(2, 3);
        let mut missing = s.members.clone();
        missing.pop();
        match verify_symplectic_spread(&space, &form, &g, &missing) {
            Err(Error::Certification { check, .. }) => assert_eq!(check, "coverage"),
            other => panic!("{other:?}"),
        }
        let mut bad = s.members.clone();
        bad[0] = space.line_through(space.id_of_ints(&[1, 0, 0, 0]).unwrap(), space.id_of_ints(&[0, 1, 0, 0]).unwrap()).unwrap();
        match verify_symplectic_spread(&space, &form, &g, &bad) {
            Err(Error::Certification { check, .. }) => assert_eq!(check, "isotropy"),
            other => panic!("{other:?}"),
        }
    }
}
