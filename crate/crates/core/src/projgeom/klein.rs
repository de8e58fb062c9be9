//! Plücker coordinates. A line spanned by `x`, `y` in PG(3,q) maps to
//! `(p01, p02, p03, p12, p13, p23)` with `p_ij = x_i y_j - x_j y_i`, a point of
//! the Klein quadric `p01 p23 - p02 p13 + p03 p12 = 0` in PG(5,q).

use super::forms::QuadraticForm;
use super::linalg::Vector;
use super::{PointId, ProjectiveSpace, Subspace};
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn klein_form(f: &FieldSpec) -> QuadraticForm {
    QuadraticForm::from_terms(f, 6, &[(0, 5, 1), (1, 4, -1), (2, 3, 1)])
}

pub fn plucker(f: &FieldSpec, x: &[FieldElement], y: &[FieldElement]) -> Vector {
    PAIRS
        .iter()
        .map(|&(i, j)| f.sub(f.mul(x[i], y[j]), f.mul(x[j], y[i])))
        .collect()
}

pub fn klein_map(pg3: &ProjectiveSpace, pg5: &ProjectiveSpace, line: &Subspace) -> Result<PointId> {
    if pg3.n() != 3 || pg5.n() != 5 || line.rank() != 2 {
        return Err(Error::Validation("klein_map takes a line of PG(3,q)".into()));
    }
    let b = line.basis();
    let p = plucker(pg3.field(), &b[0], &b[1]);
    pg5.id_of(&p).ok_or_else(|| Error::Internal("zero Plücker vector".into()))
}

pub fn klein_inverse(pg5: &ProjectiveSpace, x: PointId) -> Result<Subspace> {
    let f = pg5.field();
    let p = pg5.coords(x);
    if !klein_form(f).eval(f, p).is_zero() {
        return Err(Error::Domain(format!("point {x} is off the Klein quadric")));
    }
    // The skew matrix (p_ij) has the line as its row space.
    let mut m = vec![vec![FieldElement::ZERO; 4]; 4];
    for (k, &(i, j)) in PAIRS.iter().enumerate() {
        m[i][j] = p[k];
        m[j][i] = f.neg(p[k]);
    }
    let s = Subspace::span(f, m);
    if s.rank() != 2 {
        return Err(Error::Internal(format!("Plücker matrix of rank {}", s.rank())));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projgeom::SymplecticForm;
    use std::collections::HashSet;
    use std::sync::Arc;

    fn spaces(q: u32) -> (ProjectiveSpace, ProjectiveSpace) {
        let f = Arc::new(FieldSpec::new(q).unwrap());
        (ProjectiveSpace::new(3, f.clone()).unwrap(), ProjectiveSpace::new(5, f).unwrap())
    }

    #[test]
    fn bijection_onto_klein_quadric() {
        for q in [3, 5] {
            let (pg3, pg5) = spaces(q);
            let f = pg3.field();
            let kf = klein_form(f);
            let mut image = HashSet::new();
            for l in pg3.lines() {
                let x = klein_map(&pg3, &pg5, &l).unwrap();
                assert!(kf.eval(f, pg5.coords(x)).is_zero());
                assert_eq!(klein_inverse(&pg5, x).unwrap(), l);
                image.insert(x);
            }
            assert_eq!(image.len(), kf.points(&pg5).len());
        }
    }

    #[test]
    fn isotropic_lines_are_a_hyperplane_section() {
        let (pg3, pg5) = spaces(3);
        let f = pg3.field();
        let j = SymplecticForm::standard(f, 2);
        for l in pg3.lines() {
            let p = pg5.coords(klein_map(&pg3, &pg5, &l).unwrap());
            assert_eq!(l.is_totally_isotropic(f, &j), f.add(p[0], p[5]).is_zero());
        }
    }

    #[test]
    fn meeting_lines_have_orthogonal_images() {
        let (pg3, pg5) = spaces(3);
        let f = pg3.field();
        let kf = klein_form(f);
        let lines = pg3.lines();
        let img: Vec<_> = lines.iter().map(|l| klein_map(&pg3, &pg5, l).unwrap()).collect();
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let meet = lines[i].meet(f, &lines[j]).rank() > 0;
                let orth = kf.bilinear(f, pg5.coords(img[i]), pg5.coords(img[j])).is_zero();
                assert_eq!(meet, orth);
            }
        }
    }

    #[test]
    fn off_quadric_point_rejected() {
        let (_, pg5) = spaces(3);
        let x = pg5.id_of_ints(&[1, 0, 0, 0, 0, 1]).unwrap();
        assert!(matches!(klein_inverse(&pg5, x), Err(Error::Domain(_))));
    }
}
