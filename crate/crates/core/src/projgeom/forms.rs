use serde::Serialize;

use super::linalg::{self, Matrix};
use super::{PointId, ProjectiveSpace, Subspace};
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};

/// Anything that defines a polarity through a Gram matrix.
pub trait Polarity {
    fn gram(&self) -> &Matrix;
    fn check_nondegenerate(&self, f: &FieldSpec) -> Result<()> {
        let n = self.gram().len();
        if linalg::rank(f, self.gram()) == n {
            Ok(())
        } else {
            Err(Error::Domain("form is degenerate".into()))
        }
    }
}

/// Alternating nondegenerate bilinear form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymplecticForm {
    gram: Matrix,
}

impl SymplecticForm {
    /// `B(x,y) = x0 y1 - x1 y0 + x2 y3 - x3 y2 + ...` on a 2e-dimensional space.
    pub fn standard(f: &FieldSpec, e: usize) -> Self {
        let mut gram = linalg::zero_matrix(2 * e, 2 * e);
        for i in 0..e {
            gram[2 * i][2 * i + 1] = FieldElement::ONE;
            gram[2 * i + 1][2 * i] = f.neg(FieldElement::ONE);
        }
        SymplecticForm { gram }
    }

    pub fn new(f: &FieldSpec, gram: Matrix) -> Result<Self> {
        let n = gram.len();
        if !n.is_multiple_of(2) || gram.iter().any(|r| r.len() != n) {
            return Err(Error::Validation("symplectic Gram must be square of even size".into()));
        }
        for i in 0..n {
            if !gram[i][i].is_zero() {
                return Err(Error::Domain(format!("Gram diagonal entry {i} is nonzero")));
            }
            for j in 0..n {
                if gram[i][j] != f.neg(gram[j][i]) {
                    return Err(Error::Domain(format!("Gram not skew at ({i},{j})")));
                }
            }
        }
        if linalg::rank(f, &gram) != n {
            return Err(Error::Domain("symplectic Gram is singular".into()));
        }
        Ok(SymplecticForm { gram })
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    #[inline]
    pub fn eval(&self, f: &FieldSpec, u: &[FieldElement], v: &[FieldElement]) -> FieldElement {
        linalg::bilinear(f, &self.gram, u, v)
    }
}

impl Polarity for SymplecticForm {
    fn gram(&self) -> &Matrix {
        &self.gram
    }
    fn check_nondegenerate(&self, _f: &FieldSpec) -> Result<()> {
        Ok(())
    }
}

/// `Q(v) = sum_{i<=j} a_ij v_i v_j`, stored as an upper-triangular matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticForm {
    coeffs: Matrix,
    /// Polarization `B(u,v) = Q(u+v) - Q(u) - Q(v)`.
    #[serde(skip)]
    gram: Matrix,
}

impl QuadraticForm {
    pub fn new(f: &FieldSpec, coeffs: Matrix) -> Result<Self> {
        let n = coeffs.len();
        if coeffs.iter().any(|r| r.len() != n) {
            return Err(Error::Validation("coefficient matrix must be square".into()));
        }
        let mut upper = linalg::zero_matrix(n, n);
        for i in 0..n {
            for j in 0..n {
                if j < i {
                    // fold the lower triangle into the upper one
                    upper[j][i] = f.add(upper[j][i], coeffs[i][j]);
                } else {
                    upper[i][j] = f.add(upper[i][j], coeffs[i][j]);
                }
            }
        }
        let mut gram = linalg::zero_matrix(n, n);
        for i in 0..n {
            gram[i][i] = f.add(upper[i][i], upper[i][i]);
            for j in i + 1..n {
                gram[i][j] = upper[i][j];
                gram[j][i] = upper[i][j];
            }
        }
        Ok(QuadraticForm { coeffs: upper, gram })
    }

    /// Builds from `(i, j, a_ij)` triples.
    pub fn from_terms(f: &FieldSpec, n: usize, terms: &[(usize, usize, i64)]) -> Self {
        let mut c = linalg::zero_matrix(n, n);
        for &(i, j, a) in terms {
            let (i, j) = if i <= j { (i, j) } else { (j, i) };
            c[i][j] = f.add(c[i][j], f.from_int(a));
        }
        Self::new(f, c).expect("square by construction")
    }

    /// `X0 X1 + X2 X3 + ... + X_{2m-2} X_{2m-1}`.
    pub fn hyperbolic(f: &FieldSpec, m: usize) -> Self {
        let terms: Vec<_> = (0..m).map(|i| (2 * i, 2 * i + 1, 1)).collect();
        Self::from_terms(f, 2 * m, &terms)
    }

    /// `X0 X1 + ... + X_{2m-2} X_{2m-1} + X_{2m}^2`.
    pub fn parabolic(f: &FieldSpec, m: usize) -> Self {
        let mut terms: Vec<_> = (0..m).map(|i| (2 * i, 2 * i + 1, 1)).collect();
        terms.push((2 * m, 2 * m, 1));
        Self::from_terms(f, 2 * m + 1, &terms)
    }

    /// `X0 X1 + X2^2 + a X2 X3 + b X3^2` with the lexicographically least
    /// `(a, b)` making `X^2 + aX + b` irreducible.
    pub fn elliptic3(f: &FieldSpec) -> Self {
        let (a, b) = elliptic_coefficients(f);
        let mut c = linalg::zero_matrix(4, 4);
        c[0][1] = FieldElement::ONE;
        c[2][2] = FieldElement::ONE;
        c[2][3] = a;
        c[3][3] = b;
        Self::new(f, c).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &Matrix {
        &self.coeffs
    }

    pub fn eval(&self, f: &FieldSpec, v: &[FieldElement]) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        for (i, row) in self.coeffs.iter().enumerate() {
            if v[i].is_zero() {
                continue;
            }
            let mut s = FieldElement::ZERO;
            for j in i..row.len() {
                s = f.add(s, f.mul(row[j], v[j]));
            }
            acc = f.add(acc, f.mul(v[i], s));
        }
        acc
    }

    pub fn bilinear(&self, f: &FieldSpec, u: &[FieldElement], v: &[FieldElement]) -> FieldElement {
        linalg::bilinear(f, &self.gram, u, v)
    }

    pub fn scaled(&self, f: &FieldSpec, c: FieldElement) -> Self {
        let coeffs = self.coeffs.iter().map(|r| linalg::scale(f, c, r)).collect();
        Self::new(f, coeffs).unwrap()
    }

    /// The form induced on the span of `basis`, in the coordinates of `basis`.
    pub fn restrict(&self, f: &FieldSpec, basis: &Matrix) -> Self {
        let r = basis.len();
        let mut c = linalg::zero_matrix(r, r);
        for i in 0..r {
            c[i][i] = self.eval(f, &basis[i]);
            for j in i + 1..r {
                c[i][j] = self.bilinear(f, &basis[i], &basis[j]);
            }
        }
        Self::new(f, c).unwrap()
    }

    pub fn is_singular_point(&self, f: &FieldSpec, v: &[FieldElement]) -> bool {
        self.eval(f, v).is_zero()
    }

    /// Zero set in a projective space whose vector dimension matches.
    pub fn points(&self, space: &ProjectiveSpace) -> Vec<PointId> {
        let f = space.field();
        (0..space.num_points()).filter(|&p| self.eval(f, space.coords(p)).is_zero()).collect()
    }

    /// True if some nonzero vector of the radical of the polarization is
    /// singular, i.e. the quadric is a cone.
    pub fn is_degenerate(&self, f: &FieldSpec) -> bool {
        let n = self.dim();
        let rad = linalg::nullspace(f, &self.gram, n);
        if rad.is_empty() {
            return false;
        }
        if f.is_odd() {
            return true;
        }
        let q = f.order();
        let r = rad.len();
        (1..q.pow(r as u32)).any(|m| {
            let mut t = m;
            let coeff: Vec<FieldElement> = (0..r)
                .map(|_| {
                    let c = FieldElement::from_raw(t % q);
                    t /= q;
                    c
                })
                .collect();
            let v = linalg::vec_mat(f, &coeff, &rad);
            self.eval(f, &v).is_zero()
        })
    }
}

impl Polarity for QuadraticForm {
    fn gram(&self) -> &Matrix {
        &self.gram
    }
}

/// Lexicographically least `(a, b)` with `X^2 + aX + b` irreducible over `f`.
pub fn elliptic_coefficients(f: &FieldSpec) -> (FieldElement, FieldElement) {
    for a in f.elements() {
        for b in f.elements() {
            if f.elements().all(|x| !f.add(f.add(f.mul(x, x), f.mul(a, x)), b).is_zero()) {
                return (a, b);
            }
        }
    }
    unreachable!("every finite field has an irreducible quadratic")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum QuadricType {
    Parabolic,
    Hyperbolic,
    Elliptic,
    Conic,
    Singular,
}

/// Classifies the quadric of `form` in `space` by its exact point count.
pub fn quadric_type(form: &QuadraticForm, space: &ProjectiveSpace) -> Result<QuadricType> {
    let f = space.field();
    if form.dim() != space.dim() {
        return Err(Error::Validation("form and space dimensions differ".into()));
    }
    if form.is_degenerate(f) {
        return Ok(QuadricType::Singular);
    }
    let count = form.points(space).len() as u64;
    let q = space.q() as u64;
    let n = space.n() as u32;
    let expected = |t: QuadricType| -> u64 {
        match t {
            QuadricType::Hyperbolic => {
                let m = n.div_ceil(2);
                (q.pow(m) - 1) * (q.pow(m - 1) + 1) / (q - 1)
            }
            QuadricType::Elliptic => {
                let m = n.div_ceil(2);
                (q.pow(m) + 1) * (q.pow(m - 1) - 1) / (q - 1)
            }
            _ => (q.pow(n) - 1) / (q - 1),
        }
    };
    let found = if n % 2 == 1 {
        [QuadricType::Hyperbolic, QuadricType::Elliptic]
            .into_iter()
            .find(|&t| expected(t) == count)
    } else {
        let t = if n == 2 { QuadricType::Conic } else { QuadricType::Parabolic };
        (expected(t) == count).then_some(t)
    };
    found.ok_or_else(|| {
        Error::Internal(format!("nondegenerate quadric in PG({n},{q}) with {count} points"))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LineClass {
    Tangent,
    Secant,
    External,
}

pub fn line_class(space: &ProjectiveSpace, line: &Subspace, form: &QuadraticForm) -> LineClass {
    let f = space.field();
    let mut on = 0;
    space.for_each_point_of(line, |p| {
        if form.eval(f, space.coords(p)).is_zero() {
            on += 1;
        }
    });
    match on {
        0 => LineClass::External,
        2 => LineClass::Secant,
        _ => LineClass::Tangent,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ConicPointClass {
    Interior,
    Exterior,
    On,
}

/// Position of a point relative to a conic of PG(2,q), q odd.
pub fn conic_point_class(
    plane: &ProjectiveSpace,
    x: PointId,
    conic: &QuadraticForm,
) -> Result<ConicPointClass> {
    let f = plane.field();
    if !f.is_odd() {
        return Err(Error::Domain("interior/exterior points need q odd".into()));
    }
    if plane.n() != 2 || conic.dim() != 3 {
        return Err(Error::Validation("conic_point_class works in PG(2,q)".into()));
    }
    if conic.eval(f, plane.coords(x)).is_zero() {
        return Ok(ConicPointClass::On);
    }
    let polar = Subspace::span(f, vec![plane.coords(x).to_vec()]).perp(f, conic)?;
    match line_class(plane, &polar, conic) {
        LineClass::External => Ok(ConicPointClass::Interior),
        LineClass::Secant => Ok(ConicPointClass::Exterior),
        LineClass::Tangent => Err(Error::Internal("polar of an off-conic point is tangent".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn space(n: usize, q: u32) -> ProjectiveSpace {
        ProjectiveSpace::new(n, Arc::new(FieldSpec::new(q).unwrap())).unwrap()
    }

    #[test]
    fn quadric_types_and_counts() {
        let s5 = space(5, 3);
        let h = QuadraticForm::hyperbolic(s5.field(), 3);
        assert_eq!(quadric_type(&h, &s5).unwrap(), QuadricType::Hyperbolic);
        assert_eq!(h.points(&s5).len(), 130);

        let s3 = space(3, 3);
        let e = QuadraticForm::elliptic3(s3.field());
        assert_eq!(quadric_type(&e, &s3).unwrap(), QuadricType::Elliptic);
        assert_eq!(e.points(&s3).len(), 10);

        let s4 = space(4, 3);
        let p = QuadraticForm::parabolic(s4.field(), 2);
        assert_eq!(quadric_type(&p, &s4).unwrap(), QuadricType::Parabolic);
        assert_eq!(p.points(&s4).len(), 40);

        let s2 = space(2, 5);
        let c = QuadraticForm::parabolic(s2.field(), 1);
        assert_eq!(quadric_type(&c, &s2).unwrap(), QuadricType::Conic);

        let cone = QuadraticForm::from_terms(s3.field(), 4, &[(0, 1, 1), (2, 2, 1)]);
        assert_eq!(quadric_type(&cone, &s3).unwrap(), QuadricType::Singular);
    }

    #[test]
    fn closed_form_counts_over_several_fields() {
        for q in [3u32, 5, 7, 9] {
            let s3 = space(3, q);
            let qq = q as usize;
            let f = s3.field();
            assert_eq!(QuadraticForm::hyperbolic(f, 2).points(&s3).len(), (qq + 1).pow(2));
            assert_eq!(QuadraticForm::elliptic3(f).points(&s3).len(), qq * qq + 1);
            let s4 = space(4, q);
            assert_eq!(
                QuadraticForm::parabolic(s4.field(), 2).points(&s4).len(),
                (qq + 1) * (qq * qq + 1)
            );
        }
    }

    #[test]
    fn polarization_matches_definition() {
        let s = space(4, 5);
        let f = s.field();
        let form = QuadraticForm::from_terms(f, 5, &[(0, 1, 1), (2, 3, 2), (4, 4, 3), (0, 4, 1)]);
        for a in (0..s.num_points()).step_by(13) {
            for b in (0..s.num_points()).step_by(17) {
                let u = s.coords(a);
                let v = s.coords(b);
                let sum = linalg::add_vec(f, u, v);
                let expect = f.sub(f.sub(form.eval(f, &sum), form.eval(f, u)), form.eval(f, v));
                assert_eq!(form.bilinear(f, u, v), expect);
            }
        }
    }

    #[test]
    fn conic_interior_exterior_counts() {
        for q in [3u32, 5, 7] {
            let s = space(2, q);
            let c = QuadraticForm::parabolic(s.field(), 1);
            let mut counts = [0usize; 3];
            for x in 0..s.num_points() {
                let i = match conic_point_class(&s, x, &c).unwrap() {
                    ConicPointClass::Interior => 0,
                    ConicPointClass::Exterior => 1,
                    ConicPointClass::On => 2,
                };
                counts[i] += 1;
            }
            let q = q as usize;
            assert_eq!(counts, [q * (q - 1) / 2, q * (q + 1) / 2, q + 1]);
        }
    }

    #[test]
    fn exterior_points_have_two_tangents() {
        let s = space(2, 3);
        let f = s.field();
        let c = QuadraticForm::parabolic(f, 1);
        for x in 0..s.num_points() {
            if conic_point_class(&s, x, &c).unwrap() != ConicPointClass::Exterior {
                continue;
            }
            let tangents = (0..s.num_points())
                .filter(|&y| y != x)
                .map(|y| s.line_through(x, y).unwrap())
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .filter(|l| line_class(&s, l, &c) == LineClass::Tangent)
                .count();
            assert_eq!(tangents, 2);
        }
    }

    #[test]
    fn symplectic_isotropy_examples() {
        let s = space(3, 3);
        let f = s.field();
        let j = SymplecticForm::standard(f, 2);
        let l1 = Subspace::span(f, vec![s.coords(s.id_of_ints(&[1, 0, 0, 0]).unwrap()).to_vec(), s.coords(s.id_of_ints(&[0, 0, 1, 0]).unwrap()).to_vec()]);
        assert!(l1.is_totally_isotropic(f, &j));
        let l2 = s.line_through(s.id_of_ints(&[1, 0, 0, 0]).unwrap(), s.id_of_ints(&[0, 1, 0, 0]).unwrap()).unwrap();
        assert!(!l2.is_totally_isotropic(f, &j));
        let iso = s.lines().iter().filter(|l| l.is_totally_isotropic(f, &j)).count();
        assert_eq!(iso, 40);
    }

    #[test]
    fn polarity_is_an_involution_with_dimension_law() {
        for q in [3u32, 5, 7] {
            let s = space(3, q);
            let f = s.field();
            let j = SymplecticForm::standard(f, 2);
            for l in s.lines() {
                let lp = l.perp(f, &j).unwrap();
                assert_eq!(l.projdim() + lp.projdim(), 2);
                assert_eq!(lp.perp(f, &j).unwrap(), l);
                if !l.is_totally_isotropic(f, &j) {
                    assert_eq!(l.meet(f, &lp).rank(), 0);
                }
            }
            for x in 0..s.num_points() {
                let p = s.subspace_of_points(&[x]);
                assert!(p.perp(f, &j).unwrap().contains(f, &p));
            }
        }
    }

    #[test]
    fn degenerate_quadratic_form_has_no_polarity() {
        let s = space(3, 3);
        let f = s.field();
        let cone = QuadraticForm::from_terms(f, 4, &[(0, 1, 1)]);
        let p = s.subspace_of_points(&[0]);
        assert!(matches!(p.perp(f, &cone), Err(Error::Domain(_))));
    }
}
