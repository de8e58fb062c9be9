//! Projective spaces PG(n,q), subspaces in reduced echelon form, polarities,
//! quadrics and the Klein correspondence.

pub mod forms;
pub mod klein;
pub mod linalg;

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use linalg::{Matrix, Vector};

pub use forms::{
    conic_point_class, line_class, quadric_type, ConicPointClass, LineClass, QuadraticForm,
    QuadricType, SymplecticForm,
};
pub use klein::{klein_form, klein_inverse, klein_map};

pub type PointId = usize;

/// A point with its normalized coordinates (first nonzero entry is 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ProjPoint {
    pub id: PointId,
    pub coords: Vector,
}

/// PG(n,q) with every point interned.
///
/// Points are listed in increasing order of their normalized coordinate
/// vectors read as base-q numbers with coordinate 0 most significant.
pub struct ProjectiveSpace {
    field: Arc<FieldSpec>,
    n: usize,
    dim: usize,
    coords: Vec<FieldElement>,
    /// Packed vector -> point id. Every nonzero vector maps to its point.
    id_of_packed: Vec<u32>,
}

const NO_POINT: u32 = u32::MAX;

impl std::fmt::Debug for ProjectiveSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PG({},{})", self.n, self.field.q())
    }
}

impl ProjectiveSpace {
    pub fn new(n: usize, field: Arc<FieldSpec>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("PG(0,q) has a single point; n must be >= 1".into()));
        }
        let q = field.order();
        let dim = n + 1;
        let total = q
            .checked_pow(dim as u32)
            .filter(|&t| t <= 1 << 24)
            .ok_or_else(|| Error::Unsupported(format!("PG({n},{q}) too large")))?;
        let mut id_of_packed = vec![NO_POINT; total];
        let mut coords = Vec::new();
        let mut count = 0u32;
        let mut v = vec![FieldElement::ZERO; dim];
        for packed in 1..total {
            let mut r = packed;
            for i in (0..dim).rev() {
                v[i] = FieldElement::from_raw(r % q);
                r /= q;
            }
            if v.iter().find(|c| !c.is_zero()) == Some(&FieldElement::ONE) {
                id_of_packed[packed] = count;
                coords.extend_from_slice(&v);
                count += 1;
            }
        }
        // Fill in the non-normalized multiples.
        for packed in 1..total {
            if id_of_packed[packed] != NO_POINT {
                continue;
            }
            let mut r = packed;
            for i in (0..dim).rev() {
                v[i] = FieldElement::from_raw(r % q);
                r /= q;
            }
            let lead = *v.iter().find(|c| !c.is_zero()).unwrap();
            let inv = field.inv_nz(lead);
            let norm: Vector = v.iter().map(|&c| field.mul(c, inv)).collect();
            id_of_packed[packed] = id_of_packed[Self::pack_with(q, &norm)];
        }
        Ok(ProjectiveSpace { field, n, dim, coords, id_of_packed })
    }

    fn pack_with(q: usize, v: &[FieldElement]) -> usize {
        v.iter().fold(0usize, |acc, c| acc * q + c.index())
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }
    pub fn field_arc(&self) -> &Arc<FieldSpec> {
        &self.field
    }
    /// Projective dimension n.
    pub fn n(&self) -> usize {
        self.n
    }
    /// Vector dimension n+1.
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn q(&self) -> usize {
        self.field.order()
    }
    pub fn num_points(&self) -> usize {
        self.coords.len() / self.dim
    }

    #[inline]
    pub fn coords(&self, id: PointId) -> &[FieldElement] {
        &self.coords[id * self.dim..(id + 1) * self.dim]
    }

    pub fn point(&self, id: PointId) -> ProjPoint {
        ProjPoint { id, coords: self.coords(id).to_vec() }
    }

    /// All points in id order.
    pub fn enumerate_points(&self) -> Vec<ProjPoint> {
        (0..self.num_points()).map(|i| self.point(i)).collect()
    }

    /// Point spanned by `v`, or `None` for the zero vector.
    #[inline]
    pub fn id_of(&self, v: &[FieldElement]) -> Option<PointId> {
        debug_assert_eq!(v.len(), self.dim);
        let id = self.id_of_packed[Self::pack_with(self.q(), v)];
        (id != NO_POINT).then_some(id as usize)
    }

    pub fn id_of_ints(&self, v: &[i64]) -> Option<PointId> {
        let w: Vector = v.iter().map(|&x| self.field.from_int(x)).collect();
        self.id_of(&w)
    }

    pub fn line_through(&self, a: PointId, b: PointId) -> Result<Subspace> {
        if a == b {
            return Err(Error::Degenerate(format!("line through a single point {a}")));
        }
        Ok(Subspace::span(&self.field, vec![self.coords(a).to_vec(), self.coords(b).to_vec()]))
    }

    /// Points of a subspace in increasing id order.
    pub fn points_of(&self, s: &Subspace) -> Vec<PointId> {
        let mut out = Vec::new();
        self.for_each_point_of(s, |p| out.push(p));
        out.sort_unstable();
        out
    }

    pub fn for_each_point_of(&self, s: &Subspace, mut visit: impl FnMut(PointId)) {
        let r = s.rank();
        if r == 0 {
            return;
        }
        let q = self.q();
        let f = &*self.field;
        let mut coeff = vec![FieldElement::ZERO; r];
        let mut v = vec![FieldElement::ZERO; self.dim];
        // coefficient vectors with leading 1, enumerated by leading position
        for lead in 0..r {
            let free = r - lead - 1;
            for m in 0..q.pow(free as u32) {
                coeff.iter_mut().for_each(|c| *c = FieldElement::ZERO);
                coeff[lead] = FieldElement::ONE;
                let mut t = m;
                for c in coeff[lead + 1..].iter_mut() {
                    *c = FieldElement::from_raw(t % q);
                    t /= q;
                }
                v.iter_mut().for_each(|x| *x = FieldElement::ZERO);
                for (c, row) in coeff.iter().zip(&s.basis) {
                    if c.is_zero() {
                        continue;
                    }
                    for (x, &y) in v.iter_mut().zip(row) {
                        *x = f.add(*x, f.mul(*c, y));
                    }
                }
                visit(self.id_of(&v).expect("nonzero combination"));
            }
        }
    }

    pub fn subspace_of_points(&self, pts: &[PointId]) -> Subspace {
        Subspace::span(&self.field, pts.iter().map(|&p| self.coords(p).to_vec()).collect())
    }

    /// All subspaces of vector rank `r`, in a deterministic order (by pivot
    /// set, then by free entries).
    pub fn subspaces(&self, r: usize) -> Vec<Subspace> {
        let mut out = Vec::new();
        let d = self.dim;
        if r == 0 || r > d {
            return out;
        }
        let q = self.q();
        let mut pivots: Vec<usize> = (0..r).collect();
        loop {
            // free positions of each row: columns after its pivot that are not pivots
            let free: Vec<(usize, usize)> = (0..r)
                .flat_map(|i| {
                    let piv = pivots.clone();
                    (pivots[i] + 1..d).filter(move |c| !piv.contains(c)).map(move |c| (i, c))
                })
                .collect();
            let count = q.pow(free.len() as u32);
            for m in 0..count {
                let mut basis = vec![vec![FieldElement::ZERO; d]; r];
                for (i, &p) in pivots.iter().enumerate() {
                    basis[i][p] = FieldElement::ONE;
                }
                let mut t = m;
                for &(i, c) in &free {
                    basis[i][c] = FieldElement::from_raw(t % q);
                    t /= q;
                }
                out.push(Subspace { ambient: d, basis, pivots: pivots.clone() });
            }
            // next combination of pivot positions
            let mut i = r;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if pivots[i] < d - r + i {
                    pivots[i] += 1;
                    for j in i + 1..r {
                        pivots[j] = pivots[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    pub fn lines(&self) -> Vec<Subspace> {
        self.subspaces(2)
    }
}

/// A subspace stored by its reduced row echelon basis, which is canonical:
/// two subspaces are equal iff their bases are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    #[serde(skip)]
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(f: &FieldSpec, vectors: Matrix) -> Subspace {
        let ambient = vectors.first().map_or(0, |v| v.len());
        let mut basis = vectors;
        let pivots = linalg::rref(f, &mut basis);
        Subspace { ambient, basis, pivots }
    }

    pub fn zero(ambient: usize) -> Subspace {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn whole(ambient: usize) -> Subspace {
        Subspace { ambient, basis: linalg::identity(ambient), pivots: (0..ambient).collect() }
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
    /// Projective dimension, -1 for the empty subspace.
    pub fn projdim(&self) -> isize {
        self.rank() as isize - 1
    }

    /// Membership by reduction against the echelon basis.
    pub fn contains_vector(&self, f: &FieldSpec, v: &[FieldElement]) -> bool {
        let mut w = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let c = w[p];
            if !c.is_zero() {
                for (x, &y) in w.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        w.iter().all(|x| x.is_zero())
    }

    pub fn contains(&self, f: &FieldSpec, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains_vector(f, v))
    }

    pub fn join(&self, f: &FieldSpec, other: &Subspace) -> Subspace {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        if rows.is_empty() {
            return Subspace::zero(self.ambient);
        }
        Subspace::span(f, rows)
    }

    /// Annihilator `{y : v . y = 0 for all v in self}`.
    pub fn annihilator(&self, f: &FieldSpec) -> Subspace {
        if self.basis.is_empty() {
            return Subspace::whole(self.ambient);
        }
        let ns = linalg::nullspace(f, &self.basis, self.ambient);
        if ns.is_empty() {
            return Subspace::zero(self.ambient);
        }
        Subspace::span(f, ns)
    }

    pub fn meet(&self, f: &FieldSpec, other: &Subspace) -> Subspace {
        if self.basis.is_empty() || other.basis.is_empty() {
            return Subspace::zero(self.ambient);
        }
        let ann = other.annihilator(f);
        if ann.basis.is_empty() {
            return self.clone();
        }
        // a . (B_self * ann^T) = 0
        let m = linalg::mat_mul(f, &self.basis, &linalg::transpose(&ann.basis));
        let coeffs = linalg::nullspace(f, &linalg::transpose(&m), self.rank());
        if coeffs.is_empty() {
            return Subspace::zero(self.ambient);
        }
        let vecs = coeffs.iter().map(|c| linalg::vec_mat(f, c, &self.basis)).collect();
        Subspace::span(f, vecs)
    }

    /// Polar subspace with respect to a nondegenerate Gram matrix.
    pub fn perp_gram(&self, f: &FieldSpec, gram: &Matrix) -> Subspace {
        if self.basis.is_empty() {
            return Subspace::whole(self.ambient);
        }
        let m = linalg::mat_mul(f, &self.basis, gram);
        let ns = linalg::nullspace(f, &m, self.ambient);
        if ns.is_empty() {
            return Subspace::zero(self.ambient);
        }
        Subspace::span(f, ns)
    }

    pub fn perp(&self, f: &FieldSpec, form: &dyn forms::Polarity) -> Result<Subspace> {
        form.check_nondegenerate(f)?;
        Ok(self.perp_gram(f, form.gram()))
    }

    pub fn is_totally_isotropic(&self, f: &FieldSpec, form: &SymplecticForm) -> bool {
        self.basis.iter().enumerate().all(|(i, u)| {
            self.basis[i + 1..].iter().all(|v| form.eval(f, u, v).is_zero())
        })
    }
}
