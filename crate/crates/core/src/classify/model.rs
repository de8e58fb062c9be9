//! The hyperbolic-point model: W(q) read inside the parabolic quadric Q(4,q).
//!
//! Totally isotropic lines of W(q) are the points of the Klein quadric lying
//! in the hyperplane `p0 + p5 = 0` of PG(5,q). Coordinates `y` of PG(4,q)
//! are embedded as `(y0, y1, y2, y3, y4, -y0)`, which turns the Klein form
//! into `-y0^2 - y1 y4 + y2 y3`. A hyperbolic pair U becomes the pole `x_U`
//! of the solid spanned by the images of the (q+1)^2 lines meeting both of
//! its halves.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::projgeom::forms::Polarity;
use crate::projgeom::{
    linalg, quadric_type, PointId, ProjectiveSpace, QuadraticForm, QuadricType, Subspace,
};
use crate::spreads::SymplecticQuadrangle;

/// Position of a pair of distinct hyperbolic points: the class of the line
/// they span and whether they are conjugate under the polarity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PairKind {
    Tangent,
    SecantPerp,
    SecantNonPerp,
    ExternalPerp,
    ExternalNonPerp,
}

impl PairKind {
    pub const ALL: [PairKind; 5] = [
        PairKind::Tangent,
        PairKind::SecantPerp,
        PairKind::SecantNonPerp,
        PairKind::ExternalPerp,
        PairKind::ExternalNonPerp,
    ];
}

/// `R0` is the diagonal; `R1..` index the nonempty pair kinds in the order
/// of [`PairKind::ALL`].
pub type RelationLabel = u8;

pub struct HyperbolicPointModel {
    q: usize,
    pg4: ProjectiveSpace,
    form: QuadraticForm,
    quadric: Vec<PointId>,
    points: Vec<PointId>,
    index: Vec<u32>,
    values: Vec<FieldElement>,
    perp: Vec<BitSet>,
    kinds: Vec<PairKind>,
    relation: Vec<RelationLabel>,
    /// PG(4,q) point of each totally isotropic line of W(q), by line index.
    line_point: Vec<Option<PointId>>,
    point_of_pair: Vec<usize>,
    pair_of_point: Vec<usize>,
}

impl std::fmt::Debug for HyperbolicPointModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "HyperbolicPointModel(q={}, |P|={})", self.q, self.points.len())
    }
}

/// Klein form restricted to `p0 + p5 = 0`.
pub fn parabolic_section_form(f: &FieldSpec) -> QuadraticForm {
    QuadraticForm::from_terms(f, 5, &[(0, 0, -1), (1, 4, -1), (2, 3, 1)])
}

impl HyperbolicPointModel {
    pub fn new(w: &SymplecticQuadrangle) -> Result<Self> {
        let q = w.q();
        if q.is_multiple_of(2) {
            return Err(Error::Domain("the hyperbolic-point model needs q odd".into()));
        }
        let field: Arc<FieldSpec> = w.field_arc().clone();
        let f = &*field;
        let pg4 = ProjectiveSpace::new(4, field.clone())?;
        let pg3 = ProjectiveSpace::new(3, field.clone())?;
        let mut form = parabolic_section_form(f);

        // Scale so that hyperbolic points have square values.
        let probe = (0..pg4.num_points())
            .find(|&p| !form.eval(f, pg4.coords(p)).is_zero())
            .expect("a nondegenerate form has non-singular points");
        let pv = pg4.coords(probe).to_vec();
        let section = Subspace::span(f, vec![pv.clone()]).perp_gram(f, form.gram());
        let t = quadric_type(&form.restrict(f, section.basis()), &pg3)?;
        let square = f.is_square(form.eval(f, &pv))?;
        if (t == QuadricType::Hyperbolic) != square {
            form = form.scaled(f, f.find_nonsquare().expect("q odd"));
        }

        let quadric = form.points(&pg4);
        let values: Vec<FieldElement> =
            (0..pg4.num_points()).map(|p| form.eval(f, pg4.coords(p))).collect();
        let points: Vec<PointId> = (0..pg4.num_points())
            .filter(|&p| !values[p].is_zero() && f.is_square(values[p]).unwrap())
            .collect();
        let expected = q * q * (q * q + 1) / 2;
        if points.len() != expected {
            return Err(Error::Internal(format!("|P_q| = {}, expected {expected}", points.len())));
        }
        let mut index = vec![u32::MAX; pg4.num_points()];
        for (i, &p) in points.iter().enumerate() {
            index[p] = i as u32;
        }
        let values: Vec<FieldElement> = points.iter().map(|&p| values[p]).collect();
        let gram = form.gram().clone();
        let n = points.len();
        let perp: Vec<BitSet> = (0..n)
            .into_par_iter()
            .map(|i| {
                let xi = pg4.coords(points[i]);
                BitSet::from_iter(
                    n,
                    (0..n).filter(|&j| {
                        j != i && linalg::bilinear(f, &gram, xi, pg4.coords(points[j])).is_zero()
                    }),
                )
            })
            .collect();

        let raw: Vec<Option<PairKind>> = (0..n * n)
            .into_par_iter()
            .map(|ij| {
                let (i, j) = (ij / n, ij % n);
                (i != j).then(|| {
                    let b = linalg::bilinear(f, &gram, pg4.coords(points[i]), pg4.coords(points[j]));
                    pair_kind(f, values[i], values[j], b)
                })
            })
            .collect();
        let kinds: Vec<PairKind> =
            PairKind::ALL.into_iter().filter(|k| raw.contains(&Some(*k))).collect();
        let relation = raw
            .iter()
            .map(|r| match r {
                None => 0,
                Some(k) => 1 + kinds.iter().position(|x| x == k).unwrap() as RelationLabel,
            })
            .collect();

        let pg5 = w.pg5();
        let line_point: Vec<Option<PointId>> = (0..w.lines().len())
            .map(|l| {
                w.is_isotropic(l).then(|| {
                    let c = pg5.coords(w.klein_point(l));
                    pg4.id_of(&c[..5]).expect("nonzero by isotropy")
                })
            })
            .collect();

        let mut model = HyperbolicPointModel {
            q,
            pg4,
            form,
            quadric,
            points,
            index,
            values,
            perp,
            kinds,
            relation,
            line_point,
            point_of_pair: Vec::new(),
            pair_of_point: vec![usize::MAX; n],
        };
        let xs = (0..w.all_pairs().len())
            .map(|u| model.compute_x_of_pair(w, u))
            .collect::<Result<Vec<_>>>()?;
        for (u, &x) in xs.iter().enumerate() {
            if model.pair_of_point[x] != usize::MAX {
                return Err(Error::Internal(format!("pairs {} and {u} share x_U", model.pair_of_point[x])));
            }
            model.pair_of_point[x] = u;
        }
        model.point_of_pair = xs;
        Ok(model)
    }

    /// The (q+1)^2 totally isotropic lines meeting both halves of a pair.
    pub fn lines_of_pair(w: &SymplecticQuadrangle, u: usize) -> Vec<usize> {
        let p = &w.all_pairs()[u];
        let mut out: Vec<usize> = w
            .line_points(p.l)
            .iter()
            .flat_map(|&a| w.line_points(p.l_perp).iter().map(move |&b| w.line_of(a, b)))
            .collect();
        out.sort_unstable();
        out
    }

    fn compute_x_of_pair(&self, w: &SymplecticQuadrangle, u: usize) -> Result<usize> {
        let f = self.pg4.field();
        let vecs = Self::lines_of_pair(w, u)
            .into_iter()
            .map(|l| self.pg4.coords(self.line_point[l].expect("isotropic")).to_vec())
            .collect();
        let alpha = Subspace::span(f, vecs);
        if alpha.rank() != 4 {
            return Err(Error::Internal(format!("lines of pair {u} span rank {}", alpha.rank())));
        }
        let pole = alpha.perp_gram(f, self.form.gram());
        let id = self.pg4.id_of(&pole.basis()[0]).unwrap();
        match self.index[id] {
            u32::MAX => Err(Error::Internal(format!("pole of pair {u} is not a hyperbolic point"))),
            i => Ok(i as usize),
        }
    }

    pub fn q(&self) -> usize {
        self.q
    }
    pub fn pg4(&self) -> &ProjectiveSpace {
        &self.pg4
    }
    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }
    /// Points of Q(4,q).
    pub fn quadric(&self) -> &[PointId] {
        &self.quadric
    }
    /// P_q as PG(4,q) point ids; model indices refer to positions here.
    pub fn points(&self) -> &[PointId] {
        &self.points
    }
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
    pub fn index_of(&self, p: PointId) -> Option<usize> {
        match self.index[p] {
            u32::MAX => None,
            i => Some(i as usize),
        }
    }
    /// Value of the form at the stored representative of point `i`.
    pub fn value(&self, i: usize) -> FieldElement {
        self.values[i]
    }
    /// `x^perp` inside P_q.
    pub fn perp(&self, i: usize) -> &BitSet {
        &self.perp[i]
    }
    /// The nonempty pair kinds; label `r` stands for `kinds()[r - 1]`.
    pub fn kinds(&self) -> &[PairKind] {
        &self.kinds
    }
    /// Number of nontrivial relations `i*`.
    pub fn num_relations(&self) -> usize {
        self.kinds.len()
    }
    pub fn label_of(&self, k: PairKind) -> Option<RelationLabel> {
        self.kinds.iter().position(|&x| x == k).map(|i| i as RelationLabel + 1)
    }
    pub fn classify_pair(&self, i: usize, j: usize) -> RelationLabel {
        self.relation[i * self.points.len() + j]
    }
    pub fn kind(&self, i: usize, j: usize) -> Option<PairKind> {
        match self.classify_pair(i, j) {
            0 => None,
            r => Some(self.kinds[r as usize - 1]),
        }
    }
    /// PG(4,q) point of a totally isotropic line of W(q).
    pub fn line_point(&self, l: usize) -> Option<PointId> {
        self.line_point[l]
    }
    /// Model index of `x_U`.
    pub fn x_of_pair(&self, u: usize) -> usize {
        self.point_of_pair[u]
    }
    pub fn pair_of_x(&self, i: usize) -> usize {
        self.pair_of_point[i]
    }

    /// Lines of Q(4,q), as sorted point lists, in lexicographic order.
    pub fn quadric_lines(&self) -> Vec<Vec<PointId>> {
        let f = self.pg4.field();
        let g = self.form.gram();
        let mut lines = std::collections::BTreeSet::new();
        for (i, &a) in self.quadric.iter().enumerate() {
            for &b in &self.quadric[i + 1..] {
                if linalg::bilinear(f, g, self.pg4.coords(a), self.pg4.coords(b)).is_zero() {
                    let l = self.pg4.line_through(a, b).expect("distinct");
                    lines.insert(self.pg4.points_of(&l));
                }
            }
        }
        lines.into_iter().collect()
    }
}

/// Kind of the line through two non-singular points with values `qx`, `qy`
/// and polarization `b`: the binary form `qx s^2 + b s t + qy t^2` has
/// discriminant `b^2 - 4 qx qy`.
fn pair_kind(f: &FieldSpec, qx: FieldElement, qy: FieldElement, b: FieldElement) -> PairKind {
    let four = f.from_int(4);
    let disc = f.sub(f.mul(b, b), f.mul(four, f.mul(qx, qy)));
    let perp = b.is_zero();
    if disc.is_zero() {
        PairKind::Tangent
    } else if f.is_square(disc).unwrap() {
        if perp {
            PairKind::SecantPerp
        } else {
            PairKind::SecantNonPerp
        }
    } else if perp {
        PairKind::ExternalPerp
    } else {
        PairKind::ExternalNonPerp
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projgeom::{line_class, LineClass};

    fn model(q: u32) -> (SymplecticQuadrangle, HyperbolicPointModel) {
        let w = SymplecticQuadrangle::new(q).unwrap();
        let m = HyperbolicPointModel::new(&w).unwrap();
        (w, m)
    }

    #[test]
    fn point_counts_and_sections() {
        for q in [3u32, 5] {
            let (_, m) = model(q);
            let q = q as usize;
            assert_eq!(m.len(), q * q * (q * q + 1) / 2);
            assert_eq!(m.quadric().len(), q * q * q + q * q + q + 1);
            let f = m.pg4().field();
            let on: std::collections::HashSet<_> = m.quadric().iter().copied().collect();
            for i in 0..m.len() {
                let x = m.pg4().coords(m.points()[i]).to_vec();
                let s = Subspace::span(f, vec![x]).perp_gram(f, m.form().gram());
                let cnt = m.pg4().points_of(&s).iter().filter(|p| on.contains(p)).count();
                assert_eq!(cnt, (q + 1) * (q + 1));
            }
        }
    }

    #[test]
    fn x_of_pair_is_a_bijection() {
        for q in [3u32, 5] {
            let (w, m) = model(q);
            let mut seen = vec![false; m.len()];
            for u in 0..w.all_pairs().len() {
                assert_eq!(HyperbolicPointModel::lines_of_pair(&w, u).len(), (q as usize + 1).pow(2));
                let x = m.x_of_pair(u);
                assert!(!seen[x]);
                seen[x] = true;
                assert_eq!(m.pair_of_x(x), u);
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    /// Independent route to x_U: the line through the Klein image of a
    /// hyperbolic half and z = (1,0,0,0,0,1) meets `p0 + p5 = 0` in a point
    /// whose PG(4,q) image is x_U.
    #[test]
    fn x_of_pair_via_klein_projection() {
        let (w, m) = model(3);
        let f = w.field();
        let pg5 = w.pg5();
        for (u, p) in w.all_pairs().iter().enumerate() {
            let k = pg5.coords(w.klein_point(p.l));
            // t = (k0 + k5)/2; k - t z lies in the hyperplane
            let t = f.div(f.add(k[0], k[5]), f.from_int(2)).unwrap();
            let y: Vec<FieldElement> = (0..5).map(|i| if i == 0 { f.sub(k[0], t) } else { k[i] }).collect();
            let id = m.pg4().id_of(&y).unwrap();
            assert_eq!(m.index_of(id), Some(m.x_of_pair(u)));
        }
    }

    #[test]
    fn relation_blocks_match_the_size_formulas() {
        for q in [3usize, 5, 7] {
            let (_, m) = model(q as u32);
            let n = m.len();
            let mut sizes = std::collections::BTreeMap::new();
            for i in 0..n {
                for j in 0..n {
                    if let Some(k) = m.kind(i, j) {
                        *sizes.entry(k).or_insert(0usize) += 1;
                    }
                }
            }
            let h = (q * q * q - q) / 2;
            let get = |k| sizes.get(&k).copied().unwrap_or(0);
            assert_eq!(get(PairKind::Tangent), n * (q - 1) * (q + 1) * (q + 1));
            if q % 4 == 1 {
                assert_eq!(get(PairKind::SecantPerp), n * h);
                assert_eq!(get(PairKind::SecantNonPerp), n * h * (q - 5) / 2);
                assert_eq!(get(PairKind::ExternalPerp), 0);
                assert_eq!(get(PairKind::ExternalNonPerp), n * h * (q - 1) / 2);
            } else {
                assert_eq!(get(PairKind::SecantPerp), 0);
                assert_eq!(get(PairKind::SecantNonPerp), n * h * (q - 3) / 2);
                assert_eq!(get(PairKind::ExternalPerp), n * h);
                assert_eq!(get(PairKind::ExternalNonPerp), n * h * (q - 3) / 2);
            }
            let expected_rel = match q {
                3 => 2,
                5 => 3,
                _ => 4,
            };
            assert_eq!(m.num_relations(), expected_rel);
        }
    }

    #[test]
    fn pair_kinds_agree_with_point_counts_and_conic_sections() {
        let (_, m) = model(3);
        let pg4 = m.pg4();
        let n = m.len();
        let (ext, sec) = (3 * 2 / 2, 3 * 4 / 2);
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (a, b) = (m.points()[i], m.points()[j]);
                let line = pg4.line_through(a, b).unwrap();
                let k = m.kind(i, j).unwrap();
                let lc = line_class(pg4, &line, m.form());
                let common = m.perp(i).intersection_len(m.perp(j));
                match k {
                    PairKind::Tangent => {
                        // the line joins x to a point u of Q with B(x,u) = 0, so
                        // B(x,y) = 2Q(x) and tangent pairs are never conjugate
                        assert_eq!(lc, LineClass::Tangent);
                        assert!(!m.perp(i).contains(j));
                    }
                    PairKind::SecantPerp | PairKind::SecantNonPerp => {
                        assert_eq!(lc, LineClass::Secant);
                        assert_eq!(common, sec);
                    }
                    _ => {
                        assert_eq!(lc, LineClass::External);
                        assert_eq!(common, ext);
                    }
                }
            }
        }
    }

    #[test]
    fn quadric_has_the_expected_lines() {
        for q in [3usize, 5] {
            let (_, m) = model(q as u32);
            let lines = m.quadric_lines();
            assert_eq!(lines.len(), (q + 1) * (q * q + 1));
            assert!(lines.iter().all(|l| l.len() == q + 1));
        }
    }
}
