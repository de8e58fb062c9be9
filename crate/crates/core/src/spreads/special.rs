//! Special spreads: partitions of the points of PG(3,q) into hyperbolic lines,
//! closed under taking polars.
//!
//! The construction works on the Klein quadric Q+(5,q). With the standard
//! symplectic form the totally isotropic lines map to the section of the
//! quadric by `z^perp`, `z = (1,0,0,0,0,1)`. For an elliptic solid `beta`
//! through `z`, put `alpha = beta ∩ z^perp`; then
//! `O = (beta ∩ Q+ \ alpha ∩ Q+) ∪ (alpha^perp ∩ Q+)` is an ovoid of Q+(5,q)
//! avoiding `z^perp`, and its preimage is a special spread.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::quadrangle::SymplecticQuadrangle;
use crate::error::{Error, Result};
use crate::projgeom::forms::Polarity;
use crate::projgeom::{klein_form, klein_inverse, quadric_type, PointId, QuadricType, Subspace};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpecialSpread {
    pub q: usize,
    /// Point sets of the q^2+1 lines; each sorted, and the list sorted.
    pub lines: Vec<Vec<PointId>>,
    /// `pairing[i]` is the index of the partner of line `i`.
    pub pairing: Vec<usize>,
}

impl SpecialSpread {
    /// Spread formed by a set of hyperbolic pairs (indices into `w.all_pairs()`).
    pub fn from_pairs(w: &SymplecticQuadrangle, pairs: &[usize]) -> Self {
        let mut lines: Vec<(Vec<PointId>, usize)> = Vec::with_capacity(pairs.len() * 2);
        for &u in pairs {
            let p = &w.all_pairs()[u];
            lines.push((w.line_points(p.l).to_vec(), p.l_perp));
            lines.push((w.line_points(p.l_perp).to_vec(), p.l));
        }
        Self::from_lines(w, lines.into_iter().map(|(pts, _)| pts).collect())
    }

    /// Builds the pairing from polarity. Lines whose polar is missing are
    /// paired with themselves, which verification rejects.
    pub fn from_lines(w: &SymplecticQuadrangle, mut lines: Vec<Vec<PointId>>) -> Self {
        for l in lines.iter_mut() {
            l.sort_unstable();
        }
        lines.sort();
        let idx: Vec<Option<usize>> = lines.iter().map(|l| w.line_index(l)).collect();
        let pairing = (0..lines.len())
            .map(|i| {
                idx[i]
                    .and_then(|li| {
                        let lp = w.perp_line(li);
                        idx.iter().position(|&x| x == Some(lp))
                    })
                    .unwrap_or(i)
            })
            .collect();
        SpecialSpread { q: w.q(), lines, pairing }
    }

    /// Sorted pair indices, or an error if some line is not paired with its polar.
    pub fn pair_indices(&self, w: &SymplecticQuadrangle) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for (i, &j) in self.pairing.iter().enumerate() {
            if i < j {
                let mut pts = self.lines[i].clone();
                pts.extend_from_slice(&self.lines[j]);
                out.push(w.pair_index(&pts).ok_or_else(|| {
                    Error::Validation(format!("lines {i} and {j} do not form a hyperbolic pair"))
                })?);
            }
        }
        out.sort_unstable();
        Ok(out)
    }
}

/// Intermediate objects of the construction, in PG(5,q) point ids.
#[derive(Clone, Debug, Serialize)]
pub struct SpecialSpreadConstruction {
    pub z: PointId,
    pub beta: Subspace,
    pub alpha: Subspace,
    pub q_minus: Vec<PointId>,
    pub q1: Vec<PointId>,
    pub q2: Vec<PointId>,
    pub ovoid: Vec<PointId>,
    pub spread: SpecialSpread,
}

pub const BETA_SEARCH_BUDGET: usize = 10_000;

/// Runs the construction with the first elliptic solid found.
pub fn construct_special_spread(w: &SymplecticQuadrangle) -> Result<SpecialSpread> {
    Ok(construct_special_spread_with(w, 0)?.spread)
}

/// Elliptic solids through `z`, as polars of lines of `z^perp` spanned by
/// pairs of off-quadric points in id order.
pub fn elliptic_solids(w: &SymplecticQuadrangle, how_many: usize) -> Result<Vec<Subspace>> {
    let pg5 = w.pg5();
    let f = pg5.field();
    let kf = klein_form(f);
    let z = pg5.id_of_ints(&[1, 0, 0, 0, 0, 1]).unwrap();
    let zp = pg5.subspace_of_points(&[z]).perp_gram(f, kf.gram());
    let cand: Vec<PointId> = pg5
        .points_of(&zp)
        .into_iter()
        .filter(|&p| !kf.eval(f, pg5.coords(p)).is_zero())
        .collect();
    let mut tried = HashSet::new();
    let mut found = Vec::new();
    let mut budget = BETA_SEARCH_BUDGET;
    for (i, &a) in cand.iter().enumerate() {
        for &b in &cand[i + 1..] {
            let l = pg5.subspace_of_points(&[a, b]);
            if !tried.insert(l.clone()) {
                continue;
            }
            if budget == 0 {
                return Err(Error::Construction(format!(
                    "found {} of {how_many} elliptic solids within {BETA_SEARCH_BUDGET} candidates",
                    found.len()
                )));
            }
            budget -= 1;
            let beta = l.perp_gram(f, kf.gram());
            let restricted = kf.restrict(f, beta.basis());
            if quadric_type(&restricted, w.pg3())? == QuadricType::Elliptic {
                found.push(beta);
                if found.len() == how_many {
                    return Ok(found);
                }
            }
        }
    }
    Err(Error::Construction("search space exhausted before finding an elliptic solid".into()))
}

/// Runs the construction with the `nth` elliptic solid (0-based).
pub fn construct_special_spread_with(
    w: &SymplecticQuadrangle,
    nth: usize,
) -> Result<SpecialSpreadConstruction> {
    if w.q().is_multiple_of(2) {
        return Err(Error::Domain("special spreads require q odd".into()));
    }
    let pg5 = w.pg5();
    let f = pg5.field();
    let kf = klein_form(f);
    let on_quadric = |p: &PointId| kf.eval(f, pg5.coords(*p)).is_zero();
    let z = pg5.id_of_ints(&[1, 0, 0, 0, 0, 1]).unwrap();
    let zs = pg5.subspace_of_points(&[z]);
    let zp = zs.perp_gram(f, kf.gram());
    let beta = elliptic_solids(w, nth + 1)?.pop().unwrap();
    let alpha = beta.meet(f, &zp);
    if alpha.rank() != 3 {
        return Err(Error::Internal(format!("beta meets z^perp in rank {}", alpha.rank())));
    }
    let alpha_perp = alpha.perp_gram(f, kf.gram());
    let q_minus: Vec<PointId> = pg5.points_of(&beta).into_iter().filter(on_quadric).collect();
    let q1: Vec<PointId> = pg5.points_of(&alpha).into_iter().filter(on_quadric).collect();
    let q2: Vec<PointId> = pg5.points_of(&alpha_perp).into_iter().filter(on_quadric).collect();
    let mut ovoid: Vec<PointId> =
        q_minus.iter().filter(|p| !q1.contains(p)).chain(&q2).copied().collect();
    ovoid.sort_unstable();
    ovoid.dedup();
    let q = w.q();
    if ovoid.len() != q * q + 1 {
        return Err(Error::Internal(format!("ovoid has {} points", ovoid.len())));
    }
    let lines = ovoid
        .iter()
        .map(|&o| Ok(w.pg3().points_of(&klein_inverse(pg5, o)?)))
        .collect::<Result<Vec<_>>>()?;
    let spread = SpecialSpread::from_lines(w, lines);
    verify_special_spread(w, &spread)?;
    Ok(SpecialSpreadConstruction { z, beta, alpha, q_minus, q1, q2, ovoid, spread })
}

/// Exhaustive certificate for a candidate special spread.
pub fn verify_special_spread(w: &SymplecticQuadrangle, s: &SpecialSpread) -> Result<()> {
    let q = w.q();
    let g = w.graph();
    let n = s.lines.len();
    if n != q * q + 1 || s.pairing.len() != n {
        return Err(Error::cert("size", format!("{n} lines, expected {}", q * q + 1)));
    }
    let mut idx = Vec::with_capacity(n);
    for (i, l) in s.lines.iter().enumerate() {
        idx.push(
            w.line_index(l)
                .ok_or_else(|| Error::cert("line", format!("member {i} {l:?} is not a line")))?,
        );
    }
    let mut owner = vec![usize::MAX; w.num_points()];
    for (i, l) in s.lines.iter().enumerate() {
        for &p in l {
            if owner[p] != usize::MAX {
                return Err(Error::cert("partition", format!("point {p} on lines {} and {i}", owner[p])));
            }
            owner[p] = i;
        }
    }
    if let Some(p) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(Error::cert("partition", format!("point {p} is uncovered")));
    }
    if let Some(i) = (0..n).find(|&i| w.is_isotropic(idx[i])) {
        return Err(Error::cert("hyperbolic", format!("line {i} is totally isotropic")));
    }
    for i in 0..n {
        let j = s.pairing[i];
        if j >= n || j == i || s.pairing[j] != i {
            return Err(Error::cert("pairing", format!("line {i} has partner index {j}")));
        }
        if idx[j] != w.perp_line(idx[i]) {
            let bad = s.lines[i]
                .iter()
                .flat_map(|&a| s.lines[j].iter().map(move |&b| (a, b)))
                .find(|&(a, b)| !g.has_edge(a, b));
            return Err(Error::cert(
                "orthogonality",
                format!("lines {i} and {j} are paired but points {bad:?} are not orthogonal"),
            ));
        }
    }
    for i in 0..n {
        let partners: Vec<usize> = (0..n)
            .filter(|&j| {
                j != i && s.lines[i].iter().all(|&a| s.lines[j].iter().all(|&b| g.has_edge(a, b)))
            })
            .collect();
        if partners != [s.pairing[i]] {
            return Err(Error::cert("partner", format!("line {i} has orthogonal lines {partners:?}")));
        }
    }
    for i in (0..n).filter(|&i| i < s.pairing[i]) {
        let a = &s.lines[i];
        let b = &s.lines[s.pairing[i]];
        let inside = |x: &[PointId]| x.iter().any(|&u| x.iter().any(|&v| u != v && g.has_edge(u, v)));
        if inside(a) || inside(b) {
            return Err(Error::cert("bipartite", format!("pair at line {i} has an edge inside a half")));
        }
        for x in 0..w.num_points() {
            if owner[x] == i || owner[x] == s.pairing[i] {
                continue;
            }
            let ca = a.iter().filter(|&&u| g.has_edge(x, u)).count();
            let cb = b.iter().filter(|&&u| g.has_edge(x, u)).count();
            if ca != 1 || cb != 1 {
                return Err(Error::cert(
                    "paired-lines",
                    format!("point {x} has {ca} and {cb} neighbours on the pair at line {i}"),
                ));
            }
        }
    }
    Ok(())
}
