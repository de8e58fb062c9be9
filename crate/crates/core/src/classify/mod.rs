//! Classification of special spreads: characteristics in the
//! hyperbolic-point model, the same invariant computed from W(q) data alone,
//! and orbits of the similitude group.

mod census;
mod group;
mod model;

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

pub use group::{
    apply_to_points, certified_order, induced_on_pairs, DEFAULT_GROUP_SEED, similitude_group_order, Perm,
    SimilitudeGroup, StabilizerChain, SCHREIER_SIMS_BUDGET,
};
pub use census::{census_special_spreads, SpreadCensus, FULL_CENSUS_MAX_Q};
pub use model::{parabolic_section_form, HyperbolicPointModel, PairKind, RelationLabel};

use crate::error::{Error, Result};
use crate::spreads::{SpecialSpread, SymplecticQuadrangle};

/// Unordered pair counts `[N_1, ..., N_i*]` per relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Characteristic(pub Vec<u64>);

impl std::fmt::Display for Characteristic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|n| n.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Characteristic of a set of model points.
pub fn characteristic(model: &HyperbolicPointModel, xs: &[usize]) -> Characteristic {
    let mut counts = vec![0u64; model.num_relations()];
    for (i, &a) in xs.iter().enumerate() {
        for &b in &xs[i + 1..] {
            match model.classify_pair(a, b) {
                0 => {}
                r => counts[r as usize - 1] += 1,
            }
        }
    }
    Characteristic(counts)
}

/// Characteristic of a set of hyperbolic pairs through their points x_U.
pub fn characteristic_of_pairs(model: &HyperbolicPointModel, pairs: &[usize]) -> Characteristic {
    let xs: Vec<usize> = pairs.iter().map(|&u| model.x_of_pair(u)).collect();
    characteristic(model, &xs)
}

fn lines_set(w: &SymplecticQuadrangle, u: usize) -> HashSet<usize> {
    HyperbolicPointModel::lines_of_pair(w, u).into_iter().collect()
}

fn meets(w: &SymplecticQuadrangle, a: usize, b: usize) -> bool {
    let pb = w.line_points(b);
    w.line_points(a).iter().any(|p| pb.contains(p))
}

/// Lines of PG(3,q) meeting three mutually disjoint lines.
pub fn transversals(w: &SymplecticQuadrangle, l1: usize, l2: usize, l3: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for &a in w.line_points(l1) {
        for &b in w.line_points(l2) {
            let l = w.line_of(a, b);
            if meets(w, l, l3) {
                out.push(l);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// The q+1 totally isotropic lines meeting two disjoint totally isotropic
/// lines.
pub fn isotropic_transversals(w: &SymplecticQuadrangle, k: usize, l: usize) -> Vec<usize> {
    w.line_points(k)
        .iter()
        .filter_map(|&a| w.line_points(l).iter().find(|&&b| w.orthogonal(a, b)).map(|&b| w.line_of(a, b)))
        .collect()
}

/// Kind of the pair `(x_U1, x_U2)` decided from W(q) data only: the size of
/// the intersection of the two line sets detects tangency, the totally
/// isotropic transversals of three common lines separate secant from
/// external, and conjugacy holds when two disjoint lines of the first set
/// have all their isotropic transversals in the second set.
pub fn pair_kind_from_lines(w: &SymplecticQuadrangle, u1: usize, u2: usize) -> Result<PairKind> {
    let q = w.q();
    let s1 = lines_set(w, u1);
    let s2 = lines_set(w, u2);
    let mut common: Vec<usize> = s1.intersection(&s2).copied().collect();
    common.sort_unstable();
    if common.len() == 2 * q + 1 {
        return Ok(PairKind::Tangent);
    }
    if common.len() != q + 1 {
        return Err(Error::Internal(format!(
            "pairs {u1} and {u2} share {} lines, expected {} or {}",
            common.len(),
            q + 1,
            2 * q + 1
        )));
    }
    let singular = transversals(w, common[0], common[1], common[2])
        .into_iter()
        .filter(|&l| w.is_isotropic(l))
        .count();
    let secant = match singular {
        2 => true,
        0 => false,
        n => return Err(Error::Internal(format!("{n} isotropic transversals"))),
    };
    let mut l1: Vec<usize> = s1.iter().copied().collect();
    l1.sort_unstable();
    let perp = l1.iter().enumerate().any(|(i, &k)| {
        l1[i + 1..].iter().any(|&l| {
            !meets(w, k, l) && isotropic_transversals(w, k, l).iter().all(|t| s2.contains(t))
        })
    });
    Ok(match (secant, perp) {
        (true, true) => PairKind::SecantPerp,
        (true, false) => PairKind::SecantNonPerp,
        (false, true) => PairKind::ExternalPerp,
        (false, false) => PairKind::ExternalNonPerp,
    })
}

/// Characteristic computed from W(q) data; the model supplies only the
/// label order.
pub fn characteristic_from_lines(
    w: &SymplecticQuadrangle,
    model: &HyperbolicPointModel,
    pairs: &[usize],
) -> Result<Characteristic> {
    let mut counts = vec![0u64; model.num_relations()];
    for (i, &a) in pairs.iter().enumerate() {
        for &b in &pairs[i + 1..] {
            let k = pair_kind_from_lines(w, a, b)?;
            let r = model
                .label_of(k)
                .ok_or_else(|| Error::Internal(format!("pair kind {k:?} has no relation")))?;
            counts[r as usize - 1] += 1;
        }
    }
    Ok(Characteristic(counts))
}

/// Characteristic of a spread by both routes; disagreement is an error.
pub fn characteristic_of_spread(
    w: &SymplecticQuadrangle,
    model: &HyperbolicPointModel,
    s: &SpecialSpread,
) -> Result<Characteristic> {
    let pairs = s.pair_indices(w)?;
    let a = characteristic_of_pairs(model, &pairs);
    let b = characteristic_from_lines(w, model, &pairs)?;
    if a != b {
        return Err(Error::Internal(format!("characteristic routes disagree: {a} vs {b}")));
    }
    Ok(a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub orbit_size: u64,
    pub stabilizer_order: u64,
}

pub const DEFAULT_ORBIT_BUDGET: usize = 5_000_000;

pub fn orbit_and_stabilizer(g: &SimilitudeGroup, pairs: &[usize], max_states: usize) -> Result<OrbitReport> {
    let orbit = g.orbit_of_set(pairs, max_states)?.len() as u128;
    if !g.order().is_multiple_of(orbit) {
        return Err(Error::Internal(format!("orbit size {orbit} does not divide {}", g.order())));
    }
    Ok(OrbitReport { orbit_size: orbit as u64, stabilizer_order: (g.order() / orbit) as u64 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EquivalenceMethod {
    /// Exact search of the group orbit.
    Orbit,
    /// Characteristics compared; exact for inequivalence only.
    Characteristic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Equivalence {
    pub equivalent: bool,
    pub method: EquivalenceMethod,
}

/// Orbit search for q <= 5, characteristic comparison beyond.
pub fn equivalent(
    w: &SymplecticQuadrangle,
    model: &HyperbolicPointModel,
    g: &SimilitudeGroup,
    s1: &SpecialSpread,
    s2: &SpecialSpread,
) -> Result<Equivalence> {
    if s1.q != s2.q || s1.q != w.q() {
        return Err(Error::Domain(format!("spreads over q={} and q={}", s1.q, s2.q)));
    }
    let (p1, p2) = (s1.pair_indices(w)?, s2.pair_indices(w)?);
    if w.q() <= 5 {
        let equivalent = g.maps_set_to(&p1, &p2, DEFAULT_ORBIT_BUDGET)?;
        return Ok(Equivalence { equivalent, method: EquivalenceMethod::Orbit });
    }
    let equivalent = characteristic_of_pairs(model, &p1) == characteristic_of_pairs(model, &p2);
    Ok(Equivalence { equivalent, method: EquivalenceMethod::Characteristic })
}

/// Orbit of the group on ordered pairs of distinct hyperbolic pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairOrbit {
    /// Representative `(0, j)` with the least `j`.
    pub representative: (usize, usize),
    pub size: u64,
    pub disjoint: bool,
}

pub struct PairOrbits {
    n: usize,
    labels: Vec<u32>,
    pub orbits: Vec<PairOrbit>,
}

impl PairOrbits {
    pub fn new(w: &SymplecticQuadrangle, g: &SimilitudeGroup) -> Self {
        let n = w.all_pairs().len();
        let labels = g.orbits_on_ordered_pairs();
        let k = labels.iter().filter(|&&l| l != u32::MAX).max().map_or(0, |&m| m as usize + 1);
        let mut size = vec![0u64; k];
        for &l in &labels {
            if l != u32::MAX {
                size[l as usize] += 1;
            }
        }
        let mut orbits: Vec<Option<PairOrbit>> = vec![None; k];
        for j in 1..n {
            let l = labels[j] as usize;
            if orbits[l].is_none() {
                orbits[l] = Some(PairOrbit {
                    representative: (0, j),
                    size: size[l],
                    disjoint: w.pair_bits(0).is_disjoint(w.pair_bits(j)),
                });
            }
        }
        let orbits = orbits
            .into_iter()
            .map(|o| o.expect("the group is transitive on pairs"))
            .collect();
        PairOrbits { n, labels, orbits }
    }

    pub fn label(&self, a: usize, b: usize) -> Option<usize> {
        match self.labels[a * self.n + b] {
            u32::MAX => None,
            l => Some(l as usize),
        }
    }

    /// Representatives of the orbits on disjoint pairs.
    pub fn disjoint_representatives(&self) -> Vec<(usize, usize)> {
        self.orbits.iter().filter(|o| o.disjoint).map(|o| o.representative).collect()
    }

    /// Ordered pairs of `set` per orbit.
    pub fn profile(&self, set: &[usize]) -> Vec<u64> {
        let mut c = vec![0u64; self.orbits.len()];
        for &a in set {
            for &b in set {
                if let Some(l) = self.label(a, b) {
                    c[l] += 1;
                }
            }
        }
        c
    }
}

/// One equivalence class of special spreads.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    /// Sorted hyperbolic-pair indices of a representative.
    pub representative: Vec<usize>,
    pub characteristic: Characteristic,
    pub orbit_size: u64,
    pub stabilizer_order: u64,
    /// How many of the input spreads fell into the class.
    pub found: u64,
}

/// Splits a complete list of spreads into group orbits. Classes are listed
/// in order of their first member.
pub fn classify_by_orbits(
    model: &HyperbolicPointModel,
    g: &SimilitudeGroup,
    spreads: &[Vec<usize>],
    max_states: usize,
) -> Result<Vec<ClassReport>> {
    let mut class_of: HashMap<Vec<u16>, usize> = HashMap::new();
    let mut reports: Vec<ClassReport> = Vec::new();
    for s in spreads {
        let key: Vec<u16> = {
            let mut k: Vec<u16> = s.iter().map(|&u| u as u16).collect();
            k.sort_unstable();
            k
        };
        if let Some(&c) = class_of.get(&key) {
            reports[c].found += 1;
            continue;
        }
        let orbit = g.orbit_of_set(s, max_states)?;
        let size = orbit.len() as u128;
        if !g.order().is_multiple_of(size) {
            return Err(Error::Internal(format!("orbit size {size} does not divide {}", g.order())));
        }
        let c = reports.len();
        for o in orbit {
            class_of.insert(o, c);
        }
        let mut rep = s.clone();
        rep.sort_unstable();
        reports.push(ClassReport {
            characteristic: characteristic_of_pairs(model, &rep),
            representative: rep,
            orbit_size: size as u64,
            stabilizer_order: (g.order() / size) as u64,
            found: 1,
        });
    }
    Ok(reports)
}

/// Classes among spreads that all contain the representative pair of one
/// orbit on disjoint pairs, separated by characteristic. With `m` the number
/// of ordered pairs of a class member in that orbit and `c` the number of
/// class members through the fixed pair, the class has `c |O| / m` members,
/// which gives the stabilizer order without an orbit search.
pub fn classify_through_pair(
    model: &HyperbolicPointModel,
    orbits: &PairOrbits,
    orbit: usize,
    group_order: u128,
    spreads: &[Vec<usize>],
) -> Result<Vec<ClassReport>> {
    let o = &orbits.orbits[orbit];
    let mut by_char: BTreeMap<Characteristic, (Vec<usize>, u64)> = BTreeMap::new();
    for s in spreads {
        let (a, b) = o.representative;
        if !s.contains(&a) || !s.contains(&b) {
            return Err(Error::Validation("spread does not contain the fixed pair".into()));
        }
        let c = characteristic_of_pairs(model, s);
        let e = by_char.entry(c).or_insert_with(|| {
            let mut r = s.clone();
            r.sort_unstable();
            (r, 0)
        });
        e.1 += 1;
    }
    by_char
        .into_iter()
        .map(|(ch, (rep, count))| {
            let m = orbits.profile(&rep)[orbit] as u128;
            let num = count as u128 * o.size as u128;
            if m == 0 || !num.is_multiple_of(m) {
                return Err(Error::Internal(format!("class {ch}: {count} * {} not divisible by {m}", o.size)));
            }
            let class_size = num / m;
            if !group_order.is_multiple_of(class_size) {
                return Err(Error::Internal(format!("class {ch}: size {class_size} does not divide the group order")));
            }
            Ok(ClassReport {
                representative: rep,
                characteristic: ch,
                orbit_size: class_size as u64,
                stabilizer_order: (group_order / class_size) as u64,
                found: count,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spreads::construct_special_spread;
    use rand::SeedableRng;

    #[test]
    fn constructed_spread_has_the_q3_characteristic() {
        let w = SymplecticQuadrangle::new(3).unwrap();
        let m = HyperbolicPointModel::new(&w).unwrap();
        let s = construct_special_spread(&w).unwrap();
        assert_eq!(characteristic_of_spread(&w, &m, &s).unwrap(), Characteristic(vec![0, 10]));
    }

    #[test]
    fn line_route_matches_model_on_all_pairs_q3() {
        let w = SymplecticQuadrangle::new(3).unwrap();
        let m = HyperbolicPointModel::new(&w).unwrap();
        let n = w.all_pairs().len();
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let k = pair_kind_from_lines(&w, a, b).unwrap();
                assert_eq!(Some(k), m.kind(m.x_of_pair(a), m.x_of_pair(b)), "{a} {b}");
                let shared = w.pair_bits(a).intersection_len(w.pair_bits(b));
                if k == PairKind::Tangent {
                    assert_eq!(shared, 2);
                } else {
                    assert_eq!(shared, 0);
                }
            }
        }
    }

    #[test]
    fn line_route_matches_model_sampled_q5() {
        let w = SymplecticQuadrangle::new(5).unwrap();
        let m = HyperbolicPointModel::new(&w).unwrap();
        let n = w.all_pairs().len();
        for a in [0usize, 17, 200] {
            for b in 0..n {
                if a != b {
                    let k = pair_kind_from_lines(&w, a, b).unwrap();
                    assert_eq!(Some(k), m.kind(m.x_of_pair(a), m.x_of_pair(b)));
                }
            }
        }
    }

    #[test]
    fn relations_are_the_orbits_on_pairs() {
        for q in [3u32, 5] {
            let w = SymplecticQuadrangle::new(q).unwrap();
            let m = HyperbolicPointModel::new(&w).unwrap();
            let g = SimilitudeGroup::new(&w).unwrap();
            let orbits = PairOrbits::new(&w, &g);
            assert_eq!(orbits.orbits.len(), m.num_relations());
            let n = w.all_pairs().len();
            let mut label_of_orbit = vec![None; orbits.orbits.len()];
            for a in 0..n {
                for b in 0..n {
                    if let Some(o) = orbits.label(a, b) {
                        let r = m.classify_pair(m.x_of_pair(a), m.x_of_pair(b));
                        match label_of_orbit[o] {
                            None => label_of_orbit[o] = Some(r),
                            Some(x) => assert_eq!(x, r),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn characteristic_is_invariant() {
        let w = SymplecticQuadrangle::new(5).unwrap();
        let m = HyperbolicPointModel::new(&w).unwrap();
        let g = SimilitudeGroup::new(&w).unwrap();
        let s = construct_special_spread(&w).unwrap().pair_indices(&w).unwrap();
        let c = characteristic_of_pairs(&m, &s);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let p = g.random_pair_perm(&mut rng, 30);
            let img: Vec<usize> = s.iter().map(|&u| p.apply(u)).collect();
            assert_eq!(characteristic_of_pairs(&m, &img), c);
        }
    }

    #[test]
    fn q3_stabilizer() {
        let w = SymplecticQuadrangle::new(3).unwrap();
        let g = SimilitudeGroup::new(&w).unwrap();
        let s = construct_special_spread(&w).unwrap().pair_indices(&w).unwrap();
        let r = orbit_and_stabilizer(&g, &s, 1000).unwrap();
        assert_eq!(r, OrbitReport { orbit_size: 27, stabilizer_order: 1920 });
        assert!(matches!(orbit_and_stabilizer(&g, &s, 5), Err(Error::Budget(_))));
    }

    /// Counts computed in PG(5,q) directly: x_U is the point where the line
    /// through the Klein image of a half of U and z = (1,0,0,0,0,1) meets
    /// `p0 + p5 = 0`; conjugacy and line type use the Klein form itself.
    #[test]
    fn q5_characteristics_from_the_klein_quadric() {
        use crate::exactcover::{enumerate_special_spreads, EnumerationMode};
        use crate::gf::FieldElement;
        use crate::projgeom::forms::Polarity;
        use crate::projgeom::{klein_form, linalg};
        let w = SymplecticQuadrangle::new(5).unwrap();
        let m = HyperbolicPointModel::new(&w).unwrap();
        let f = w.field();
        let pg5 = w.pg5();
        let kf = klein_form(f);
        let proj = |u: usize| -> Vec<FieldElement> {
            let k = pg5.coords(w.klein_point(w.all_pairs()[u].l)).to_vec();
            let t = f.div(f.add(k[0], k[5]), f.from_int(2)).unwrap();
            let mut c = k.clone();
            c[0] = f.sub(c[0], t);
            c[5] = f.sub(c[5], t);
            c
        };
        let mut seen = std::collections::BTreeSet::new();
        for s in enumerate_special_spreads(&w, EnumerationMode::Full, true).unwrap().spreads {
            let cs: Vec<_> = s.iter().map(|&u| proj(u)).collect();
            let (mut secant_conj, mut external) = (0u64, 0u64);
            for i in 0..cs.len() {
                for j in i + 1..cs.len() {
                    let conj = linalg::bilinear(f, kf.gram(), &cs[i], &cs[j]).is_zero();
                    let a = pg5.id_of(&cs[i]).unwrap();
                    let b = pg5.id_of(&cs[j]).unwrap();
                    let line = pg5.line_through(a, b).unwrap();
                    let on = pg5.points_of(&line).iter().filter(|&&p| kf.eval(f, pg5.coords(p)).is_zero()).count();
                    match (on, conj) {
                        (2, true) => secant_conj += 1,
                        (0, false) => external += 1,
                        other => panic!("unexpected pair type {other:?}"),
                    }
                }
            }
            let c = Characteristic(vec![0, secant_conj, external]);
            assert_eq!(c, characteristic_of_pairs(&m, &s));
            seen.insert(c);
        }
        let expect: std::collections::BTreeSet<_> =
            [Characteristic(vec![0, 30, 48]), Characteristic(vec![0, 45, 33])].into_iter().collect();
        assert_eq!(seen, expect);
    }

    #[test]
    fn characteristic_display() {
        assert_eq!(Characteristic(vec![0, 48, 30]).to_string(), "[0, 48, 30]");
    }
}
