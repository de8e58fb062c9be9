//! The similitude group of W(q) as permutations.
//!
//! Generators are symplectic transvections `x -> x + a J(x,v) v` plus the
//! similitude `diag(1, nu, 1, nu)` with `nu` a nonsquare. Every generator is
//! checked to scale `J`, so the generated group lies in PGSp(4,q), whose
//! order is `q^4 (q^2-1)(q^4-1)`. A randomized Schreier-Sims run builds a
//! stabilizer chain whose orbit product is a lower bound for the order;
//! reaching the upper bound certifies the group.

use std::collections::{HashMap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::FieldElement;
use crate::projgeom::forms::Polarity;
use crate::projgeom::linalg::{self, Matrix};
use crate::spreads::SymplecticQuadrangle;

/// A permutation of `0..n` in image form: `i -> p[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Perm(pub Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }
    pub fn degree(&self) -> usize {
        self.0.len()
    }
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }
    /// `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }
    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm(inv)
    }
    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }
    pub fn first_moved(&self) -> Option<usize> {
        self.0.iter().enumerate().position(|(i, &j)| i as u32 != j)
    }
}

struct Level {
    base: usize,
    gens: Vec<Perm>,
    /// For each orbit point `c`, an element sending `c` back to `base`.
    back: Vec<Option<Perm>>,
    orbit_len: usize,
}

impl Level {
    fn new(base: usize, degree: usize) -> Self {
        let mut back = vec![None; degree];
        back[base] = Some(Perm::identity(degree));
        Level { base, gens: Vec::new(), back, orbit_len: 1 }
    }

    fn rebuild(&mut self) {
        let degree = self.back.len();
        let inv: Vec<Perm> = self.gens.iter().map(|g| g.inverse()).collect();
        let mut back = vec![None; degree];
        back[self.base] = Some(Perm::identity(degree));
        let mut queue = VecDeque::from([self.base]);
        let mut len = 1;
        while let Some(b) = queue.pop_front() {
            for (g, gi) in self.gens.iter().zip(&inv) {
                let c = g.apply(b);
                if back[c].is_none() {
                    // c -> b -> base
                    back[c] = Some(gi.then(back[b].as_ref().unwrap()));
                    queue.push_back(c);
                    len += 1;
                }
            }
        }
        self.back = back;
        self.orbit_len = len;
    }
}

/// Base and strong generators found by randomized Schreier-Sims.
pub struct StabilizerChain {
    levels: Vec<Level>,
    degree: usize,
}

impl StabilizerChain {
    fn new(degree: usize) -> Self {
        StabilizerChain { levels: Vec::new(), degree }
    }

    /// Product of the basic orbit lengths.
    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit_len as u128).product()
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// Strips `g` through the chain; returns the residue and the level at
    /// which it dropped out.
    fn sift(&self, g: &Perm) -> (Perm, usize) {
        let mut h = g.clone();
        for (i, l) in self.levels.iter().enumerate() {
            match &l.back[h.apply(l.base)] {
                Some(b) => h = h.then(b),
                None => return (h, i),
            }
        }
        (h, self.levels.len())
    }

    pub fn contains(&self, g: &Perm) -> bool {
        let (h, _) = self.sift(g);
        h.is_identity()
    }

    /// Adds `g` if it is not yet represented. Returns true on change.
    fn absorb(&mut self, g: &Perm) -> bool {
        let (h, depth) = self.sift(g);
        if h.is_identity() {
            return false;
        }
        if depth == self.levels.len() {
            let b = h.first_moved().unwrap();
            self.levels.push(Level::new(b, self.degree));
        }
        for l in &mut self.levels[..=depth] {
            l.gens.push(h.clone());
            l.rebuild();
        }
        true
    }
}

/// Product-replacement random elements.
struct RandomElements {
    pool: Vec<Perm>,
    acc: Perm,
    rng: ChaCha8Rng,
}

impl RandomElements {
    fn new(gens: &[Perm], seed: u64) -> Self {
        let mut pool: Vec<Perm> = Vec::new();
        while pool.len() < 10.max(gens.len()) {
            pool.push(gens[pool.len() % gens.len()].clone());
        }
        let acc = Perm::identity(gens[0].degree());
        let mut r = RandomElements { pool, acc, rng: ChaCha8Rng::seed_from_u64(seed) };
        for _ in 0..60 {
            r.next();
        }
        r
    }

    fn next(&mut self) -> Perm {
        let n = self.pool.len();
        let i = self.rng.gen_range(0..n);
        let mut j = self.rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let s = if self.rng.gen_bool(0.5) { self.pool[j].clone() } else { self.pool[j].inverse() };
        self.pool[i] = if self.rng.gen_bool(0.5) { self.pool[i].then(&s) } else { s.then(&self.pool[i]) };
        self.acc = self.acc.then(&self.pool[i]);
        self.acc.clone()
    }
}

pub const SCHREIER_SIMS_BUDGET: usize = 20_000;

/// Order of the group generated by `gens`, certified against `target`: the
/// chain order only grows toward the true order, so equality with a known
/// upper bound proves it.
pub fn certified_order(gens: &[Perm], target: u128, seed: u64) -> Result<(u128, StabilizerChain)> {
    let degree = gens.first().map(Perm::degree).unwrap_or(0);
    let mut chain = StabilizerChain::new(degree);
    if gens.iter().all(Perm::is_identity) {
        return Ok((1, chain));
    }
    for g in gens {
        chain.absorb(g);
    }
    let mut rnd = RandomElements::new(gens, seed);
    let mut tries = 0;
    while chain.order() < target {
        if tries == SCHREIER_SIMS_BUDGET {
            return Err(Error::Budget(format!(
                "chain order {} below {target} after {tries} random elements",
                chain.order()
            )));
        }
        tries += 1;
        chain.absorb(&rnd.next());
    }
    if chain.order() > target {
        return Err(Error::Internal(format!("chain order {} exceeds {target}", chain.order())));
    }
    Ok((chain.order(), chain))
}

/// Matrix group acting on W(q), with induced permutations on points and on
/// hyperbolic pairs.
pub struct SimilitudeGroup {
    q: usize,
    matrices: Vec<Matrix>,
    multipliers: Vec<FieldElement>,
    point_perms: Vec<Perm>,
    pair_perms: Vec<Perm>,
    order: u128,
    base: Vec<usize>,
}

impl std::fmt::Debug for SimilitudeGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SimilitudeGroup(q={}, order={}, {} generators)", self.q, self.order, self.matrices.len())
    }
}

/// `q^4 (q^2-1)(q^4-1)`, the order of PGSp(4,q) for q odd.
pub fn similitude_group_order(q: usize) -> u128 {
    let q = q as u128;
    q.pow(4) * (q * q - 1) * (q.pow(4) - 1)
}

fn transvection(w: &SymplecticQuadrangle, v: &[FieldElement], a: FieldElement) -> Matrix {
    let f = w.field();
    let mut m = linalg::identity(4);
    for (i, row) in m.iter_mut().enumerate() {
        let c = f.mul(a, w.form().eval(f, &unit(i), v));
        *row = linalg::add_vec(f, row, &linalg::scale(f, c, v));
    }
    m
}

fn unit(i: usize) -> Vec<FieldElement> {
    let mut e = vec![FieldElement::ZERO; 4];
    e[i] = FieldElement::ONE;
    e
}

/// Seed of the product-replacement walk used by [`SimilitudeGroup::new`].
pub const DEFAULT_GROUP_SEED: u64 = 0x5eed;

impl SimilitudeGroup {
    pub fn new(w: &SymplecticQuadrangle) -> Result<Self> {
        Self::with_seed(w, DEFAULT_GROUP_SEED)
    }

    pub fn with_seed(w: &SymplecticQuadrangle, seed: u64) -> Result<Self> {
        let f = w.field();
        let q = w.q();
        if q.is_multiple_of(2) {
            return Err(Error::Domain("the similitude group is built for q odd".into()));
        }
        let mut scalars = vec![FieldElement::ONE];
        if f.k() > 1 {
            scalars.push(f.primitive_element());
        }
        let one = FieldElement::ONE;
        let z = FieldElement::ZERO;
        let dirs = [
            vec![one, z, z, z],
            vec![z, one, z, z],
            vec![z, z, one, z],
            vec![z, z, z, one],
            vec![one, z, one, z],
            vec![z, one, z, one],
        ];
        let mut matrices = Vec::new();
        for v in &dirs {
            for &a in &scalars {
                matrices.push(transvection(w, v, a));
            }
        }
        let nu = f.find_nonsquare()?;
        let mut d = linalg::identity(4);
        d[1][1] = nu;
        d[3][3] = nu;
        matrices.push(d);

        let j = w.form().gram();
        let mut multipliers = Vec::with_capacity(matrices.len());
        for (i, m) in matrices.iter().enumerate() {
            let img = linalg::mat_mul(f, &linalg::mat_mul(f, m, j), &linalg::transpose(m));
            let c = img[0][1];
            let scaled: Matrix = j.iter().map(|r| linalg::scale(f, c, r)).collect();
            if c.is_zero() || img != scaled {
                return Err(Error::cert("similitude", format!("generator {i} does not scale J")));
            }
            multipliers.push(c);
        }

        let pg3 = w.pg3();
        let point_perms: Vec<Perm> = matrices
            .iter()
            .map(|m| {
                Perm(
                    (0..pg3.num_points())
                        .map(|p| pg3.id_of(&linalg::vec_mat(f, pg3.coords(p), m)).unwrap() as u32)
                        .collect(),
                )
            })
            .collect();
        let pair_perms = point_perms
            .iter()
            .map(|g| induced_on_pairs(w, g))
            .collect::<Result<Vec<_>>>()?;
        let target = similitude_group_order(q);
        let (order, chain) = certified_order(&point_perms, target, seed)?;
        Ok(SimilitudeGroup { q, matrices, multipliers, point_perms, pair_perms, order, base: chain.base() })
    }

    pub fn q(&self) -> usize {
        self.q
    }
    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }
    /// `c` with `M J M^T = c J`, per generator.
    pub fn multipliers(&self) -> &[FieldElement] {
        &self.multipliers
    }
    pub fn point_generators(&self) -> &[Perm] {
        &self.point_perms
    }
    pub fn pair_generators(&self) -> &[Perm] {
        &self.pair_perms
    }
    pub fn order(&self) -> u128 {
        self.order
    }
    pub fn base(&self) -> &[usize] {
        &self.base
    }

    /// A pseudo-random element acting on hyperbolic pairs.
    pub fn random_pair_perm(&self, rng: &mut impl Rng, steps: usize) -> Perm {
        let mut g = Perm::identity(self.pair_perms[0].degree());
        for _ in 0..steps {
            g = g.then(&self.pair_perms[rng.gen_range(0..self.pair_perms.len())]);
        }
        g
    }

    /// Orbit of a set of pairs under the group, as sorted index lists.
    pub fn orbit_of_set(&self, set: &[usize], max_states: usize) -> Result<HashSet<Vec<u16>>> {
        let start = encode(set);
        let mut seen = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            for g in &self.pair_perms {
                let img = apply_set(g, &s);
                if !seen.contains(&img) {
                    if seen.len() >= max_states {
                        return Err(Error::Budget(format!("orbit exceeds {max_states} states")));
                    }
                    seen.insert(img.clone());
                    queue.push_back(img);
                }
            }
        }
        Ok(seen)
    }

    /// True if some group element maps `a` onto `b` (breadth-first search
    /// from `a`).
    pub fn maps_set_to(&self, a: &[usize], b: &[usize], max_states: usize) -> Result<bool> {
        let target = encode(b);
        let start = encode(a);
        if start == target {
            return Ok(true);
        }
        let mut seen = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            for g in &self.pair_perms {
                let img = apply_set(g, &s);
                if img == target {
                    return Ok(true);
                }
                if seen.len() >= max_states {
                    return Err(Error::Budget(format!("orbit exceeds {max_states} states")));
                }
                if seen.insert(img.clone()) {
                    queue.push_back(img);
                }
            }
        }
        Ok(false)
    }

    /// Orbits on ordered pairs `(u1, u2)` of distinct hyperbolic pairs. The
    /// result maps `u1 * n + u2` to an orbit number (diagonal entries get
    /// `u32::MAX`); orbits are numbered by first appearance.
    pub fn orbits_on_ordered_pairs(&self) -> Vec<u32> {
        let n = self.pair_perms[0].degree();
        let mut uf = UnionFind::new(n * n);
        for g in &self.pair_perms {
            for a in 0..n {
                let ga = g.apply(a);
                for b in 0..n {
                    if a != b {
                        uf.union(a * n + b, ga * n + g.apply(b));
                    }
                }
            }
        }
        let mut label = HashMap::new();
        (0..n * n)
            .map(|ab| {
                if ab / n == ab % n {
                    return u32::MAX;
                }
                let r = uf.find(ab);
                let next = label.len() as u32;
                *label.entry(r).or_insert(next)
            })
            .collect()
    }
}

fn encode(set: &[usize]) -> Vec<u16> {
    let mut v: Vec<u16> = set.iter().map(|&u| u as u16).collect();
    v.sort_unstable();
    v
}

fn apply_set(g: &Perm, s: &[u16]) -> Vec<u16> {
    let mut v: Vec<u16> = s.iter().map(|&u| g.apply(u as usize) as u16).collect();
    v.sort_unstable();
    v
}

/// Image of a point set under a point permutation, as a sorted list.
pub fn apply_to_points(g: &Perm, pts: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = pts.iter().map(|&p| g.apply(p)).collect();
    v.sort_unstable();
    v
}

/// Permutation of hyperbolic pairs induced by a point permutation.
pub fn induced_on_pairs(w: &SymplecticQuadrangle, g: &Perm) -> Result<Perm> {
    w.all_pairs()
        .iter()
        .map(|p| {
            let img = apply_to_points(g, &p.points);
            w.pair_index(&img)
                .map(|u| u as u32)
                .ok_or_else(|| Error::Internal("point permutation does not preserve pairs".into()))
        })
        .collect::<Result<Vec<_>>>()
        .map(Perm)
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect() }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo as u32;
        }
    }
}
