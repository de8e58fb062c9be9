//! Divisible design graphs from special and symplectic spreads.
//!
//! A DDG with parameters (v,k,λ1,λ2,m,n) is k-regular on v = mn vertices
//! split into m classes of size n. Two vertices in the same class have λ1
//! common neighbours, and two vertices in different classes have λ2.

mod canonical;
mod census;
mod reconstruct;

use std::fmt;

use serde::Serialize;

pub use canonical::{
    canonical_form, canonical_labeling, isomorphic, CanonicalLabeling, Certificate,
    DEFAULT_CANONICAL_BUDGET,
};
pub use census::{enumerate_split_graphs, fingerprint, SplitCensus};
pub use reconstruct::{check_reconstruction, reconstruct, Reconstruction};

use crate::error::{Error, Result};
use crate::spgraph::Graph;
use crate::spreads::{verify_special_spread, SpecialSpread, SymplecticQuadrangle, SymplecticSpread};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DdgParams {
    pub v: usize,
    pub k: usize,
    pub lambda1: usize,
    pub lambda2: usize,
    pub m: usize,
    pub n: usize,
}

impl DdgParams {
    pub fn new(v: usize, k: usize, lambda1: usize, lambda2: usize, m: usize, n: usize) -> Self {
        DdgParams { v, k, lambda1, lambda2, m, n }
    }

    pub fn is_proper(&self) -> bool {
        self.m > 1 && self.n > 1 && self.lambda1 != self.lambda2
    }

    /// Complement of Sp(4,q) minus the paired-line edges, as built by
    /// [`paired_spread_graph`].
    pub fn paired_spread(q: usize) -> Self {
        let q2 = q * q;
        let q3 = q2 * q;
        DdgParams::new((q2 + 1) * (q + 1), q3 + q + 1, q3 - q2 + q + 1, q3 - q2 + 2 * q, q2 + 1, q + 1)
    }

    pub fn split_spread(q: usize) -> Self {
        let q2 = q * q;
        let q3 = q2 * q;
        let v = (q2 + 1) * (q + 1);
        DdgParams::new(v, (q3 + q2 + 3 * q).div_ceil(2), (q3 - q2 + 3 * q).div_ceil(2), q2 + q, 2, v / 2)
    }

    /// Sp(2e,q) with the edges of a symplectic spread removed. The degree is
    /// q^e (q^(e-1) - 1)/(q-1).
    pub fn clique_removed(e: u32, q: usize) -> Self {
        let qe = q.pow(e);
        DdgParams::new(
            (q.pow(2 * e) - 1) / (q - 1),
            qe * (q.pow(e - 1) - 1) / (q - 1),
            qe * (q.pow(e - 2) - 1) / (q - 1),
            (q.pow(e - 1) - 1).pow(2) / (q - 1),
            qe + 1,
            (qe - 1) / (q - 1),
        )
    }

    pub fn split_clique(e: u32, q: usize) -> Self {
        let v = (q.pow(2 * e) - 1) / (q - 1);
        let a = q.pow(e - 1);
        let b = q.pow(2 * e - 2);
        DdgParams::new(v, v / 2 - a, v / 2 - b - a, b - a, 2, v / 2)
    }
}

impl fmt::Display for DdgParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{},{},{})", self.v, self.k, self.lambda1, self.lambda2, self.m, self.n)
    }
}

/// A partition of `0..n` into numbered classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexPartition {
    class_of: Vec<usize>,
    m: usize,
}

impl VertexPartition {
    pub fn from_class_of(class_of: Vec<usize>) -> Result<Self> {
        let m = class_of.iter().max().map_or(0, |&c| c + 1);
        let mut seen = vec![false; m];
        for &c in &class_of {
            seen[c] = true;
        }
        if let Some(c) = seen.iter().position(|&s| !s) {
            return Err(Error::Validation(format!("class {c} is empty")));
        }
        Ok(VertexPartition { class_of, m })
    }

    /// Classes given as vertex lists; they must cover `0..n` exactly once.
    pub fn from_classes(n: usize, classes: &[Vec<usize>]) -> Result<Self> {
        let mut class_of = vec![usize::MAX; n];
        for (c, vs) in classes.iter().enumerate() {
            for &v in vs {
                if v >= n || class_of[v] != usize::MAX {
                    return Err(Error::Validation(format!("vertex {v} is repeated or out of range")));
                }
                class_of[v] = c;
            }
        }
        if let Some(v) = class_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::Validation(format!("vertex {v} is in no class")));
        }
        Self::from_class_of(class_of)
    }

    pub fn single(n: usize) -> Self {
        VertexPartition { class_of: vec![0; n], m: n.min(1) }
    }

    pub fn singletons(n: usize) -> Self {
        VertexPartition { class_of: (0..n).collect(), m: n }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn num_vertices(&self) -> usize {
        self.class_of.len()
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.m];
        for (v, &c) in self.class_of.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.m];
        for &c in &self.class_of {
            out[c] += 1;
        }
        out
    }

    /// The common class size, if all classes have the same size.
    pub fn uniform_size(&self) -> Option<usize> {
        let s = self.sizes();
        s.iter().all(|&x| x == s[0]).then(|| s[0])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientMatrix {
    /// `p[i][j]`: neighbours in class j of any vertex in class i.
    pub p: Vec<Vec<usize>>,
    /// Non-principal eigenvalue of a 2x2 quotient.
    pub theta: Option<i64>,
}

/// One bit per spread pair (split special spreads) or per spread member
/// (split symplectic spreads). `true` sends the corresponding set to V2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SideAssignment(pub Vec<bool>);

impl SideAssignment {
    /// Bits of `mask`, least significant first.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        SideAssignment((0..len).map(|i| mask >> i & 1 == 1).collect())
    }
}

#[derive(Clone, Debug)]
pub struct DdgConstruction {
    pub graph: Graph,
    pub partition: VertexPartition,
}

/// Complements adjacency between different classes, keeping each class.
pub fn partial_complement(g: &Graph, p: &VertexPartition) -> Graph {
    let mut h = g.clone();
    for a in 0..g.n() {
        for b in a + 1..g.n() {
            if p.class_of(a) != p.class_of(b) {
                h.toggle_edge(a, b);
            }
        }
    }
    h
}

/// Complements adjacency inside each class, keeping pairs across classes.
pub fn complement_within(g: &Graph, p: &VertexPartition) -> Graph {
    let mut h = g.clone();
    for a in 0..g.n() {
        for b in a + 1..g.n() {
            if p.class_of(a) == p.class_of(b) {
                h.toggle_edge(a, b);
            }
        }
    }
    h
}

/// Index pairs `(i, partner)` with `i < partner`, in increasing `i`.
pub fn spread_pairs(s: &SpecialSpread) -> Vec<(usize, usize)> {
    (0..s.lines.len()).filter(|&i| i < s.pairing[i]).map(|i| (i, s.pairing[i])).collect()
}

/// Sp(4,q) minus the edges between paired lines, complemented. The classes
/// are the spread lines.
pub fn paired_spread_graph(w: &SymplecticQuadrangle, s: &SpecialSpread) -> Result<DdgConstruction> {
    verify_special_spread(w, s).map_err(|e| Error::Domain(format!("not a special spread: {e}")))?;
    let mut g = w.graph().clone();
    for (i, j) in spread_pairs(s) {
        for &a in &s.lines[i] {
            for &b in &s.lines[j] {
                g.remove_edge(a, b);
            }
        }
    }
    let partition = VertexPartition::from_classes(g.n(), &s.lines)?;
    Ok(DdgConstruction { graph: g.complement(), partition })
}

/// The V1/V2 partition: bit `i` of `a` sends the first line of pair `i`
/// to V2 instead of V1.
pub fn split_partition(
    w: &SymplecticQuadrangle,
    s: &SpecialSpread,
    a: &SideAssignment,
) -> Result<VertexPartition> {
    let pairs = spread_pairs(s);
    if a.0.len() != pairs.len() {
        return Err(Error::Domain(format!("assignment has {} bits, spread has {} pairs", a.0.len(), pairs.len())));
    }
    let mut class_of = vec![usize::MAX; w.num_points()];
    for (&(i, j), &flip) in pairs.iter().zip(&a.0) {
        let (c1, c2) = if flip { (1, 0) } else { (0, 1) };
        for &p in &s.lines[i] {
            class_of[p] = c1;
        }
        for &p in &s.lines[j] {
            class_of[p] = c2;
        }
    }
    if class_of.contains(&usize::MAX) {
        return Err(Error::Domain("spread lines do not cover every point".into()));
    }
    VertexPartition::from_class_of(class_of)
}

/// Which graph to build from Sp(4,q) and the V1/V2 partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitRoute {
    /// Complement the subgraphs induced by V1 and by V2.
    ComplementWithin,
    /// Partial complement of Sp(4,q).
    PartialComplementOfSp,
    /// Partial complement of the complement of Sp(4,q).
    PartialComplementOfComplement,
}

impl SplitRoute {
    pub const ALL: [SplitRoute; 3] = [
        SplitRoute::ComplementWithin,
        SplitRoute::PartialComplementOfSp,
        SplitRoute::PartialComplementOfComplement,
    ];
}

pub fn split_spread_graph(
    w: &SymplecticQuadrangle,
    s: &SpecialSpread,
    a: &SideAssignment,
) -> Result<DdgConstruction> {
    split_spread_graph_via(w, s, a, SplitRoute::ComplementWithin)
}

pub fn split_spread_graph_via(
    w: &SymplecticQuadrangle,
    s: &SpecialSpread,
    a: &SideAssignment,
    route: SplitRoute,
) -> Result<DdgConstruction> {
    verify_special_spread(w, s).map_err(|e| Error::Domain(format!("not a special spread: {e}")))?;
    let partition = split_partition(w, s, a)?;
    let sp = w.graph();
    let graph = match route {
        SplitRoute::ComplementWithin => complement_within(sp, &partition),
        SplitRoute::PartialComplementOfSp => partial_complement(sp, &partition),
        SplitRoute::PartialComplementOfComplement => partial_complement(&sp.complement(), &partition),
    };
    Ok(DdgConstruction { graph, partition })
}

fn spread_partition(r: &SymplecticSpread, sp: &Graph) -> Result<VertexPartition> {
    for (i, m) in r.member_points.iter().enumerate() {
        if !sp.is_clique(m) {
            return Err(Error::Domain(format!("spread member {i} is not a clique")));
        }
    }
    VertexPartition::from_classes(sp.n(), &r.member_points)
        .map_err(|e| Error::Domain(format!("spread members do not partition the points: {e}")))
}

/// Sp(2e,q) with the edges inside each spread member removed.
pub fn clique_removed_graph(r: &SymplecticSpread, sp: &Graph) -> Result<DdgConstruction> {
    let partition = spread_partition(r, sp)?;
    let mut g = sp.clone();
    for m in &r.member_points {
        for (i, &a) in m.iter().enumerate() {
            for &b in &m[i + 1..] {
                g.remove_edge(a, b);
            }
        }
    }
    Ok(DdgConstruction { graph: g, partition })
}

/// Sp(2e,q) with the subgraphs on V1 and V2 complemented. Bit `i` of `a`
/// sends member `i` to V2; each side must get half the members.
pub fn split_clique_graph(r: &SymplecticSpread, sp: &Graph, a: &SideAssignment) -> Result<DdgConstruction> {
    if r.q.is_multiple_of(2) {
        return Err(Error::Domain("balanced spread splits need q odd".into()));
    }
    let members = r.member_points.len();
    let ones = a.0.iter().filter(|&&b| b).count();
    if a.0.len() != members || 2 * ones != members {
        return Err(Error::Domain(format!(
            "assignment must put {} of {members} members on each side, got {ones} in V2 ({} bits)",
            members / 2,
            a.0.len()
        )));
    }
    spread_partition(r, sp)?;
    let mut class_of = vec![0; sp.n()];
    for (m, &side) in r.member_points.iter().zip(&a.0) {
        for &p in m {
            class_of[p] = side as usize;
        }
    }
    let partition = VertexPartition::from_class_of(class_of)?;
    Ok(DdgConstruction { graph: complement_within(sp, &partition), partition })
}

/// First `n/2` members on V1, the rest on V2.
pub fn balanced_assignment(members: usize) -> SideAssignment {
    SideAssignment((0..members).map(|i| i >= members / 2).collect())
}

/// Exhaustive check of the DDG conditions over all vertex pairs.
pub fn verify_ddg(g: &Graph, p: &VertexPartition) -> Result<DdgParams> {
    let v = g.n();
    if p.num_vertices() != v {
        return Err(Error::Validation(format!("partition has {} vertices, graph {v}", p.num_vertices())));
    }
    let n = p
        .uniform_size()
        .ok_or_else(|| Error::Validation(format!("class sizes differ: {:?}", p.sizes())))?;
    let k = g.regular_degree().ok_or_else(|| {
        let d0 = g.degree(0);
        let bad = (0..v).find(|&x| g.degree(x) != d0).unwrap();
        Error::cert("regularity", format!("deg(0)={d0}, deg({bad})={}", g.degree(bad)))
    })?;
    // (value, first pair seen) for same-class and cross-class pairs
    let mut seen: [Option<(usize, (usize, usize))>; 2] = [None, None];
    for a in 0..v {
        for b in a + 1..v {
            let c = g.common_neighbors(a, b);
            let t = (p.class_of(a) != p.class_of(b)) as usize;
            match seen[t] {
                None => seen[t] = Some((c, (a, b))),
                Some((want, w)) if want != c => {
                    let name = if t == 0 { "lambda1" } else { "lambda2" };
                    return Err(Error::cert(
                        name,
                        format!("pair {w:?} has {want} common neighbours, pair {:?} has {c}", (a, b)),
                    ));
                }
                _ => {}
            }
        }
    }
    let l1 = seen[0].or(seen[1]).map_or(0, |s| s.0);
    let l2 = seen[1].or(seen[0]).map_or(0, |s| s.0);
    Ok(DdgParams::new(v, k, l1, l2, p.m(), n))
}

/// Checks that every vertex of class i has the same number of neighbours
/// in class j, for all i, j.
pub fn is_equitable(g: &Graph, p: &VertexPartition) -> Result<QuotientMatrix> {
    let m = p.m();
    let mut rows: Vec<Option<(usize, Vec<usize>)>> = vec![None; m];
    for x in 0..g.n() {
        let mut counts = vec![0; m];
        for y in g.neighbors(x) {
            counts[p.class_of(y)] += 1;
        }
        let c = p.class_of(x);
        match &rows[c] {
            None => rows[c] = Some((x, counts)),
            Some((w, want)) => {
                if let Some(j) = (0..m).find(|&j| want[j] != counts[j]) {
                    return Err(Error::cert(
                        "equitable",
                        format!(
                            "vertices {w} and {x} of class {c} have {} and {} neighbours in class {j}",
                            want[j], counts[j]
                        ),
                    ));
                }
            }
        }
    }
    let p: Vec<Vec<usize>> = rows.into_iter().map(|r| r.map(|r| r.1).unwrap_or_default()).collect();
    let theta = (m == 2).then(|| p[0][0] as i64 - p[1][0] as i64);
    Ok(QuotientMatrix { p, theta })
}
