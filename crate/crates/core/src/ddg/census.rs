//! Isomorphism classes of the graphs obtained from all V1/V2 splits of one
//! or more special spreads.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::canonical::{canonical_form, Certificate};
use super::{spread_pairs, split_spread_graph, verify_ddg, DdgParams, SideAssignment};
use crate::error::{Error, Result};
use crate::spgraph::Graph;
use crate::spreads::{SpecialSpread, SymplecticQuadrangle};

#[derive(Clone, Debug, Serialize)]
pub struct SplitCensus {
    pub q: usize,
    /// Assignments per spread, modulo swapping V1 and V2.
    pub assignments: usize,
    /// Isomorphism classes among the graphs of each spread.
    pub per_spread: Vec<usize>,
    /// Classes over all spreads.
    pub classes: usize,
    /// Classes met by more than one spread, with the spreads meeting them.
    pub shared: Vec<Vec<usize>>,
    /// Invariant buckets before canonical forms were computed.
    pub buckets: usize,
    pub canonical_forms_computed: usize,
}

/// Isomorphism invariant: for each vertex, the sorted numbers of edges
/// inside the common neighbourhood of each incident edge; then the sorted
/// list of those vertex profiles, hashed.
pub fn fingerprint(g: &Graph) -> u64 {
    use std::hash::{Hash, Hasher};
    let n = g.n();
    let words = g.words();
    let mut per_vertex: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut common = vec![0u64; words];
    for a in 0..n {
        for b in g.neighbors(a).filter(|&b| b > a) {
            for (c, (x, y)) in common.iter_mut().zip(g.row(a).iter().zip(g.row(b))) {
                *c = x & y;
            }
            let mut e = 0u32;
            for (wi, &word) in common.iter().enumerate() {
                let mut m = word;
                while m != 0 {
                    let x = wi * 64 + m.trailing_zeros() as usize;
                    m &= m - 1;
                    e += g.row(x).iter().zip(&common).map(|(r, c)| (r & c).count_ones()).sum::<u32>();
                }
            }
            per_vertex[a].push(e / 2);
            per_vertex[b].push(e / 2);
        }
    }
    for p in per_vertex.iter_mut() {
        p.sort_unstable();
    }
    per_vertex.sort_unstable();
    let mut h = std::collections::hash_map::DefaultHasher::new();
    per_vertex.hash(&mut h);
    h.finish()
}

/// Builds every split of every spread (the first pair's first line is kept
/// in V1), buckets the graphs by [`fingerprint`], and separates each
/// bucket with more than one graph by canonical forms. With `verify` every
/// graph is also checked against the closed-form tuple.
pub fn enumerate_split_graphs(
    w: &SymplecticQuadrangle,
    spreads: &[SpecialSpread],
    verify: bool,
) -> Result<SplitCensus> {
    let q = w.q();
    let want = DdgParams::split_spread(q);
    let half = (q * q).div_ceil(2);
    let free = half - 1;
    if free >= 32 {
        return Err(Error::Unsupported(format!("2^{free} assignments per spread")));
    }
    let assignments = 1usize << free;
    for s in spreads {
        if spread_pairs(s).len() != half {
            return Err(Error::Domain("spread does not have (q^2+1)/2 pairs".into()));
        }
    }
    let build = |si: usize, mask: usize| -> Result<Graph> {
        let a = SideAssignment::from_mask(half, (mask as u64) << 1);
        let c = split_spread_graph(w, &spreads[si], &a)?;
        if verify {
            let p = verify_ddg(&c.graph, &c.partition)?;
            if p != want {
                return Err(Error::Internal(format!("split {mask:#x} of spread {si} gives {p}, expected {want}")));
            }
        }
        Ok(c.graph)
    };
    let jobs: Vec<(usize, usize)> =
        (0..spreads.len()).flat_map(|si| (0..assignments).map(move |m| (si, m))).collect();
    let prints: Vec<u64> = jobs
        .par_iter()
        .map(|&(si, m)| build(si, m).map(|g| fingerprint(&g)))
        .collect::<Result<_>>()?;
    let mut bucket_size: HashMap<u64, usize> = HashMap::new();
    for &f in &prints {
        *bucket_size.entry(f).or_default() += 1;
    }
    let need: Vec<usize> = (0..jobs.len()).filter(|&i| bucket_size[&prints[i]] > 1).collect();
    let certs: Vec<(usize, Certificate)> = need
        .par_iter()
        .map(|&i| {
            let (si, m) = jobs[i];
            Ok((i, canonical_form(&build(si, m)?)?))
        })
        .collect::<Result<_>>()?;
    let mut cert_of: HashMap<usize, Certificate> = certs.into_iter().collect();
    // class key: fingerprint plus certificate (absent for singleton buckets)
    let mut class_spreads: BTreeMap<(u64, Option<Certificate>), BTreeSet<usize>> = BTreeMap::new();
    for (i, &(si, _)) in jobs.iter().enumerate() {
        let key = (prints[i], cert_of.remove(&i));
        class_spreads.entry(key).or_default().insert(si);
    }
    let per_spread =
        (0..spreads.len()).map(|si| class_spreads.values().filter(|s| s.contains(&si)).count()).collect();
    let shared = class_spreads
        .values()
        .filter(|s| s.len() > 1)
        .map(|s| s.iter().copied().collect())
        .collect();
    Ok(SplitCensus {
        q,
        assignments,
        per_spread,
        classes: class_spreads.len(),
        shared,
        buckets: bucket_size.len(),
        canonical_forms_computed: need.len(),
    })
}
