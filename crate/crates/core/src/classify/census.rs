//! Complete classification of the special spreads of W(q).

use std::collections::BTreeMap;

use serde::Serialize;

use super::{
    classify_by_orbits, classify_through_pair, ClassReport, HyperbolicPointModel, PairOrbits, SimilitudeGroup,
    DEFAULT_ORBIT_BUDGET,
};
use crate::error::{Error, Result};
use crate::exactcover::{enumerate_special_spreads, EnumerationMode};
use crate::spreads::SymplecticQuadrangle;

/// Largest q for which every spread is enumerated and classes are group
/// orbits; beyond it spreads through fixed disjoint pairs are counted.
pub const FULL_CENSUS_MAX_Q: usize = 5;

#[derive(Clone, Debug, Serialize)]
pub struct SpreadCensus {
    pub q: usize,
    pub group_order: u128,
    pub mode: EnumerationMode,
    /// Spreads produced by the enumeration.
    pub enumerated: u64,
    /// Total number of special spreads, the sum of the class sizes.
    pub total: u64,
    pub classes: Vec<ClassReport>,
}

/// Enumerates and classifies. For q <= [`FULL_CENSUS_MAX_Q`] classes are
/// orbits of the full list. Otherwise each orbit on disjoint pairs is fixed in
/// turn, classes are separated by characteristic, and the stabilizer orders
/// obtained through different orbits must agree.
pub fn census_special_spreads(
    w: &SymplecticQuadrangle,
    model: &HyperbolicPointModel,
    g: &SimilitudeGroup,
) -> Result<SpreadCensus> {
    let q = w.q();
    if q <= FULL_CENSUS_MAX_Q {
        let res = enumerate_special_spreads(w, EnumerationMode::Full, true)?;
        let classes = classify_by_orbits(model, g, &res.spreads, DEFAULT_ORBIT_BUDGET)?;
        let total: u64 = classes.iter().map(|c| c.orbit_size).sum();
        if total != res.spreads.len() as u64 {
            return Err(Error::Internal(format!("orbits cover {total} of {} spreads", res.spreads.len())));
        }
        return Ok(SpreadCensus {
            q,
            group_order: g.order(),
            mode: res.mode,
            enumerated: res.spreads.len() as u64,
            total,
            classes,
        });
    }
    let orbits = PairOrbits::new(w, g);
    let disjoint: Vec<usize> = (0..orbits.orbits.len()).filter(|&o| orbits.orbits[o].disjoint).collect();
    let res = enumerate_special_spreads(w, EnumerationMode::FixPair(orbits.disjoint_representatives()), true)?;
    let mut merged: BTreeMap<_, ClassReport> = BTreeMap::new();
    let mut start = 0;
    for (&o, &n) in disjoint.iter().zip(&res.per_forced) {
        let chunk = &res.spreads[start..start + n as usize];
        start += n as usize;
        for c in classify_through_pair(model, &orbits, o, g.order(), chunk)? {
            match merged.get_mut(&c.characteristic) {
                Some(m) if m.stabilizer_order != c.stabilizer_order => {
                    return Err(Error::Internal(format!(
                        "class {}: stabilizer {} through one orbit, {} through another",
                        c.characteristic, m.stabilizer_order, c.stabilizer_order
                    )))
                }
                Some(m) => m.found += c.found,
                None => {
                    merged.insert(c.characteristic.clone(), c);
                }
            }
        }
    }
    let classes: Vec<ClassReport> = merged.into_values().collect();
    Ok(SpreadCensus {
        q,
        group_order: g.order(),
        mode: res.mode,
        enumerated: res.spreads.len() as u64,
        total: classes.iter().map(|c| c.orbit_size).sum(),
        classes,
    })
}
