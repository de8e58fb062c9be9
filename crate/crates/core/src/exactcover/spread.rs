//! Special spreads as exact covers.
//!
//! Point side: columns are the points of W(q), rows the hyperbolic pairs.
//! Line side: columns are the lines of Q(4,q) (the points of W(q) under
//! duality), one row per hyperbolic point x listing the lines inside
//! `x^perp`. Row tags are hyperbolic-pair indices in both cases, so the
//! two instances produce comparable solutions.

use serde::Serialize;

use super::{solve_all, ExactCoverInstance, SolveOptions};
use crate::classify::HyperbolicPointModel;
use crate::error::{Error, Result};
use crate::projgeom::forms::Polarity;
use crate::projgeom::linalg;
use crate::spreads::SymplecticQuadrangle;

pub fn build_spread_instance(w: &SymplecticQuadrangle) -> Result<ExactCoverInstance> {
    if w.q().is_multiple_of(2) {
        return Err(Error::Domain("special spreads need q odd".into()));
    }
    let rows = w.all_pairs().iter().map(|p| p.points.clone()).collect();
    let mut inst = ExactCoverInstance::new(w.num_points(), rows)?;
    inst.row_tags = (0..w.all_pairs().len()).collect();
    Ok(inst)
}

pub fn build_dual_instance(model: &HyperbolicPointModel) -> Result<ExactCoverInstance> {
    let pg4 = model.pg4();
    let f = pg4.field();
    let g = model.form().gram();
    let lines = model.quadric_lines();
    let rows: Vec<Vec<usize>> = model
        .points()
        .iter()
        .map(|&x| {
            let xv = pg4.coords(x);
            (0..lines.len())
                .filter(|&m| {
                    lines[m][..2]
                        .iter()
                        .all(|&p| linalg::bilinear(f, g, xv, pg4.coords(p)).is_zero())
                })
                .collect()
        })
        .collect();
    let mut inst = ExactCoverInstance::new(lines.len(), rows)?;
    inst.row_tags = (0..model.len()).map(|x| model.pair_of_x(x)).collect();
    Ok(inst)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnumerationMode {
    Full,
    /// Spreads through pair 0.
    FixOne,
    /// Spreads through both pairs of each given representative.
    FixPair(Vec<(usize, usize)>),
}

#[derive(Clone, Debug, Serialize)]
pub struct EnumerationResult {
    pub q: usize,
    pub mode: EnumerationMode,
    /// Sorted hyperbolic-pair indices of every spread found.
    pub spreads: Vec<Vec<usize>>,
    /// Spreads found per forced set (one entry for `Full` and `FixOne`).
    pub per_forced: Vec<u64>,
    /// Total number of special spreads, where the mode determines it.
    pub total: Option<u64>,
}

pub fn enumerate_special_spreads(
    w: &SymplecticQuadrangle,
    mode: EnumerationMode,
    parallel: bool,
) -> Result<EnumerationResult> {
    let inst = build_spread_instance(w)?;
    let q = w.q();
    let run = |forced: Vec<usize>| -> Result<Vec<Vec<usize>>> {
        let opts = SolveOptions { forced_rows: forced, max_solutions: None, parallel };
        Ok(solve_all(&inst, &opts)?
            .into_iter()
            .map(|rows| {
                let mut s: Vec<usize> = rows.iter().map(|&r| inst.row_tags[r]).collect();
                s.sort_unstable();
                s
            })
            .collect())
    };
    let forced_sets: Vec<Vec<usize>> = match &mode {
        EnumerationMode::Full => vec![vec![]],
        EnumerationMode::FixOne => vec![vec![0]],
        EnumerationMode::FixPair(reps) => reps.iter().map(|&(a, b)| vec![a, b]).collect(),
    };
    let mut spreads = Vec::new();
    let mut per_forced = Vec::new();
    for f in forced_sets {
        let s = run(f)?;
        per_forced.push(s.len() as u64);
        spreads.extend(s);
    }
    let half = (q * q).div_ceil(2);
    let total = match mode {
        EnumerationMode::Full => Some(spreads.len() as u64),
        EnumerationMode::FixOne => {
            let n = spreads.len() * w.all_pairs().len();
            if !n.is_multiple_of(half) {
                return Err(Error::Internal(format!("{n} is not divisible by {half}")));
            }
            Some((n / half) as u64)
        }
        EnumerationMode::FixPair(_) => None,
    };
    Ok(EnumerationResult { q, mode, spreads, per_forced, total })
}
