//! Counts the non-isomorphic graphs obtained from all V1/V2 splits of one
//! representative of each special-spread class.
//!
//! cargo run --release --example split_census -- 5

use std::time::Instant;

use spreadforge::classify::{classify_by_orbits, HyperbolicPointModel, SimilitudeGroup, DEFAULT_ORBIT_BUDGET};
use spreadforge::ddg::enumerate_split_graphs;
use spreadforge::exactcover::{enumerate_special_spreads, EnumerationMode};
use spreadforge::spreads::{SpecialSpread, SymplecticQuadrangle};

fn main() -> spreadforge::Result<()> {
    let q: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let t = Instant::now();
    let w = SymplecticQuadrangle::new(q)?;
    let model = HyperbolicPointModel::new(&w)?;
    let g = SimilitudeGroup::new(&w)?;
    let all = enumerate_special_spreads(&w, EnumerationMode::Full, true)?;
    let classes = classify_by_orbits(&model, &g, &all.spreads, DEFAULT_ORBIT_BUDGET)?;
    let reps: Vec<SpecialSpread> =
        classes.iter().map(|c| SpecialSpread::from_pairs(&w, &c.representative)).collect();
    for c in &classes {
        println!("spread class {} (stabilizer {})", c.characteristic, c.stabilizer_order);
    }
    let census = enumerate_split_graphs(&w, &reps, false)?;
    println!(
        "{} splits per spread, {} invariant buckets, {} canonical forms",
        census.assignments, census.buckets, census.canonical_forms_computed
    );
    println!("classes per spread: {:?}", census.per_spread);
    println!("classes shared between spreads: {:?}", census.shared);
    println!("total classes: {} ({:.1?})", census.classes, t.elapsed());
    Ok(())
}
