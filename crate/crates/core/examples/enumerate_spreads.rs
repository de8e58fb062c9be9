//! Enumerates special spreads of W(q) by exact cover and counts them by
//! characteristic.
//!
//! cargo run --release --example enumerate_spreads -- 5
//! cargo run --release --example enumerate_spreads -- 7   (fixed-pair mode)

use std::collections::BTreeMap;
use std::time::Instant;

use spreadforge::classify::{characteristic_of_pairs, HyperbolicPointModel, PairOrbits, SimilitudeGroup};
use spreadforge::exactcover::{enumerate_special_spreads, EnumerationMode};
use spreadforge::spreads::SymplecticQuadrangle;

fn main() -> spreadforge::Result<()> {
    let q: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let t = Instant::now();
    let w = SymplecticQuadrangle::new(q)?;
    let model = HyperbolicPointModel::new(&w)?;
    let mode = if q <= 5 {
        EnumerationMode::Full
    } else {
        let g = SimilitudeGroup::new(&w)?;
        EnumerationMode::FixPair(PairOrbits::new(&w, &g).disjoint_representatives())
    };
    println!("q={q} mode={mode:?}");
    let res = enumerate_special_spreads(&w, mode, true)?;
    println!("found {} spreads (per forced set {:?}) in {:.1?}", res.spreads.len(), res.per_forced, t.elapsed());
    if let Some(n) = res.total {
        println!("total special spreads: {n}");
    }
    let mut by_char = BTreeMap::new();
    for s in &res.spreads {
        *by_char.entry(characteristic_of_pairs(&model, s)).or_insert(0u64) += 1;
    }
    for (c, n) in &by_char {
        println!("{c}  x{n}");
    }
    println!("{} distinct characteristics", by_char.len());
    Ok(())
}
