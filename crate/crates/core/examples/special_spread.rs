//! Constructs a special spread of W(q) from an ovoid of the Klein quadric and
//! certifies it.
//!
//! cargo run --release --example special_spread -- 3 5 7

use spreadforge::spreads::{construct_special_spread, verify_special_spread, SymplecticQuadrangle};

fn main() -> spreadforge::Result<()> {
    let mut qs: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    if qs.is_empty() {
        qs = vec![3, 5, 7];
    }
    for q in qs {
        let w = SymplecticQuadrangle::new(q)?;
        let s = construct_special_spread(&w)?;
        verify_special_spread(&w, &s)?;
        let pairs = s.pair_indices(&w)?;
        println!("q={q}: {} lines in {} polar pairs, verified; pairs {:?}", s.lines.len(), pairs.len(), pairs);
    }
    Ok(())
}
