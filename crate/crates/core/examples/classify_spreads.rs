//! Classifies the special spreads of W(q): group orbits for q <= 5, classes
//! by characteristic through fixed pairs for q = 7.
//!
//! cargo run --release --example classify_spreads -- 7

use std::time::Instant;

use spreadforge::classify::{
    census_special_spreads, characteristic_from_lines, HyperbolicPointModel, SimilitudeGroup,
};
use spreadforge::spreads::SymplecticQuadrangle;

fn main() -> spreadforge::Result<()> {
    let q: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(5);
    let t = Instant::now();
    let w = SymplecticQuadrangle::new(q)?;
    let model = HyperbolicPointModel::new(&w)?;
    let g = SimilitudeGroup::new(&w)?;
    println!("group order {} (certified), {} relations on the model points", g.order(), model.num_relations());
    let c = census_special_spreads(&w, &model, &g)?;
    println!("{} spreads enumerated, {} in total, {} classes", c.enumerated, c.total, c.classes.len());
    for cl in &c.classes {
        let from_lines = characteristic_from_lines(&w, &model, &cl.representative)?;
        println!(
            "  {} (from lines: {})  orbit {}  stabilizer {}",
            cl.characteristic, from_lines, cl.orbit_size, cl.stabilizer_order
        );
    }
    println!("{:.1?}", t.elapsed());
    Ok(())
}
