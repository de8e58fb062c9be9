//! Points and lines of W(q), the Klein correspondence with Q+(5,q), and the
//! hyperbolic pairs.
//!
//! cargo run --example geometry -- 3

use spreadforge::projgeom::{klein_form, klein_inverse, klein_map};
use spreadforge::spreads::SymplecticQuadrangle;

fn main() -> spreadforge::Result<()> {
    let q: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let w = SymplecticQuadrangle::new(q)?;
    let f = w.field();
    let iso = w.isotropic_lines().len();
    println!("W({q}): {} points, {} lines of PG(3,{q}), {iso} totally isotropic", w.num_points(), w.lines().len());

    // every line goes to a point of the Klein quadric and back
    let quadric = klein_form(f).points(w.pg5());
    let mut round_trip = 0;
    for (l, line) in w.lines().iter().enumerate() {
        let x = klein_map(w.pg3(), w.pg5(), line)?;
        if klein_inverse(w.pg5(), x)? == *line && x == w.klein_point(l) {
            round_trip += 1;
        }
    }
    println!("Klein quadric: {} points, {round_trip} lines map there and back", quadric.len());

    let p = &w.all_pairs()[0];
    println!(
        "{} hyperbolic pairs; pair 0 joins lines {} and {} ({} points)",
        w.all_pairs().len(),
        p.l,
        p.l_perp,
        p.points.len()
    );
    let l = w.isotropic_lines()[0];
    println!("isotropic line {l} is its own polar: {}", w.perp_line(l) == l);
    Ok(())
}
