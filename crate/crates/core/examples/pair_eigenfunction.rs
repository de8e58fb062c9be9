//! The +1/-1 function on a hyperbolic line and its polar is an eigenvector of
//! Sp(4,q) for the smallest eigenvalue -(q+1), with the least possible support.
//!
//! cargo run --release --example pair_eigenfunction -- 5

use spreadforge::spgraph::{check_eigenfunction, srg_spectrum, verify_srg};
use spreadforge::spreads::{pair_eigenfunction, SymplecticQuadrangle};

fn main() -> spreadforge::Result<()> {
    let q: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let w = SymplecticQuadrangle::new(q)?;
    let spec = srg_spectrum(&verify_srg(w.graph())?)?;
    let mut ok = 0;
    for u in 0..w.all_pairs().len() {
        let f = pair_eigenfunction(&w, u)?;
        if f.theta == spec.s && f.support().len() as i64 == -2 * spec.s && check_eigenfunction(w.graph(), &f)? {
            ok += 1;
        }
    }
    println!("q={q}: s = {}, {ok} of {} pairs give eigenfunctions with support {}", spec.s, w.all_pairs().len(), -2 * spec.s);
    Ok(())
}
