//! Spreads of PG(3,q) and PG(2e-1,q).

mod quadrangle;
mod special;
mod symplectic;

pub use quadrangle::{enumerate_u, HyperbolicPair, SymplecticQuadrangle};
pub use special::{
    construct_special_spread, construct_special_spread_with, elliptic_solids,
    verify_special_spread, SpecialSpread, SpecialSpreadConstruction, BETA_SEARCH_BUDGET,
};
pub use symplectic::{
    build_symplectic_spread, symplectic_basis, verify_symplectic_spread, SymplecticSpread,
};

use crate::error::Result;
use crate::spgraph::{build_pair_eigenfunction, EigenFunction};

/// The `+1/-1` eigenfunction supported on a hyperbolic pair.
pub fn pair_eigenfunction(w: &SymplecticQuadrangle, u: usize) -> Result<EigenFunction> {
    let p = &w.all_pairs()[u];
    build_pair_eigenfunction(w.graph(), w.line_points(p.l), w.line_points(p.l_perp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spgraph::check_eigenfunction;

    #[test]
    fn pair_functions_are_tight() {
        for q in [3u32, 4, 5] {
            let w = SymplecticQuadrangle::new(q).unwrap();
            for u in 0..w.all_pairs().len() {
                let f = pair_eigenfunction(&w, u).unwrap();
                assert_eq!(f.theta, -(q as i64 + 1));
                assert_eq!(f.support().len(), 2 * (q as usize + 1));
                assert!(check_eigenfunction(w.graph(), &f).unwrap());
            }
        }
    }
}
