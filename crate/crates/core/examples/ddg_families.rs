//! The four divisible design graph families for one q, each certified by a
//! full common-neighbour count and compared with its closed form.
//!
//! cargo run --release --example ddg_families -- 3

use std::sync::Arc;

use spreadforge::ddg::{
    balanced_assignment, clique_removed_graph, is_equitable, paired_spread_graph, split_clique_graph,
    split_spread_graph, verify_ddg, DdgConstruction, DdgParams, SideAssignment,
};
use spreadforge::gf::FieldSpec;
use spreadforge::spgraph::build_sp_graph;
use spreadforge::spreads::{build_symplectic_spread, construct_special_spread, SymplecticQuadrangle};

fn report(name: &str, c: &DdgConstruction, want: DdgParams) -> spreadforge::Result<()> {
    let p = verify_ddg(&c.graph, &c.partition)?;
    let quot = is_equitable(&c.graph, &c.partition)?;
    println!(
        "{name:<26} {p}  closed form {}  proper {}  quotient theta {:?}",
        if p == want { "ok" } else { "MISMATCH" },
        p.is_proper(),
        quot.theta
    );
    Ok(())
}

fn main() -> spreadforge::Result<()> {
    let q: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let f = Arc::new(FieldSpec::new(q as u32)?);
    if q % 2 == 1 {
        let w = SymplecticQuadrangle::with_field(f.clone())?;
        let s = construct_special_spread(&w)?;
        report("paired special spread", &paired_spread_graph(&w, &s)?, DdgParams::paired_spread(q))?;
        let half = (q * q).div_ceil(2);
        let a = SideAssignment::from_mask(half, 0b101);
        report("split special spread", &split_spread_graph(&w, &s, &a)?, DdgParams::split_spread(q))?;
    }
    let r = build_symplectic_spread(2, f.clone())?;
    let (sp, _) = build_sp_graph(2, f)?;
    report("symplectic cliques removed", &clique_removed_graph(&r, &sp)?, DdgParams::clique_removed(2, q))?;
    if q % 2 == 1 {
        let a = balanced_assignment(r.members.len());
        report("split symplectic spread", &split_clique_graph(&r, &sp, &a)?, DdgParams::split_clique(2, q))?;
    }
    Ok(())
}
