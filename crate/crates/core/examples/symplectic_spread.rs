//! The field-model symplectic spread of PG(2e-1,q): members are cliques of
//! Sp(2e,q) and form an equitable partition.
//!
//! cargo run --release --example symplectic_spread -- 3 3

use std::sync::Arc;

use spreadforge::ddg::{is_equitable, VertexPartition};
use spreadforge::gf::FieldSpec;
use spreadforge::projgeom::SymplecticForm;
use spreadforge::spgraph::build_sp_graph;
use spreadforge::spreads::{build_symplectic_spread, verify_symplectic_spread};

fn main() -> spreadforge::Result<()> {
    let mut args = std::env::args().skip(1).filter_map(|a| a.parse::<usize>().ok());
    let q = args.next().unwrap_or(3);
    let e = args.next().unwrap_or(2);
    let f = Arc::new(FieldSpec::new(q as u32)?);
    let r = build_symplectic_spread(e, f.clone())?;
    let (g, space) = build_sp_graph(e, f.clone())?;
    verify_symplectic_spread(&space, &SymplecticForm::standard(&f, e), &g, &r.members)?;
    println!("{} members of size {} partition the {} points", r.members.len(), r.member_points[0].len(), g.n());
    let quot = is_equitable(&g, &VertexPartition::from_classes(g.n(), &r.member_points)?)?;
    println!("quotient row 0: {:?}", quot.p[0]);
    println!("base change to the standard form: {:?}", r.base_change.iter().map(|row| row.iter().map(|x| x.index()).collect::<Vec<_>>()).collect::<Vec<_>>());
    Ok(())
}
