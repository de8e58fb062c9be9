//! Certifies Sp(2e,q) as strongly regular and prints its spectrum.
//!
//! cargo run --release --example symplectic_graph -- 3 3

use std::sync::Arc;

use spreadforge::gf::FieldSpec;
use spreadforge::spgraph::{build_sp_graph, graph6, srg_spectrum, verify_srg};

fn main() -> spreadforge::Result<()> {
    let mut args = std::env::args().skip(1).filter_map(|a| a.parse::<usize>().ok());
    let q = args.next().unwrap_or(3);
    let e = args.next().unwrap_or(2);
    let (g, _) = build_sp_graph(e, Arc::new(FieldSpec::new(q as u32)?))?;
    let p = verify_srg(&g)?;
    let s = srg_spectrum(&p)?;
    println!("Sp({},{q}) = srg({}, {}, {}, {})", 2 * e, p.v, p.k, p.lambda, p.mu);
    println!("eigenvalues {}^1, {}^{}, {}^{}", s.k, s.r, s.m_r, s.s, s.m_s);
    println!("complement: {:?}", p.complement());
    let g6 = graph6::encode(&g);
    println!("graph6: {} bytes, starts {}", g6.len(), &g6[..g6.len().min(24)]);
    Ok(())
}
