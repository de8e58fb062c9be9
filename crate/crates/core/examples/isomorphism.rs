//! Canonical forms of the complement-of-spread graphs: graphs from
//! equivalent spreads get equal certificates, graphs from the two q=5
//! classes do not.
//!
//! cargo run --release --example isomorphism -- 5

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spreadforge::classify::{classify_by_orbits, HyperbolicPointModel, SimilitudeGroup, DEFAULT_ORBIT_BUDGET};
use spreadforge::ddg::{canonical_labeling, paired_spread_graph, DEFAULT_CANONICAL_BUDGET};
use spreadforge::exactcover::{enumerate_special_spreads, EnumerationMode};
use spreadforge::spreads::{SpecialSpread, SymplecticQuadrangle};

fn main() -> spreadforge::Result<()> {
    let q: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let w = SymplecticQuadrangle::new(q)?;
    let model = HyperbolicPointModel::new(&w)?;
    let g = SimilitudeGroup::new(&w)?;
    let all = enumerate_special_spreads(&w, EnumerationMode::Full, true)?;
    let classes = classify_by_orbits(&model, &g, &all.spreads, DEFAULT_ORBIT_BUDGET)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut certs = Vec::new();
    for c in &classes {
        let s = SpecialSpread::from_pairs(&w, &c.representative);
        let t = Instant::now();
        let lab = canonical_labeling(&paired_spread_graph(&w, &s)?.graph, DEFAULT_CANONICAL_BUDGET)?;
        println!(
            "class {}: {} search nodes, {} automorphisms found, {:.1?}",
            c.characteristic,
            lab.nodes,
            lab.automorphisms.len(),
            t.elapsed()
        );
        // an equivalent spread: the image under a random group element
        let perm = g.random_pair_perm(&mut rng, 20);
        let mut image: Vec<usize> = c.representative.iter().map(|&u| perm.apply(u)).collect();
        image.sort_unstable();
        let other = canonical_labeling(
            &paired_spread_graph(&w, &SpecialSpread::from_pairs(&w, &image))?.graph,
            DEFAULT_CANONICAL_BUDGET,
        )?;
        println!("  image of the spread gives the same certificate: {}", other.certificate == lab.certificate);
        certs.push(lab.certificate);
    }
    for i in 0..certs.len() {
        for j in i + 1..certs.len() {
            println!("classes {i} and {j} isomorphic: {}", certs[i] == certs[j]);
        }
    }
    let t = Instant::now();
    let sp = canonical_labeling(w.graph(), DEFAULT_CANONICAL_BUDGET)?;
    println!("Sp(4,{q}): {} search nodes, {:.1?}", sp.nodes, t.elapsed());
    Ok(())
}
