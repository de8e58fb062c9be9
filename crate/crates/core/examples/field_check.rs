//! Builds GF(q) for a few prime powers and checks the field axioms.
//!
//! cargo run --example field_check -- 2 3 4 8 9 25 27 49

use spreadforge::gf::FieldSpec;

fn main() -> spreadforge::Result<()> {
    let mut qs: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    if qs.is_empty() {
        qs = vec![2, 3, 4, 5, 7, 8, 9, 25, 27, 49];
    }
    for q in qs {
        let f = FieldSpec::new(q)?;
        let r = f.check_axioms()?;
        let g = f.primitive_element();
        let squares = if f.is_odd() {
            f.nonzero().filter(|&a| f.is_square(a).unwrap_or(false)).count()
        } else {
            q as usize - 1
        };
        println!(
            "GF({q}) = GF({})[x]/{:?}: primitive element index {}, {} nonzero squares, {} pairs and {} triples checked{}",
            f.p(),
            f.modulus(),
            g.index(),
            squares,
            r.pairs_checked,
            r.triples_checked,
            if r.exhaustive { "" } else { " (sampled)" }
        );
    }
    Ok(())
}
