//! The exact-cover solver on its own: text round trip, streaming, and resuming
//! from a checkpoint.
//!
//! cargo run --release --example exact_cover

use std::ops::ControlFlow;

use spreadforge::exactcover::{build_spread_instance, ExactCoverInstance, Solver};
use spreadforge::spreads::SymplecticQuadrangle;

fn main() -> spreadforge::Result<()> {
    let tiny = ExactCoverInstance::from_text("# cols 3\n0 1\n2\n0\n1 2\n")?;
    let solver = Solver::new(&tiny)?;
    solver.run(&[], None, |rows, _| {
        println!("cover: rows {rows:?}");
        ControlFlow::Continue(())
    });

    let w = SymplecticQuadrangle::new(5)?;
    let inst = build_spread_instance(&w)?;
    println!("W(5) instance: {} columns, {} rows", inst.n_cols, inst.rows.len());
    let solver = Solver::new(&inst)?;
    let forced = [0];
    // stop after 100 covers, then resume from the checkpoint
    let mut first = Vec::new();
    let ck = solver.run(&forced, None, |rows, _| {
        first.push(rows.to_vec());
        if first.len() == 100 {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    let mut rest = 0;
    let done = solver.run(&forced, Some(&ck), |_, _| {
        rest += 1;
        ControlFlow::Continue(())
    });
    println!(
        "covers through row 0: {} before the checkpoint, {rest} after (finished: {})",
        first.len(),
        done.finished
    );
    Ok(())
}
