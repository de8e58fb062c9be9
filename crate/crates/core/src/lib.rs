pub mod bitset;
pub mod classify;
pub mod cli;
pub mod ddg;
pub mod error;
pub mod exactcover;
pub mod gf;
pub mod projgeom;
pub mod spgraph;
pub mod spreads;

pub use error::{Error, Result};
