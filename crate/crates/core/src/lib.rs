//! Finite computable categories: exactness checkers for finite carriers,
//! postulated cocones via zig-zag sieves, and budgeted lex-colimit closures.

pub mod error;
pub mod exactness;
pub mod carrier;
pub mod cli;
pub mod completions;
pub mod docfile;
pub mod postulate;
pub mod fincat;
pub mod relcalc;
mod unionfind;

pub use error::{Error, Result};
pub use unionfind::UnionFind;
