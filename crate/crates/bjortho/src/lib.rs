//! Numerical toolkit for Birkhoff-James orthogonality and its approximate
//! variants on finite-dimensional real lp spaces, for vectors and for bounded
//! linear operators, with brute-force oracles for empirical verification.

pub mod cli;
pub mod error;
pub mod linesearch;
pub mod norms;
pub mod op_space;
pub mod oracle;
pub mod theorems;
pub mod vec_ortho;

pub use error::{BjError, Result};

/// Entry point used by the `bjortho` binary; returns the process exit code.
pub fn run_cli() -> i32 {
    cli::run()
}
