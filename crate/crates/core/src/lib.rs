//! Quantum Tanner codes: construction on left-right Cayley complexes, local
//! dual tensor codes with their robustness checks, and an iterative decoder
//! that lowers a syndrome-computable potential by flips inside local views.

pub mod cayley_complex;
pub mod decoder;
pub mod error;
pub mod gf2;
pub mod local_codes;
pub mod qtc;

pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector};
