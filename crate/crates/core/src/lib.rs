//! Exact arithmetic for the mod `p` reduction of two-dimensional semi-stable
//! representations of weight `k ∈ [3, p+1]`, together with the supporting machinery:
//! truncated p-adic scalars, Mahler and wavelet expansions, the branch `log_L` of the
//! p-adic logarithm, Hecke operators on the Bruhat–Tits tree of `GL_2(Q_p)`, the Iwahori
//! mod `p` local Langlands dictionary and a small congruence laboratory.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod field;
pub mod lattice;
pub mod llc;
pub mod mahler;
pub mod padic;
pub mod polylog;
pub mod tree;

pub use error::{Error, Result};
pub use padic::{PadicScalar, Prime, Surd, Valuation};
