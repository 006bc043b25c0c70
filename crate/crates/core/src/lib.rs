//! Galois groups of characteristic polynomials of random walks in the
//! arithmetic groups `SL(m, Z)` and `Sp(2g, Z)`.
//!
//! The library samples walk products, reads Frobenius conjugacy classes off
//! the factorization pattern of the characteristic polynomial modulo good
//! primes, and certifies that the Galois group is the full Weyl group once
//! every conjugacy class has been observed. Supporting modules count
//! Frobenius classes over whole finite groups, analyze coset Markov chains,
//! and orchestrate the experiments.

pub mod algebra;
pub mod census;
pub mod chain;
pub mod error;
pub mod frobenius;
pub mod harness;
pub mod rng;
pub mod stats;
pub mod walker;
pub mod weyl;

pub use error::{Error, Result};
