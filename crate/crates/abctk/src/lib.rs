//! Exact arithmetic for zero-sum integer tuples and their height/radical
//! statistics.
//!
//! The crate is organized bottom-up:
//!
//! * [`arith`] — integer factorization, radicals, valuations, multiplicative
//!   orders, and exact univariate polynomial gcd/radical over the rationals;
//! * [`counting`] — canonical tuple points, heights, full and truncated
//!   counting functions, quality and excess, plus the polynomial analogues;
//! * [`constructions`] — deterministic generators for high-quality tuples
//!   (squaring a triple, the `3^(2^k)` family, and power-gap constructions
//!   for n = 4 and general n);
//! * [`search`] — sieve-backed exhaustive searches for triples and
//!   quadruples above a quality threshold;
//! * [`toolkit`] — JSONL persistence, batch checking, and an exact
//!   algebraic-degeneracy detector for point sets.

pub mod arith;
pub mod constructions;
pub mod counting;
pub mod error;
pub mod search;
pub mod toolkit;

pub use error::{Error, Result};
