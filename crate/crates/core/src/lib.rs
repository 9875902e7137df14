//! Schreier graphs of the degree-`d` mother groups acting on spherically
//! symmetric rooted trees, effective resistance on the resulting weighted
//! networks, and resistance lower bounds via a weighted (non-disjoint
//! cutset) Nash-Williams method.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the CLI live
//! in the companion `mothergraph-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod electric;
pub mod fuzz;
pub mod mothercuts;
pub mod nashwilliams;
pub mod schreier;
pub mod words;

use num_bigint::BigInt;

/// Exact rational scalar used for conductances, weights and resistances.
pub type Rat = num_rational::BigRational;

/// Shorthand for building a `Rat` from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for building a `Rat` from a numerator/denominator pair.
pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}
