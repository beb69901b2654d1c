//! Exact arithmetic for auditing the level-one Serre induction.
//!
//! The crate is `no_std` (it needs `alloc`) and every operation is a pure
//! function over immutable inputs. IO, threading, caching and report formats
//! live in the `serrelab` companion crate.
//!
//! Layout:
//! - [`numth`]: sieves, deterministic primality, factorization, exact rationals.
//! - [`enclosure`]: certified dyadic enclosures of `ln`, `exp` and square roots.
//! - [`chebyshev`]: audits of the prime-counting bounds and prime-gap ratios.
//! - [`ladder`]: induction-step certificates and nebentype exponent windows.
//! - [`weights`]: twist calculus for Serre weights, class numbers, dihedral criterion.
//! - [`census`]: level-one mod-p modular forms, Hecke eigensystems and their counts.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod census;
pub mod chebyshev;
pub mod enclosure;
pub mod ladder;
pub mod numth;
pub mod weights;

pub use numth::{PrimePower, Rational};
