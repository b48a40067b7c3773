//! Digits of `1/m` in base `n`, quadratic character sums and class numbers,
//! plus the polynomial analogue over `F_q[x]`.
#![no_std]
extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;

pub mod arith;
pub mod charsums;
pub mod classnum;
pub mod digits;
pub mod ffield;
pub mod verify;

pub use error::{Error, Result};

/// Exact rational used for every reported quantity.
pub type Exact = num_rational::Ratio<i128>;
