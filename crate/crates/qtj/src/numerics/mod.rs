//! Exact arithmetic (big rationals, real quadratic irrationals, Gaussian
//! rationals) and arbitrary-precision binary floating arithmetic with a
//! reproducibility contract: every floating operation rounds to nearest-even
//! at an explicit bit precision, so a pipeline replayed on the same inputs
//! yields bit-identical results regardless of worker count.

mod complex;
mod exact_complex;
mod gaussian;
mod quadirr;
mod rational;
mod real;
mod sum;
mod value;

pub use complex::{embed_exact, BigComplex, ExactValue};
pub use exact_complex::ExactComplex;
pub use gaussian::GaussianRational;
pub use quadirr::QuadIrr;
pub use rational::{parse_decimal, parse_rational, Rational};
pub use real::{decimal_digits, BigReal};
pub use sum::{sum_fixed_order, sum_terms_indexed, CHUNK_TERMS};
pub use value::CValue;

use thiserror::Error;

/// Minimum working precision accepted by the floating pipelines.
pub const MIN_PRECISION: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumericsError {
    #[error("operands carry different precisions ({left} vs {right} bits)")]
    PrecisionMismatch { left: usize, right: usize },
    #[error("zero raised to a negative power")]
    ZeroToNegativePower,
    #[error("division by zero in exact arithmetic")]
    DivisionByZero,
    #[error("values live in incompatible quadratic fields (sqrt {d1} vs sqrt {d2})")]
    IncompatibleFields { d1: u64, d2: u64 },
    #[error("precision {0} is below the supported minimum of {MIN_PRECISION} bits")]
    PrecisionTooLow(usize),
    #[error("invalid construction: {0}")]
    InvalidConstruction(String),
}

/// Guard bits added to the user precision inside summation pipelines:
/// `32 + ceil(log2(term_count + 1))`, enough to keep accumulated rounding
/// below every reported tolerance.
pub fn guard_bits(term_count: usize) -> usize {
    let mut bits = 0usize;
    let mut n = term_count + 1;
    while n > 1 {
        bits += 1;
        n = (n + 1) / 2;
    }
    32 + bits
}
