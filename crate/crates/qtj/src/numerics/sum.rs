//! Deterministic chunked summation. Terms are consumed left to right within
//! fixed-size chunks and the chunk results are combined in chunk order, so
//! the result is bit-identical across runs and across worker counts for a
//! fixed precision and input order. Chunks may be evaluated in parallel.

use rayon::prelude::*;

use super::complex::BigComplex;
use super::NumericsError;

/// Fixed chunk size; determinism requires this to never depend on the
/// worker count.
pub const CHUNK_TERMS: usize = 4096;

/// Sums `count` terms produced by `term(i)` at precision `prec`.
pub fn sum_terms_indexed<F>(count: usize, prec: usize, term: F) -> BigComplex
where
    F: Fn(usize) -> BigComplex + Sync,
{
    if count == 0 {
        return BigComplex::zero(prec);
    }
    let n_chunks = count.div_ceil(CHUNK_TERMS);
    let chunk_sums: Vec<BigComplex> = (0..n_chunks)
        .into_par_iter()
        .map(|ci| {
            let lo = ci * CHUNK_TERMS;
            let hi = (lo + CHUNK_TERMS).min(count);
            let mut acc = BigComplex::zero(prec);
            for i in lo..hi {
                let t = term(i);
                debug_assert_eq!(t.prec(), prec);
                acc = acc.add(&t);
            }
            acc
        })
        .collect();
    let mut total = BigComplex::zero(prec);
    for s in &chunk_sums {
        total = total.add(s);
    }
    total
}

/// Sums an ordered term list. All terms must share one precision.
pub fn sum_fixed_order(terms: &[BigComplex]) -> Result<BigComplex, NumericsError> {
    if terms.is_empty() {
        return Ok(BigComplex::zero(crate::numerics::MIN_PRECISION));
    }
    let p = terms[0].prec();
    for t in terms.iter() {
        if t.prec() != p {
            return Err(NumericsError::PrecisionMismatch {
                left: p,
                right: t.prec(),
            });
        }
    }
    Ok(sum_terms_indexed(terms.len(), p, |i| terms[i].clone()))
}
