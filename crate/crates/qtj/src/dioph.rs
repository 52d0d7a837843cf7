//! Continued fractions, convergents, and Diophantine approximation pairs.
//!
//! A pair `(m, n)` approximates a slope `theta` when `n*theta - m` is small;
//! the pairs of a given `theta` form a group under componentwise addition,
//! with the error term additive. Convergents of the continued fraction are
//! the canonical witnesses, and for quadratic irrationals everything here is
//! exact: quotients come from the complete-quotient recurrence with period
//! detection by state repetition, and error terms stay in the quadratic
//! field.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::foliation::Gl2Z;
use crate::numerics::{BigReal, NumericsError, QuadIrr, Rational};

#[derive(Debug, Error)]
pub enum DiophError {
    #[error("need at least one term")]
    EmptyExpansion,
    #[error("only {available} partial quotients available, {requested} requested")]
    NotEnoughQuotients { available: usize, requested: usize },
    #[error("Moebius denominator c*theta + d vanishes")]
    MoebiusPole,
    #[error("combination produced n = 0 where the caller required n != 0")]
    ZeroDenominator,
    #[error("period detection exceeded the state budget")]
    PeriodNotFound,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// What a continued fraction was expanded from.
#[derive(Clone, Debug, PartialEq)]
pub enum ThetaKind {
    /// Exact quadratic irrational (or exact rational when the radical part
    /// vanishes).
    Quad(QuadIrr),
    /// Floating input; quotients are heuristic, not certified.
    Heuristic(BigReal),
}

impl ThetaKind {
    pub fn as_quad(&self) -> Option<&QuadIrr> {
        match self {
            ThetaKind::Quad(q) => Some(q),
            ThetaKind::Heuristic(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CFExpansion {
    pub theta: ThetaKind,
    /// Partial quotients `[a0; a1, a2, ...]`; all entries after index 0 are
    /// positive.
    pub quotients: Vec<BigInt>,
    /// `(preperiod length, period length)` for eventually periodic
    /// expansions.
    pub period: Option<(usize, usize)>,
    /// True when the expansion is complete (rational theta).
    pub terminated: bool,
    /// True when the input was a float and the quotients are heuristic.
    pub heuristic: bool,
}

impl CFExpansion {
    /// Partial quotient `a_j`, unrolling the period as far as needed.
    pub fn quotient(&self, j: usize) -> Option<BigInt> {
        if j < self.quotients.len() {
            return Some(self.quotients[j].clone());
        }
        let (pre, len) = self.period?;
        debug_assert!(pre + len <= self.quotients.len());
        let idx = pre + (j - pre) % len;
        Some(self.quotients[idx].clone())
    }

    /// How many quotients can be produced (`usize::MAX` when periodic).
    pub fn available(&self) -> usize {
        if self.period.is_some() {
            usize::MAX
        } else {
            self.quotients.len()
        }
    }
}

/// Expands an exact slope. Rational inputs terminate by the Euclidean
/// algorithm; irrational quadratic inputs are eventually periodic and the
/// period is detected exactly, continuing past `max_terms` if the cycle has
/// not yet closed.
pub fn cf_expand(theta: &QuadIrr, max_terms: usize) -> Result<CFExpansion, DiophError> {
    if max_terms == 0 {
        return Err(DiophError::EmptyExpansion);
    }
    if let Some(r) = theta.to_rational() {
        return Ok(cf_expand_rational(&r, max_terms));
    }
    let mut quotients = Vec::new();
    let mut seen: HashMap<QuadIrr, usize> = HashMap::new();
    let mut x = theta.clone();
    let mut period = None;
    // state budget well beyond any small-discriminant period
    for j in 0..100_000 {
        if let Some(&first) = seen.get(&x) {
            period = Some((first, j - first));
            break;
        }
        seen.insert(x.clone(), j);
        let a = x.floor();
        let frac = x.checked_sub(&QuadIrr::from_bigint(a.clone()))?;
        quotients.push(a);
        debug_assert!(!frac.is_zero(), "irrational slope never hits an integer");
        x = frac.inv()?;
    }
    let (pre, len) = period.ok_or(DiophError::PeriodNotFound)?;
    // unroll the period so at least max_terms quotients are materialized
    while quotients.len() < max_terms {
        let idx = pre + (quotients.len() - pre) % len;
        let q = quotients[idx].clone();
        quotients.push(q);
    }
    Ok(CFExpansion {
        theta: ThetaKind::Quad(theta.clone()),
        quotients,
        period: Some((pre, len)),
        terminated: false,
        heuristic: false,
    })
}

fn cf_expand_rational(r: &Rational, max_terms: usize) -> CFExpansion {
    let mut quotients = Vec::new();
    let mut num = r.numer().clone();
    let mut den = r.denom().clone();
    while !den.is_zero() && quotients.len() < max_terms {
        let a = num.div_floor(&den);
        let rem = &num - &a * &den;
        quotients.push(a);
        num = den;
        den = rem;
    }
    CFExpansion {
        theta: ThetaKind::Quad(QuadIrr::from_rational(r)),
        quotients,
        period: None,
        terminated: den.is_zero() || max_terms == 0,
        heuristic: false,
    }
}

/// Heuristic expansion of a floating slope: quotients are produced until the
/// convergent quality `|q_j theta - p_j|` falls below `2^(-P/2)`, past which
/// nothing is certified.
pub fn cf_expand_heuristic(theta: &BigReal, max_terms: usize) -> Result<CFExpansion, DiophError> {
    if max_terms == 0 {
        return Err(DiophError::EmptyExpansion);
    }
    let p = theta.prec();
    let cutoff = BigReal::pow2(-((p / 2) as i32), p);
    let mut quotients = Vec::new();
    let mut x = theta.clone();
    let (mut p_prev, mut p_prev2) = (BigInt::one(), BigInt::zero());
    let (mut q_prev, mut q_prev2) = (BigInt::zero(), BigInt::one());
    for _ in 0..max_terms {
        let a = x.to_rational().floor().to_integer();
        let frac = x.sub(&BigReal::from_bigint(&a, p));
        let pj = &a * &p_prev + &p_prev2;
        let qj = &a * &q_prev + &q_prev2;
        quotients.push(a);
        let quality = theta
            .mul(&BigReal::from_bigint(&qj, p))
            .sub(&BigReal::from_bigint(&pj, p))
            .abs();
        if quality.cmp(&cutoff) == std::cmp::Ordering::Less || frac.is_zero() {
            break;
        }
        p_prev2 = std::mem::replace(&mut p_prev, pj);
        q_prev2 = std::mem::replace(&mut q_prev, qj);
        x = frac.recip();
    }
    Ok(CFExpansion {
        theta: ThetaKind::Heuristic(theta.clone()),
        quotients,
        period: None,
        terminated: false,
        heuristic: true,
    })
}

/// The exact error `n*theta - m` of an approximation pair.
#[derive(Clone, Debug, PartialEq)]
pub enum PairErr {
    Exact(QuadIrr),
    Float(BigReal),
}

impl PairErr {
    pub fn abs(&self) -> PairErr {
        match self {
            PairErr::Exact(q) => PairErr::Exact(q.abs()),
            PairErr::Float(f) => PairErr::Float(f.abs()),
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            PairErr::Exact(q) => q.signum(),
            PairErr::Float(f) => f.signum(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            PairErr::Exact(q) => q.is_zero(),
            PairErr::Float(f) => f.is_zero(),
        }
    }

    pub fn to_real(&self, prec: usize) -> BigReal {
        match self {
            PairErr::Exact(q) => q.to_real(prec),
            PairErr::Float(f) => f.round_to(prec),
        }
    }

    pub fn as_exact(&self) -> Option<&QuadIrr> {
        match self {
            PairErr::Exact(q) => Some(q),
            PairErr::Float(_) => None,
        }
    }
}

/// An integer pair `(m, n)` with `m` approximating `n*theta`. Downstream
/// code indexes lattice points as `m*mu + n`.
#[derive(Clone, Debug, PartialEq)]
pub struct DAPair {
    pub m: BigInt,
    pub n: BigInt,
    pub err: PairErr,
}

impl DAPair {
    /// Builds a pair for an exact slope, recomputing the error exactly.
    pub fn new_exact(m: BigInt, n: BigInt, theta: &QuadIrr) -> Result<Self, DiophError> {
        let err = theta
            .mul_int(&n)
            .checked_sub(&QuadIrr::from_bigint(m.clone()))?;
        Ok(DAPair {
            m,
            n,
            err: PairErr::Exact(err),
        })
    }

    pub fn new_float(m: BigInt, n: BigInt, theta: &BigReal) -> Self {
        let p = theta.prec();
        let err = theta
            .mul(&BigReal::from_bigint(&n, p))
            .sub(&BigReal::from_bigint(&m, p));
        DAPair {
            m,
            n,
            err: PairErr::Float(err),
        }
    }
}

/// Convergent pairs `(p_j, q_j)` from the standard recurrence
/// `p_j = a_j p_(j-1) + p_(j-2)`, `q_j = a_j q_(j-1) + q_(j-2)`.
pub fn convergents(cf: &CFExpansion, count: usize) -> Result<Vec<DAPair>, DiophError> {
    if count > cf.available() {
        return Err(DiophError::NotEnoughQuotients {
            available: cf.quotients.len(),
            requested: count,
        });
    }
    let mut out = Vec::with_capacity(count);
    let (mut p_prev, mut p_prev2) = (BigInt::one(), BigInt::zero());
    let (mut q_prev, mut q_prev2) = (BigInt::zero(), BigInt::one());
    for j in 0..count {
        let a = cf.quotient(j).ok_or(DiophError::NotEnoughQuotients {
            available: cf.quotients.len(),
            requested: count,
        })?;
        let p = &a * &p_prev + &p_prev2;
        let q = &a * &q_prev + &q_prev2;
        let pair = match &cf.theta {
            ThetaKind::Quad(t) => DAPair::new_exact(p.clone(), q.clone(), t)?,
            ThetaKind::Heuristic(t) => DAPair::new_float(p.clone(), q.clone(), t),
        };
        out.push(pair);
        p_prev2 = std::mem::replace(&mut p_prev, p);
        q_prev2 = std::mem::replace(&mut q_prev, q);
    }
    Ok(out)
}

/// `|n*theta - m|`, exact for exact slopes.
pub fn pair_quality(pair: &DAPair) -> PairErr {
    pair.err.abs()
}

/// Transports a pair along `A`: `(m', n') = (am + bn, cm + dn)` approximates
/// the Moebius image `A(theta)`, and the error is recomputed against it.
pub fn transform_pair(a: &Gl2Z, pair: &DAPair, theta: &QuadIrr) -> Result<DAPair, DiophError> {
    let (m2, n2) = a.apply_pair(&pair.m, &pair.n);
    let den = theta.mul_int(&a.c).add_int(&a.d);
    if den.is_zero() {
        return Err(DiophError::MoebiusPole);
    }
    let image = theta.mul_int(&a.a).add_int(&a.b).checked_div(&den)?;
    DAPair::new_exact(m2, n2, &image)
}

/// Componentwise integer combination `sum c_j (m_j, n_j)`; the error of the
/// combination is the matching combination of errors, recomputed exactly.
pub fn group_combination(
    pairs: &[DAPair],
    coeffs: &[BigInt],
    theta: &QuadIrr,
    require_nonzero_n: bool,
) -> Result<DAPair, DiophError> {
    assert_eq!(pairs.len(), coeffs.len(), "one coefficient per pair");
    let mut m = BigInt::zero();
    let mut n = BigInt::zero();
    for (p, c) in pairs.iter().zip(coeffs) {
        m += &p.m * c;
        n += &p.n * c;
    }
    if require_nonzero_n && n.is_zero() {
        return Err(DiophError::ZeroDenominator);
    }
    DAPair::new_exact(m, n, theta)
}
