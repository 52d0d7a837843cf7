//! Arbitrary-precision complex floats built on `BigReal` pairs sharing one
//! precision.

use num_bigint::BigInt;

use super::exact_complex::ExactComplex;
use super::gaussian::GaussianRational;
use super::quadirr::QuadIrr;
use super::rational::Rational;
use super::real::{decimal_digits, BigReal};
use super::{NumericsError, MIN_PRECISION};

#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    re: BigReal,
    im: BigReal,
}

impl BigComplex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        assert_eq!(re.prec(), im.prec(), "components must share a precision");
        BigComplex { re, im }
    }

    pub fn zero(prec: usize) -> Self {
        BigComplex {
            re: BigReal::zero(prec),
            im: BigReal::zero(prec),
        }
    }

    pub fn one(prec: usize) -> Self {
        BigComplex {
            re: BigReal::one(prec),
            im: BigReal::zero(prec),
        }
    }

    pub fn from_real(re: BigReal) -> Self {
        let p = re.prec();
        BigComplex {
            re,
            im: BigReal::zero(p),
        }
    }

    pub fn from_i64(re: i64, im: i64, prec: usize) -> Self {
        BigComplex {
            re: BigReal::from_i64(re, prec),
            im: BigReal::from_i64(im, prec),
        }
    }

    pub fn re(&self) -> &BigReal {
        &self.re
    }

    pub fn im(&self) -> &BigReal {
        &self.im
    }

    pub fn prec(&self) -> usize {
        self.re.prec()
    }

    pub fn round_to(&self, prec: usize) -> Self {
        BigComplex {
            re: self.re.round_to(prec),
            im: self.im.round_to(prec),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        BigComplex {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        BigComplex {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        BigComplex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn mul_real(&self, k: &BigReal) -> Self {
        BigComplex {
            re: self.re.mul(k),
            im: self.im.mul(k),
        }
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        BigComplex {
            re: self.re.mul_i64(k),
            im: self.im.mul_i64(k),
        }
    }

    pub fn mul_bigint(&self, k: &BigInt) -> Self {
        let kr = BigReal::from_bigint(k, self.prec());
        self.mul_real(&kr)
    }

    pub fn add_bigint_real(&self, k: &BigInt) -> Self {
        BigComplex {
            re: self.re.add(&BigReal::from_bigint(k, self.prec())),
            im: self.im.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        BigComplex {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn conj(&self) -> Self {
        BigComplex {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn abs2(&self) -> BigReal {
        self.re.square().add(&self.im.square())
    }

    pub fn abs(&self) -> BigReal {
        self.abs2().sqrt()
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "BigComplex reciprocal of zero");
        let n = self.abs2();
        BigComplex {
            re: self.re.div(&n),
            im: self.im.neg().div(&n),
        }
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.recip())
    }

    /// Integer power by binary exponentiation. The rounding growth is at
    /// most `2|e| + 2` ulp.
    pub fn pow_int(&self, e: i64) -> Result<Self, NumericsError> {
        let p = self.prec();
        if e == 0 {
            return Ok(Self::one(p));
        }
        if self.is_zero() {
            if e < 0 {
                return Err(NumericsError::ZeroToNegativePower);
            }
            return Ok(Self::zero(p));
        }
        let mut base = self.clone();
        let mut n = e.unsigned_abs();
        let mut acc = Self::one(p);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        if e < 0 {
            acc = acc.recip();
        }
        Ok(acc)
    }

    /// Ulp-growth bound recorded for `pow_int`.
    pub fn pow_int_ulp_bound(e: i64) -> u64 {
        2 * e.unsigned_abs() + 2
    }

    /// Cross product `Im(conj(self) * o)`; zero exactly when the two values
    /// are real multiples of one another.
    pub fn cross(&self, o: &Self) -> BigReal {
        self.re.mul(&o.im).sub(&self.im.mul(&o.re))
    }

    pub fn bit_pattern(&self) -> String {
        format!("{};{}", self.re.bit_pattern(), self.im.bit_pattern())
    }

    pub fn to_decimal_pair(&self, digits: usize) -> (String, String) {
        (self.re.to_decimal(digits), self.im.to_decimal(digits))
    }
}

impl std::fmt::Display for BigComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let d = decimal_digits(self.prec());
        write!(f, "{} + {}i", self.re.to_decimal(d), self.im.to_decimal(d))
    }
}

/// Exact inputs accepted by [`embed_exact`].
#[derive(Clone, Debug)]
pub enum ExactValue {
    Rational(Rational),
    Quad(QuadIrr),
    Gaussian(GaussianRational),
}

/// Embeds an exact value into a `prec`-bit complex, correctly rounded per
/// component (relative error at most `2^(1-prec)`).
pub fn embed_exact(x: &ExactValue, prec: usize) -> Result<BigComplex, NumericsError> {
    if prec < MIN_PRECISION {
        return Err(NumericsError::PrecisionTooLow(prec));
    }
    Ok(match x {
        ExactValue::Rational(r) => BigComplex::from_real(BigReal::from_rational(r, prec)),
        ExactValue::Quad(q) => BigComplex::from_real(q.to_real(prec)),
        ExactValue::Gaussian(g) => g.to_complex(prec),
    })
}

impl ExactComplex {
    /// Convenience hook so exact complexes embed through the same door.
    pub fn embed(&self, prec: usize) -> Result<BigComplex, NumericsError> {
        if prec < MIN_PRECISION {
            return Err(NumericsError::PrecisionTooLow(prec));
        }
        Ok(self.to_complex(prec))
    }
}
