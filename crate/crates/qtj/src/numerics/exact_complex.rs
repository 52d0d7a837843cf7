//! Exact complex numbers whose components live in a common real quadratic
//! field. Covers Gaussian rationals (radicand 1) and moduli such as
//! `(1 + i*sqrt(3))/2`; closed under the four operations as long as both
//! components stay over one radicand.

use num_bigint::BigInt;

use super::complex::BigComplex;
use super::gaussian::GaussianRational;
use super::quadirr::QuadIrr;
use super::NumericsError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactComplex {
    pub re: QuadIrr,
    pub im: QuadIrr,
}

impl ExactComplex {
    pub fn new(re: QuadIrr, im: QuadIrr) -> Self {
        ExactComplex { re, im }
    }

    pub fn from_gaussian(g: &GaussianRational) -> Self {
        ExactComplex {
            re: QuadIrr::from_rational(&g.re),
            im: QuadIrr::from_rational(&g.im),
        }
    }

    pub fn from_bigints(re: &BigInt, im: &BigInt) -> Self {
        ExactComplex {
            re: QuadIrr::from_bigint(re.clone()),
            im: QuadIrr::from_bigint(im.clone()),
        }
    }

    pub fn from_int(n: i64) -> Self {
        ExactComplex {
            re: QuadIrr::from_int(n),
            im: QuadIrr::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        ExactComplex {
            re: QuadIrr::zero(),
            im: QuadIrr::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn as_gaussian(&self) -> Option<GaussianRational> {
        Some(GaussianRational::new(
            self.re.to_rational()?,
            self.im.to_rational()?,
        ))
    }

    pub fn add(&self, o: &Self) -> Result<Self, NumericsError> {
        Ok(ExactComplex {
            re: self.re.checked_add(&o.re)?,
            im: self.im.checked_add(&o.im)?,
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self, NumericsError> {
        Ok(ExactComplex {
            re: self.re.checked_sub(&o.re)?,
            im: self.im.checked_sub(&o.im)?,
        })
    }

    pub fn mul(&self, o: &Self) -> Result<Self, NumericsError> {
        let re = self
            .re
            .checked_mul(&o.re)?
            .checked_sub(&self.im.checked_mul(&o.im)?)?;
        let im = self
            .re
            .checked_mul(&o.im)?
            .checked_add(&self.im.checked_mul(&o.re)?)?;
        Ok(ExactComplex { re, im })
    }

    pub fn neg(&self) -> Self {
        ExactComplex {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn conj(&self) -> Self {
        ExactComplex {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    /// `re^2 + im^2`, an exact real of the shared field.
    pub fn norm2(&self) -> Result<QuadIrr, NumericsError> {
        self.re
            .checked_mul(&self.re)?
            .checked_add(&self.im.checked_mul(&self.im)?)
    }

    pub fn inv(&self) -> Result<Self, NumericsError> {
        if self.is_zero() {
            return Err(NumericsError::DivisionByZero);
        }
        let n = self.norm2()?;
        Ok(ExactComplex {
            re: self.re.checked_div(&n)?,
            im: self.im.neg().checked_div(&n)?,
        })
    }

    pub fn div(&self, o: &Self) -> Result<Self, NumericsError> {
        self.mul(&o.inv()?)
    }

    pub fn powi(&self, e: i64) -> Result<Self, NumericsError> {
        if e == 0 {
            return Ok(Self::one());
        }
        if self.is_zero() {
            if e < 0 {
                return Err(NumericsError::ZeroToNegativePower);
            }
            return Ok(Self::zero());
        }
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            n >>= 1;
        }
        Ok(acc)
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        ExactComplex {
            re: self.re.mul_int(k),
            im: self.im.mul_int(k),
        }
    }

    pub fn scale_rational(&self, num: i64, den: i64) -> Result<Self, NumericsError> {
        let k = QuadIrr::new(num.into(), 0.into(), den.into(), 1)?;
        Ok(ExactComplex {
            re: self.re.checked_mul(&k)?,
            im: self.im.checked_mul(&k)?,
        })
    }

    pub fn to_complex(&self, prec: usize) -> BigComplex {
        BigComplex::new(self.re.to_real(prec), self.im.to_real(prec))
    }
}

impl std::fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}) + ({})i", self.re, self.im)
    }
}
