//! Exact Gaussian rationals `re + im*i` with rational components. The field
//! is closed under the four operations, which makes it the oracle of choice
//! for lattice sums at `mu = i` and other rational moduli.

use num_bigint::BigInt;
use num_traits::Zero;

use super::complex::BigComplex;
use super::rational::{format_rational, Rational};
use super::real::BigReal;
use super::NumericsError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussianRational {
            re: Rational::from_integer(re.into()),
            im: Rational::from_integer(im.into()),
        }
    }

    pub fn from_bigints(re: &BigInt, im: &BigInt) -> Self {
        GaussianRational {
            re: Rational::from_integer(re.clone()),
            im: Rational::from_integer(im.clone()),
        }
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        GaussianRational {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        GaussianRational {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        GaussianRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn neg(&self) -> Self {
        GaussianRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn norm2(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self, NumericsError> {
        if self.is_zero() {
            return Err(NumericsError::DivisionByZero);
        }
        let n = self.norm2();
        Ok(GaussianRational {
            re: &self.re / &n,
            im: -&self.im / &n,
        })
    }

    pub fn div(&self, o: &Self) -> Result<Self, NumericsError> {
        Ok(self.mul(&o.inv()?))
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
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        Ok(acc)
    }

    pub fn scale(&self, k: i64) -> Self {
        let k = Rational::from_integer(k.into());
        GaussianRational {
            re: &self.re * &k,
            im: &self.im * &k,
        }
    }

    pub fn to_complex(&self, prec: usize) -> BigComplex {
        BigComplex::new(
            BigReal::from_rational(&self.re, prec),
            BigReal::from_rational(&self.im, prec),
        )
    }
}

impl std::fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", format_rational(&self.re));
        }
        if self.re.is_zero() {
            return write!(f, "{}i", format_rational(&self.im));
        }
        let op = if self.im < Rational::zero() { "" } else { "+" };
        write!(
            f,
            "{}{}{}i",
            format_rational(&self.re),
            op,
            format_rational(&self.im)
        )
    }
}
