//! A value that is either exact (components in a quadratic field) or a
//! rounded complex float. Pipelines pick one mode and stay in it; mixing
//! modes lifts the exact side into the float world at the float's precision.

use super::complex::BigComplex;
use super::exact_complex::ExactComplex;
use super::real::BigReal;
use super::NumericsError;

#[derive(Clone, Debug, PartialEq)]
pub enum CValue {
    Exact(ExactComplex),
    Float(BigComplex),
}

impl CValue {
    pub fn exact_int(n: i64) -> Self {
        CValue::Exact(ExactComplex::from_int(n))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CValue::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            CValue::Exact(e) => e.is_zero(),
            CValue::Float(f) => f.is_zero(),
        }
    }

    pub fn to_complex(&self, prec: usize) -> BigComplex {
        match self {
            CValue::Exact(e) => e.to_complex(prec),
            CValue::Float(f) => f.round_to(prec),
        }
    }

    pub fn as_exact(&self) -> Option<&ExactComplex> {
        match self {
            CValue::Exact(e) => Some(e),
            CValue::Float(_) => None,
        }
    }

    fn lift(a: &CValue, b: &CValue, prec: usize) -> (BigComplex, BigComplex) {
        (a.to_complex(prec), b.to_complex(prec))
    }

    pub fn add(&self, o: &Self, prec: usize) -> Result<Self, NumericsError> {
        match (self, o) {
            (CValue::Exact(a), CValue::Exact(b)) => Ok(CValue::Exact(a.add(b)?)),
            _ => {
                let (a, b) = Self::lift(self, o, prec);
                Ok(CValue::Float(a.add(&b)))
            }
        }
    }

    pub fn sub(&self, o: &Self, prec: usize) -> Result<Self, NumericsError> {
        match (self, o) {
            (CValue::Exact(a), CValue::Exact(b)) => Ok(CValue::Exact(a.sub(b)?)),
            _ => {
                let (a, b) = Self::lift(self, o, prec);
                Ok(CValue::Float(a.sub(&b)))
            }
        }
    }

    pub fn mul(&self, o: &Self, prec: usize) -> Result<Self, NumericsError> {
        match (self, o) {
            (CValue::Exact(a), CValue::Exact(b)) => Ok(CValue::Exact(a.mul(b)?)),
            _ => {
                let (a, b) = Self::lift(self, o, prec);
                Ok(CValue::Float(a.mul(&b)))
            }
        }
    }

    pub fn div(&self, o: &Self, prec: usize) -> Result<Self, NumericsError> {
        if o.is_zero() {
            return Err(NumericsError::DivisionByZero);
        }
        match (self, o) {
            (CValue::Exact(a), CValue::Exact(b)) => Ok(CValue::Exact(a.div(b)?)),
            _ => {
                let (a, b) = Self::lift(self, o, prec);
                Ok(CValue::Float(a.div(&b)))
            }
        }
    }

    pub fn powi(&self, e: i64, prec: usize) -> Result<Self, NumericsError> {
        match self {
            CValue::Exact(a) => Ok(CValue::Exact(a.powi(e)?)),
            CValue::Float(f) => {
                let _ = prec;
                Ok(CValue::Float(f.pow_int(e)?))
            }
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            CValue::Exact(a) => CValue::Exact(a.neg()),
            CValue::Float(f) => CValue::Float(f.neg()),
        }
    }

    pub fn scale_rational(&self, num: i64, den: i64, prec: usize) -> Result<Self, NumericsError> {
        match self {
            CValue::Exact(a) => Ok(CValue::Exact(a.scale_rational(num, den)?)),
            CValue::Float(f) => {
                let k = BigReal::from_i64(num, prec).div(&BigReal::from_i64(den, prec));
                Ok(CValue::Float(f.round_to(prec).mul_real(&k)))
            }
        }
    }

    pub fn abs_real(&self, prec: usize) -> BigReal {
        self.to_complex(prec).abs()
    }
}

impl std::fmt::Display for CValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CValue::Exact(e) => write!(f, "{e}"),
            CValue::Float(c) => write!(f, "{c}"),
        }
    }
}
