//! Moduli-side data for generalized Kronecker foliations: a modulus `mu`
//! with nonzero imaginary part, a slope `theta` on the circle (rationals and
//! the point at infinity included), the `GL(2, Z)` action
//! `A . (mu, theta) = (A(mu), A^{-T}(theta))`, and reduction of `mu` to the
//! standard fundamental domain.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::numerics::{
    BigComplex, BigReal, CValue, ExactComplex, NumericsError, QuadIrr, Rational,
};

#[derive(Debug, Error)]
pub enum FoliationError {
    #[error("matrix is not in GL(2, Z): determinant {0}")]
    NotUnimodular(BigInt),
    #[error("modulus must have nonzero imaginary part")]
    ZeroImaginary,
    #[error("Moebius denominator vanishes")]
    MoebiusPole,
    #[error("float modulus within 2^(-P/2) of the fundamental-domain boundary")]
    PrecisionExhausted,
    #[error("reduction did not terminate")]
    ReductionStuck,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// An integer matrix with determinant +-1, acting on moduli by Moebius
/// transformations and on index pairs as a column action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gl2Z {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Gl2Z {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self, FoliationError> {
        let m = Gl2Z { a, b, c, d };
        let det = m.det();
        if det.abs() != BigInt::one() {
            return Err(FoliationError::NotUnimodular(det));
        }
        Ok(m)
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self, FoliationError> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Gl2Z {
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    /// Translation `T^k`: `mu -> mu + k`.
    pub fn translation(k: &BigInt) -> Self {
        Gl2Z {
            a: BigInt::one(),
            b: k.clone(),
            c: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    /// Inversion `S`: `mu -> -1/mu`.
    pub fn inversion() -> Self {
        Gl2Z {
            a: BigInt::zero(),
            b: -BigInt::one(),
            c: BigInt::one(),
            d: BigInt::zero(),
        }
    }

    /// `diag(-1, 1)`: `mu -> -mu`, the sign swap between half planes.
    pub fn half_plane_swap() -> Self {
        Gl2Z {
            a: -BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Gl2Z {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn transpose(&self) -> Self {
        Gl2Z {
            a: self.a.clone(),
            b: self.c.clone(),
            c: self.b.clone(),
            d: self.d.clone(),
        }
    }

    /// Exact inverse; integral because det = +-1.
    pub fn inverse(&self) -> Self {
        let det = self.det();
        let m = Gl2Z {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        };
        if det.is_negative() {
            Gl2Z {
                a: -m.a,
                b: -m.b,
                c: -m.c,
                d: -m.d,
            }
        } else {
            m
        }
    }

    pub fn neg(&self) -> Self {
        Gl2Z {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    /// Column action on an index pair: `(m, n) -> (am + bn, cm + dn)`.
    pub fn apply_pair(&self, m: &BigInt, n: &BigInt) -> (BigInt, BigInt) {
        (&self.a * m + &self.b * n, &self.c * m + &self.d * n)
    }

    /// Moebius action on a real slope: `theta -> (a theta + b)/(c theta + d)`.
    pub fn moebius_quad(&self, theta: &QuadIrr) -> Result<QuadIrr, FoliationError> {
        let num = theta.mul_int(&self.a).add_int(&self.b);
        let den = theta.mul_int(&self.c).add_int(&self.d);
        if den.is_zero() {
            return Err(FoliationError::MoebiusPole);
        }
        Ok(num.checked_div(&den)?)
    }
}

impl std::fmt::Display for Gl2Z {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// A slope on the circle `R ∪ {∞}`; rational slopes are quadratic
/// irrationals with zero radical part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Theta {
    Finite(QuadIrr),
    Infinity,
}

impl Theta {
    pub fn from_rational(r: &Rational) -> Self {
        Theta::Finite(QuadIrr::from_rational(r))
    }

    pub fn neg(&self) -> Self {
        match self {
            Theta::Finite(q) => Theta::Finite(q.neg()),
            Theta::Infinity => Theta::Infinity, // the point at infinity has no sign
        }
    }
}

impl std::fmt::Display for Theta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Theta::Finite(q) => write!(f, "{q}"),
            Theta::Infinity => write!(f, "inf"),
        }
    }
}

/// A modulus `mu` in the upper or lower half plane, exact or floating.
#[derive(Clone, Debug, PartialEq)]
pub struct Modulus {
    mu: MuValue,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MuValue {
    Exact(ExactComplex),
    Float(BigComplex),
}

impl Modulus {
    pub fn exact(mu: ExactComplex) -> Result<Self, FoliationError> {
        if mu.im.signum() == 0 {
            return Err(FoliationError::ZeroImaginary);
        }
        Ok(Modulus {
            mu: MuValue::Exact(mu),
        })
    }

    pub fn float(mu: BigComplex) -> Result<Self, FoliationError> {
        if mu.im().is_zero() {
            return Err(FoliationError::ZeroImaginary);
        }
        Ok(Modulus {
            mu: MuValue::Float(mu),
        })
    }

    /// The lattice `<1, i>` modulus.
    pub fn i() -> Self {
        Modulus {
            mu: MuValue::Exact(ExactComplex::i()),
        }
    }

    pub fn value(&self) -> &MuValue {
        &self.mu
    }

    pub fn as_exact(&self) -> Option<&ExactComplex> {
        match &self.mu {
            MuValue::Exact(e) => Some(e),
            MuValue::Float(_) => None,
        }
    }

    pub fn to_complex(&self, prec: usize) -> BigComplex {
        match &self.mu {
            MuValue::Exact(e) => e.to_complex(prec),
            MuValue::Float(f) => f.round_to(prec),
        }
    }

    pub fn to_cvalue(&self) -> CValue {
        match &self.mu {
            MuValue::Exact(e) => CValue::Exact(e.clone()),
            MuValue::Float(f) => CValue::Float(f.clone()),
        }
    }

    /// `sign(Im mu)`: +1 for the upper half plane, -1 for the lower.
    pub fn half_plane_sign(&self) -> i32 {
        match &self.mu {
            MuValue::Exact(e) => e.im.signum(),
            MuValue::Float(f) => f.im().signum(),
        }
    }

    pub fn neg(&self) -> Self {
        match &self.mu {
            MuValue::Exact(e) => Modulus {
                mu: MuValue::Exact(e.neg()),
            },
            MuValue::Float(f) => Modulus {
                mu: MuValue::Float(f.neg()),
            },
        }
    }

    /// Moebius image `(a mu + b)/(c mu + d)`; never a pole since `Im mu != 0`.
    pub fn moebius(&self, m: &Gl2Z) -> Result<Self, FoliationError> {
        match &self.mu {
            MuValue::Exact(e) => {
                let num = e
                    .mul_int(&m.a)
                    .add(&ExactComplex::from_bigints(&m.b, &BigInt::zero()))?;
                let den = e
                    .mul_int(&m.c)
                    .add(&ExactComplex::from_bigints(&m.d, &BigInt::zero()))?;
                Ok(Modulus {
                    mu: MuValue::Exact(num.div(&den)?),
                })
            }
            MuValue::Float(f) => {
                let p = f.prec();
                let fw = f.round_to(p + 32);
                let num = fw.mul_bigint(&m.a).add_bigint_real(&m.b);
                let den = fw.mul_bigint(&m.c).add_bigint_real(&m.d);
                Ok(Modulus {
                    mu: MuValue::Float(num.div(&den).round_to(p)),
                })
            }
        }
    }
}

impl std::fmt::Display for Modulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.mu {
            MuValue::Exact(e) => write!(f, "{e}"),
            MuValue::Float(c) => write!(f, "{c}"),
        }
    }
}

/// A point `(mu, theta)` of the moduli space of generalized Kronecker
/// foliations; `(-mu, -theta)` is declared equivalent to `(mu, theta)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FoliationPoint {
    pub modulus: Modulus,
    pub theta: Theta,
}

impl FoliationPoint {
    pub fn new(modulus: Modulus, theta: Theta) -> Self {
        FoliationPoint { modulus, theta }
    }
}

/// Direction of the leaf through the origin: `1 + theta*mu` for finite
/// `theta`, `mu` for `theta = infinity`. Never zero since `Im mu != 0`.
pub fn slope_direction(p: &FoliationPoint, prec: usize) -> Result<CValue, FoliationError> {
    match &p.theta {
        Theta::Infinity => Ok(p.modulus.to_cvalue()),
        Theta::Finite(theta) => match p.modulus.value() {
            MuValue::Exact(mu) => {
                let t = ExactComplex::new(theta.clone(), QuadIrr::zero());
                Ok(CValue::Exact(ExactComplex::one().add(&t.mul(mu)?)?))
            }
            MuValue::Float(mu) => {
                let t = theta.to_real(prec);
                let one = BigComplex::one(prec);
                Ok(CValue::Float(one.add(&mu.round_to(prec).mul_real(&t))))
            }
        },
    }
}

/// The inverse-transpose Moebius action of `A` on a slope, projectively.
pub fn act_theta(m: &Gl2Z, theta: &Theta) -> Theta {
    // (A^{-1})^T is proportional to [[d, -c], [-b, a]]
    match theta {
        Theta::Infinity => {
            if m.b.is_zero() {
                Theta::Infinity
            } else {
                let q = Rational::new(-m.d.clone(), m.b.clone());
                Theta::from_rational(&q)
            }
        }
        Theta::Finite(t) => {
            let den = t.mul_int(&-&m.b).add_int(&m.a);
            if den.is_zero() {
                return Theta::Infinity;
            }
            let num = t.mul_int(&m.d).add_int(&-&m.c);
            Theta::Finite(num.checked_div(&den).expect("same field"))
        }
    }
}

/// The moduli action `A . (mu, theta) = (A(mu), A^{-T}(theta))`.
pub fn act(m: &Gl2Z, p: &FoliationPoint) -> Result<FoliationPoint, FoliationError> {
    Ok(FoliationPoint {
        modulus: p.modulus.moebius(m)?,
        theta: act_theta(m, &p.theta),
    })
}

/// Collapses `(-mu, -theta) == (mu, theta)` to the representative with
/// `Im mu > 0`.
pub fn canonicalize_sign(p: &FoliationPoint) -> FoliationPoint {
    if p.modulus.half_plane_sign() > 0 {
        p.clone()
    } else {
        FoliationPoint {
            modulus: p.modulus.neg(),
            theta: p.theta.neg(),
        }
    }
}

/// Reduces a modulus to the standard fundamental domain
/// `|Re| <= 1/2, |mu| >= 1, Im > 0`, returning the representative and the
/// matrix that maps the input to it. Boundary ties resolve to `Re = +1/2`
/// and to the unit-circle arc with `Re >= 0`. Idempotent on reduced inputs.
pub fn reduce_modulus(m: &Modulus) -> Result<(Modulus, Gl2Z), FoliationError> {
    match m.value() {
        MuValue::Exact(_) => reduce_exact(m),
        MuValue::Float(f) => reduce_float(m, f.prec()),
    }
}

fn reduction_step(mu: &Modulus, acc: &Gl2Z, g: &Gl2Z) -> Result<(Modulus, Gl2Z), FoliationError> {
    Ok((mu.moebius(g)?, g.mul(acc)))
}

fn reduce_exact(m: &Modulus) -> Result<(Modulus, Gl2Z), FoliationError> {
    let mut mu = m.clone();
    let mut acc = Gl2Z::identity();
    let step = reduction_step;
    if mu.half_plane_sign() < 0 {
        (mu, acc) = step(&mu, &acc, &Gl2Z::half_plane_swap())?;
    }
    let half = QuadIrr::new(1.into(), 0.into(), 2.into(), 1).unwrap();
    let one = QuadIrr::one();
    let mut settled = false;
    for _ in 0..100_000 {
        let e = mu.as_exact().expect("exact branch");
        // translate Re into [-1/2, 1/2]
        let t =
            e.re.checked_add(&half)
                .expect("rational shift is compatible")
                .floor();
        if !t.is_zero() {
            (mu, acc) = step(&mu, &acc, &Gl2Z::translation(&-t))?;
        }
        let e = mu.as_exact().expect("exact branch");
        let n2 = e.norm2()?;
        match n2.checked_cmp(&one)? {
            Ordering::Less => {
                (mu, acc) = step(&mu, &acc, &Gl2Z::inversion())?;
            }
            _ => {
                settled = true;
                break;
            }
        }
    }
    if !settled {
        return Err(FoliationError::ReductionStuck);
    }
    // boundary normalization
    let e = mu.as_exact().expect("exact branch");
    let neg_half = half.neg();
    if e.re.checked_cmp(&neg_half)? == Ordering::Equal {
        (mu, acc) = step(&mu, &acc, &Gl2Z::translation(&BigInt::one()))?;
    }
    let e = mu.as_exact().expect("exact branch");
    if e.norm2()?.checked_cmp(&one)? == Ordering::Equal && e.re.signum() < 0 {
        (mu, acc) = step(&mu, &acc, &Gl2Z::inversion())?;
    }
    Ok((mu, acc))
}

fn reduce_float(m: &Modulus, prec: usize) -> Result<(Modulus, Gl2Z), FoliationError> {
    let mut mu = m.clone();
    let mut acc = Gl2Z::identity();
    let tol = BigReal::pow2(-((prec / 2) as i32), prec);
    let guard_cmp = |x: &BigReal, y: &BigReal| -> Result<Ordering, FoliationError> {
        if x.sub(y).abs().cmp(&tol) == Ordering::Less {
            return Err(FoliationError::PrecisionExhausted);
        }
        Ok(x.cmp(y))
    };
    let step = reduction_step;
    if mu.half_plane_sign() < 0 {
        (mu, acc) = step(&mu, &acc, &Gl2Z::half_plane_swap())?;
    }
    let one = BigReal::one(prec);
    let half = Rational::new(1.into(), 2.into());
    let mut settled = false;
    for _ in 0..100_000 {
        let f = match mu.value() {
            MuValue::Float(f) => f.clone(),
            MuValue::Exact(_) => unreachable!("float branch"),
        };
        let t = (f.re().to_rational() + half.clone()).floor().to_integer();
        if !t.is_zero() {
            (mu, acc) = step(&mu, &acc, &Gl2Z::translation(&-t))?;
        }
        let f = match mu.value() {
            MuValue::Float(f) => f.clone(),
            MuValue::Exact(_) => unreachable!("float branch"),
        };
        match guard_cmp(&f.abs2(), &one)? {
            Ordering::Less => {
                (mu, acc) = step(&mu, &acc, &Gl2Z::inversion())?;
            }
            _ => {
                settled = true;
                break;
            }
        }
    }
    if !settled {
        return Err(FoliationError::ReductionStuck);
    }
    // boundary ties: the guard comparison above already errored if |mu| is
    // within tolerance of 1, so only the Re = -1/2 tie remains
    let f = match mu.value() {
        MuValue::Float(f) => f.clone(),
        MuValue::Exact(_) => unreachable!("float branch"),
    };
    let neg_half = BigReal::from_rational(&Rational::new((-1).into(), 2.into()), prec);
    if f.re().sub(&neg_half).abs().cmp(&tol) == Ordering::Less {
        return Err(FoliationError::PrecisionExhausted);
    }
    Ok((mu, acc))
}
