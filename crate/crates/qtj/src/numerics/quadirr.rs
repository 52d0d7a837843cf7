//! Exact real quadratic irrationals `(a + b*sqrt(d))/c` in canonical form.
//!
//! Canonical form: `d` squarefree (square factors folded into `b`), `d = 1`
//! exactly when the value is rational, `c > 0`, `gcd(a, b, c) = 1`. With
//! that, structural equality decides numeric equality, and every comparison
//! is settled by integer arithmetic alone.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};

use super::rational::Rational;
use super::real::BigReal;
use super::NumericsError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadIrr {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: u64,
}

impl QuadIrr {
    /// Builds `(a + b*sqrt(d))/c` and canonicalizes. `c` must be nonzero and
    /// `d` positive.
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: u64) -> Result<Self, NumericsError> {
        if c.is_zero() {
            return Err(NumericsError::DivisionByZero);
        }
        if d == 0 {
            return Err(NumericsError::InvalidConstruction(
                "sqrt argument must be positive".into(),
            ));
        }
        let mut q = QuadIrr { a, b, c, d };
        q.canonicalize();
        Ok(q)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        QuadIrr {
            a: n,
            b: BigInt::zero(),
            c: BigInt::one(),
            d: 1,
        }
    }

    pub fn from_rational(r: &Rational) -> Self {
        QuadIrr {
            a: r.numer().clone(),
            b: BigInt::zero(),
            c: r.denom().clone(),
            d: 1,
        }
    }

    /// `sqrt(d)` for positive `d` (square factors are extracted).
    pub fn sqrt(d: u64) -> Result<Self, NumericsError> {
        Self::new(BigInt::zero(), BigInt::one(), BigInt::one(), d)
    }

    /// The golden ratio `(1 + sqrt(5))/2`.
    pub fn golden() -> Self {
        Self::new(BigInt::one(), BigInt::one(), BigInt::from(2), 5).unwrap()
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    fn canonicalize(&mut self) {
        // pull square factors of d into b
        if !self.b.is_zero() {
            let (sf, root) = split_square(self.d);
            self.d = sf;
            if root > 1 {
                self.b *= BigInt::from(root);
            }
        }
        if self.b.is_zero() {
            self.d = 1;
        }
        if self.d == 1 {
            let b = std::mem::take(&mut self.b);
            self.a += b;
            self.d = 1;
        }
        if self.c.is_negative() {
            self.a = -std::mem::take(&mut self.a);
            self.b = -std::mem::take(&mut self.b);
            self.c = -std::mem::take(&mut self.c);
        }
        let g = self.a.gcd(&self.b).gcd(&self.c);
        if !g.is_one() && !g.is_zero() {
            self.a /= &g;
            self.b /= &g;
            self.c /= &g;
        }
        if self.a.is_zero() && self.b.is_zero() {
            self.c = BigInt::one();
        }
    }

    pub fn coefficients(&self) -> (&BigInt, &BigInt, &BigInt, u64) {
        (&self.a, &self.b, &self.c, self.d)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        if self.is_rational() {
            Some(Rational::new(self.a.clone(), self.c.clone()))
        } else {
            None
        }
    }

    /// The field radicand shared by two operands, or an error if both are
    /// genuinely irrational over different radicands.
    fn join_field(&self, other: &Self) -> Result<u64, NumericsError> {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, true) => Ok(1),
            (true, false) => Ok(other.d),
            (false, true) => Ok(self.d),
            (false, false) => {
                if self.d == other.d {
                    Ok(self.d)
                } else {
                    Err(NumericsError::IncompatibleFields {
                        d1: self.d,
                        d2: other.d,
                    })
                }
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, NumericsError> {
        let d = self.join_field(other)?;
        Self::new(
            &self.a * &other.c + &other.a * &self.c,
            &self.b * &other.c + &other.b * &self.c,
            &self.c * &other.c,
            d,
        )
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, NumericsError> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, NumericsError> {
        let d = self.join_field(other)?;
        let rad = BigInt::from(d);
        Self::new(
            &self.a * &other.a + &self.b * &other.b * rad,
            &self.a * &other.b + &self.b * &other.a,
            &self.c * &other.c,
            d,
        )
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, NumericsError> {
        self.checked_mul(&other.inv()?)
    }

    /// Multiplicative inverse: `c (a - b sqrt d) / (a^2 - b^2 d)`.
    pub fn inv(&self) -> Result<Self, NumericsError> {
        if self.is_zero() {
            return Err(NumericsError::DivisionByZero);
        }
        let norm = &self.a * &self.a - &self.b * &self.b * BigInt::from(self.d);
        debug_assert!(!norm.is_zero(), "d squarefree rules out a^2 = b^2 d");
        Self::new(&self.a * &self.c, -(&self.b * &self.c), norm, self.d)
    }

    pub fn neg(&self) -> Self {
        QuadIrr {
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
            d: self.d,
        }
    }

    /// Galois conjugate `(a - b*sqrt(d))/c`.
    pub fn conj(&self) -> Self {
        QuadIrr {
            a: self.a.clone(),
            b: -&self.b,
            c: self.c.clone(),
            d: self.d,
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        QuadIrr {
            a: &self.a * k,
            b: &self.b * k,
            c: self.c.clone(),
            d: self.d,
        }
        .canonical()
    }

    pub fn add_int(&self, k: &BigInt) -> Self {
        QuadIrr {
            a: &self.a + k * &self.c,
            b: self.b.clone(),
            c: self.c.clone(),
            d: self.d,
        }
        .canonical()
    }

    fn canonical(mut self) -> Self {
        self.canonicalize();
        self
    }

    /// Exact sign via integer arithmetic on the conjugate norm.
    pub fn signum(&self) -> i32 {
        // c > 0, so the sign is that of a + b*sqrt(d)
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        // opposite signs: |a| vs |b| sqrt(d) decided by squares
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * BigInt::from(self.d);
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0, // impossible for squarefree d > 1
        }
    }

    pub fn checked_cmp(&self, other: &Self) -> Result<Ordering, NumericsError> {
        Ok(self.checked_sub(other)?.signum().cmp(&0))
    }

    /// Exact floor, decided by integer square-root bounds plus exact
    /// comparisons.
    pub fn floor(&self) -> BigInt {
        if let Some(r) = self.to_rational() {
            return r.floor().to_integer();
        }
        // bracket b*sqrt(d) between consecutive integers
        let b2d = &self.b * &self.b * BigInt::from(self.d);
        let s = b2d.sqrt();
        let lo = if self.b.is_positive() {
            s
        } else {
            -(s + BigInt::from(1))
        };
        let mut k = (&self.a + lo).div_floor(&self.c);
        // the estimate is off by at most one; settle exactly
        while self.cmp_int(&(&k + 1)) != Ordering::Less {
            k += 1;
        }
        while self.cmp_int(&k) == Ordering::Less {
            k -= 1;
        }
        k
    }

    fn cmp_int(&self, k: &BigInt) -> Ordering {
        let diff = QuadIrr {
            a: &self.a - k * &self.c,
            b: self.b.clone(),
            c: self.c.clone(),
            d: self.d,
        };
        diff.signum().cmp(&0)
    }

    /// Correctly-rounded embedding into a `prec`-bit real (within 1 ulp).
    pub fn to_real(&self, prec: usize) -> BigReal {
        if let Some(r) = self.to_rational() {
            return BigReal::from_rational(&r, prec);
        }
        let pw = prec + 32;
        let sd = BigReal::from_u64(self.d, pw).sqrt();
        let a = BigReal::from_bigint(&self.a, pw);
        let b = BigReal::from_bigint(&self.b, pw);
        let c = BigReal::from_bigint(&self.c, pw);
        a.add(&b.mul(&sd)).div(&c).round_to(prec)
    }

    /// CLI text form `quad:a:b:c:d`.
    pub fn text_form(&self) -> String {
        format!("quad:{}:{}:{}:{}", self.a, self.b, self.c, self.d)
    }
}

impl std::fmt::Display for QuadIrr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_rational() {
            if self.c.is_one() {
                return write!(f, "{}", self.a);
            }
            return write!(f, "{}/{}", self.a, self.c);
        }
        write!(f, "({} + {}*sqrt({}))/{}", self.a, self.b, self.d, self.c)
    }
}

fn sign_of(v: &BigInt) -> i32 {
    if v.is_zero() {
        0
    } else if v.is_negative() {
        -1
    } else {
        1
    }
}

/// Splits `d` into (squarefree part, extracted root): `d = sf * root^2`.
/// Exact for every radicand whose prime factors are not all above 2^20;
/// beyond that a leftover `p^2 q` with two huge primes would slip through.
fn split_square(d: u64) -> (u64, u64) {
    let mut n = d;
    let mut sf = 1u64;
    let mut root = 1u64;
    let mut f = 2u64;
    while f <= (1 << 20) && f.saturating_mul(f) <= n {
        let mut e = 0u32;
        while n % f == 0 {
            n /= f;
            e += 1;
        }
        root *= f.pow(e / 2);
        if e % 2 == 1 {
            sf *= f;
        }
        f += 1;
    }
    // remainder: 1, a prime, or (past the trial bound) a perfect square
    let s = n.sqrt();
    if s * s == n {
        root *= s;
    } else {
        sf *= n;
    }
    (sf, root)
}
