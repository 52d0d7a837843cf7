//! Arbitrary-precision binary reals. A `BigReal` is an `astro_float::BigFloat`
//! tagged with the precision it was rounded to; every operation rounds to
//! nearest-even at that precision. Two operands must carry the same precision,
//! which makes any sequence of operations a deterministic function of the
//! operand bit patterns.

use std::cmp::Ordering;

use astro_float::{BigFloat, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as IntSign};
use num_traits::{Signed, Zero};

use super::rational::Rational;

const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Clone, Debug)]
pub struct BigReal {
    f: BigFloat,
    prec: usize,
}

impl BigReal {
    pub fn zero(prec: usize) -> Self {
        BigReal {
            f: BigFloat::new(prec),
            prec,
        }
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: usize) -> Self {
        BigReal {
            f: BigFloat::from_i64(v, prec),
            prec,
        }
    }

    pub fn from_u64(v: u64, prec: usize) -> Self {
        BigReal {
            f: BigFloat::from_u64(v, prec),
            prec,
        }
    }

    /// Exact power of two, `2^k`.
    pub fn pow2(k: i32, prec: usize) -> Self {
        let mut f = BigFloat::from_i64(1, prec);
        f.set_exponent(1 + k);
        BigReal { f, prec }
    }

    /// Embeds a big integer, correctly rounded to `prec` bits.
    pub fn from_bigint(v: &BigInt, prec: usize) -> Self {
        let exact = Self::bigint_exact(v);
        BigReal { f: exact, prec: 0 }.round_to(prec)
    }

    /// Embeds a rational, correctly rounded to `prec` bits: both sides are
    /// converted exactly and a single division rounds.
    pub fn from_rational(v: &Rational, prec: usize) -> Self {
        if v.numer().is_zero() {
            return Self::zero(prec);
        }
        let num = Self::bigint_exact(v.numer());
        let den = Self::bigint_exact(v.denom());
        BigReal {
            f: num.div(&den, prec, RM),
            prec,
        }
    }

    fn bigint_exact(v: &BigInt) -> BigFloat {
        if v.is_zero() {
            return BigFloat::new(64);
        }
        let (sign, mag) = v.clone().into_parts();
        let words = mag.to_u64_digits();
        let s = if sign == IntSign::Minus {
            Sign::Neg
        } else {
            Sign::Pos
        };
        // from_words treats the slice as a fraction in [1/2, 1) times 2^e,
        // so the integer value needs e = total bit width of the slice.
        let e = (words.len() * 64) as astro_float::Exponent;
        BigFloat::from_words(&words, s, e)
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn round_to(&self, prec: usize) -> Self {
        let mut f = self.f.clone();
        f.set_precision(prec, RM)
            .expect("set_precision on a finite value");
        BigReal { f, prec }
    }

    fn check(&self, other: &Self) -> usize {
        assert_eq!(
            self.prec, other.prec,
            "BigReal operands must share a precision ({} vs {})",
            self.prec, other.prec
        );
        self.prec
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.check(other);
        BigReal {
            f: self.f.add(&other.f, p, RM),
            prec: p,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.check(other);
        BigReal {
            f: self.f.sub(&other.f, p, RM),
            prec: p,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.check(other);
        BigReal {
            f: self.f.mul(&other.f, p, RM),
            prec: p,
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        let p = self.check(other);
        assert!(!other.is_zero(), "BigReal division by zero");
        BigReal {
            f: self.f.div(&other.f, p, RM),
            prec: p,
        }
    }

    pub fn neg(&self) -> Self {
        BigReal {
            f: self.f.neg(),
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Square root of a nonnegative value.
    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "BigReal sqrt of a negative value");
        BigReal {
            f: self.f.sqrt(self.prec, RM),
            prec: self.prec,
        }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "BigReal reciprocal of zero");
        BigReal {
            f: self.f.reciprocal(self.prec, RM),
            prec: self.prec,
        }
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        self.mul(&Self::from_i64(k, self.prec))
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.f.is_negative() && !self.f.is_zero()
    }

    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            0
        } else if self.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn cmp(&self, other: &Self) -> Ordering {
        let s = self
            .f
            .cmp(&other.f)
            .expect("BigReal comparison on finite values");
        s.cmp(&0)
    }

    pub fn max(&self, other: &Self) -> Self {
        if self.cmp(other) == Ordering::Less {
            other.clone()
        } else {
            self.clone()
        }
    }

    /// Exact rational value of the stored bits.
    pub fn to_rational(&self) -> Rational {
        if self.f.is_zero() {
            return Rational::zero();
        }
        let (words, _n, sign, e, _) = self.f.as_raw_parts().expect("finite value");
        let mut u32s = Vec::with_capacity(words.len() * 2);
        for w in words {
            u32s.push(*w as u32);
            u32s.push((*w >> 32) as u32);
        }
        let mut num = BigInt::from(num_bigint::BigUint::new(u32s));
        if sign == Sign::Neg {
            num = -num;
        }
        let shift = e as i64 - (words.len() * 64) as i64;
        if shift >= 0 {
            Rational::from_integer(num << shift as usize)
        } else {
            Rational::new(num, BigInt::from(1) << (-shift) as usize)
        }
    }

    /// Lossy view for diagnostics and regression fits.
    pub fn to_f64(&self) -> f64 {
        if self.f.is_zero() {
            return 0.0;
        }
        let (words, _n, sign, e, _) = self.f.as_raw_parts().expect("finite value");
        let top = words.last().copied().unwrap_or(0);
        let frac = top as f64 / 2f64.powi(64); // in [1/2, 1)
        let mag = frac * 2f64.powf(e as f64);
        if sign == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    /// `log2 |x|`, robust for magnitudes far outside the f64 range.
    pub fn log2_abs(&self) -> f64 {
        if self.f.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (words, _n, _sign, e, _) = self.f.as_raw_parts().expect("finite value");
        let top = words.last().copied().unwrap_or(0);
        let frac = top as f64 / 2f64.powi(64);
        e as f64 + frac.log2()
    }

    /// Fixed-width scientific decimal rendering with `digits` significant
    /// digits, deterministic for a given bit pattern.
    pub fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.f.is_zero() {
            return "0".to_string();
        }
        let r = self.to_rational();
        let neg = r.is_negative();
        let mut x = r.abs();
        // decimal exponent: largest k with 10^k <= x
        let ten = Rational::from_integer(10.into());
        let mut k: i64 = 0;
        if x >= Rational::from_integer(1.into()) {
            let mut probe = ten.clone();
            while x >= probe {
                probe *= ten.clone();
                k += 1;
            }
        } else {
            let mut probe = Rational::from_integer(1.into());
            while x < probe {
                probe /= ten.clone();
                k -= 1;
            }
        }
        // scale so that round(x * 10^(digits-1-k)) has exactly `digits` digits
        let shift = digits as i64 - 1 - k;
        if shift >= 0 {
            x *= Rational::from_integer(num_traits::pow(BigInt::from(10), shift as usize));
        } else {
            x /= Rational::from_integer(num_traits::pow(BigInt::from(10), (-shift) as usize));
        }
        // round half away from zero (x > 0 here)
        let mut scaled = (x + Rational::new(1.into(), 2.into())).floor().to_integer();
        let mut int_digits = scaled.to_string();
        if int_digits.len() > digits {
            // rounding carried into a new leading digit (e.g. 999.6 -> 1000)
            scaled /= BigInt::from(10);
            k += 1;
            int_digits = scaled.to_string();
        }
        debug_assert_eq!(int_digits.len(), digits);
        let mantissa = if digits == 1 {
            int_digits
        } else {
            format!("{}.{}", &int_digits[..1], &int_digits[1..])
        };
        format!("{}{}e{}", if neg { "-" } else { "" }, mantissa, k)
    }

    /// Hex dump of the raw mantissa/exponent bits, for bit-identity checks.
    pub fn bit_pattern(&self) -> String {
        if self.f.is_zero() {
            return format!("z@{}", self.prec);
        }
        let (words, n, sign, e, _) = self.f.as_raw_parts().expect("finite value");
        let ws: Vec<String> = words.iter().map(|w| format!("{w:016x}")).collect();
        format!(
            "{}{}e{}n{}@{}",
            if sign == Sign::Neg { "-" } else { "+" },
            ws.join(""),
            e,
            n,
            self.prec
        )
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl std::fmt::Display for BigReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_decimal(decimal_digits(self.prec)))
    }
}

/// Decimal width that faithfully renders a `prec`-bit value.
pub fn decimal_digits(prec: usize) -> usize {
    (prec as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_round_trip_is_exact() {
        let v = BigInt::parse_bytes(b"123456789012345678901234567890", 10).unwrap();
        let x = BigReal::from_bigint(&v, 256);
        assert_eq!(x.to_rational(), Rational::from_integer(v));
    }

    #[test]
    fn dyadic_rationals_embed_exactly() {
        let half = Rational::new(1.into(), 2.into());
        let x = BigReal::from_rational(&half, 128);
        assert_eq!(x.to_rational(), half);
    }

    #[test]
    fn rounding_error_is_below_one_ulp() {
        // 1/3 at 64 bits: |x - 1/3| <= 2^-65 relative
        let third = Rational::new(1.into(), 3.into());
        let x = BigReal::from_rational(&third, 64);
        let err = (x.to_rational() - third.clone()).abs() / third;
        assert!(err < Rational::new(1.into(), BigInt::from(1) << 64));
    }

    #[test]
    fn pow2_is_exact() {
        let x = BigReal::pow2(-100, 256);
        assert_eq!(
            x.to_rational(),
            Rational::new(1.into(), BigInt::from(1) << 100)
        );
        let y = BigReal::pow2(3, 64);
        assert_eq!(y.to_rational(), Rational::from_integer(8.into()));
    }

    #[test]
    fn sqrt_squares_back() {
        let two = BigReal::from_i64(2, 256);
        let r = two.sqrt();
        let back = r.square().sub(&two).abs();
        assert!(back.log2_abs() < -250.0);
    }

    #[test]
    fn decimal_rendering_fixed_width() {
        let x = BigReal::from_rational(&Rational::new(1.into(), 3.into()), 64);
        assert_eq!(x.to_decimal(5), "3.3333e-1");
        let y = BigReal::from_i64(-1500, 64);
        assert_eq!(y.to_decimal(3), "-1.50e3");
        let z = BigReal::from_rational(&Rational::new(9996.into(), 10.into()), 64);
        assert_eq!(z.to_decimal(3), "1.00e3");
        assert_eq!(BigReal::zero(64).to_decimal(5), "0");
    }

    #[test]
    fn replay_determinism() {
        let run = || {
            let mut acc = BigReal::from_rational(&Rational::new(1.into(), 7.into()), 192);
            for i in 1..200i64 {
                let t = BigReal::from_i64(i, 192).recip();
                acc = acc.add(&t).mul(&BigReal::from_rational(
                    &Rational::new(99.into(), 100.into()),
                    192,
                ));
            }
            acc.bit_pattern()
        };
        assert_eq!(run(), run());
    }
}
