//! Thin helpers around `num_rational::BigRational`, which already maintains
//! the canonical form we need (reduced, positive denominator).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::NumericsError;

pub type Rational = num_rational::BigRational;

/// Parses `"p/q"` or a plain integer into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, NumericsError> {
    let bad = || NumericsError::InvalidConstruction(format!("not a rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p.trim().parse().map_err(|_| bad())?;
        let den: BigInt = q.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(NumericsError::DivisionByZero);
        }
        Ok(Rational::new(num, den))
    } else {
        let num: BigInt = s.trim().parse().map_err(|_| bad())?;
        Ok(Rational::from_integer(num))
    }
}

/// Parses a decimal literal (`"0.31"`, `"-2.5e-3"`) into the exact rational
/// it denotes. Decimal strings are always exactly representable, so this
/// loses nothing.
pub fn parse_decimal(s: &str) -> Result<Rational, NumericsError> {
    let bad = || NumericsError::InvalidConstruction(format!("not a decimal literal: {s:?}"));
    let s = s.trim();
    let (mantissa, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let mut num: BigInt = format!("{int_part}{frac_part}")
        .parse()
        .unwrap_or_else(|_| BigInt::zero());
    num *= sign;
    let shift = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let mut value = Rational::from_integer(num);
    if shift >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, shift as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-shift) as usize));
    }
    Ok(value)
}

/// Canonical text form `p/q` (or `p` when integral).
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_and_integer() {
        assert_eq!(
            parse_rational("7/5").unwrap(),
            Rational::new(7.into(), 5.into())
        );
        assert_eq!(
            parse_rational("-3").unwrap(),
            Rational::from_integer((-3).into())
        );
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn parses_decimal_literals_exactly() {
        assert_eq!(
            parse_decimal("0.31").unwrap(),
            Rational::new(31.into(), 100.into())
        );
        assert_eq!(
            parse_decimal("-2.5e-3").unwrap(),
            Rational::new((-25).into(), 10000.into())
        );
        assert_eq!(
            parse_decimal("12e2").unwrap(),
            Rational::from_integer(1200.into())
        );
        assert!(parse_decimal("1.2.3").is_err());
    }
}
