use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Exact rational in lowest terms with positive denominator.
pub type BigRational = num_rational::BigRational;

/// Shorthand for the rational `p/q`.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Integer power with a possibly negative exponent.
pub fn powi(base: &BigRational, exp: i64) -> BigRational {
    let mut acc = BigRational::one();
    let mut sq = if exp < 0 { base.recip() } else { base.clone() };
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

/// Square root if it is rational.
pub fn sqrt_exact(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = x.abs() >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of `|q|`, valid far outside the `f64` exponent range.
pub fn ln_abs(q: &BigRational) -> f64 {
    if q.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_bigint(q.numer()) - ln_bigint(q.denom())
}

/// Nearest `f64`; values below the subnormal range flush to zero.
pub fn to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    if let Some(v) = q.to_f64() {
        if v.is_finite() && v != 0.0 {
            return v;
        }
    }
    let sign = if q.is_negative() { -1.0 } else { 1.0 };
    sign * ln_abs(q).exp()
}

fn pow10(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), k as usize)
}

fn round_half_up(q: &BigRational) -> BigInt {
    // q >= 0
    (q + ratio(1, 2)).floor().to_integer()
}

/// Scientific rendering with `digits` significant digits, laid out like
/// Rust's `{:.N e}` for `f64` (`1.2500000000000000e-1`).
pub fn format_sci(q: &BigRational, digits: u32) -> String {
    let digits = digits.max(1);
    if q.is_zero() {
        return format!("{:.*e}", (digits - 1) as usize, 0.0f64);
    }
    let neg = q.is_negative();
    let a = q.abs();
    let mut k = (ln_abs(&a) / std::f64::consts::LN_10).floor() as i64;
    let lo = pow10(digits - 1);
    let hi = pow10(digits);
    let mant = loop {
        let shift = digits as i64 - 1 - k;
        let scaled = &a * powi(&BigRational::from_integer(BigInt::from(10)), shift);
        let n = round_half_up(&scaled);
        if n >= hi {
            k += 1;
        } else if n < lo {
            k -= 1;
        } else {
            break n;
        }
    };
    let s = mant.to_string();
    let (head, tail) = s.split_at(1);
    let sign = if neg { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{k}")
    } else {
        format!("{sign}{head}.{tail}e{k}")
    }
}

/// A number literal parsed exactly, with a note of how it was written.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedNumber {
    pub value: BigRational,
    /// True when the literal was written as `p/q` or a bare integer.
    pub is_fraction: bool,
    /// Significant digits of a decimal literal (0 for fractions).
    pub significant_digits: usize,
}

/// Parses `p/q`, an integer, or a decimal such as `0.25` or `2.5e-3`
/// into an exact rational.
pub fn parse_fraction(text: &str) -> Result<ParsedNumber> {
    let t = text.trim();
    let bad = || Error::domain(format!("cannot parse number '{text}'"));
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::domain(format!("zero denominator in '{text}'")));
        }
        return Ok(ParsedNumber {
            value: BigRational::new(p, q),
            is_fraction: true,
            significant_digits: 0,
        });
    }
    if let Ok(p) = t.parse::<BigInt>() {
        return Ok(ParsedNumber {
            value: BigRational::from_integer(p),
            is_fraction: true,
            significant_digits: 0,
        });
    }
    let (body, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (sign, body) = match body.strip_prefix('-') {
        Some(rest) => (Sign::Minus, rest),
        None => (Sign::Plus, body.strip_prefix('+').unwrap_or(body)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let significant_digits = all_digits.trim_start_matches('0').len().max(1);
    let mantissa: BigInt = all_digits.parse().map_err(|_| bad())?;
    let mantissa = if sign == Sign::Minus { -mantissa } else { mantissa };
    let ten = BigRational::from_integer(BigInt::from(10));
    let value = BigRational::from_integer(mantissa) * powi(&ten, exp - frac_part.len() as i64);
    Ok(ParsedNumber {
        value,
        is_fraction: false,
        significant_digits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_squares_and_non_squares() {
        assert_eq!(sqrt_exact(&ratio(9, 16)), Some(ratio(3, 4)));
        assert_eq!(sqrt_exact(&ratio(1, 2)), None);
        assert_eq!(sqrt_exact(&ratio(-1, 4)), None);
    }

    #[test]
    fn powers() {
        assert_eq!(powi(&ratio(2, 3), 3), ratio(8, 27));
        assert_eq!(powi(&ratio(2, 3), -2), ratio(9, 4));
        assert_eq!(powi(&ratio(5, 7), 0), ratio(1, 1));
    }

    #[test]
    fn sci_matches_f64_layout() {
        for (p, q) in [(1, 8), (-3, 4), (1024, 1), (2, 1), (-5, 1024)] {
            let expect = format!("{:.16e}", p as f64 / q as f64);
            assert_eq!(format_sci(&ratio(p, q), 17), expect);
        }
        assert_eq!(format_sci(&ratio(1, 3), 17), "3.3333333333333333e-1");
        assert_eq!(format_sci(&ratio(-7, 3), 5), "-2.3333e0");
        assert_eq!(format_sci(&ratio(0, 1), 17), format!("{:.16e}", 0.0));
    }

    #[test]
    fn sci_handles_tiny_values() {
        let tiny = powi(&ratio(1, 2), 4000);
        let s = format_sci(&tiny, 5);
        assert!(s.ends_with("e-1205"), "{s}");
    }

    #[test]
    fn parse_forms() {
        let f = parse_fraction("3/4").unwrap();
        assert!(f.is_fraction);
        assert_eq!(f.value, ratio(3, 4));
        let d = parse_fraction("0.25").unwrap();
        assert!(!d.is_fraction);
        assert_eq!(d.value, ratio(1, 4));
        assert_eq!(d.significant_digits, 2);
        assert_eq!(parse_fraction("2.5e-3").unwrap().value, ratio(1, 400));
        assert_eq!(parse_fraction("-12").unwrap().value, ratio(-12, 1));
        assert!(parse_fraction("1/0").is_err());
        assert!(parse_fraction("abc").is_err());
        assert_eq!(
            parse_fraction("0.1234567890123456").unwrap().significant_digits,
            16
        );
    }

    #[test]
    fn ln_abs_beyond_f64_range() {
        let tiny = powi(&ratio(1, 3), 2000);
        let expect = -2000.0 * 3f64.ln();
        assert!((ln_abs(&tiny) - expect).abs() < 1e-9);
    }
}
