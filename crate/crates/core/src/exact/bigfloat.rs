use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Float, One, Signed, ToPrimitive, Zero};

use super::rational::{format_sci, BigRational};

/// Binary floating point number `mantissa * 2^exponent` with an explicit
/// precision in bits.
///
/// Non-zero values keep a mantissa of exactly `precision` bits. Every
/// operation rounds to nearest (ties to even) at the larger precision of its
/// operands. There are no infinities or NaNs; the exponent is an `i64`, so
/// values such as `2^-100000` are representable.
#[derive(Clone, Debug)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

impl BigFloat {
    /// Smallest supported precision.
    pub const MIN_PRECISION: u32 = 64;

    fn normalized(mant: BigInt, exp: i64, prec: u32) -> Self {
        let prec = prec.max(Self::MIN_PRECISION);
        if mant.is_zero() {
            return BigFloat { mant, exp: 0, prec };
        }
        let (sign, mag) = mant.into_parts();
        let (mag, exp) = round_magnitude(mag, exp, prec);
        BigFloat {
            mant: BigInt::from_biguint(sign, mag),
            exp,
            prec,
        }
    }

    pub fn zero(prec: u32) -> Self {
        Self::normalized(BigInt::zero(), 0, prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::from_int(&BigInt::one(), prec)
    }

    pub fn from_int(value: &BigInt, prec: u32) -> Self {
        Self::normalized(value.clone(), 0, prec)
    }

    pub fn from_i64(value: i64, prec: u32) -> Self {
        Self::normalized(BigInt::from(value), 0, prec)
    }

    pub fn from_f64(value: f64, prec: u32) -> Self {
        assert!(value.is_finite(), "BigFloat::from_f64 on non-finite value");
        let (m, e, sign) = value.integer_decode();
        let m = BigInt::from(m) * i64::from(sign);
        Self::normalized(m, i64::from(e), prec)
    }

    /// Correctly rounded conversion of an exact rational.
    pub fn from_rational(value: &BigRational, prec: u32) -> Self {
        let prec = prec.max(Self::MIN_PRECISION);
        if value.is_zero() {
            return Self::zero(prec);
        }
        let sign = value.numer().sign();
        let num = value.numer().magnitude();
        let den = value.denom().magnitude();
        let shift = u64::from(prec) + 3 + den.bits();
        let (q, r) = num_integer::Integer::div_rem(&(num << shift), den);
        let mag = (q << 1u32) | sticky(!r.is_zero());
        Self::normalized(BigInt::from_biguint(sign, mag), -(shift as i64) - 1, prec)
    }

    /// Exact rational value of this float.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << self.exp.unsigned_abs())
        }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// The same value rounded to another precision.
    pub fn with_precision(&self, prec: u32) -> Self {
        Self::normalized(self.mant.clone(), self.exp, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mant: self.mant.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    /// Exponent of the leading bit plus one: `2^(top-1) <= |x| < 2^top`.
    fn top(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    fn top_f64(&self) -> (f64, i64) {
        let bits = self.mant.bits();
        let shift = bits.saturating_sub(64);
        let top = (&self.mant >> shift).to_f64().unwrap();
        (top, self.exp + shift as i64)
    }

    /// Nearest `f64`, saturating to `±inf` or flushing to `±0`.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let (top, e) = self.top_f64();
        ldexp(top, e)
    }

    /// `log2 |x|`, accurate to about `1e-15` relative; `-inf` at zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (top, e) = self.top_f64();
        top.abs().log2() + e as f64
    }

    /// Natural log of a positive value as `f64`.
    pub fn ln(&self) -> f64 {
        assert!(!self.is_negative(), "BigFloat::ln of a negative value");
        self.log2_abs() * std::f64::consts::LN_2
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "BigFloat::sqrt of a negative value");
        if self.is_zero() {
            return self.clone();
        }
        let mag = self.mant.magnitude();
        let want = 2 * u64::from(self.prec) + 4;
        let mut shift = want.saturating_sub(mag.bits());
        if (self.exp - shift as i64).rem_euclid(2) != 0 {
            shift += 1;
        }
        let scaled: BigUint = mag << shift;
        let root = scaled.sqrt();
        let exact = &root * &root == scaled;
        let mag = (root << 1u32) | sticky(!exact);
        let exp = (self.exp - shift as i64) / 2 - 1;
        Self::normalized(BigInt::from_biguint(Sign::Plus, mag), exp, self.prec)
    }

    pub fn powi(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.prec);
        let mut sq = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    fn add_impl(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        if other.is_zero() {
            return self.with_precision(prec);
        }
        if self.is_zero() {
            return other.with_precision(prec);
        }
        let gap = i64::from(prec) + 3;
        if self.top() - other.top() > gap {
            return self.with_precision(prec);
        }
        if other.top() - self.top() > gap {
            return other.with_precision(prec);
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Self::normalized(a + b, e, prec)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        Self::normalized(&self.mant * &other.mant, self.exp + other.exp, prec)
    }

    fn div_impl(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "BigFloat division by zero");
        let prec = self.prec.max(other.prec);
        if self.is_zero() {
            return Self::zero(prec);
        }
        let sign = if self.mant.sign() == other.mant.sign() {
            Sign::Plus
        } else {
            Sign::Minus
        };
        let num = self.mant.magnitude();
        let den = other.mant.magnitude();
        let shift = (u64::from(prec) + 3 + den.bits()).saturating_sub(num.bits()) + 1;
        let (q, r) = num_integer::Integer::div_rem(&(num << shift), den);
        let mag = (q << 1u32) | sticky(!r.is_zero());
        let exp = self.exp - other.exp - shift as i64 - 1;
        Self::normalized(BigInt::from_biguint(sign, mag), exp, prec)
    }
}

fn sticky(bit: bool) -> BigUint {
    if bit {
        BigUint::one()
    } else {
        BigUint::zero()
    }
}

/// Rounds `mag * 2^exp` to exactly `prec` significant bits.
fn round_magnitude(mag: BigUint, exp: i64, prec: u32) -> (BigUint, i64) {
    let bits = mag.bits();
    let prec = u64::from(prec);
    if bits <= prec {
        let up = prec - bits;
        return (mag << up, exp - up as i64);
    }
    let drop = bits - prec;
    let half = mag.bit(drop - 1);
    let below = mag.trailing_zeros().map_or(false, |tz| tz < drop - 1);
    let mut q = &mag >> drop;
    let mut exp = exp + drop as i64;
    if half && (below || q.bit(0)) {
        q += 1u32;
        if q.bits() > prec {
            q >>= 1u32;
            exp += 1;
        }
    }
    (q, exp)
}

fn ldexp(x: f64, e: i64) -> f64 {
    let mut x = x;
    let mut e = e.clamp(-4000, 4000) as i32;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e)
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let diff = self - other;
        Some(if diff.is_zero() {
            Ordering::Equal
        } else if diff.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        })
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat {
            mant: -self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        -self.clone()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $imp:expr) => {
        impl $trait<&BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &BigFloat) -> BigFloat {
                $imp(self, rhs)
            }
        }
        impl $trait<BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                $imp(&self, &rhs)
            }
        }
        impl $trait<&BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &BigFloat) -> BigFloat {
                $imp(&self, rhs)
            }
        }
        impl $trait<BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                $imp(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &BigFloat, b: &BigFloat| a.add_impl(b));
forward_binop!(Sub, sub, |a: &BigFloat, b: &BigFloat| a.add_impl(&-b));
forward_binop!(Mul, mul, |a: &BigFloat, b: &BigFloat| a.mul_impl(b));
forward_binop!(Div, div, |a: &BigFloat, b: &BigFloat| a.div_impl(b));

impl fmt::Display for BigFloat {
    /// 17 significant decimal digits in scientific notation.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_sci(&self.to_rational(), 17))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    #[test]
    fn rational_round_trip_of_dyadics() {
        let q = ratio(-13, 64);
        assert_eq!(BigFloat::from_rational(&q, 64).to_rational(), q);
    }

    #[test]
    fn one_third_is_correctly_rounded() {
        let x = BigFloat::from_rational(&ratio(1, 3), 64);
        let err = (x.to_rational() - ratio(1, 3)) / ratio(1, 3);
        assert!(crate::exact::to_f64(&err).abs() <= 2f64.powi(-64));
    }

    #[test]
    fn arithmetic_matches_f64_at_low_precision() {
        let a = BigFloat::from_f64(1.25, 64);
        let b = BigFloat::from_f64(-0.375, 64);
        assert_eq!((&a + &b).to_f64(), 0.875);
        assert_eq!((&a - &b).to_f64(), 1.625);
        assert_eq!((&a * &b).to_f64(), -0.46875);
        assert_eq!((&a / &b).to_f64(), 1.25 / -0.375);
    }

    #[test]
    fn sqrt_two_squared() {
        let two = BigFloat::from_i64(2, 256);
        let r = two.sqrt();
        let back = &r * &r;
        let rel = ((&back - &two) / &two).abs();
        assert!(rel.log2_abs() < -250.0);
        assert!((r.to_f64() - 2f64.sqrt()).abs() < 1e-16);
    }

    #[test]
    fn cancellation_is_exact() {
        let a = BigFloat::from_i64(1 << 40, 64);
        let tiny = BigFloat::from_rational(&ratio(1, 1 << 20), 64);
        let s = &(&a + &tiny) - &a;
        assert_eq!(s.to_rational(), ratio(1, 1 << 20));
    }

    #[test]
    fn huge_exponent_range() {
        let half = BigFloat::from_rational(&ratio(1, 2), 64);
        let tiny = half.powi(100_000);
        assert_eq!(tiny.log2_abs(), -100_000.0);
        assert_eq!(tiny.to_f64(), 0.0);
        assert!((tiny.ln() + 100_000.0 * std::f64::consts::LN_2).abs() < 1e-8);
    }

    #[test]
    fn ordering() {
        let a = BigFloat::from_f64(0.1, 128);
        let b = BigFloat::from_f64(0.2, 64);
        assert!(a < b);
        assert!(-&b < a);
        assert_eq!(a, a.with_precision(256));
    }

    #[test]
    fn ties_round_to_even() {
        // 2^64 + 1 needs 65 bits; the tie rounds down to the even mantissa
        let x = BigInt::from(u64::MAX) + 2u32;
        assert_eq!(BigFloat::from_int(&x, 64).to_rational(), BigRational::from_integer(x - 1u32));
        // 2^64 + 3 rounds up to 2^64 + 4
        let y = BigInt::from(u64::MAX) + 4u32;
        assert_eq!(BigFloat::from_int(&y, 64).to_rational(), BigRational::from_integer(y + 1u32));
    }
}
