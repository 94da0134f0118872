use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::bigfloat::BigFloat;
use super::binomial::{binomial_big, multiset};
use super::rational::BigRational;

/// Degree of an [`AlphaPoly`]. The zero polynomial has its own variant so a
/// degree check can never pass on it by accident.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    ZeroPolynomial,
    Exactly(usize),
}

/// Dense polynomial in `α` with rational coefficients; `coeffs[i]` is the
/// coefficient of `α^i`. Trailing zeros are always trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AlphaPoly {
    coeffs: Vec<BigRational>,
}

impl AlphaPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        AlphaPoly { coeffs }
    }

    pub fn from_integers(coeffs: Vec<BigInt>) -> Self {
        Self::new(coeffs.into_iter().map(BigRational::from_integer).collect())
    }

    pub fn zero() -> Self {
        AlphaPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `α - root`.
    pub fn linear(root: BigRational) -> Self {
        Self::new(vec![-root, BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::ZeroPolynomial,
            n => Degree::Exactly(n - 1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, alpha: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * alpha + c)
    }

    pub fn eval_float(&self, alpha: &BigFloat) -> BigFloat {
        let prec = alpha.precision();
        self.coeffs.iter().rev().fold(BigFloat::zero(prec), |acc, c| {
            &acc * alpha + BigFloat::from_rational(c, prec)
        })
    }

    pub fn eval_f64(&self, alpha: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * alpha + super::rational::to_f64(c))
    }

    /// Synthetic division by `α - root`: returns `(quotient, remainder)`.
    pub fn div_linear(&self, root: &BigRational) -> (AlphaPoly, BigRational) {
        if self.coeffs.is_empty() {
            return (AlphaPoly::zero(), BigRational::zero());
        }
        let mut q = vec![BigRational::zero(); self.coeffs.len() - 1];
        let mut carry = BigRational::zero();
        for i in (0..self.coeffs.len()).rev() {
            carry = &carry * root + &self.coeffs[i];
            if i > 0 {
                q[i - 1] = carry.clone();
            }
        }
        (AlphaPoly::new(q), carry)
    }

    pub fn pow(&self, e: u32) -> AlphaPoly {
        (0..e).fold(AlphaPoly::constant(BigRational::one()), |acc, _| &acc * self)
    }
}

impl Add for &AlphaPoly {
    type Output = AlphaPoly;
    fn add(self, rhs: &AlphaPoly) -> AlphaPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        AlphaPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &AlphaPoly {
    type Output = AlphaPoly;
    fn sub(self, rhs: &AlphaPoly) -> AlphaPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        AlphaPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &AlphaPoly {
    type Output = AlphaPoly;
    fn mul(self, rhs: &AlphaPoly) -> AlphaPoly {
        if self.is_zero() || rhs.is_zero() {
            return AlphaPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        AlphaPoly::new(out)
    }
}

impl fmt::Display for AlphaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})·α"),
                _ => format!("({c})·α^{i}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// `P_l^{(m,n)}(α) = ∮ x^l / ((x-α)^m (x-1)^n) dx/2πi` around both poles.
///
/// Computed from the residue at infinity: expanding the integrand in `1/x`
/// gives the coefficient of `α^i` as `C(m+i-1, i)·C(n+j-1, j)` with
/// `i + j = l - m - n + 1`. For `m >= 1` the degree is exactly
/// `l - m - n + 1` when that is non-negative; otherwise the result is zero.
pub fn p_poly(l: u32, m: u32, n: u32) -> AlphaPoly {
    let d = i64::from(l) - i64::from(m) - i64::from(n) + 1;
    if d < 0 {
        return AlphaPoly::zero();
    }
    let d = d as u64;
    AlphaPoly::from_integers(
        (0..=d)
            .map(|i| multiset(u64::from(m), i) * multiset(u64::from(n), d - i))
            .collect(),
    )
}

/// The same polynomial built from the finite residues at `x = α` and
/// `x = 1`, each obtained by differentiating the regular factor.
///
/// Used only to cross-check [`p_poly`]. For `m, n >= 1` the residue sum
/// times `(α - 1)^{m+n-1}` is a polynomial which is then divided out
/// exactly.
pub fn p_poly_by_residues(l: u32, m: u32, n: u32) -> AlphaPoly {
    let (l64, m64, n64) = (u64::from(l), u64::from(m), u64::from(n));
    let monomial = |deg: u64, c: BigInt| {
        let mut v = vec![BigRational::zero(); deg as usize + 1];
        v[deg as usize] = BigRational::from_integer(c);
        AlphaPoly::new(v)
    };
    match (m, n) {
        (0, 0) => return AlphaPoly::zero(),
        // no pole at α: residue of x^l/(x-1)^n at 1
        (0, _) => return AlphaPoly::constant(BigRational::from_integer(binomial_big(l64, i64::from(n) - 1))),
        // no pole at 1: residue of x^l/(x-α)^m at α
        (_, 0) => {
            if l + 1 < m {
                return AlphaPoly::zero();
            }
            return monomial(l64 + 1 - m64, binomial_big(l64, i64::from(m) - 1));
        }
        _ => {}
    }
    let shifted = AlphaPoly::linear(BigRational::one());
    let mut numer = AlphaPoly::zero();
    // residue at α: Σ_k C(l,k) α^{l-k} (-1)^q C(n+q-1,q) (α-1)^k, q = m-1-k
    for k in 0..m64 {
        if k > l64 {
            break;
        }
        let q = m64 - 1 - k;
        let mut c = binomial_big(l64, k as i64) * multiset(n64, q);
        if q % 2 == 1 {
            c = -c;
        }
        numer = &numer + &(&monomial(l64 - k, c) * &shifted.pow(k as u32));
    }
    // residue at 1: Σ_k C(l,k) (-1)^m C(m+q-1,q) (α-1)^k, q = n-1-k
    for k in 0..n64 {
        if k > l64 {
            break;
        }
        let q = n64 - 1 - k;
        let mut c = binomial_big(l64, k as i64) * multiset(m64, q);
        if m % 2 == 1 {
            c = -c;
        }
        numer = &numer + &(&monomial(0, c) * &shifted.pow(k as u32));
    }
    let one = BigRational::one();
    for _ in 0..(m + n - 1) {
        let (q, rem) = numer.div_linear(&one);
        assert!(rem.is_zero(), "residue sum is not a polynomial");
        numer = q;
    }
    numer
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn ints(v: &[i64]) -> AlphaPoly {
        AlphaPoly::from_integers(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn hand_values() {
        assert_eq!(p_poly(1, 1, 1), ints(&[1]));
        assert_eq!(p_poly(3, 1, 1), ints(&[1, 1, 1]));
        assert_eq!(p_poly(0, 0, 0), AlphaPoly::zero());
        assert_eq!(p_poly(0, 0, 0).degree(), Degree::ZeroPolynomial);
    }

    #[test]
    fn geometric_sum_identity() {
        // P_l^{(1,1)} = (1 - α^l)/(1 - α)
        for l in 1..12u32 {
            let p = p_poly(l, 1, 1);
            for a in [ratio(1, 3), ratio(5, 7)] {
                let expect = (ratio(1, 1) - crate::exact::powi(&a, l.into())) / (ratio(1, 1) - &a);
                assert_eq!(p.eval(&a), expect);
            }
        }
    }

    #[test]
    fn residue_route_matches_on_hand_values() {
        assert_eq!(p_poly_by_residues(1, 1, 1), ints(&[1]));
        assert_eq!(p_poly_by_residues(3, 1, 1), ints(&[1, 1, 1]));
        assert_eq!(p_poly_by_residues(0, 0, 0), AlphaPoly::zero());
    }

    #[test]
    fn both_routes_agree() {
        for l in 0..=20u32 {
            for m in 0..=6u32 {
                for n in 0..=6u32 {
                    assert_eq!(p_poly(l, m, n), p_poly_by_residues(l, m, n), "l={l} m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn degree_is_exact() {
        for l in 0..=20u32 {
            for m in 1..=6u32 {
                for n in 0..=6u32 {
                    let d = i64::from(l) - i64::from(m) - i64::from(n) + 1;
                    let expect = if d >= 0 { Degree::Exactly(d as usize) } else { Degree::ZeroPolynomial };
                    assert_eq!(p_poly(l, m, n).degree(), expect);
                }
            }
        }
    }

    #[test]
    fn synthetic_division() {
        // (α - 2)(α + 3) = α² + α - 6
        let p = ints(&[-6, 1, 1]);
        let (q, r) = p.div_linear(&ratio(2, 1));
        assert_eq!(q, ints(&[3, 1]));
        assert_eq!(r, ratio(0, 1));
        let (_, r) = p.div_linear(&ratio(1, 1));
        assert_eq!(r, ratio(-4, 1));
    }

    #[test]
    fn trimming() {
        let p = AlphaPoly::new(vec![ratio(1, 2), ratio(0, 1), ratio(0, 1)]);
        assert_eq!(p.degree(), Degree::Exactly(0));
        assert_eq!((&p - &p).degree(), Degree::ZeroPolynomial);
    }
}
