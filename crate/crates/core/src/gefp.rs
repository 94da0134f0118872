//! Exact finite-size formulas at the free-fermion point: the GEFP
//! determinant, the TDEFP in determinant and sum form, the pentagonal
//! partition function and the `α → 1` product formula.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exact::{
    binomial_big, det_exact, det_float, det_float_estimate, factorial, p_poly, powi, sqrt_exact,
    AlphaPoly, BigFloat, FloatDet, Matrix,
};
use crate::oracle::EmptinessSpec;
use crate::{Error, Result};

/// Default cap on the number of terms of an explicit sum.
pub const DEFAULT_TERM_CAP: u128 = 10_000_000;

/// The pentagonal domain: an Aztec diamond of order `N = r + s` with a
/// triangle of size `s` cut from the top-left corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PentagonSpec {
    r: usize,
    s: usize,
}

impl PentagonSpec {
    pub fn new(r: usize, s: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::domain("r must be at least 1"));
        }
        Ok(PentagonSpec { r, s })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn n(&self) -> usize {
        self.r + self.s
    }

    /// `s(s+1)/2`, the number of frozen vertices.
    pub fn triangle(&self) -> usize {
        self.s * (self.s + 1) / 2
    }

    /// `ω = s / (r + s)`.
    pub fn omega(&self) -> f64 {
        self.s as f64 / self.n() as f64
    }

    /// `θ = (2r + s) / s`, defined for `s > 0`.
    pub fn theta(&self) -> Option<f64> {
        (self.s > 0).then(|| (2 * self.r + self.s) as f64 / self.s as f64)
    }

    /// The same event as a general emptiness spec, `r_j = N - s + j - 1`.
    pub fn emptiness_spec(&self) -> EmptinessSpec {
        EmptinessSpec::triangular(self.r, self.s).expect("r >= 1 gives a valid spec")
    }
}

/// A term of the height sum: `0 <= m_1 <= ... <= m_s < r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightConfig {
    m: Vec<usize>,
}

impl HeightConfig {
    pub fn new(m: Vec<usize>, r: usize) -> Result<Self> {
        if m.windows(2).any(|w| w[0] > w[1]) || m.iter().any(|&x| x >= r) {
            return Err(Error::domain("heights need 0 <= m_1 <= ... <= m_s < r"));
        }
        Ok(HeightConfig { m })
    }

    pub fn m(&self) -> &[usize] {
        &self.m
    }

    /// Shifted heights `h_j = 2 m_j + j`; strictly increasing with
    /// `(h_k - h_j)/(k - j) >= 1` and `h_j ≡ j (mod 2)`.
    pub fn heights(&self) -> Vec<usize> {
        self.m.iter().enumerate().map(|(i, &m)| 2 * m + i + 1).collect()
    }

    /// Every configuration for the given `r` and `s`, in lexicographic order.
    pub fn all(r: usize, s: usize) -> impl Iterator<Item = HeightConfig> {
        WeaklyIncreasing::new(r, s).map(|m| HeightConfig { m })
    }
}

/// Weakly increasing tuples of length `len` over `0..bound`.
struct WeaklyIncreasing {
    bound: usize,
    cur: Option<Vec<usize>>,
}

impl WeaklyIncreasing {
    fn new(bound: usize, len: usize) -> Self {
        let cur = (len == 0 || bound > 0).then(|| vec![0; len]);
        WeaklyIncreasing { bound, cur }
    }
}

impl Iterator for WeaklyIncreasing {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let cur = self.cur.as_mut().unwrap();
        match (0..cur.len()).rev().find(|&i| cur[i] + 1 < self.bound) {
            Some(i) => {
                let v = cur[i] + 1;
                cur[i..].iter_mut().for_each(|x| *x = v);
            }
            None => self.cur = None,
        }
        Some(out)
    }
}

fn check_open_alpha(alpha: &BigRational) -> Result<()> {
    if !alpha.is_positive() || alpha >= &BigRational::one() {
        return Err(Error::domain(format!("α = {alpha} must lie in (0, 1)")));
    }
    Ok(())
}

fn p(l: usize, m: usize, n: usize) -> AlphaPoly {
    p_poly(l as u32, m as u32, n as u32)
}

/// `G_{N,s}^{(r_1..r_s)} = Π_j (1-α)^{N-r_j} · det[P_{N-s+j+k-2}^{(N-r_{s-j+1}, j)}(α)]`.
pub fn gefp_det(spec: &EmptinessSpec, alpha: &BigRational) -> Result<BigRational> {
    check_open_alpha(alpha)?;
    let (n, s, r) = (spec.n(), spec.s(), spec.r());
    let m = Matrix::from_fn(s, |j0, k0| {
        let (j, k) = (j0 + 1, k0 + 1);
        p(n - s + j + k - 2, n - r[s - j], j).eval(alpha)
    });
    let lambda: usize = spec.partition().iter().sum();
    let prefactor = powi(&(BigRational::one() - alpha), lambda as i64);
    Ok(prefactor * det_exact(&m))
}

/// The TDEFP polynomial matrix `[P_{r+j+k-2}^{(j,j)}(α)]_{j,k=1..s}`.
pub fn p_matrix(spec: &PentagonSpec) -> Matrix<AlphaPoly> {
    Matrix::from_fn(spec.s, |j0, k0| {
        let (j, k) = (j0 + 1, k0 + 1);
        p(spec.r + j + k - 2, j, j)
    })
}

/// `T_{r,s} = (1-α)^{s(s+1)/2} · det[P_{r+j+k-2}^{(j,j)}(α)]`.
pub fn tdefp_det(spec: &PentagonSpec, alpha: &BigRational) -> Result<BigRational> {
    check_open_alpha(alpha)?;
    let m = p_matrix(spec).map(|q| q.eval(alpha));
    let prefactor = powi(&(BigRational::one() - alpha), spec.triangle() as i64);
    Ok(prefactor * det_exact(&m))
}

fn count_weakly_increasing(bound: usize, len: usize) -> u128 {
    if len == 0 {
        return 1;
    }
    if bound == 0 {
        return 0;
    }
    use num_traits::ToPrimitive;
    binomial_big((bound - 1 + len) as u64, len as i64)
        .to_u128()
        .unwrap_or(u128::MAX)
}

/// `Π_{j<k} (k - j)`.
fn superfactorial(s: usize) -> BigInt {
    (1..s).fold(BigInt::one(), |acc, i| acc * factorial(i as u64))
}

/// The height sum as an integer polynomial in `α`, before the
/// `(1-α)^{s(s+1)/2}` prefactor:
/// `Σ_{m} α^{Σ m_j} Π_{j<k} (2m_k - 2m_j + k - j)/(k - j)`.
pub fn tdefp_sum_poly(spec: &PentagonSpec, cap: u128) -> Result<AlphaPoly> {
    let (r, s) = (spec.r, spec.s);
    let terms = count_weakly_increasing(r, s);
    if terms > cap {
        return Err(Error::TermCap { terms, cap });
    }
    let mut coeffs = vec![BigInt::zero(); s * r.saturating_sub(1) + 1];
    for cfg in HeightConfig::all(r, s) {
        let h = cfg.heights();
        let mut prod = BigInt::one();
        for k in 0..s {
            for j in 0..k {
                prod *= h[k] - h[j];
            }
        }
        coeffs[cfg.m.iter().sum::<usize>()] += prod;
    }
    let sf = superfactorial(s);
    let coeffs = coeffs
        .into_iter()
        .map(|c| BigRational::new(c, sf.clone()))
        .collect();
    Ok(AlphaPoly::new(coeffs))
}

/// `T_{r,s}` from the explicit sum over height configurations.
pub fn tdefp_sum(spec: &PentagonSpec, alpha: &BigRational, cap: u128) -> Result<BigRational> {
    check_open_alpha(alpha)?;
    let poly = tdefp_sum_poly(spec, cap)?;
    let prefactor = powi(&(BigRational::one() - alpha), spec.triangle() as i64);
    Ok(prefactor * poly.eval(alpha))
}

/// `α^{e/2}` for an integer `e`, if rational.
fn alpha_half_power(alpha: &BigRational, e: usize) -> Result<BigRational> {
    if e % 2 == 0 {
        return Ok(powi(alpha, (e / 2) as i64));
    }
    let root = sqrt_exact(alpha).ok_or_else(|| {
        Error::IrrationalPrefactor(format!("α^{e}/2 with α = {alpha} is irrational; use a perfect-square α"))
    })?;
    Ok(powi(&root, e as i64))
}

/// `g_{r,s}` defined by `T_{r,s} = ((1-α)/√α)^{s(s+1)/2} g_{r,s}`, i.e.
/// `g = α^{s(s+1)/4} det[P(α)]`. Exact only when the power of `√α` is
/// rational; otherwise an irrational-prefactor error.
pub fn g_rs(spec: &PentagonSpec, alpha: &BigRational) -> Result<BigRational> {
    check_open_alpha(alpha)?;
    let m = p_matrix(spec).map(|q| q.eval(alpha));
    Ok(alpha_half_power(alpha, spec.triangle())? * det_exact(&m))
}

/// `lim_{α→1} g_{r,s}`: the determinant polynomial evaluated at `α = 1`.
pub fn g_rs_at_one(spec: &PentagonSpec) -> BigRational {
    let one = BigRational::one();
    det_exact(&p_matrix(spec).map(|q| q.eval(&one)))
}

/// `C_{r,s} = C(r+s-1, s) Π_{j=1..s} j!/(2j-1)! Π_{1<=j<k<=s} (2r+j+k-2)`.
pub fn c_rs(r: usize, s: usize) -> Result<BigRational> {
    if r == 0 {
        return Err(Error::domain("r must be at least 1"));
    }
    let mut num = vec![binomial_big((r + s - 1) as u64, s as i64)];
    let mut den = Vec::with_capacity(s);
    for j in 1..=s as u64 {
        num.push(factorial(j));
        den.push(factorial(2 * j - 1));
    }
    for k in 1..=s {
        num.extend((1..k).map(|j| BigInt::from(2 * r + j + k - 2)));
    }
    Ok(BigRational::new(product(num), product(den)))
}

/// Balanced product, so large products stay near-linear in the output size.
fn product(mut v: Vec<BigInt>) -> BigInt {
    if v.is_empty() {
        return BigInt::one();
    }
    while v.len() > 1 {
        v = v
            .chunks(2)
            .map(|c| if c.len() == 2 { &c[0] * &c[1] } else { c[0].clone() })
            .collect();
    }
    v.pop().unwrap()
}

/// `C_{r,s}` as `det[C(r+j+k-2, r-j+k-1)]`.
pub fn c_rs_binomial_det(r: usize, s: usize) -> BigRational {
    let m = Matrix::from_fn(s, |j0, k0| {
        let (j, k) = (j0 as i64 + 1, k0 as i64 + 1);
        let r = r as i64;
        BigRational::from_integer(binomial_big((r + j + k - 2) as u64, r - j + k - 1))
    });
    det_exact(&m)
}

/// `C_{r,s}` as `(-1)^{s(s-1)/2} det[C(r+s+k-j-1, r-s+k+j-2)]`.
pub fn c_rs_reflected_det(r: usize, s: usize) -> BigRational {
    let m = Matrix::from_fn(s, |j0, k0| {
        let (j, k) = (j0 as i64 + 1, k0 as i64 + 1);
        let (r, s) = (r as i64, s as i64);
        BigRational::from_integer(binomial_big((r + s + k - j - 1) as u64, r - s + k + j - 2))
    });
    let d = det_exact(&m);
    if (s * s.saturating_sub(1) / 2) % 2 == 1 {
        -d
    } else {
        d
    }
}

fn check_rho(rho: &BigRational) -> Result<()> {
    if !rho.is_positive() {
        return Err(Error::domain("ρ must be positive"));
    }
    Ok(())
}

/// `Z_N = w5^{N(N-1)/2} w6^{N(N+1)/2} = ρ^{N(N+1)/2}` at the free-fermion point.
pub fn z_ff(n: usize, rho: &BigRational, alpha: &BigRational) -> Result<BigRational> {
    check_rho(rho)?;
    if alpha.is_negative() || alpha > &BigRational::one() {
        return Err(Error::domain("α must lie in [0, 1]"));
    }
    Ok(powi(rho, (n * (n + 1) / 2) as i64))
}

/// `Z_N T_{r,s} / (ρ(1-α))^{⌊e/2⌋}` with `e = s(s+1)/2`, and whether a
/// factor `(ρ(1-α))^{-1/2}` remains.
fn z_pentagon_rational_part(spec: &PentagonSpec, rho: &BigRational, alpha: &BigRational) -> Result<(BigRational, bool)> {
    check_rho(rho)?;
    let t = tdefp_det(spec, alpha)?;
    let e = spec.triangle();
    let base = rho * (BigRational::one() - alpha);
    let n = spec.n();
    let z = z_ff(n, rho, alpha)? * t / powi(&base, (e / 2) as i64);
    Ok((z, e % 2 == 1))
}

/// `Z_{r,s} = ρ^{N(N+1)/2 - s(s+1)/4} (1-α)^{-s(s+1)/4} T_{r,s}`, exact.
///
/// The prefactor is `Z_N / w2^{s(s+1)/2}` with `w2² = ρ(1-α)`; when
/// `s(s+1)/2` is odd this needs `ρ(1-α)` to be a perfect square.
pub fn z_pentagon(spec: &PentagonSpec, rho: &BigRational, alpha: &BigRational) -> Result<BigRational> {
    let (z, half) = z_pentagon_rational_part(spec, rho, alpha)?;
    if !half {
        return Ok(z);
    }
    let base = rho * (BigRational::one() - alpha);
    let root = sqrt_exact(&base).ok_or_else(|| {
        Error::IrrationalPrefactor(format!(
            "(ρ(1-α))^(1/2) = ({base})^(1/2) is irrational; request a precision"
        ))
    })?;
    Ok(z / root)
}

/// `Z_{r,s}` at `precision` bits, for parameters where the exact value is
/// irrational.
pub fn z_pentagon_float(spec: &PentagonSpec, rho: &BigRational, alpha: &BigRational, precision: u32) -> Result<BigFloat> {
    let (z, half) = z_pentagon_rational_part(spec, rho, alpha)?;
    let z = BigFloat::from_rational(&z, precision);
    if !half {
        return Ok(z);
    }
    let base = BigFloat::from_rational(&(rho * (BigRational::one() - alpha)), precision);
    Ok(z / base.sqrt())
}

/// The strictly increasing part of the symmetrized log-gas sum as a
/// polynomial in `q = √α`: `Σ_{h_1<...<h_s} q^{Σh} Π_{j<k}(h_k - h_j)`,
/// heights in `[1, 2r+s-2]`.
fn loggas_poly(spec: &PentagonSpec, cap: u128) -> Result<AlphaPoly> {
    let (r, s) = (spec.r, spec.s);
    let top = 2 * r + s - 2;
    let terms = if s > top {
        0
    } else {
        use num_traits::ToPrimitive;
        binomial_big(top as u64, s as i64).to_u128().unwrap_or(u128::MAX)
    };
    if terms > cap {
        return Err(Error::TermCap { terms, cap });
    }
    let mut coeffs = vec![BigInt::zero(); s * top + 1];
    if s == 0 {
        coeffs[0] = BigInt::one();
        return Ok(AlphaPoly::from_integers(coeffs));
    }
    // strictly increasing h over 1..=top, as weakly increasing m with h_j = m_j + j
    for m in WeaklyIncreasing::new(top + 1 - s, s) {
        let h: Vec<usize> = m.iter().enumerate().map(|(i, &x)| x + i + 1).collect();
        let mut prod = BigInt::one();
        for k in 0..s {
            for j in 0..k {
                prod *= h[k] - h[j];
            }
        }
        coeffs[h.iter().sum::<usize>()] += prod;
    }
    Ok(AlphaPoly::from_integers(coeffs))
}

/// `Σ_{h ∈ [1, 2r+s-2]^s} Π_j α^{h_j/2} Π_{j<k} |h_k - h_j|` over all
/// ordered tuples, without the parity constraints of the height sum.
/// Needs a perfect-square `α`.
pub fn symmetrized_loggas(spec: &PentagonSpec, alpha: &BigRational, cap: u128) -> Result<BigRational> {
    check_open_alpha(alpha)?;
    let q = sqrt_exact(alpha).ok_or_else(|| {
        Error::IrrationalPrefactor(format!("√α with α = {alpha} is irrational; use a perfect-square α"))
    })?;
    let poly = loggas_poly(spec, cap)?;
    Ok(BigRational::from_integer(factorial(spec.s as u64)) * poly.eval(&q))
}

/// Empirical `κ_s = g_{r,s} / symmetrized_loggas`.
pub fn kappa_estimate(spec: &PentagonSpec, alpha: &BigRational, cap: u128, precision: u32) -> Result<BigFloat> {
    let g = g_rs(spec, alpha)?;
    let sym = symmetrized_loggas(spec, alpha, cap)?;
    if sym.is_zero() {
        return Err(Error::domain("symmetrized sum vanishes"));
    }
    Ok(BigFloat::from_rational(&(g / sym), precision))
}

/// `T_{r,s}` by a multi-precision determinant, with the error estimate.
pub fn tdefp_float_estimate(spec: &PentagonSpec, alpha: &BigFloat, precision: u32) -> Result<FloatDet> {
    let one = BigFloat::one(precision);
    if alpha.is_negative() || alpha.is_zero() || alpha >= &one {
        return Err(Error::domain("α must lie in (0, 1)"));
    }
    let alpha = alpha.with_precision(precision);
    let m = p_matrix(spec).map(|q| q.eval_float(&alpha));
    let d = det_float_estimate(&m, precision);
    let prefactor = (&one - &alpha).powi(spec.triangle() as u64);
    Ok(FloatDet {
        value: &d.value * &prefactor,
        log2_rel_error: d.log2_rel_error,
    })
}

/// `T_{r,s}` at `precision` bits; fails on loss of significance.
pub fn tdefp_float(spec: &PentagonSpec, alpha: &BigFloat, precision: u32) -> Result<BigFloat> {
    let one = BigFloat::one(precision);
    if alpha.is_negative() || alpha.is_zero() || alpha >= &one {
        return Err(Error::domain("α must lie in (0, 1)"));
    }
    let alpha = alpha.with_precision(precision);
    let m = p_matrix(spec).map(|q| q.eval_float(&alpha));
    let prefactor = (&one - &alpha).powi(spec.triangle() as u64);
    Ok(det_float(&m, precision)? * prefactor)
}
