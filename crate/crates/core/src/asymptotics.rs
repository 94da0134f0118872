//! Scaling-limit layer in double precision.
//!
//! With `θ = 2/ω - 1` the rescaled heights `μ = h/s` of the height sum form a
//! discrete log-gas on `[0, θ]` in the linear potential `-μ log √α`, with
//! density `ρ(μ) <= 1`. `Φ(θ) = -lim log g_{r,s}/s²` is its free energy and
//! `σ(ω) = ½ log(√α/(1-α)) + Φ(θ)`.
//!
//! Two band structures occur. For `θ >= θ_c` (scenario I) the density is
//! saturated on `[0, a]`, a band on `[a, b]` and empty on `[b, θ]`. For
//! `θ < θ_c` (scenario II) the void disappears and the density saturates on
//! `[b, θ]` as well.

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

use crate::{Error, Result};

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("α = {alpha} must lie in (0, 1)")));
    }
    Ok(())
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 1.0) || !theta.is_finite() {
        return Err(Error::domain(format!("θ = {theta} must exceed 1")));
    }
    Ok(())
}

fn check_omega(omega: f64) -> Result<()> {
    if !(omega > 0.0 && omega < 1.0) {
        return Err(Error::domain(format!("ω = {omega} must lie in (0, 1)")));
    }
    Ok(())
}

/// `ω_c = 1 - √α`, where the cut touches the arctic curve.
pub fn omega_c(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(1.0 - alpha.sqrt())
}

/// `θ_c = (1 + √α)/(1 - √α) = 2/ω_c - 1`.
pub fn theta_c(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let q = alpha.sqrt();
    Ok((1.0 + q) / (1.0 - q))
}

/// `θ = 2/ω - 1`.
pub fn theta_of_omega(omega: f64) -> f64 {
    2.0 / omega - 1.0
}

/// `ω = 2/(θ + 1)`.
pub fn omega_of_theta(theta: f64) -> f64 {
    2.0 / (theta + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// saturated, band, void; also used at `θ = θ_c`
    I,
    /// saturated, band, saturated
    II,
}

impl Scenario {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scenario::I => "I",
            Scenario::II => "II",
        }
    }
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

fn scenario_for(theta: f64, alpha: f64) -> Result<Scenario> {
    Ok(if theta >= theta_c(alpha)? { Scenario::I } else { Scenario::II })
}

/// Asymptotic coordinates. `ω` is stored and `θ` derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingPoint {
    alpha: f64,
    omega: f64,
}

impl ScalingPoint {
    pub fn from_omega(alpha: f64, omega: f64) -> Result<Self> {
        check_alpha(alpha)?;
        check_omega(omega)?;
        Ok(ScalingPoint { alpha, omega })
    }

    pub fn from_theta(alpha: f64, theta: f64) -> Result<Self> {
        check_theta(theta)?;
        Self::from_omega(alpha, omega_of_theta(theta))
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn theta(&self) -> f64 {
        theta_of_omega(self.omega)
    }

    pub fn omega_c(&self) -> f64 {
        1.0 - self.alpha.sqrt()
    }

    pub fn theta_c(&self) -> f64 {
        theta_of_omega(self.omega_c())
    }

    /// Decided on `ω` so that the flag is consistent with `σ`.
    pub fn scenario(&self) -> Scenario {
        if self.omega <= self.omega_c() {
            Scenario::I
        } else {
            Scenario::II
        }
    }
}

/// `(x-1)² log(x-1)` continued by 0 at `x = 1`.
fn xlogx_sq(y: f64) -> f64 {
    if y == 0.0 {
        0.0
    } else {
        y * y * y.ln()
    }
}

/// `ψ(θ) = -¼[(θ+1)² log(θ+1) - 2θ² log θ + (θ-1)² log(θ-1)] + log 2`,
/// the `α → 1` limit of `Φ`.
pub fn psi(theta: f64) -> Result<f64> {
    if !(theta >= 1.0) || !theta.is_finite() {
        return Err(Error::domain(format!("θ = {theta} must be at least 1")));
    }
    let t = theta;
    Ok(-0.25 * (xlogx_sq(t + 1.0) - 2.0 * t * t * t.ln() + xlogx_sq(t - 1.0)) + 2f64.ln())
}

/// `Φ_I = -½ log(√α/(1-α))`, independent of `θ`.
pub fn phi_i(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(-0.5 * (alpha.sqrt() / (1.0 - alpha)).ln())
}

/// `Φ_II` written through `θ_c`. The expression is analytic across `θ_c`
/// and is evaluated there too; the logarithms are taken of `1 + (θ-θ_c)/c`
/// so that it stays accurate next to `θ_c`.
pub fn phi_ii(theta: f64, alpha: f64) -> Result<f64> {
    check_theta(theta)?;
    let tc = theta_c(alpha)?;
    let t = theta;
    let d = t - tc;
    Ok(0.5 * t * t * (d / tc).ln_1p()
        - 0.25 * (t - 1.0).powi(2) * (d / (tc - 1.0)).ln_1p()
        - 0.25 * (t + 1.0).powi(2) * (d / (tc + 1.0)).ln_1p()
        + 0.5 * (4.0 * tc / (tc * tc - 1.0)).ln())
}

/// `Φ_II = ½(θ² - 1) log(2α^{1/4}/(1 + √α)) - ¼ θ log α + ψ(θ)`.
pub fn phi_ii_alpha_form(theta: f64, alpha: f64) -> Result<f64> {
    check_theta(theta)?;
    check_alpha(alpha)?;
    let q = alpha.sqrt();
    let t = theta;
    Ok(0.5 * (t * t - 1.0) * (2.0 * alpha.powf(0.25) / (1.0 + q)).ln() - 0.25 * t * alpha.ln() + psi(t)?)
}

/// `Φ(θ)`, scenario I at and above `θ_c`.
pub fn phi(theta: f64, alpha: f64) -> Result<f64> {
    check_theta(theta)?;
    match scenario_for(theta, alpha)? {
        Scenario::I => phi_i(alpha),
        Scenario::II => phi_ii(theta, alpha),
    }
}

/// `σ(ω) = -lim log T/s²`: zero up to `ω_c`, then
/// `½ log(ω/ω_c) - ((1-ω)/ω)² log((1-ω)/(1-ω_c)) + ½((2-ω)/ω)² log((2-ω)/(2-ω_c))`.
pub fn sigma(omega: f64, alpha: f64) -> Result<f64> {
    check_omega(omega)?;
    let wc = omega_c(alpha)?;
    if omega <= wc {
        return Ok(0.0);
    }
    let w = omega;
    let d = w - wc;
    Ok(0.5 * (d / wc).ln_1p() - ((1.0 - w) / w).powi(2) * (-d / (1.0 - wc)).ln_1p()
        + 0.5 * ((2.0 - w) / w).powi(2) * (-d / (2.0 - wc)).ln_1p())
}

/// `F(ω) = -log √ρ + ω²/(4 - 2ω²) log(1-α) + 2ω²/(2 - ω²) σ(ω)`.
pub fn free_energy_density(omega: f64, rho: f64, alpha: f64) -> Result<f64> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::domain("ρ must be positive"));
    }
    let w2 = omega * omega;
    Ok(-rho.sqrt().ln() + w2 / (4.0 - 2.0 * w2) * (1.0 - alpha).ln() + 2.0 * w2 / (2.0 - w2) * sigma(omega, alpha)?)
}

/// Band structure of the equilibrium density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandData {
    pub scenario: Scenario,
    pub a: f64,
    pub b: f64,
    pub theta: f64,
    pub alpha: f64,
    /// first moment of the density
    pub e: f64,
}

impl BandData {
    /// Right end of the support: `b` in scenario I, `θ` in II.
    pub fn support_end(&self) -> f64 {
        match self.scenario {
            Scenario::I => self.b,
            Scenario::II => self.theta,
        }
    }

    /// Total mass of the band `[a, b]`.
    pub fn band_mass(&self) -> f64 {
        match self.scenario {
            Scenario::I => 1.0 - self.a,
            Scenario::II => 1.0 - self.a - (self.theta - self.b),
        }
    }

    /// First moment carried by the saturated parts.
    pub fn saturated_moment(&self) -> f64 {
        let lower = self.a * self.a / 2.0;
        match self.scenario {
            Scenario::I => lower,
            Scenario::II => lower + (self.theta * self.theta - self.b * self.b) / 2.0,
        }
    }

    /// Residuals of the scenario-II endpoint conditions
    /// `((√(θ-a) + √(θ-b))/(√a + √b))² = √α` and `√(ab) + √((θ-a)(θ-b)) = 1`.
    pub fn endpoint_residuals_ii(&self) -> (f64, f64) {
        let (a, b, t) = (self.a, self.b, self.theta);
        let r1 = ((t - a).sqrt() + (t - b).max(0.0).sqrt()) / (b.sqrt() + a.sqrt());
        (
            r1 * r1 - self.alpha.sqrt(),
            (a * b).sqrt() + ((t - a) * (t - b)).max(0.0).sqrt() - 1.0,
        )
    }
}

/// Band endpoints and first moment. Scenario I has `a = (1-√α)/(1+√α)`,
/// `b = 1/a`; scenario II has
/// `a, b = (√(θ+1) ∓ √((θ-1)√α))² / (2(1+√α))`.
pub fn endpoints(theta: f64, alpha: f64) -> Result<BandData> {
    check_theta(theta)?;
    let scenario = scenario_for(theta, alpha)?;
    let q = alpha.sqrt();
    let (a, b) = match scenario {
        Scenario::I => ((1.0 - q) / (1.0 + q), (1.0 + q) / (1.0 - q)),
        Scenario::II => {
            let u = (theta + 1.0).sqrt();
            let v = ((theta - 1.0) * q).sqrt();
            let d = 2.0 * (1.0 + q);
            // θ - b = (√(θ-1) - α^{1/4}√(θ+1))²/d, exact at the tangency
            let gap = ((theta - 1.0).sqrt() - q.sqrt() * u).powi(2) / d;
            ((u - v).powi(2) / d, theta - gap)
        }
    };
    let e = match scenario {
        Scenario::I => (1.0 + alpha) / (2.0 * (1.0 - alpha)),
        // √((θ-a)(θ-b)) = (√α(θ+1) - (θ-1))/(2(1+√α)) below θ_c
        Scenario::II => (a + b) / 4.0 + theta / 2.0 * (q * (theta + 1.0) - (theta - 1.0)) / (2.0 * (1.0 + q)),
    };
    Ok(BandData { scenario, a, b, theta, alpha, e })
}

/// `E_I = (1+α)/(2(1-α))` or `E_II = (a+b)/4 + (θ/2)√((θ-a)(θ-b))`.
pub fn first_moment(theta: f64, alpha: f64) -> Result<f64> {
    Ok(endpoints(theta, alpha)?.e)
}

fn resolvent_of(band: &BandData, z: Complex64) -> Complex64 {
    let (a, b) = (band.a, band.b);
    let base = -band.alpha.sqrt().ln();
    match band.scenario {
        Scenario::I => {
            let num = (a * (z - b)).sqrt() + (b * (z - a)).sqrt();
            let den = ((b - a) * z).sqrt();
            base - 2.0 * (num / den).ln()
        }
        Scenario::II => {
            let t = band.theta;
            let (zb, za) = ((z - b).sqrt(), (z - a).sqrt());
            let num = a.sqrt() * zb + b.sqrt() * za;
            let den = (t - a).sqrt() * zb + (t - b).sqrt() * za;
            base - ((z - t) / z).ln() - 2.0 * (num / den).ln()
        }
    }
}

/// The resolvent `W(z) = ∫ ρ(μ)/(z - μ) dμ` off the support `[0, b]`
/// (scenario I) or `[0, θ]` (scenario II).
pub fn resolvent(z: Complex64, theta: f64, alpha: f64) -> Result<Complex64> {
    let band = endpoints(theta, alpha)?;
    if z.im == 0.0 && z.re >= 0.0 && z.re <= band.support_end() {
        return Err(Error::OnCut(format!("{} in [0, {}]", z.re, band.support_end())));
    }
    Ok(resolvent_of(&band, z))
}

/// `Re[W(x+iε) + W(x-iε)] + log α`, which vanishes on the band.
pub fn spe_residual(x: f64, theta: f64, alpha: f64, eps: f64) -> Result<f64> {
    let band = endpoints(theta, alpha)?;
    if !(x > band.a && x < band.b) {
        return Err(Error::domain(format!("x = {x} is outside the band ({}, {})", band.a, band.b)));
    }
    let up = resolvent_of(&band, Complex64::new(x, eps));
    let down = resolvent_of(&band, Complex64::new(x, -eps));
    Ok((up + down).re + alpha.ln())
}

/// `(c1, c2)` of `W(z) = c1/z + c2/z² + ...`, by the trapezoid rule on the
/// circle `|z| = radius` (which must enclose the support).
pub fn large_z_coefficients(theta: f64, alpha: f64, radius: f64) -> Result<(f64, f64)> {
    let band = endpoints(theta, alpha)?;
    if !(radius > band.support_end()) {
        return Err(Error::domain("the contour must enclose the support"));
    }
    const NODES: usize = 512;
    let (mut c1, mut c2) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for j in 0..NODES {
        let t = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / NODES as f64;
        let z = Complex64::from_polar(radius, t);
        let w = resolvent_of(&band, z);
        c1 += w * z;
        c2 += w * z * z;
    }
    Ok((c1.re / NODES as f64, c2.re / NODES as f64))
}

/// `ρ(μ) = -Im W(μ + i0)/π` on the open band, from `ε` and `ε/2` combined
/// by one Richardson step, clamped to `[0, 1]` against rounding.
pub fn band_density(mu: f64, theta: f64, alpha: f64, eps: f64) -> Result<f64> {
    let band = endpoints(theta, alpha)?;
    if !(mu > band.a && mu < band.b) {
        return Err(Error::domain(format!("μ = {mu} is outside the band ({}, {})", band.a, band.b)));
    }
    if !(eps > 0.0) {
        return Err(Error::domain("ε must be positive"));
    }
    Ok(band_density_of(&band, mu, eps))
}

fn band_density_of(band: &BandData, mu: f64, eps: f64) -> f64 {
    let at = |e: f64| -resolvent_of(band, Complex64::new(mu, e)).im / std::f64::consts::PI;
    (2.0 * at(eps / 2.0) - at(eps)).clamp(0.0, 1.0)
}

/// The density on all of `[0, θ]`: 1 on saturated parts, 0 on the void.
pub fn density(mu: f64, theta: f64, alpha: f64, eps: f64) -> Result<f64> {
    let band = endpoints(theta, alpha)?;
    if !(0.0..=theta).contains(&mu) {
        return Err(Error::domain(format!("μ = {mu} is outside [0, θ]")));
    }
    Ok(if mu <= band.a {
        1.0
    } else if mu >= band.b {
        match band.scenario {
            Scenario::I => 0.0,
            Scenario::II => 1.0,
        }
    } else {
        band_density_of(&band, mu, eps)
    })
}

/// Default `ε` for density extraction.
pub const DENSITY_EPS: f64 = 1e-9;

const QUAD_NODES: usize = 200;

/// `∫_a^b f(μ) ρ(μ) dμ` with `μ = (a+b)/2 - (b-a)/2 cos t`, which removes
/// the square-root behaviour at the band edges.
fn band_integral(band: &BandData, f: impl Fn(f64) -> f64) -> f64 {
    let gl = GaussLegendre::new(QUAD_NODES).expect("fixed degree is valid");
    let (c, h) = ((band.a + band.b) / 2.0, (band.b - band.a) / 2.0);
    gl.integrate(0.0, std::f64::consts::PI, |t| {
        let mu = c - h * t.cos();
        f(mu) * band_density_of(band, mu, DENSITY_EPS) * h * t.sin()
    })
}

/// `∫_a^b ρ`; should equal [`BandData::band_mass`].
pub fn band_normalization(theta: f64, alpha: f64) -> Result<f64> {
    let band = endpoints(theta, alpha)?;
    Ok(band_integral(&band, |_| 1.0))
}

/// `∫_0^θ μ ρ(μ) dμ` with the saturated parts added in closed form;
/// should equal [`first_moment`].
pub fn first_moment_quadrature(theta: f64, alpha: f64) -> Result<f64> {
    let band = endpoints(theta, alpha)?;
    Ok(band.saturated_moment() + band_integral(&band, |mu| mu))
}

/// Jump of `σ'''` at `ω_c`: `2/((ω_c-2)(ω_c-1)ω_c³)`, six times the cubic
/// coefficient of `σ` just above `ω_c`.
pub fn third_derivative_jump(alpha: f64) -> Result<f64> {
    let wc = omega_c(alpha)?;
    Ok(2.0 / ((wc - 2.0) * (wc - 1.0) * wc.powi(3)))
}

/// `O(h⁴)` central stencil for `f'''(x)`.
pub fn third_derivative_fd(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 3.0 * h) + 8.0 * f(x + 2.0 * h) - 13.0 * f(x + h) + 13.0 * f(x - h) - 8.0 * f(x - 2.0 * h)
        + f(x - 3.0 * h))
        / (8.0 * h * h * h)
}

/// Numeric jump of `σ'''` at `ω_c` from one-sided evaluations at
/// `ω_c ± δ`, extrapolated linearly to `δ → 0`.
pub fn third_derivative_jump_numeric(alpha: f64) -> Result<f64> {
    let wc = omega_c(alpha)?;
    let s = |w: f64| sigma(w, alpha).unwrap_or(f64::NAN);
    let jump = |delta: f64| {
        let h = delta / 8.0;
        third_derivative_fd(s, wc + delta, h) - third_derivative_fd(s, wc - delta, h)
    };
    let d = 0.02 * wc.min(1.0 - wc);
    Ok(2.0 * jump(d / 2.0) - jump(d))
}
