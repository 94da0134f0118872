use num_complex::Complex64;
use pentatile::asymptotics::*;
use pentatile::exact::ln_abs;
use pentatile::gefp::c_rs;

fn alpha_grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn d1(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

fn d2(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
}

#[test]
fn phi_branches_join_smoothly() {
    for alpha in alpha_grid(50, 0.02, 0.98) {
        let tc = theta_c(alpha).unwrap();
        let i = phi_i(alpha).unwrap();
        let ii = |t: f64| phi_ii(t, alpha).unwrap();
        assert!((ii(tc) - i).abs() < 1e-12, "α = {alpha}");
        assert!((phi(tc, alpha).unwrap() - i).abs() < 1e-12);
        // Φ_I is constant in θ
        assert!(d1(ii, tc, 1e-4).abs() < 1e-6, "α = {alpha}");
        assert!(d2(ii, tc, 1e-4).abs() < 1e-6, "α = {alpha}");
    }
}

#[test]
fn phi_third_derivative_jump_in_theta() {
    for alpha in alpha_grid(9, 0.1, 0.9) {
        let tc = theta_c(alpha).unwrap();
        let wc = omega_c(alpha).unwrap();
        let h = 1e-2 * (tc - 1.0);
        let num = third_derivative_fd(|t| phi_ii(t, alpha).unwrap(), tc, h);
        // σ(ω) = Φ(θ(ω)) - Φ_I with dθ/dω = -2/ω² and Φ', Φ'' vanishing at θ_c
        let expect = third_derivative_jump(alpha).unwrap() / (-2.0 / (wc * wc)).powi(3);
        assert!((num / expect - 1.0).abs() < 1e-3, "α = {alpha}: {num} {expect}");
    }
}

#[test]
fn sigma_nonnegative_and_nondecreasing() {
    for alpha in alpha_grid(19, 0.05, 0.95) {
        let mut prev = 0.0;
        for i in 1..1000 {
            let s = sigma(i as f64 / 1000.0, alpha).unwrap();
            assert!(s >= 0.0 && s >= prev, "α = {alpha}, ω = {}", i as f64 / 1000.0);
            prev = s;
        }
    }
}

#[test]
fn cubic_onset_above_critical_point() {
    let alpha = 0.25;
    let wc = omega_c(alpha).unwrap();
    let coeff = third_derivative_jump(alpha).unwrap() / 6.0;
    assert!((coeff - 32.0 / 9.0).abs() < 1e-12);
    let d = 1e-3;
    let ratio = sigma(wc + d, alpha).unwrap() / (coeff * d * d * d);
    assert!((ratio - 1.0).abs() < 1e-2, "{ratio}");
}

#[test]
fn jump_by_finite_differences() {
    for alpha in [0.25, 0.5, 0.75] {
        let num = third_derivative_jump_numeric(alpha).unwrap();
        let exact = third_derivative_jump(alpha).unwrap();
        assert!((num / exact - 1.0).abs() < 0.01, "α = {alpha}: {num} {exact}");
    }
}

#[test]
fn first_moment_is_alpha_derivative_of_phi() {
    for &(theta, alpha) in &[(2.0, 0.25), (5.0, 0.25), (1.5, 0.5), (10.0, 0.5), (2.0, 0.9)] {
        let h = 1e-5 * alpha;
        let dphi = (phi(theta, alpha + h).unwrap() - phi(theta, alpha - h).unwrap()) / (2.0 * h);
        let e = first_moment(theta, alpha).unwrap();
        assert!((-2.0 * alpha * dphi - e).abs() < 1e-6, "({theta}, {alpha})");
    }
}

#[test]
fn first_moment_continuous_at_critical_point() {
    for alpha in alpha_grid(10, 0.05, 0.95) {
        let tc = theta_c(alpha).unwrap();
        let band = endpoints(tc * (1.0 - 1e-15), alpha).unwrap();
        assert!((band.e - first_moment(tc, alpha).unwrap()).abs() < 1e-6);
    }
}

#[test]
fn endpoint_equations_hold() {
    for alpha in alpha_grid(10, 0.05, 0.95) {
        let tc = theta_c(alpha).unwrap();
        for k in 1..10 {
            let theta = 1.0 + (tc - 1.0) * k as f64 / 10.0;
            let band = endpoints(theta, alpha).unwrap();
            assert_eq!(band.scenario, Scenario::II);
            let (r1, r2) = band.endpoint_residuals_ii();
            assert!(r1.abs() < 1e-12 && r2.abs() < 1e-12);
            assert!(0.0 < band.a && band.a < band.b && band.b <= theta);
        }
        let band = endpoints(tc + 1.0, alpha).unwrap();
        assert!((band.a * band.b - 1.0).abs() < 1e-12);
    }
}

#[test]
fn resolvent_large_z_coefficients() {
    for &(theta, alpha) in &[(2.0, 0.25), (8.0, 0.25), (1.2, 0.6)] {
        let e = first_moment(theta, alpha).unwrap();
        for radius in [1e2, 1e3, 1e4] {
            let (c1, c2) = large_z_coefficients(theta, alpha, radius).unwrap();
            assert!((c1 - 1.0).abs() < 1e-4);
            assert!((c2 / e - 1.0).abs() < 1e-4, "R = {radius}: {c2} {e}");
        }
        // the remainder after two terms decays like |z|^-3
        let z = Complex64::new(0.0, 1e3);
        let w = resolvent(z, theta, alpha).unwrap();
        let rest = (w - 1.0 / z - e / (z * z)).norm() * 1e9;
        assert!(rest < 10.0 * theta * theta, "{rest}");
    }
}

#[test]
fn saddle_point_and_density_bounds() {
    for &(theta, alpha) in &[(2.0, 0.25), (8.0, 0.25), (1.2, 0.6), (4.0, 0.8)] {
        let band = endpoints(theta, alpha).unwrap();
        for k in 1..20 {
            let x = band.a + (band.b - band.a) * k as f64 / 20.0;
            assert!(spe_residual(x, theta, alpha, 1e-8).unwrap().abs() < 1e-4);
            let rho = band_density(x, theta, alpha, DENSITY_EPS).unwrap();
            assert!((0.0..=1.0).contains(&rho));
        }
        let near = band_density(band.a + 1e-8, theta, alpha, DENSITY_EPS).unwrap();
        assert!((near - 1.0).abs() < 1e-3);
    }
}

#[test]
fn limits_in_alpha() {
    for theta in [1.5, 2.0, 2.5] {
        let v = phi(theta, 1.0 - 1e-8).unwrap();
        assert!((v - psi(theta).unwrap()).abs() < 1e-5, "θ = {theta}");
    }
    for theta in [1.5, 2.0, 5.0] {
        let v = phi(theta, 1e-8).unwrap() + 0.25 * 1e-8f64.ln();
        assert!(v.abs() < 1.0, "θ = {theta}: {v}");
    }
}

#[test]
fn psi_from_product_formula() {
    for theta in [3.0, 5.0] {
        let target = psi(theta).unwrap();
        let mut prev = f64::INFINITY;
        for s in [25usize, 50, 100, 200] {
            let r = ((theta - 1.0) * s as f64 / 2.0).ceil() as usize;
            let est = -ln_abs(&c_rs(r, s).unwrap()) / (s * s) as f64;
            let err = (est - target).abs();
            assert!(err < prev, "θ = {theta}, s = {s}");
            prev = err;
        }
        assert!(prev < 0.05, "θ = {theta}: {prev}");
    }
}

#[test]
fn free_energy_has_third_derivative_jump() {
    let alpha = 0.5;
    let wc = omega_c(alpha).unwrap();
    let f = |w: f64| free_energy_density(w, 2.0, alpha).unwrap();
    let d = 0.01;
    let left = third_derivative_fd(f, wc - d, d / 8.0);
    let right = third_derivative_fd(f, wc + d, d / 8.0);
    let g = 2.0 * wc * wc / (2.0 - wc * wc);
    let expect = g * third_derivative_jump(alpha).unwrap();
    assert!(((right - left) / expect - 1.0).abs() < 0.1, "{} {expect}", right - left);
}
