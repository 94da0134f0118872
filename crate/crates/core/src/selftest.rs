//! Desk-scale run of the invariant suites.
//!
//! The report text depends only on the options, never on timing, so two runs
//! with the same seed render identically. Timings are kept separately.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::asymptotics as asy;
use crate::exact::{det_exact, det_float, p_poly, p_poly_by_residues, powi, ratio, BigFloat, BigRational, Matrix};
use crate::gefp::{self, PentagonSpec, DEFAULT_TERM_CAP};
use crate::oracle::{Ensemble, EmptinessSpec, GefpFilter, OracleConfig, VertexWeights};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelftestOptions {
    /// restricts the oracle suites to `N <= 4`
    pub quick: bool,
    pub seed: u64,
    pub oracle: OracleConfig,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions {
            quick: false,
            seed: 0,
            oracle: OracleConfig::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checks: usize,
    /// first failure, if any
    pub failure: Option<String>,
    pub elapsed: Duration,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct SelftestReport {
    pub options: SelftestOptions,
    pub suites: Vec<SuiteResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    pub fn total_elapsed(&self) -> Duration {
        self.suites.iter().map(|s| s.elapsed).sum()
    }

    /// Deterministic text: one line per suite and a summary.
    pub fn render(&self) -> String {
        let mut out = format!("selftest seed={} quick={}\n", self.options.seed, self.options.quick);
        for s in &self.suites {
            match &s.failure {
                None => out += &format!("PASS {} ({} checks)\n", s.name, s.checks),
                Some(f) => out += &format!("FAIL {} ({} checks): {f}\n", s.name, s.checks),
            }
        }
        let failed = self.suites.iter().filter(|s| !s.passed()).count();
        out += &format!("{} suites, {} failed\n", self.suites.len(), failed);
        out
    }

    /// Per-suite wall-clock timings.
    pub fn render_timings(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            out += &format!("{:<28} {:>9.3}s\n", s.name, s.elapsed.as_secs_f64());
        }
        out += &format!("{:<28} {:>9.3}s\n", "total", self.total_elapsed().as_secs_f64());
        out
    }
}

/// Counts checks and records the first failure.
struct Tally {
    checks: usize,
    failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { checks: 0, failure: None }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(msg());
        }
    }

    fn error(&mut self, e: crate::Error) {
        self.check(false, || e.to_string());
    }
}

fn run_suite(name: &'static str, f: impl FnOnce(&mut Tally)) -> SuiteResult {
    let start = Instant::now();
    let mut tally = Tally::new();
    f(&mut tally);
    SuiteResult {
        name,
        checks: tally.checks,
        failure: tally.failure,
        elapsed: start.elapsed(),
    }
}

fn random_rational_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix<BigRational> {
    Matrix::from_fn(n, |_, _| ratio(rng.gen_range(-9..10), rng.gen_range(1..6)))
}

fn random_dominant(rng: &mut ChaCha8Rng, n: usize) -> Matrix<BigRational> {
    Matrix::from_fn(n, |i, j| {
        let x = ratio(rng.gen_range(-1000..=1000), 1000);
        if i == j {
            x + ratio(n as i64 + 1, 1)
        } else {
            x
        }
    })
}

fn exact_core(t: &mut Tally, rng: &mut ChaCha8Rng) {
    for l in 0..=20u32 {
        for m in 0..=6 {
            for n in 0..=6 {
                if l + 1 < m + n {
                    continue;
                }
                t.check(p_poly(l, m, n) == p_poly_by_residues(l, m, n), || format!("P_{l}^({m},{n}) routes differ"));
            }
        }
    }
    for _ in 0..32 {
        let (p, q) = (rng.gen_range(1..4), rng.gen_range(1..4));
        let a = random_rational_matrix(rng, p);
        let b = random_rational_matrix(rng, q);
        let block = Matrix::from_fn(p + q, |i, j| match (i < p, j < p) {
            (true, true) => a[(i, j)].clone(),
            (false, false) => b[(i - p, j - p)].clone(),
            _ => ratio(0, 1),
        });
        t.check(det_exact(&block) == det_exact(&a) * det_exact(&b), || "block determinant not multiplicative".into());
        let mut swapped = a.clone();
        if p > 1 {
            swapped.swap_rows(0, p - 1);
            t.check(det_exact(&swapped) == -det_exact(&a), || "row swap did not flip the sign".into());
        }
    }
    for n in [8usize, 32, 64] {
        let m = random_dominant(rng, n);
        let p = 64;
        let lo = det_float(&m.map(|x| BigFloat::from_rational(x, p)), p);
        let hi = det_float(&m.map(|x| BigFloat::from_rational(x, 2 * p)), 2 * p);
        match (lo, hi) {
            (Ok(lo), Ok(hi)) => {
                let rel = ((&lo - &hi).abs() / hi.abs()).log2_abs();
                t.check(rel <= -(p as f64 - 16.0), || format!("{n}x{n}: precision doubling gap 2^{rel:.1}"));
            }
            (Err(e), _) | (_, Err(e)) => t.error(e),
        }
    }
}

fn oracle_suite(t: &mut Tally, opts: &SelftestOptions) {
    let n_top = if opts.quick { 4 } else { 6 };
    for n in 1..=n_top.min(opts.oracle.n_max) {
        let ens = match Ensemble::enumerate(n, &opts.oracle) {
            Ok(e) => e,
            Err(e) => return t.error(e),
        };
        let mut num = 1u128;
        let mut den = 1u128;
        for k in 0..n as u128 {
            num *= (1..=3 * k + 1).product::<u128>();
            den *= (1..=n as u128 + k).product::<u128>();
        }
        t.check(ens.configs().len() as u128 == num / den, || format!("N = {n}: count {}", ens.configs().len()));
        for c in ens.configs() {
            let k = c.counts();
            t.check(k[0] == k[1] && k[5] - k[4] == n as i64, || format!("N = {n}: counts {k:?}"));
        }
        for alpha in [ratio(1, 4), ratio(1, 2), ratio(3, 4)] {
            let rho = ratio(3, 2);
            let w = VertexWeights::free_fermion(rho.clone(), alpha.clone()).expect("valid weights");
            match ens.partition_function(&w) {
                Ok(z) => t.check(z == powi(&rho, (n * (n + 1) / 2) as i64), || format!("N = {n}: Z = {z}")),
                Err(e) => t.error(e),
            }
        }
        if n <= 5 {
            let w = VertexWeights::free_fermion(ratio(1, 1), ratio(1, 3)).expect("valid weights");
            for spec in EmptinessSpec::all(n) {
                let a = ens.gefp_with(&spec, &w, GefpFilter::LeftwardEdges);
                let b = ens.gefp_with(&spec, &w, GefpFilter::FrozenCorner);
                t.check(a.is_ok() && a == b, || format!("filters disagree on {spec:?}"));
            }
        }
    }
}

fn gefp_oracle_suite(t: &mut Tally, opts: &SelftestOptions) {
    let n_top = if opts.quick { 4 } else { 5 };
    for n in 1..=n_top.min(opts.oracle.n_max) {
        let ens = match Ensemble::enumerate(n, &opts.oracle) {
            Ok(e) => e,
            Err(e) => return t.error(e),
        };
        for alpha in [ratio(1, 4), ratio(1, 2), ratio(3, 4)] {
            let w = VertexWeights::free_fermion(ratio(1, 1), alpha.clone()).expect("valid weights");
            for spec in EmptinessSpec::all(n) {
                match (ens.gefp(&spec, &w), gefp::gefp_det(&spec, &alpha)) {
                    (Ok(a), Ok(b)) => t.check(a == b, || format!("{spec:?} at α = {alpha}: {b} vs {a}")),
                    (Err(e), _) | (_, Err(e)) => t.error(e),
                }
            }
        }
    }
}

fn gefp_formula_suite(t: &mut Tally) {
    let zero = ratio(0, 1);
    let one = ratio(1, 1);
    for alpha in [ratio(1, 4), ratio(1, 2), ratio(3, 4)] {
        for n in 1..=12 {
            for s in 0..n {
                let spec = PentagonSpec::new(n - s, s).expect("r >= 1");
                match (gefp::tdefp_det(&spec, &alpha), gefp::tdefp_sum(&spec, &alpha, DEFAULT_TERM_CAP)) {
                    (Ok(d), Ok(sum)) => {
                        t.check(d == sum, || format!("det and sum differ at ({}, {s})", n - s));
                        t.check(d >= zero && d <= one, || format!("T outside [0, 1] at ({}, {s})", n - s));
                    }
                    (Err(e), _) | (_, Err(e)) => t.error(e),
                }
            }
        }
    }
    for n in 1..=10 {
        for s in 0..n {
            let r = n - s;
            let c = gefp::c_rs(r, s).expect("r >= 1");
            t.check(gefp::c_rs_binomial_det(r, s) == c, || format!("C_({r},{s}) determinant form"));
            t.check(gefp::c_rs_reflected_det(r, s) == c, || format!("C_({r},{s}) reflected form"));
            t.check(gefp::g_rs_at_one(&PentagonSpec::new(r, s).expect("r >= 1")) == c, || format!("g_({r},{s}) at α = 1"));
        }
    }
    for (r, s) in [(3, 2), (5, 3)] {
        let spec = PentagonSpec::new(r, s).expect("r >= 1");
        let mut prev = zero.clone();
        for k in 2..=6 {
            match gefp::tdefp_det(&spec, &powi(&ratio(1, 10), k)) {
                Ok(v) => {
                    t.check(v > prev, || format!("T_({r},{s}) not increasing as α → 0"));
                    prev = v;
                }
                Err(e) => t.error(e),
            }
        }
    }
    let half = ratio(1, 2);
    let mut prev = one.clone();
    for s in 0..12 {
        match gefp::tdefp_det(&PentagonSpec::new(12 - s, s).expect("r >= 1"), &half) {
            Ok(v) => {
                t.check(v <= prev, || format!("T_(12-s, s) increased at s = {s}"));
                prev = v;
            }
            Err(e) => t.error(e),
        }
    }
}

fn asymptotics_suite(t: &mut Tally) {
    for i in 0..50 {
        let alpha = 0.02 + 0.96 * i as f64 / 49.0;
        let (tc, pi) = (asy::theta_c(alpha).unwrap(), asy::phi_i(alpha).unwrap());
        let f = |x: f64| asy::phi_ii(x, alpha).unwrap();
        let h = 1e-4;
        t.check((f(tc) - pi).abs() < 1e-12, || format!("Φ branches differ at α = {alpha}"));
        t.check(((f(tc + h) - f(tc - h)) / (2.0 * h)).abs() < 1e-6, || format!("Φ' mismatch at α = {alpha}"));
        t.check(((f(tc + h) - 2.0 * f(tc) + f(tc - h)) / (h * h)).abs() < 1e-6, || format!("Φ'' mismatch at α = {alpha}"));
    }
    for alpha in [0.25, 0.5, 0.75] {
        let num = asy::third_derivative_jump_numeric(alpha).unwrap();
        let exact = asy::third_derivative_jump(alpha).unwrap();
        t.check((num / exact - 1.0).abs() < 0.01, || format!("σ''' jump {num} vs {exact} at α = {alpha}"));
    }
    for k in 1..10 {
        let alpha = k as f64 / 10.0;
        let mut prev = 0.0;
        for i in 1..200 {
            let s = asy::sigma(i as f64 / 200.0, alpha).unwrap();
            t.check(s >= prev, || format!("σ decreases at α = {alpha}"));
            prev = s;
        }
    }
    for i in 0..5 {
        let alpha = 0.1 + 0.2 * i as f64;
        let tc = asy::theta_c(alpha).unwrap();
        for theta in [1.0 + 0.5 * (tc - 1.0), 2.0 * tc] {
            let band = asy::endpoints(theta, alpha).unwrap();
            let (c1, c2) = asy::large_z_coefficients(theta, alpha, 1e3).unwrap();
            t.check((c1 - 1.0).abs() < 1e-4 && (c2 / band.e - 1.0).abs() < 1e-4, || {
                format!("large-z coefficients at ({theta}, {alpha})")
            });
            for j in 1..10 {
                let x = band.a + (band.b - band.a) * j as f64 / 10.0;
                let res = asy::spe_residual(x, theta, alpha, 1e-8).unwrap();
                t.check(res.abs() < 1e-4, || format!("SPE residual {res:e} at ({theta}, {alpha})"));
                let rho = asy::band_density(x, theta, alpha, asy::DENSITY_EPS).unwrap();
                t.check((0.0..=1.0).contains(&rho), || format!("density {rho} out of range"));
            }
            let norm = asy::band_normalization(theta, alpha).unwrap();
            t.check((norm - band.band_mass()).abs() < 1e-6, || format!("normalization at ({theta}, {alpha})"));
            let m = asy::first_moment_quadrature(theta, alpha).unwrap();
            t.check((m - band.e).abs() < 1e-6, || format!("first moment at ({theta}, {alpha})"));
        }
    }
    for theta in [1.5, 2.0, 2.5] {
        let d = asy::phi(theta, 1.0 - 1e-8).unwrap() - asy::psi(theta).unwrap();
        t.check(d.abs() < 1e-5, || format!("Φ → ψ fails at θ = {theta}"));
    }
}

/// Runs every suite.
pub fn run(opts: &SelftestOptions) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let suites = vec![
        run_suite("exact-core", |t| exact_core(t, &mut rng)),
        run_suite("six-vertex-oracle", |t| oracle_suite(t, opts)),
        run_suite("gefp-oracle-equality", |t| gefp_oracle_suite(t, opts)),
        run_suite("gefp-formulas", gefp_formula_suite),
        run_suite("asymptotics", asymptotics_suite),
    ];
    SelftestReport { options: *opts, suites }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_run_passes_and_is_deterministic() {
        let opts = SelftestOptions {
            quick: true,
            seed: 42,
            ..Default::default()
        };
        let a = run(&opts);
        assert!(a.passed(), "{}", a.render());
        assert_eq!(a.render(), run(&opts).render());
        assert!(a.render().starts_with("selftest seed=42 quick=true\n"));
    }
}
