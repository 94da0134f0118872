//! Finite-size estimates of `σ(ω)` from `-log T_{r,s}/s²` along
//! `r = ⌈(1/ω - 1)s⌉`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::asymptotics::sigma;
use crate::exact::{to_f64, BigFloat};
use crate::gefp::{tdefp_det, tdefp_float_estimate, PentagonSpec};
use crate::{Error, Result};

/// Largest `s` evaluated exactly under [`RoutePolicy::Auto`].
pub const AUTO_EXACT_MAX_S: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Exact,
    Float,
}

impl Route {
    pub fn as_str(&self) -> &'static str {
        match self {
            Route::Exact => "exact",
            Route::Float => "float",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RoutePolicy {
    /// exact up to [`AUTO_EXACT_MAX_S`], multi-precision beyond
    #[default]
    Auto,
    Exact,
    Float,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub s: usize,
    pub r: usize,
    pub neg_log_t_over_s2: f64,
    pub sigma_limit: f64,
    pub abs_error: f64,
    pub route: Route,
    /// 0 for the exact route
    pub precision_bits: u32,
    /// Set when the float route lost significance; the estimate is then
    /// unreliable.
    pub flag: Option<String>,
}

/// `r = ⌈(1/ω - 1) s⌉`, computed exactly.
pub fn r_for(omega: &BigRational, s: usize) -> Result<usize> {
    if !omega.is_positive() || omega >= &BigRational::one() {
        return Err(Error::domain("ω must lie in (0, 1)"));
    }
    let x = (omega.recip() - BigRational::one()) * BigRational::from_integer(BigInt::from(s));
    let r: usize = x
        .ceil()
        .to_integer()
        .try_into()
        .map_err(|_| Error::domain("r overflows"))?;
    Ok(r.max(1))
}

/// `-log T` from `1 - T`, which stays accurate when `T` is close to 1.
fn neg_log_from_complement(one_minus_t: f64) -> f64 {
    -(-one_minus_t).ln_1p()
}

fn neg_log_exact(t: &BigRational) -> f64 {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    if t > &half {
        neg_log_from_complement(to_f64(&(BigRational::one() - t)))
    } else {
        -crate::exact::ln_abs(t)
    }
}

fn neg_log_float(t: &BigFloat) -> f64 {
    let one = BigFloat::one(t.precision());
    if t.to_f64() > 0.5 {
        neg_log_from_complement((&one - t).to_f64())
    } else {
        -t.ln()
    }
}

/// One row of the table.
pub fn convergence_row(alpha: &BigRational, omega: &BigRational, s: usize, precision: u32, policy: RoutePolicy) -> Result<ConvergenceRow> {
    if s == 0 {
        return Err(Error::domain("s must be at least 1"));
    }
    let r = r_for(omega, s)?;
    let spec = PentagonSpec::new(r, s)?;
    let sigma_limit = sigma(to_f64(omega), to_f64(alpha))?;
    let route = match policy {
        RoutePolicy::Exact => Route::Exact,
        RoutePolicy::Float => Route::Float,
        RoutePolicy::Auto if s <= AUTO_EXACT_MAX_S => Route::Exact,
        RoutePolicy::Auto => Route::Float,
    };
    let s2 = (s * s) as f64;
    let (value, precision_bits, flag) = match route {
        Route::Exact => (neg_log_exact(&tdefp_det(&spec, alpha)?) / s2, 0, None),
        Route::Float => {
            let a = BigFloat::from_rational(alpha, precision);
            let d = tdefp_float_estimate(&spec, &a, precision)?;
            let flag = (d.log2_rel_error > -32.0).then(|| {
                format!("loss of significance: relative error 2^{:.1}", d.log2_rel_error)
            });
            (neg_log_float(&d.value) / s2, precision, flag)
        }
    };
    Ok(ConvergenceRow {
        s,
        r,
        neg_log_t_over_s2: value,
        sigma_limit,
        abs_error: (value - sigma_limit).abs(),
        route,
        precision_bits,
        flag,
    })
}

/// Rows for each `s` in `s_list`, in order.
pub fn convergence_table(alpha: &BigRational, omega: &BigRational, s_list: &[usize], precision: u32, policy: RoutePolicy) -> Result<Vec<ConvergenceRow>> {
    use rayon::prelude::*;
    s_list
        .par_iter()
        .map(|&s| convergence_row(alpha, omega, s, precision, policy))
        .collect()
}

/// True when `abs_error` strictly decreases down the table.
pub fn error_strictly_decreasing(rows: &[ConvergenceRow]) -> bool {
    rows.windows(2).all(|w| w[1].abs_error < w[0].abs_error)
}
