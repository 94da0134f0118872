use std::fmt;

use pentatile::asymptotics::{self as asy, ScalingPoint};
use pentatile::convergence::{convergence_table, error_strictly_decreasing, RoutePolicy};
use pentatile::exact::{format_sci, parse_fraction, to_f64, BigRational};
use pentatile::gefp::{self, PentagonSpec, DEFAULT_TERM_CAP};
use pentatile::oracle::{EmptinessSpec, Ensemble, OracleConfig, VertexWeights};
use pentatile::selftest::{self, SelftestOptions};
use rayon::prelude::*;

use crate::table::{emit, Cell, Format, Table};
use crate::{
    AsymArgs, Cli, Command, ConvergeArgs, ExactArgs, Method, OracleArgs, RouteArg, ScanArgs, ScanKind, SelftestArgs,
    DEFAULT_PRECISION,
};

/// Decimal literals beyond this many significant digits are refused where
/// an exact value is required.
const MAX_EXACT_DECIMAL_DIGITS: usize = 15;

#[derive(Debug)]
pub enum CliError {
    Lib(pentatile::Error),
    Usage(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use pentatile::Error as E;
        match self {
            CliError::Lib(E::SizeLimit { .. } | E::TermCap { .. } | E::LossOfSignificance { .. }) => 3,
            CliError::Lib(_) | CliError::Usage(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(m) => f.write_str(m),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<pentatile::Error> for CliError {
    fn from(e: pentatile::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Exact value of a literal; decimals are accepted only when short enough
/// to be unambiguous.
fn exact_arg(name: &str, text: &str) -> Result<BigRational> {
    let p = parse_fraction(text)?;
    if !p.is_fraction && p.significant_digits > MAX_EXACT_DECIMAL_DIGITS {
        return Err(usage(format!(
            "--{name} {text}: decimal has {} significant digits, write it as p/q",
            p.significant_digits
        )));
    }
    Ok(p.value)
}

fn float_arg(text: &str) -> Result<f64> {
    Ok(to_f64(&parse_fraction(text)?.value))
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| usage(format!("{flag} is required")))
}

fn oracle_config() -> Result<OracleConfig> {
    let mut cfg = OracleConfig::default();
    if let Ok(v) = std::env::var("PENTATILE_NMAX") {
        cfg.n_max = v
            .trim()
            .parse()
            .map_err(|_| usage(format!("PENTATILE_NMAX={v} is not a non-negative integer")))?;
    }
    Ok(cfg)
}

fn exact_cells(q: &BigRational) -> [Cell; 2] {
    [Cell::Str(q.to_string()), Cell::Str(format_sci(q, 17))]
}

fn list(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(";")
}

pub fn run(cli: &Cli) -> Result<u8> {
    let (table, code, default) = match &cli.command {
        Command::Exact(a) => (exact(cli, a)?, 0, Format::Text),
        Command::Oracle(a) => {
            let (t, code) = oracle(a)?;
            (t, code, Format::Text)
        }
        Command::Asym(a) => (asym(a)?, 0, Format::Text),
        Command::Scan(a) => (scan(a)?, 0, Format::Csv),
        Command::Converge(a) => {
            let (t, code) = converge(cli, a)?;
            (t, code, Format::Csv)
        }
        Command::Selftest(a) => return selftest(cli, a),
    };
    emit(&table.render(cli.format.unwrap_or(default)), cli.out.as_deref())?;
    Ok(code)
}

fn exact(cli: &Cli, a: &ExactArgs) -> Result<Table> {
    let alpha = || -> Result<BigRational> { exact_arg("alpha", need(a.alpha.as_deref(), "--alpha")?) };
    let rho = || exact_arg("rho", &a.rho);
    let rs = || -> Result<(usize, usize)> { Ok((need(a.r, "-r")?, need(a.s, "-s")?)) };

    if a.tdefp || a.g {
        let (r, s) = rs()?;
        let al = alpha()?;
        let spec = PentagonSpec::new(r, s)?;
        let (name, v) = if a.g {
            ("g", gefp::g_rs(&spec, &al)?)
        } else {
            match a.method {
                Method::Det => ("tdefp", gefp::tdefp_det(&spec, &al)?),
                Method::Sum => ("tdefp", gefp::tdefp_sum(&spec, &al, DEFAULT_TERM_CAP)?),
            }
        };
        let mut t = Table::new(vec!["quantity", "r", "s", "alpha", "exact", "decimal"]).meta("quantity", name);
        let [e, d] = exact_cells(&v);
        t.push(vec![name.into(), r.into(), s.into(), al.to_string().into(), e, d]);
        return Ok(t);
    }
    if a.c_rs {
        let (r, s) = rs()?;
        let v = gefp::c_rs(r, s)?;
        let mut t = Table::new(vec!["quantity", "r", "s", "exact", "decimal"]).meta("quantity", "c_rs");
        let [e, d] = exact_cells(&v);
        t.push(vec!["c_rs".into(), r.into(), s.into(), e, d]);
        return Ok(t);
    }
    if a.gefp {
        let n = need(a.n, "-N")?;
        let al = alpha()?;
        let spec = EmptinessSpec::new(n, a.r_list.clone())?;
        let v = gefp::gefp_det(&spec, &al)?;
        let mut t = Table::new(vec!["quantity", "N", "r_list", "alpha", "exact", "decimal"]).meta("quantity", "gefp");
        let [e, d] = exact_cells(&v);
        t.push(vec!["gefp".into(), n.into(), list(&a.r_list).into(), al.to_string().into(), e, d]);
        return Ok(t);
    }
    if a.z {
        let n = need(a.n, "-N")?;
        let (al, rh) = (alpha()?, rho()?);
        let v = gefp::z_ff(n, &rh, &al)?;
        let mut t = Table::new(vec!["quantity", "N", "rho", "alpha", "exact", "decimal"]).meta("quantity", "z");
        let [e, d] = exact_cells(&v);
        t.push(vec!["z".into(), n.into(), rh.to_string().into(), al.to_string().into(), e, d]);
        return Ok(t);
    }
    // pentagon
    let (r, s) = rs()?;
    let (al, rh) = (alpha()?, rho()?);
    let spec = PentagonSpec::new(r, s)?;
    let (e, d) = match gefp::z_pentagon(&spec, &rh, &al) {
        Ok(v) => {
            let [e, d] = exact_cells(&v);
            (e, d)
        }
        // an irrational value is only produced when a precision is asked for
        Err(pentatile::Error::IrrationalPrefactor(_)) if cli.precision.is_some() => {
            let prec = cli.precision.unwrap_or(DEFAULT_PRECISION);
            let v = gefp::z_pentagon_float(&spec, &rh, &al, prec)?;
            (Cell::from("irrational"), Cell::Str(v.to_string()))
        }
        Err(e) => return Err(e.into()),
    };
    let mut t = Table::new(vec!["quantity", "r", "s", "rho", "alpha", "exact", "decimal"]).meta("quantity", "pentagon");
    t.push(vec!["pentagon".into(), r.into(), s.into(), rh.to_string().into(), al.to_string().into(), e, d]);
    Ok(t)
}

fn oracle(a: &OracleArgs) -> Result<(Table, u8)> {
    let cfg = oracle_config()?;
    let ens = Ensemble::enumerate(a.n, &cfg)?;
    if a.count {
        let mut t = Table::new(vec!["N", "count"]).meta("check", "count");
        t.push(vec![a.n.into(), ens.configs().len().into()]);
        return Ok((t, 0));
    }
    let alpha = exact_arg("alpha", &a.alpha)?;
    let rho = exact_arg("rho", &a.rho)?;
    let w = VertexWeights::free_fermion(rho.clone(), alpha.clone())?;
    let mut failed = 0usize;
    let status = |ok: bool, failed: &mut usize| {
        if !ok {
            *failed += 1;
        }
        Cell::from(if ok { "PASS" } else { "FAIL" })
    };
    let t = if a.z {
        let brute = ens.partition_function(&w)?;
        let formula = gefp::z_ff(a.n, &rho, &alpha)?;
        let mut t = Table::new(vec!["status", "N", "rho", "alpha", "brute", "formula"]).meta("check", "z");
        t.push(vec![
            status(brute == formula, &mut failed),
            a.n.into(),
            rho.to_string().into(),
            alpha.to_string().into(),
            brute.to_string().into(),
            formula.to_string().into(),
        ]);
        t
    } else {
        let specs: Vec<EmptinessSpec> = EmptinessSpec::all(a.n).into_iter().filter(|s| s.s() >= 1).collect();
        let results: Vec<(BigRational, BigRational)> = specs
            .par_iter()
            .map(|spec| Ok((gefp::gefp_det(spec, &alpha)?, ens.gefp(spec, &w)?)))
            .collect::<std::result::Result<_, pentatile::Error>>()?;
        let mut t = Table::new(vec!["status", "N", "r_list", "alpha", "det", "brute"]).meta("check", "all-gefp");
        for (spec, (det, brute)) in specs.iter().zip(results) {
            t.push(vec![
                status(det == brute, &mut failed),
                a.n.into(),
                list(spec.r()).into(),
                alpha.to_string().into(),
                det.to_string().into(),
                brute.to_string().into(),
            ]);
        }
        t
    };
    eprintln!("{} checks, {} failed", t.rows.len(), failed);
    Ok((t, u8::from(failed > 0)))
}

fn asym(a: &AsymArgs) -> Result<Table> {
    let alpha = float_arg(&a.alpha)?;
    let rho = float_arg(&a.rho)?;
    let p = match (&a.omega, &a.theta) {
        (Some(w), _) => ScalingPoint::from_omega(alpha, float_arg(w)?)?,
        (None, Some(t)) => ScalingPoint::from_theta(alpha, float_arg(t)?)?,
        (None, None) => return Err(usage("--omega or --theta is required")),
    };
    let (w, th) = (p.omega(), p.theta());
    let band = asy::endpoints(th, alpha)?;
    let mut t = Table::new(vec![
        "alpha", "omega", "theta", "omega_c", "theta_c", "scenario", "sigma", "phi", "psi", "free_energy", "a", "b", "E",
    ]);
    t.push(vec![
        alpha.into(),
        w.into(),
        th.into(),
        p.omega_c().into(),
        p.theta_c().into(),
        p.scenario().as_str().into(),
        asy::sigma(w, alpha)?.into(),
        asy::phi(th, alpha)?.into(),
        asy::psi(th)?.into(),
        asy::free_energy_density(w, rho, alpha)?.into(),
        band.a.into(),
        band.b.into(),
        band.e.into(),
    ]);
    Ok(t)
}

fn grid(from: f64, to: f64, points: usize) -> Result<Vec<f64>> {
    if points == 0 {
        return Err(usage("--points must be at least 1"));
    }
    if !(from.is_finite() && to.is_finite()) || from > to {
        return Err(usage(format!("bad grid [{from}, {to}]")));
    }
    if points == 1 {
        return Ok(vec![from]);
    }
    let step = (to - from) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| if i + 1 == points { to } else { from + step * i as f64 })
        .collect())
}

fn scan(a: &ScanArgs) -> Result<Table> {
    let alpha = float_arg(&a.alpha)?;
    let rho = float_arg(&a.rho)?;
    let (lo, hi, columns): (f64, f64, Vec<&'static str>) = match a.kind {
        ScanKind::Sigma => (0.01, 0.99, vec!["omega", "alpha", "omega_c", "sigma", "scenario"]),
        ScanKind::FreeEnergy => (0.01, 0.99, vec!["omega", "alpha", "rho", "free_energy", "scenario"]),
        ScanKind::Phi => (1.1, 10.0, vec!["theta", "alpha", "theta_c", "phi", "scenario"]),
        ScanKind::Psi => (1.1, 10.0, vec!["theta", "psi"]),
        ScanKind::Endpoints => (1.1, 10.0, vec!["theta", "alpha", "scenario", "a", "b", "E"]),
        ScanKind::Density => {
            let theta = need(a.theta, "--theta")?;
            (0.0, theta, vec!["mu", "theta", "alpha", "density"])
        }
    };
    let xs = grid(a.from.unwrap_or(lo), a.to.unwrap_or(hi), a.points)?;
    let kind = a.kind;
    let theta = a.theta;
    let rows: Vec<Vec<Cell>> = xs
        .par_iter()
        .map(|&x| -> pentatile::Result<Vec<Cell>> {
            Ok(match kind {
                ScanKind::Sigma => {
                    let p = ScalingPoint::from_omega(alpha, x)?;
                    vec![
                        x.into(),
                        alpha.into(),
                        p.omega_c().into(),
                        asy::sigma(x, alpha)?.into(),
                        p.scenario().as_str().into(),
                    ]
                }
                ScanKind::FreeEnergy => {
                    let p = ScalingPoint::from_omega(alpha, x)?;
                    vec![
                        x.into(),
                        alpha.into(),
                        rho.into(),
                        asy::free_energy_density(x, rho, alpha)?.into(),
                        p.scenario().as_str().into(),
                    ]
                }
                ScanKind::Phi => {
                    let p = ScalingPoint::from_theta(alpha, x)?;
                    vec![
                        x.into(),
                        alpha.into(),
                        p.theta_c().into(),
                        asy::phi(x, alpha)?.into(),
                        p.scenario().as_str().into(),
                    ]
                }
                ScanKind::Psi => vec![x.into(), asy::psi(x)?.into()],
                ScanKind::Endpoints => {
                    let b = asy::endpoints(x, alpha)?;
                    vec![x.into(), alpha.into(), b.scenario.as_str().into(), b.a.into(), b.b.into(), b.e.into()]
                }
                ScanKind::Density => {
                    let th = theta.unwrap_or_default();
                    vec![x.into(), th.into(), alpha.into(), asy::density(x, th, alpha, asy::DENSITY_EPS)?.into()]
                }
            })
        })
        .collect::<pentatile::Result<_>>()?;
    let kind_name = match a.kind {
        ScanKind::Sigma => "sigma",
        ScanKind::FreeEnergy => "free-energy",
        ScanKind::Phi => "phi",
        ScanKind::Psi => "psi",
        ScanKind::Endpoints => "endpoints",
        ScanKind::Density => "density",
    };
    let mut t = Table::new(columns).meta("kind", kind_name).meta("alpha", alpha);
    if let Some(th) = a.theta {
        t = t.meta("theta", th);
    }
    for row in rows {
        t.push(row);
    }
    Ok(t)
}

fn converge(cli: &Cli, a: &ConvergeArgs) -> Result<(Table, u8)> {
    let alpha = exact_arg("alpha", &a.alpha)?;
    let omega = exact_arg("omega", &a.omega)?;
    let policy = match a.route {
        RouteArg::Auto => RoutePolicy::Auto,
        RouteArg::Exact => RoutePolicy::Exact,
        RouteArg::Float => RoutePolicy::Float,
    };
    let prec = cli.precision.unwrap_or(DEFAULT_PRECISION);
    let rows = convergence_table(&alpha, &omega, &a.s_list, prec, policy)?;
    let mut t = Table::new(vec![
        "s", "r", "neg_log_T_over_s2", "sigma_limit", "abs_error", "route", "precision_bits",
    ])
    .meta("alpha", alpha.to_string())
    .meta("omega", omega.to_string());
    for row in &rows {
        if let Some(flag) = &row.flag {
            eprintln!("warning: s={}: {flag}", row.s);
        }
        t.push(vec![
            row.s.into(),
            row.r.into(),
            row.neg_log_t_over_s2.into(),
            row.sigma_limit.into(),
            row.abs_error.into(),
            row.route.as_str().into(),
            row.precision_bits.into(),
        ]);
    }
    let mut code = 0;
    if a.assert_trend && !error_strictly_decreasing(&rows) {
        eprintln!("assertion failed: abs_error does not strictly decrease");
        code = 1;
    }
    Ok((t, code))
}

fn selftest(cli: &Cli, a: &SelftestArgs) -> Result<u8> {
    let opts = SelftestOptions {
        quick: a.quick,
        seed: a.seed,
        oracle: oracle_config()?,
    };
    let report = selftest::run(&opts);
    emit(&report.render(), cli.out.as_deref())?;
    eprint!("{}", report.render_timings());
    Ok(u8::from(!report.passed()))
}
