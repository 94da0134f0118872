//! `pentatile`: exact values, oracle cross-checks, asymptotic scans and
//! finite-size convergence tables.
//!
//! Exit codes: 0 success, 1 a failed check, 2 bad input or domain error,
//! 3 a feasibility cap (enumeration size, term count, precision).

mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use table::Format;

/// Default working precision of the float paths, in bits.
pub const DEFAULT_PRECISION: u32 = 256;

#[derive(Debug, Parser)]
#[command(name = "pentatile", version, about = "Emptiness formation probability and pentagonal domino tilings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Working precision in bits for multi-precision paths [default: 256]
    #[arg(long, global = true)]
    pub precision: Option<u32>,

    /// Output format; text by default for exact, oracle, asym and selftest,
    /// csv for scan and converge
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads [default: all cores]
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact finite-size values
    Exact(ExactArgs),
    /// Brute-force enumeration checked against the formulas
    Oracle(OracleArgs),
    /// Closed-form scaling quantities at one point
    Asym(AsymArgs),
    /// Scaling quantities on a grid
    Scan(ScanArgs),
    /// Finite-size estimates of σ(ω)
    Converge(ConvergeArgs),
    /// Run the invariant suites
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("quantity").required(true)))]
pub struct ExactArgs {
    /// T_{r,s}, the triangular emptiness probability
    #[arg(long, group = "quantity")]
    pub tdefp: bool,
    /// G_N for the staircase given by --r-list
    #[arg(long, group = "quantity")]
    pub gefp: bool,
    /// Z_N of the full lattice
    #[arg(long, group = "quantity")]
    pub z: bool,
    /// Z_{r,s} of the pentagonal domain
    #[arg(long, group = "quantity")]
    pub pentagon: bool,
    /// g_{r,s} (needs a perfect-square α unless s(s+1)/2 is even)
    #[arg(long, group = "quantity")]
    pub g: bool,
    /// C_{r,s}, the α → 1 limit of g_{r,s}
    #[arg(long = "c-rs", group = "quantity")]
    pub c_rs: bool,

    #[arg(short = 'r')]
    pub r: Option<usize>,
    #[arg(short = 's')]
    pub s: Option<usize>,
    #[arg(short = 'N')]
    pub n: Option<usize>,
    /// Weakly increasing r_1,...,r_s for --gefp
    #[arg(long, value_delimiter = ',')]
    pub r_list: Vec<usize>,
    /// α as p/q (or a short decimal)
    #[arg(long)]
    pub alpha: Option<String>,
    /// ρ as p/q (or a short decimal)
    #[arg(long, default_value = "1")]
    pub rho: String,
    /// Evaluation route for --tdefp
    #[arg(long, value_enum, default_value_t = Method::Det)]
    pub method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Det,
    Sum,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("check").required(true)))]
pub struct OracleArgs {
    /// Compare the determinant with enumeration for every staircase with s >= 1
    #[arg(long, group = "check")]
    pub all_gefp: bool,
    /// Count DWBC configurations
    #[arg(long, group = "check")]
    pub count: bool,
    /// Compare Z_N by enumeration with ρ^{N(N+1)/2}
    #[arg(long, group = "check")]
    pub z: bool,
    #[arg(short = 'N')]
    pub n: usize,
    #[arg(long, default_value = "1/2")]
    pub alpha: String,
    #[arg(long, default_value = "1")]
    pub rho: String,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("point").required(true)))]
pub struct AsymArgs {
    #[arg(long)]
    pub alpha: String,
    #[arg(long, group = "point")]
    pub omega: Option<String>,
    #[arg(long, group = "point")]
    pub theta: Option<String>,
    #[arg(long, default_value = "1")]
    pub rho: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanKind {
    /// over ω: omega, alpha, omega_c, sigma, scenario
    Sigma,
    /// over ω: omega, alpha, rho, free_energy, scenario
    FreeEnergy,
    /// over θ: theta, alpha, theta_c, phi, scenario
    Phi,
    /// over θ: theta, psi
    Psi,
    /// over θ: theta, alpha, scenario, a, b, E
    Endpoints,
    /// over μ ∈ [0, θ]: mu, theta, alpha, density
    Density,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, value_enum, default_value_t = ScanKind::Sigma)]
    pub kind: ScanKind,
    #[arg(long)]
    pub alpha: String,
    /// Grid start [default: 0.01 over ω, 1.1 over θ, 0 over μ]
    #[arg(long)]
    pub from: Option<f64>,
    /// Grid end [default: 0.99 over ω, 10 over θ, θ over μ]
    #[arg(long)]
    pub to: Option<f64>,
    /// Number of grid points, endpoints included
    #[arg(long, default_value_t = 99)]
    pub points: usize,
    /// θ for the density profile
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long, default_value = "1")]
    pub rho: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Auto,
    Exact,
    Float,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(long)]
    pub alpha: String,
    #[arg(long)]
    pub omega: String,
    #[arg(long, value_delimiter = ',', required = true)]
    pub s_list: Vec<usize>,
    #[arg(long, value_enum, default_value_t = RouteArg::Auto)]
    pub route: RouteArg,
    /// Exit with status 1 unless the error column strictly decreases
    #[arg(long = "assert")]
    pub assert_trend: bool,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Restrict the oracle suites to N <= 4
    #[arg(long)]
    pub quick: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
