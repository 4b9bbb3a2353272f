//! Command-line grammar.

use std::path::PathBuf;

use bilap_core::annulus::MatrixConvention;
use bilap_core::varoracle::RitzBasis;
use bilap_core::Coupling;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "bilap",
    version,
    about = "Spectra of the bulk-boundary Bilaplacian on balls and annuli"
)]
pub struct Cli {
    /// Worker threads for sweeps and figure grids (overrides BILAP_THREADS).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues on the unit ball (or punctured ball).
    Ball(BallArgs),
    /// Eigenvalues on the annulus a < |x| < 1.
    Annulus(AnnulusArgs),
    /// Small-λ bifurcation threshold a* on the annulus.
    Bifurcation(BifurcationArgs),
    /// Spectra over a log grid of γ with monotonicity checks.
    Sweep(SweepArgs),
    /// Secular roots against Rayleigh-Ritz upper bounds.
    Oracle(OracleArgs),
    /// Eigen-expansion of the dynamic-boundary flow.
    Evolve(EvolveArgs),
    /// CSV data behind the standard plots.
    Figure(FigureArgs),
    /// Quick internal consistency checks.
    Selftest(SelftestArgs),
    /// Bessel kernel invariant table.
    #[command(hide = true)]
    SpecfunSelftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    Physical,
    Printed,
}

impl From<Convention> for MatrixConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Physical => MatrixConvention::Physical,
            Convention::Printed => MatrixConvention::AsPrinted,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeometryKind {
    Ball,
    Annulus,
    Punctured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    Legendre,
    Monomial,
}

impl From<Basis> for RitzBasis {
    fn from(b: Basis) -> Self {
        match b {
            Basis::Legendre => RitzBasis::Legendre,
            Basis::Monomial => RitzBasis::Monomial,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CsvOutput {
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

fn coupling(s: &str) -> Result<Coupling, String> {
    s.parse().map_err(|e: bilap_core::Error| e.to_string())
}

fn finite_gamma(s: &str) -> Result<f64, String> {
    match coupling(s)? {
        Coupling::Finite(g) => Ok(g),
        Coupling::Infinite => Err("a finite gamma is required here".into()),
    }
}

fn dimension(s: &str) -> Result<u32, String> {
    let n: u32 = s.parse().map_err(|_| format!("invalid dimension {s:?}"))?;
    if n < 2 {
        return Err(format!("dimension must be at least 2, got {n}"));
    }
    Ok(n)
}

fn inner_radius(s: &str) -> Result<f64, String> {
    let a: f64 = s.parse().map_err(|_| format!("invalid inner radius {s:?}"))?;
    if !(a > 0.0 && a < 1.0) {
        return Err(format!("inner radius must lie in (0, 1), got {a}"));
    }
    Ok(a)
}

fn positive(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("invalid number {s:?}"))?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(format!("expected a positive finite number, got {s}"));
    }
    Ok(x)
}

fn non_negative(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("invalid number {s:?}"))?;
    if !(x >= 0.0 && x.is_finite()) {
        return Err(format!("expected a finite number >= 0, got {s}"));
    }
    Ok(x)
}

fn at_least_one(s: &str) -> Result<usize, String> {
    let k: usize = s.parse().map_err(|_| format!("invalid count {s:?}"))?;
    if k == 0 {
        return Err("count must be at least 1".into());
    }
    Ok(k)
}

/// Angular orders: `3`, `0-4` or `0,2,5`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllList(pub Vec<u32>);

fn ell_list(s: &str) -> Result<EllList, String> {
    let bad = || format!("invalid ell list {s:?}; use 3, 0-4 or 0,2,5");
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if let Some((lo, hi)) = part.split_once('-') {
            let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
            let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
            if lo > hi || hi - lo > 1000 {
                return Err(bad());
            }
            out.extend(lo..=hi);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(EllList(out))
}

/// Comma-separated inner radii.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusList(pub Vec<f64>);

fn radius_list(s: &str) -> Result<RadiusList, String> {
    s.split(',')
        .map(|p| inner_radius(p.trim()))
        .collect::<Result<_, _>>()
        .map(RadiusList)
}

/// Comma-separated times, each finite and non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeList(pub Vec<f64>);

fn time_list(s: &str) -> Result<TimeList, String> {
    s.split(',')
        .map(|p| non_negative(p.trim()))
        .collect::<Result<_, _>>()
        .map(TimeList)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FloatList(pub Vec<f64>);

fn float_list(s: &str) -> Result<FloatList, String> {
    s.split(',')
        .map(|p| {
            let x: f64 = p.trim().parse().map_err(|_| format!("invalid number {p:?}"))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(format!("expected a finite number, got {p}"))
            }
        })
        .collect::<Result<_, _>>()
        .map(FloatList)
}

#[derive(Debug, Clone, Args)]
pub struct BallArgs {
    #[arg(long, value_parser = dimension)]
    pub n: u32,
    /// Coupling: a number >= 0 or `inf`.
    #[arg(long, value_parser = coupling)]
    pub gamma: Coupling,
    /// Angular orders to solve. Without it the globally ordered spectrum is
    /// assembled.
    #[arg(long, value_parser = ell_list)]
    pub ell: Option<EllList>,
    /// Roots per ℓ, or spectrum entries (with multiplicity) without --ell.
    #[arg(long, default_value = "4", value_parser = at_least_one)]
    pub count: usize,
    /// Largest ℓ examined when assembling the spectrum.
    #[arg(long, default_value = "40")]
    pub ell_cap: u32,
    /// Solve on the punctured ball 0 < |x| < 1.
    #[arg(long)]
    pub punctured: bool,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Clone, Args)]
pub struct AnnulusArgs {
    #[arg(long, value_parser = dimension)]
    pub n: u32,
    /// A finite coupling >= 0.
    #[arg(long, value_parser = finite_gamma)]
    pub gamma: f64,
    #[arg(long, value_parser = inner_radius)]
    pub a: f64,
    #[arg(long, value_parser = ell_list)]
    pub ell: Option<EllList>,
    #[arg(long, default_value = "4", value_parser = at_least_one)]
    pub count: usize,
    #[arg(long, default_value = "40")]
    pub ell_cap: u32,
    #[arg(long, value_enum, default_value = "physical")]
    pub convention: Convention,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Clone, Args)]
pub struct BifurcationArgs {
    #[arg(long, value_parser = dimension)]
    pub n: u32,
    #[arg(long, value_parser = finite_gamma)]
    pub gamma: f64,
    #[arg(long, value_enum, default_value = "printed")]
    pub convention: Convention,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_parser = dimension)]
    pub n: u32,
    #[arg(long, value_enum, default_value = "ball")]
    pub geometry: GeometryKind,
    /// Inner radius, required for the annulus.
    #[arg(long, value_parser = inner_radius)]
    pub a: Option<f64>,
    #[arg(long, default_value = "1e-3", value_parser = positive)]
    pub gamma_min: f64,
    #[arg(long, default_value = "1e3", value_parser = positive)]
    pub gamma_max: f64,
    #[arg(long, default_value = "50", value_parser = at_least_one)]
    pub points: usize,
    /// Spectrum entries per grid point.
    #[arg(long, default_value = "10", value_parser = at_least_one)]
    pub count: usize,
    #[arg(long, default_value = "40")]
    pub ell_cap: u32,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[arg(long, value_parser = dimension)]
    pub n: u32,
    #[arg(long, value_parser = finite_gamma)]
    pub gamma: f64,
    #[arg(long, value_enum, default_value = "ball")]
    pub geometry: GeometryKind,
    #[arg(long, value_parser = inner_radius)]
    pub a: Option<f64>,
    #[arg(long, default_value = "0-2", value_parser = ell_list)]
    pub ell: EllList,
    /// Trial-space dimension N (4 to 32).
    #[arg(long, default_value = "24")]
    pub size: usize,
    #[arg(long, value_enum, default_value = "legendre")]
    pub basis: Basis,
    /// Positive eigenvalues compared per ℓ.
    #[arg(long, default_value = "3", value_parser = at_least_one)]
    pub count: usize,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    #[arg(long, value_parser = dimension)]
    pub n: u32,
    #[arg(long, value_parser = coupling)]
    pub gamma: Coupling,
    #[arg(long, value_enum, default_value = "ball")]
    pub geometry: GeometryKind,
    #[arg(long, value_parser = inner_radius)]
    pub a: Option<f64>,
    #[arg(long, default_value = "0")]
    pub ell: u32,
    /// Modes kept in the expansion (the constant counts for ℓ = 0).
    #[arg(long, default_value = "6", value_parser = at_least_one)]
    pub modes: usize,
    /// Initial coefficients on the eigenmodes. Without it the initial
    /// profile is a Neumann-compatible cubic bump, projected.
    #[arg(long, value_parser = float_list)]
    pub coefficients: Option<FloatList>,
    #[arg(long, default_value = "0,0.01,0.1,1", value_parser = time_list)]
    pub times: TimeList,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    #[command(subcommand)]
    pub figure: Figure,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Figure {
    /// Ψ(λ) per ℓ with its poles marked.
    Psi {
        #[arg(long, value_parser = dimension)]
        n: u32,
        #[arg(long, default_value = "0-5", value_parser = ell_list)]
        ell: EllList,
        #[arg(long, default_value = "0.05", value_parser = positive)]
        lambda_min: f64,
        #[arg(long, default_value = "12", value_parser = positive)]
        lambda_max: f64,
        #[arg(long, default_value = "0.01", value_parser = positive)]
        lambda_step: f64,
        #[command(flatten)]
        out: CsvOutput,
    },
    /// s·J_{ℓ+s}/J′_{ℓ+s} against its cotangent asymptote.
    Cotangent {
        #[arg(long, default_value = "3", value_parser = dimension)]
        n: u32,
        #[arg(long, default_value = "0-2", value_parser = ell_list)]
        ell: EllList,
        #[arg(long, default_value = "0.5", value_parser = positive)]
        r_min: f64,
        #[arg(long, default_value = "40", value_parser = positive)]
        r_max: f64,
        #[arg(long, default_value = "0.05", value_parser = positive)]
        r_step: f64,
        #[command(flatten)]
        out: CsvOutput,
    },
    /// First eigenvalues per ℓ as functions of the inner radius.
    AnnulusCurves {
        #[arg(long, value_parser = dimension)]
        n: u32,
        #[arg(long, value_parser = finite_gamma)]
        gamma: f64,
        #[arg(long, default_value = "0-3", value_parser = ell_list)]
        ell: EllList,
        #[arg(long, default_value = "4", value_parser = at_least_one)]
        count: usize,
        /// Inner radii; default 0.05, 0.10, ..., 0.95.
        #[arg(long, value_parser = radius_list)]
        a: Option<RadiusList>,
        #[arg(long, value_enum, default_value = "printed")]
        convention: Convention,
        #[command(flatten)]
        out: CsvOutput,
    },
    /// Column-scaled det W_ℓ(λ) on a λ grid.
    Detw {
        #[arg(long, value_parser = dimension)]
        n: u32,
        #[arg(long, value_parser = finite_gamma)]
        gamma: f64,
        #[arg(long, default_value = "0-3", value_parser = ell_list)]
        ell: EllList,
        #[arg(long, value_parser = radius_list)]
        a: Option<RadiusList>,
        #[arg(long, default_value = "0.01", value_parser = positive)]
        lambda_min: f64,
        #[arg(long, default_value = "8", value_parser = positive)]
        lambda_max: f64,
        #[arg(long, default_value = "0.01", value_parser = positive)]
        lambda_step: f64,
        #[arg(long, value_enum, default_value = "printed")]
        convention: Convention,
        #[command(flatten)]
        out: CsvOutput,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SelftestArgs {
    #[command(flatten)]
    pub out: Output,
}
