//! CSV grids behind the standard plots.

use std::f64::consts::PI;

use bilap_core::annulus::{annulus_eigenvalues, secular_det, MatrixConvention};
use bilap_core::ball::{fixed_point_psi, psi_poles};
use bilap_core::specfun::{bessel, Kind};
use bilap_core::{Coupling, Error};
use rayon::prelude::*;

use crate::args::{EllList, Figure, RadiusList};
use crate::output::{emit, fmt, Csv};
use crate::CliError;

const MAX_GRID: usize = 5_000_000;

/// `lo, lo + step, …` up to `hi` inclusive.
fn linear_grid(lo: f64, hi: f64, step: f64, what: &str) -> Result<Vec<f64>, CliError> {
    if lo > hi {
        return Err(CliError::usage(format!(
            "{what} grid: minimum {lo} exceeds maximum {hi}"
        )));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    if count > MAX_GRID {
        return Err(CliError::usage(format!(
            "{what} grid has {count} points; the limit is {MAX_GRID}"
        )));
    }
    Ok((0..count).map(|i| lo + step * i as f64).collect())
}

/// 0.05, 0.10, …, 0.95.
fn default_radii() -> Vec<f64> {
    (1..=19).map(|i| f64::from(i) / 20.0).collect()
}

fn radii(a: &Option<RadiusList>) -> Vec<f64> {
    a.as_ref().map_or_else(default_radii, |r| r.0.clone())
}

pub fn run(figure: &Figure) -> Result<(), CliError> {
    let (csv, path) = match figure {
        Figure::Psi {
            n,
            ell,
            lambda_min,
            lambda_max,
            lambda_step,
            out,
        } => (psi(*n, ell, *lambda_min, *lambda_max, *lambda_step)?, &out.output),
        Figure::Cotangent {
            n,
            ell,
            r_min,
            r_max,
            r_step,
            out,
        } => (cotangent(*n, ell, *r_min, *r_max, *r_step)?, &out.output),
        Figure::AnnulusCurves {
            n,
            gamma,
            ell,
            count,
            a,
            convention,
            out,
        } => (
            annulus_curves(*n, *gamma, ell, *count, &radii(a), (*convention).into())?,
            &out.output,
        ),
        Figure::Detw {
            n,
            gamma,
            ell,
            a,
            lambda_min,
            lambda_max,
            lambda_step,
            convention,
            out,
        } => {
            let grid = linear_grid(*lambda_min, *lambda_max, *lambda_step, "lambda")?;
            (
                detw(*n, *gamma, ell, &radii(a), &grid, *lambda_step, (*convention).into())?,
                &out.output,
            )
        }
    };
    Ok(emit(&csv.render(), path.as_deref())?)
}

fn psi(n: u32, ells: &EllList, lo: f64, hi: f64, step: f64) -> Result<Csv, CliError> {
    let grid = linear_grid(lo, hi, step, "lambda")?;
    let mut csv = Csv::new("n,ell,lambda,psi_value");
    csv.meta("figure", "psi")
        .meta("lambda_grid", format!("{}..{} step {}", fmt(lo), fmt(hi), fmt(step)))
        .meta(
            "note",
            "rows with psi_value=pole sit at zeros of i*j' - i'*j; zeros of j' give psi=0",
        );
    let blocks: Vec<Vec<String>> = ells
        .0
        .par_iter()
        .map(|&ell| -> Result<Vec<String>, CliError> {
            let mut rows: Vec<(f64, String)> = Vec::with_capacity(grid.len());
            for &x in &grid {
                let v = match fixed_point_psi(n, ell, x) {
                    Ok(v) => fmt(v),
                    Err(Error::Pole { .. }) => "pole".into(),
                    Err(e) => return Err(e.into()),
                };
                rows.push((x, v));
            }
            for p in psi_poles(n, ell, hi)? {
                if p >= lo {
                    rows.push((p, "pole".into()));
                }
            }
            rows.sort_by(|a, b| a.0.total_cmp(&b.0));
            Ok(rows
                .into_iter()
                .map(|(x, v)| format!("{n},{ell},{},{v}", fmt(x)))
                .collect())
        })
        .collect::<Result<_, _>>()?;
    blocks.into_iter().flatten().for_each(|r| csv.row(r));
    Ok(csv)
}

fn cotangent(n: u32, ells: &EllList, lo: f64, hi: f64, step: f64) -> Result<Csv, CliError> {
    let grid = linear_grid(lo, hi, step, "r")?;
    let s = (f64::from(n) - 2.0) / 2.0;
    let mut csv = Csv::new("ell,r,ratio,cotangent_asymptote");
    csv.meta("figure", "cotangent")
        .meta("n", n)
        .meta("r_grid", format!("{}..{} step {}", fmt(lo), fmt(hi), fmt(step)))
        .meta("ratio", "s*J_nu(r)/J'_nu(r) with nu = ell + s")
        .meta("asymptote", "-s*cot(r - (2nu+1)pi/4)");
    for &ell in &ells.0 {
        let twice_nu = 2 * ell + n - 2;
        let nu = f64::from(twice_nu) / 2.0;
        for &r in &grid {
            let j = bessel(Kind::J, twice_nu, r, false)?.to_f64();
            let j1 = bessel(Kind::J, twice_nu + 2, r, false)?.to_f64();
            let jp = nu / r * j - j1;
            let ratio = s * j / jp;
            let asym = -s / (r - (2.0 * nu + 1.0) * PI / 4.0).tan();
            let cell = |x: f64| if x.is_finite() { fmt(x) } else { "pole".into() };
            csv.row(format!("{ell},{},{},{}", fmt(r), cell(ratio), cell(asym)));
        }
    }
    Ok(csv)
}

fn annulus_curves(
    n: u32,
    gamma: f64,
    ells: &EllList,
    count: usize,
    radii: &[f64],
    conv: MatrixConvention,
) -> Result<Csv, CliError> {
    let mut csv = Csv::new("n,gamma,ell,k,a,lambda");
    csv.meta("figure", "annulus-curves")
        .meta("convention", conv.as_str())
        .meta("a_grid", radii.iter().map(|&a| fmt(a)).collect::<Vec<_>>().join(" "));
    let jobs: Vec<(u32, f64)> = ells
        .0
        .iter()
        .flat_map(|&l| radii.iter().map(move |&a| (l, a)))
        .collect();
    let results: Vec<Vec<(u32, u32, f64, f64)>> = jobs
        .par_iter()
        .map(|&(ell, a)| {
            annulus_eigenvalues(n, ell, Coupling::Finite(gamma), a, count, conv)
                .map(|rs| rs.into_iter().map(|r| (ell, r.k, a, r.lambda)).collect())
        })
        .collect::<Result<_, _>>()?;
    // ℓ, then k, then a: one curve per (ℓ, k)
    let mut rows: Vec<(u32, u32, f64, f64)> = results.into_iter().flatten().collect();
    rows.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.total_cmp(&y.2)));
    for (ell, k, a, lam) in rows {
        csv.row(format!("{n},{},{ell},{k},{},{}", fmt(gamma), fmt(a), fmt(lam)));
    }
    Ok(csv)
}

fn detw(
    n: u32,
    gamma: f64,
    ells: &EllList,
    radii: &[f64],
    grid: &[f64],
    step: f64,
    conv: MatrixConvention,
) -> Result<Csv, CliError> {
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    if lo <= 0.0 {
        return Err(CliError::usage("lambda grid must be positive"));
    }
    let mut csv = Csv::new("n,gamma,a,ell,lambda,scaled_det");
    csv.meta("figure", "detw")
        .meta("convention", conv.as_str())
        .meta("lambda_grid", format!("{}..{} step {}", fmt(lo), fmt(hi), fmt(step)))
        .meta(
            "scaled_det",
            "det W_ell(lambda) * exp(-lambda(1-a)); overflow marks entries outside double range",
        );
    let jobs: Vec<(f64, u32)> = radii
        .iter()
        .flat_map(|&a| ells.0.iter().map(move |&l| (a, l)))
        .collect();
    let blocks: Vec<Vec<String>> = jobs
        .par_iter()
        .map(|&(a, ell)| -> Result<Vec<String>, CliError> {
            grid.iter()
                .map(|&x| {
                    let v = match secular_det(n, ell, gamma, a, x, conv) {
                        Ok(d) => fmt(d),
                        Err(Error::Domain(_)) => "overflow".into(),
                        Err(e) => return Err(e.into()),
                    };
                    Ok(format!("{n},{},{},{ell},{},{v}", fmt(gamma), fmt(a), fmt(x)))
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    blocks.into_iter().flatten().for_each(|r| csv.row(r));
    Ok(csv)
}
