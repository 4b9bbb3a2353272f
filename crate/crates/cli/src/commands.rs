//! Spectral subcommands.

use std::f64::consts::PI;

use bilap_core::annulus::{annulus_eigenvalues, bifurcation_threshold, fundamental_mode_annulus, MatrixConvention};
use bilap_core::ball::ball_eigenvalues;
use bilap_core::dynamics::{evolve, project, state_from_coefficients, SpectralState};
use bilap_core::problem::EigenResult;
use bilap_core::specfun::{selftest, zeros_of_jprime, BesselOrder};
use bilap_core::spectrum::{assemble_spectrum, assemble_spectrum_with, gamma_sweep, log_grid, SpectrumTable};
use bilap_core::varoracle::{build_ritz_with, solve_sym_gevp, RitzBasis};
use bilap_core::{Coupling, Geometry, ProblemSpec};
use serde_json::{json, Value};

use crate::args::{
    AnnulusArgs, BallArgs, BifurcationArgs, EvolveArgs, Format, GeometryKind, OracleArgs, Output, SelftestArgs,
    SweepArgs,
};
use crate::output::{
    eigen_csv, eigen_json, emit, fmt, gamma_json, gamma_text, num, render_json, Csv, EIGEN_HEADER, RESIDUAL_TOL,
};
use crate::CliError;

fn geometry(kind: GeometryKind, a: Option<f64>) -> Result<Geometry, CliError> {
    match (kind, a) {
        (GeometryKind::Ball, None) => Ok(Geometry::Ball),
        (GeometryKind::Punctured, None) => Ok(Geometry::PuncturedBall),
        (GeometryKind::Annulus, Some(a)) => Ok(Geometry::Annulus(a)),
        (GeometryKind::Annulus, None) => Err(CliError::usage("--a is required for the annulus")),
        (_, Some(_)) => Err(CliError::usage("--a only applies to --geometry annulus")),
    }
}

fn problem_json(spec: &ProblemSpec, convention: Option<MatrixConvention>) -> Value {
    let mut p = json!({
        "n": spec.n,
        "gamma": gamma_json(spec.gamma),
        "geometry": spec.geometry.name(),
    });
    if let Some(a) = spec.geometry.inner_radius() {
        p["a"] = num(a);
    }
    if let Some(c) = convention {
        p["convention"] = Value::String(c.as_str().into());
    }
    p
}

fn problem_meta(csv: &mut Csv, spec: &ProblemSpec, convention: Option<MatrixConvention>) {
    csv.meta("n", spec.n)
        .meta("gamma", gamma_text(spec.gamma))
        .meta("geometry", spec.geometry.name());
    if let Some(a) = spec.geometry.inner_radius() {
        csv.meta("a", fmt(a));
    }
    if let Some(c) = convention {
        csv.meta("convention", c.as_str());
    }
}

/// One row per (ℓ, k); spectrum tables repeat entries by multiplicity.
fn distinct(entries: &[EigenResult]) -> Vec<EigenResult> {
    let mut out: Vec<EigenResult> = Vec::new();
    for e in entries {
        if out.last().is_none_or(|l| l.mode() != e.mode()) {
            out.push(*e);
        }
    }
    out
}

fn per_ell(
    ells: &[u32],
    mut solve: impl FnMut(u32) -> bilap_core::Result<Vec<EigenResult>>,
) -> Result<Vec<EigenResult>, CliError> {
    let mut all = Vec::new();
    for &ell in ells {
        all.extend(solve(ell)?);
    }
    all.sort_by(|a, b| a.lambda4.total_cmp(&b.lambda4).then(a.mode().cmp(&b.mode())));
    Ok(all)
}

fn write_spectrum(
    spec: &ProblemSpec,
    convention: Option<MatrixConvention>,
    rows: &[EigenResult],
    warnings: &[String],
    out: &Output,
) -> Result<(), CliError> {
    let flagged = rows.iter().filter(|e| e.residual > RESIDUAL_TOL).count();
    let max_res = rows.iter().map(|e| e.residual).fold(0f64, f64::max);
    let mut warnings = warnings.to_vec();
    if flagged > 0 {
        warnings.push(format!("{flagged} rows have bracket residual above {RESIDUAL_TOL:e}"));
    }
    let text = match out.format {
        Format::Json => render_json(&json!({
            "problem": problem_json(spec, convention),
            "eigenvalues": rows.iter().map(eigen_json).collect::<Vec<_>>(),
            "diagnostics": {
                "residual_tolerance": num(RESIDUAL_TOL),
                "max_residual": num(max_res),
                "flagged": flagged,
                "warnings": warnings,
            },
        })),
        Format::Csv => {
            let mut csv = Csv::new(EIGEN_HEADER);
            problem_meta(&mut csv, spec, convention);
            csv.meta("residual_tolerance", fmt(RESIDUAL_TOL));
            for w in &warnings {
                csv.meta("warning", w);
            }
            for e in rows {
                csv.row(eigen_csv(e));
            }
            csv.render()
        }
    };
    Ok(emit(&text, out.output.as_deref())?)
}

pub fn ball(args: &BallArgs) -> Result<(), CliError> {
    let geometry = if args.punctured {
        Geometry::PuncturedBall
    } else {
        Geometry::Ball
    };
    let spec = ProblemSpec::new(args.n, args.gamma, geometry)?;
    let (rows, warnings) = match &args.ell {
        Some(ells) => (
            per_ell(&ells.0, |ell| ball_eigenvalues(args.n, ell, args.gamma, args.count))?,
            Vec::new(),
        ),
        None => {
            let t = assemble_spectrum(&spec, args.count, args.ell_cap)?;
            (distinct(&t.entries), t.warnings)
        }
    };
    write_spectrum(&spec, None, &rows, &warnings, &args.out)
}

pub fn annulus(args: &AnnulusArgs) -> Result<(), CliError> {
    let spec = ProblemSpec::annulus(args.n, Coupling::Finite(args.gamma), args.a)?;
    let conv = MatrixConvention::from(args.convention);
    let (rows, warnings) = match &args.ell {
        Some(ells) => (
            per_ell(&ells.0, |ell| {
                annulus_eigenvalues(args.n, ell, spec.gamma, args.a, args.count, conv)
            })?,
            Vec::new(),
        ),
        None => {
            let t: SpectrumTable = assemble_spectrum_with(&spec, args.count, args.ell_cap, conv)?;
            (distinct(&t.entries), t.warnings)
        }
    };
    write_spectrum(&spec, Some(conv), &rows, &warnings, &args.out)
}

pub fn bifurcation(args: &BifurcationArgs) -> Result<(), CliError> {
    let conv = MatrixConvention::from(args.convention);
    let r = bifurcation_threshold(args.n, args.gamma, conv)?;
    // fundamental ℓ on either side of the threshold
    let sides = match r.a_star {
        Some(a) => {
            let below = (a - 0.01).max(0.005);
            let above = (a + 0.01).min(0.995);
            let g = Coupling::Finite(args.gamma);
            Some((
                fundamental_mode_annulus(args.n, g, below, conv)?.ell(),
                fundamental_mode_annulus(args.n, g, above, conv)?.ell(),
            ))
        }
        None => None,
    };
    let text = match args.out.format {
        Format::Json => render_json(&json!({
            "problem": {"n": args.n, "gamma": num(args.gamma), "geometry": "annulus", "convention": conv.as_str()},
            "exists": r.exists,
            "a_star": r.a_star.map_or(Value::Null, num),
            "residual": r.residual.map_or(Value::Null, num),
            "gamma_bound": num(1.0 / f64::from(args.n)),
            "fundamental_ell_below": sides.map(|s| s.0),
            "fundamental_ell_above": sides.map(|s| s.1),
        })),
        Format::Csv => {
            let mut csv =
                Csv::new("n,gamma,convention,exists,a_star,residual,fundamental_ell_below,fundamental_ell_above");
            let opt = |x: Option<f64>| x.map_or(String::new(), fmt);
            let side = |x: Option<u32>| x.map_or(String::new(), |v| v.to_string());
            csv.row(format!(
                "{},{},{},{},{},{},{},{}",
                args.n,
                fmt(args.gamma),
                conv.as_str(),
                r.exists,
                opt(r.a_star),
                opt(r.residual),
                side(sides.map(|s| s.0)),
                side(sides.map(|s| s.1)),
            ));
            csv.render()
        }
    };
    Ok(emit(&text, args.out.output.as_deref())?)
}

pub fn sweep(args: &SweepArgs) -> Result<(), CliError> {
    let spec = ProblemSpec::new(args.n, Coupling::Finite(1.0), geometry(args.geometry, args.a)?)?;
    if args.gamma_min >= args.gamma_max && args.points > 1 {
        return Err(CliError::usage("--gamma-min must be below --gamma-max"));
    }
    let grid = if args.points == 1 {
        vec![Coupling::Finite(args.gamma_min)]
    } else {
        log_grid(args.gamma_min, args.gamma_max, args.points)
    };
    let t = gamma_sweep(&spec, &grid, args.count, args.ell_cap)?;
    let text = match args.out.format {
        Format::Json => {
            let rows: Vec<Value> = t
                .rows
                .iter()
                .map(|row| {
                    let entries: Vec<Value> = row
                        .entries
                        .iter()
                        .enumerate()
                        .map(|(i, e)| {
                            json!({
                                "index": i + 1,
                                "ell": e.ell,
                                "k": e.k,
                                "lambda": num(e.lambda),
                                "lambda4": num(row.lambda4[i]),
                                "gamma_lambda4": num(row.gamma_lambda4[i]),
                            })
                        })
                        .collect();
                    json!({"gamma": gamma_json(row.gamma), "entries": entries})
                })
                .collect();
            let violations: Vec<Value> = t
                .violations
                .iter()
                .map(|v| {
                    json!({
                        "kind": v.kind.as_str(),
                        "index": v.k,
                        "gamma": gamma_json(v.gamma),
                        "value": num(v.value),
                        "bound": num(v.bound),
                    })
                })
                .collect();
            let mut problem = problem_json(&spec, None);
            problem["gamma"] = json!({"min": num(args.gamma_min), "max": num(args.gamma_max), "points": args.points});
            render_json(&json!({
                "problem": problem,
                "rows": rows,
                "diagnostics": {"violations": violations, "warnings": t.warnings},
            }))
        }
        Format::Csv => {
            let mut csv = Csv::new("gamma,index,ell,k,lambda,lambda4,gamma_lambda4");
            csv.meta("n", spec.n).meta("geometry", spec.geometry.name());
            if let Some(a) = spec.geometry.inner_radius() {
                csv.meta("a", fmt(a));
            }
            csv.meta(
                "gamma_grid",
                format!(
                    "log {}..{} points {}",
                    fmt(args.gamma_min),
                    fmt(args.gamma_max),
                    args.points
                ),
            )
            .meta("violations", t.violations.len());
            for v in &t.violations {
                csv.meta(
                    "violation",
                    format!(
                        "{} index={} gamma={} value={} bound={}",
                        v.kind.as_str(),
                        v.k,
                        gamma_text(v.gamma),
                        fmt(v.value),
                        fmt(v.bound)
                    ),
                );
            }
            for w in &t.warnings {
                csv.meta("warning", w);
            }
            for row in &t.rows {
                for (i, e) in row.entries.iter().enumerate() {
                    csv.row(format!(
                        "{},{},{},{},{},{},{}",
                        gamma_text(row.gamma),
                        i + 1,
                        e.ell,
                        e.k,
                        fmt(e.lambda),
                        fmt(row.lambda4[i]),
                        fmt(row.gamma_lambda4[i])
                    ));
                }
            }
            csv.render()
        }
    };
    Ok(emit(&text, args.out.output.as_deref())?)
}

pub fn oracle(args: &OracleArgs) -> Result<(), CliError> {
    let spec = ProblemSpec::new(args.n, Coupling::Finite(args.gamma), geometry(args.geometry, args.a)?)?;
    let basis = RitzBasis::from(args.basis);
    let mut rows = Vec::new();
    let mut per_ell_diag = Vec::new();
    for &ell in &args.ell.0 {
        let secular = match spec.geometry {
            Geometry::Annulus(a) => {
                annulus_eigenvalues(spec.n, ell, spec.gamma, a, args.count, MatrixConvention::Physical)?
            }
            _ => ball_eigenvalues(spec.n, ell, spec.gamma, args.count)?,
        };
        let est = solve_sym_gevp(&build_ritz_with(&spec, ell, args.size, basis)?)?;
        // the Ritz list starts with the constant mode for ℓ = 0
        let ritz: Vec<f64> = est.values.iter().copied().skip(usize::from(ell == 0)).collect();
        for (s, &r) in secular.iter().zip(&ritz) {
            rows.push((ell, s.k, s.lambda4, r));
        }
        per_ell_diag.push((ell, est.monotone, est.delta));
    }
    let rel = |s: f64, r: f64| (r - s).abs() / s.abs().max(f64::MIN_POSITIVE);
    let text = match args.out.format {
        Format::Json => render_json(&json!({
            "problem": problem_json(&spec, Some(MatrixConvention::Physical)),
            "size": args.size,
            "basis": format!("{:?}", basis).to_lowercase(),
            "comparisons": rows.iter().map(|&(ell, k, s, r)| json!({
                "ell": ell,
                "k": k,
                "secular_lambda4": num(s),
                "ritz_lambda4": num(r),
                "relative_difference": num(rel(s, r)),
                "upper_bound": r >= s * (1.0 - 1e-9),
            })).collect::<Vec<_>>(),
            "diagnostics": per_ell_diag.iter().map(|(ell, mono, delta)| json!({
                "ell": ell,
                "monotone_in_size": mono,
                "delta": delta.iter().map(|&d| num(d)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut csv = Csv::new("ell,k,secular_lambda4,ritz_lambda4,relative_difference,upper_bound");
            problem_meta(&mut csv, &spec, Some(MatrixConvention::Physical));
            csv.meta("size", args.size)
                .meta("basis", format!("{:?}", basis).to_lowercase());
            for (ell, mono, _) in &per_ell_diag {
                csv.meta("monotone_in_size", format!("ell={ell} {mono}"));
            }
            for &(ell, k, s, r) in &rows {
                csv.row(format!(
                    "{ell},{k},{},{},{},{}",
                    fmt(s),
                    fmt(r),
                    fmt(rel(s, r)),
                    r >= s * (1.0 - 1e-9)
                ));
            }
            csv.render()
        }
    };
    Ok(emit(&text, args.out.output.as_deref())?)
}

pub fn evolve_cmd(args: &EvolveArgs) -> Result<(), CliError> {
    let spec = ProblemSpec::new(args.n, args.gamma, geometry(args.geometry, args.a)?)?;
    let (state, initial, residual) = match &args.coefficients {
        Some(c) => (state_from_coefficients(&spec, args.ell, &c.0)?, "coefficients", 0.0),
        None => {
            let lo = spec.geometry.inner_radius().unwrap_or(0.0);
            let w = 1.0 - lo;
            // v′(lo) = v′(1) = 0
            let v0 = move |r: f64| 1.0 + (r - lo).powi(2) * (1.5 * w - (r - lo)) / w.powi(3);
            let p = project(v0, &spec, args.ell, args.modes)?;
            (p.state, "cubic-bump", p.residual)
        }
    };
    let mut series: Vec<(f64, SpectralState)> = Vec::new();
    let mut times = args.times.0.clone();
    times.sort_by(f64::total_cmp);
    for &t in &times {
        series.push((t, evolve(&state, t)?));
    }
    let mut stats = Vec::new();
    for (t, s) in &series {
        stats.push((
            *t,
            s.mass()?,
            s.energy()?,
            s.modes.iter().map(|m| m.coefficient).collect::<Vec<_>>(),
        ));
    }
    let text = match args.out.format {
        Format::Json => render_json(&json!({
            "problem": problem_json(&spec, None),
            "ell": args.ell,
            "initial": initial,
            "projection_residual": num(residual),
            "modes": state.modes.iter().map(|m| json!({
                "k": m.result.k,
                "lambda4": num(m.result.lambda4),
            })).collect::<Vec<_>>(),
            "series": stats.iter().map(|(t, mass, energy, c)| json!({
                "t": num(*t),
                "mass": num(*mass),
                "energy": num(*energy),
                "coefficients": c.iter().map(|&x| num(x)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let m = state.modes.len();
            let header = std::iter::once("t,mass,energy".to_string())
                .chain((1..=m).map(|i| format!("c{i}")))
                .collect::<Vec<_>>()
                .join(",");
            let mut csv = Csv::new(&header);
            problem_meta(&mut csv, &spec, None);
            csv.meta("ell", args.ell)
                .meta("initial", initial)
                .meta("projection_residual", fmt(residual));
            for mode in &state.modes {
                csv.meta(
                    "mode",
                    format!("k={} lambda4={}", mode.result.k, fmt(mode.result.lambda4)),
                );
            }
            for (t, mass, energy, c) in &stats {
                let mut line = format!("{},{},{}", fmt(*t), fmt(*mass), fmt(*energy));
                for x in c {
                    line.push(',');
                    line.push_str(&fmt(*x));
                }
                csv.row(line);
            }
            csv.render()
        }
    };
    Ok(emit(&text, args.out.output.as_deref())?)
}

struct Check {
    name: String,
    worst: f64,
    tolerance: f64,
}

fn write_checks(checks: &[Check], out: &Output) -> Result<bool, CliError> {
    let ok = checks.iter().all(|c| c.worst <= c.tolerance);
    let text = match out.format {
        Format::Json => render_json(&json!({
            "checks": checks.iter().map(|c| json!({
                "name": c.name,
                "worst": num(c.worst),
                "tolerance": num(c.tolerance),
                "passed": c.worst <= c.tolerance,
            })).collect::<Vec<_>>(),
            "passed": ok,
        })),
        Format::Csv => {
            let mut csv = Csv::new("name,worst,tolerance,passed");
            for c in checks {
                csv.row(format!(
                    "{},{},{},{}",
                    c.name,
                    fmt(c.worst),
                    fmt(c.tolerance),
                    c.worst <= c.tolerance
                ));
            }
            csv.render()
        }
    };
    emit(&text, out.output.as_deref())?;
    Ok(ok)
}

fn kernel_checks() -> Result<Vec<Check>, CliError> {
    Ok(selftest::run_all()?
        .into_iter()
        .map(|r| Check {
            name: format!("specfun-{}", r.name),
            worst: r.worst,
            tolerance: r.tolerance,
        })
        .collect())
}

pub fn specfun_selftest(args: &SelftestArgs) -> Result<(), CliError> {
    if write_checks(&kernel_checks()?, &args.out)? {
        Ok(())
    } else {
        Err(CliError::failed("specfun self-test"))
    }
}

/// Kernel invariants plus a handful of fast end-to-end identities.
pub fn selftest_cmd(args: &SelftestArgs) -> Result<(), CliError> {
    let mut checks = kernel_checks()?;
    let steklov = ball_eigenvalues(3, 1, Coupling::Infinite, 1)?[0].lambda4;
    checks.push(Check {
        name: "steklov-closed-form".into(),
        worst: (steklov - 5.0).abs(),
        tolerance: 0.0,
    });
    let p11 = zeros_of_jprime(BesselOrder::new(2, 1)?, 1)?[0];
    let g0 = ball_eigenvalues(2, 1, Coupling::Finite(0.0), 1)?[0].lambda;
    // first zero of J′₁ to 16 digits
    checks.push(Check {
        name: "neumann-zero".into(),
        worst: (g0 - 1.841_183_781_340_659).abs().max((p11 - g0).abs()),
        tolerance: 1e-13,
    });
    let spec = ProblemSpec::ball(2, Coupling::Finite(1.0))?;
    let sec = ball_eigenvalues(2, 1, spec.gamma, 3)?;
    let ritz = solve_sym_gevp(&build_ritz_with(&spec, 1, 16, RitzBasis::Legendre)?)?;
    let worst = sec
        .iter()
        .zip(&ritz.values)
        .map(|(s, r)| (r - s.lambda4).abs() / s.lambda4)
        .fold(0f64, f64::max);
    checks.push(Check {
        name: "ritz-agreement".into(),
        worst,
        tolerance: 1e-6,
    });
    let a = assemble_spectrum(&spec, 10, 20)?;
    let b = assemble_spectrum(&ProblemSpec::new(2, spec.gamma, Geometry::PuncturedBall)?, 10, 20)?;
    let same = a
        .lambda4()
        .iter()
        .zip(b.lambda4())
        .all(|(x, y)| x.to_bits() == y.to_bits());
    checks.push(Check {
        name: "punctured-ball".into(),
        worst: if same { 0.0 } else { 1.0 },
        tolerance: 0.0,
    });
    let r = bifurcation_threshold(2, 0.4, MatrixConvention::AsPrinted)?;
    checks.push(Check {
        name: "bifurcation-threshold".into(),
        worst: r.a_star.map_or(f64::INFINITY, |a| (a - 0.2).abs()),
        tolerance: 1e-12,
    });
    let gaps: Vec<f64> = zeros_of_jprime(BesselOrder::new(3, 0)?, 30)?
        .windows(2)
        .map(|w| w[1] - w[0])
        .collect();
    checks.push(Check {
        name: "zero-gap-pi".into(),
        worst: (gaps[28] - PI).abs(),
        tolerance: 0.05,
    });
    if write_checks(&checks, &args.out)? {
        Ok(())
    } else {
        Err(CliError::failed("self-test"))
    }
}
