//! Globally ordered spectra and γ-sweeps.

use rayon::prelude::*;

use crate::annulus::{annulus_eigenvalues, MatrixConvention};
use crate::ball::ball_eigenvalues;
use crate::problem::{Coupling, EigenResult, Geometry, ProblemSpec, Source};
use crate::{Error, Result};

/// Non-decreasing list of eigenvalues, each repeated by its multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    pub spec: ProblemSpec,
    pub convention: MatrixConvention,
    pub entries: Vec<EigenResult>,
    /// Largest ℓ that was solved.
    pub ell_examined: u32,
    pub warnings: Vec<String>,
}

impl SpectrumTable {
    pub fn lambda4(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.lambda4).collect()
    }
}

fn constant_mode(n: u32) -> EigenResult {
    EigenResult::new(n, 0, 0, 0.0, Source::ClosedForm, 0.0)
}

fn branch(spec: &ProblemSpec, ell: u32, count: usize, convention: MatrixConvention) -> Result<Vec<EigenResult>> {
    match spec.geometry {
        Geometry::Ball | Geometry::PuncturedBall => ball_eigenvalues(spec.n, ell, spec.gamma, count),
        Geometry::Annulus(a) => annulus_eigenvalues(spec.n, ell, spec.gamma, a, count, convention),
    }
}

/// First `k_max` eigenvalues, starting with the constant mode `λ₁ = 0`.
///
/// Branches are added in increasing ℓ. The loop stops at the first `ℓ ≥ 1`
/// whose smallest eigenvalue exceeds the current `k_max`-th entry; reaching
/// `ell_cap` first attaches a truncation warning. Punctured balls use the
/// ball path.
pub fn assemble_spectrum(spec: &ProblemSpec, k_max: usize, ell_cap: u32) -> Result<SpectrumTable> {
    assemble_spectrum_with(spec, k_max, ell_cap, MatrixConvention::Physical)
}

pub fn assemble_spectrum_with(
    spec: &ProblemSpec,
    k_max: usize,
    ell_cap: u32,
    convention: MatrixConvention,
) -> Result<SpectrumTable> {
    spec.validate()?;
    if k_max < 1 {
        return Err(Error::Argument("k_max must be at least 1".into()));
    }
    let n = spec.n;
    let mut entries = vec![constant_mode(n)];
    let mut warnings = Vec::new();
    let mut certified = false;
    let mut ell_examined = 0;
    for ell in 0..=ell_cap {
        ell_examined = ell;
        let mult = crate::problem::multiplicity(n, ell) as usize;
        let count = k_max.div_ceil(mult);
        let roots = branch(spec, ell, count, convention)?;
        if ell >= 1 && entries.len() >= k_max {
            if let Some(first) = roots.first() {
                if first.lambda4 > entries[k_max - 1].lambda4 {
                    certified = true;
                    break;
                }
            }
        }
        for r in roots {
            for _ in 0..mult {
                entries.push(r);
            }
        }
        entries.sort_by(|a, b| {
            a.lambda4
                .total_cmp(&b.lambda4)
                .then(a.ell.cmp(&b.ell))
                .then(a.k.cmp(&b.k))
        });
    }
    if !certified {
        warnings.push(format!(
            "ell_cap = {ell_cap} reached before the ordering of the first {k_max} entries was certified"
        ));
    }
    entries.truncate(k_max);
    Ok(SpectrumTable {
        spec: *spec,
        convention,
        entries,
        ell_examined,
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// `λ_k` increased between consecutive grid values.
    LambdaIncreasing,
    /// `γλ_k` decreased between consecutive grid values.
    GammaLambdaDecreasing,
    /// `λ_k(γ) > λ_k(0)`.
    AboveNeumann,
    /// `γλ_k(γ) > σ_k`, the Steklov eigenvalue.
    AboveSteklov,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::LambdaIncreasing => "lambda-increasing",
            ViolationKind::GammaLambdaDecreasing => "gamma-lambda-decreasing",
            ViolationKind::AboveNeumann => "above-gamma-zero",
            ViolationKind::AboveSteklov => "above-steklov",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// 1-based position in the spectrum.
    pub k: usize,
    pub gamma: Coupling,
    pub value: f64,
    pub bound: f64,
}

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub gamma: Coupling,
    /// `λ_k⁴(γ)`; zero at `γ = ∞`.
    pub lambda4: Vec<f64>,
    /// `γλ_k⁴(γ)`; the Steklov eigenvalue `σ_k` at `γ = ∞`.
    pub gamma_lambda4: Vec<f64>,
    pub entries: Vec<EigenResult>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

pub const SWEEP_RTOL: f64 = 1e-9;

fn exceeds(value: f64, bound: f64) -> bool {
    value > bound + SWEEP_RTOL * bound.abs().max(value.abs()) + 1e-300
}

/// Spectra over an ascending γ grid with the monotonicity checks attached.
///
/// Checked per entry `k`, all to `1e−9` relative: `λ_k` non-increasing,
/// `γλ_k` non-decreasing, `λ_k(γ) ≤ λ_k(0)` and `γλ_k(γ) ≤ σ_k`. The last
/// needs the Steklov spectrum and is skipped with a warning for annuli.
/// Grid points run in parallel; rows keep grid order.
pub fn gamma_sweep(template: &ProblemSpec, gammas: &[Coupling], k_max: usize, ell_cap: u32) -> Result<SweepTable> {
    template.validate()?;
    for w in gammas.windows(2) {
        let ok = match (w[0], w[1]) {
            (Coupling::Finite(a), Coupling::Finite(b)) => a < b,
            (Coupling::Finite(_), Coupling::Infinite) => true,
            _ => false,
        };
        if !ok {
            return Err(Error::Argument(
                "gamma grid must be strictly ascending with inf only last".into(),
            ));
        }
    }
    for g in gammas {
        g.validate()?;
    }
    let at = |g: Coupling| -> Result<SpectrumTable> {
        let spec = ProblemSpec { gamma: g, ..*template };
        assemble_spectrum(&spec, k_max, ell_cap)
    };
    let mut tables: Vec<Result<SpectrumTable>> = gammas.par_iter().map(|&g| at(g)).collect();
    let mut warnings = Vec::new();
    let mut rows = Vec::with_capacity(gammas.len());
    for (g, t) in gammas.iter().zip(tables.drain(..)) {
        let t = t?;
        for w in &t.warnings {
            warnings.push(format!("gamma = {g}: {w}"));
        }
        let (lambda4, gamma_lambda4) = match g {
            Coupling::Finite(gv) => (t.lambda4(), t.lambda4().iter().map(|l| gv * l).collect()),
            Coupling::Infinite => (vec![0.0; t.entries.len()], t.lambda4()),
        };
        rows.push(SweepRow {
            gamma: *g,
            lambda4,
            gamma_lambda4,
            entries: t.entries,
        });
    }

    let neumann = match gammas.first() {
        Some(Coupling::Finite(g)) if *g == 0.0 => rows[0].lambda4.clone(),
        _ => at(Coupling::Finite(0.0))?.lambda4(),
    };
    let steklov = match template.geometry {
        Geometry::Annulus(_) => {
            warnings.push("annulus sweep: the Steklov bound is not checked (no closed form at gamma = inf)".into());
            None
        }
        _ => match gammas.last() {
            Some(Coupling::Infinite) => Some(rows[rows.len() - 1].gamma_lambda4.clone()),
            _ => Some(at(Coupling::Infinite)?.lambda4()),
        },
    };

    let mut violations = Vec::new();
    let finite: Vec<&SweepRow> = rows.iter().filter(|r| !r.gamma.is_infinite()).collect();
    for pair in finite.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        for k in 0..lo.lambda4.len().min(hi.lambda4.len()) {
            if exceeds(hi.lambda4[k], lo.lambda4[k]) {
                violations.push(Violation {
                    kind: ViolationKind::LambdaIncreasing,
                    k: k + 1,
                    gamma: hi.gamma,
                    value: hi.lambda4[k],
                    bound: lo.lambda4[k],
                });
            }
            if exceeds(lo.gamma_lambda4[k], hi.gamma_lambda4[k]) {
                violations.push(Violation {
                    kind: ViolationKind::GammaLambdaDecreasing,
                    k: k + 1,
                    gamma: hi.gamma,
                    value: hi.gamma_lambda4[k],
                    bound: lo.gamma_lambda4[k],
                });
            }
        }
    }
    for row in &finite {
        for (k, &l) in row.lambda4.iter().enumerate() {
            if let Some(&b) = neumann.get(k) {
                if exceeds(l, b) {
                    violations.push(Violation {
                        kind: ViolationKind::AboveNeumann,
                        k: k + 1,
                        gamma: row.gamma,
                        value: l,
                        bound: b,
                    });
                }
            }
            if let Some(s) = steklov.as_ref().and_then(|s| s.get(k)) {
                if exceeds(row.gamma_lambda4[k], *s) {
                    violations.push(Violation {
                        kind: ViolationKind::AboveSteklov,
                        k: k + 1,
                        gamma: row.gamma,
                        value: row.gamma_lambda4[k],
                        bound: *s,
                    });
                }
            }
        }
    }
    Ok(SweepTable {
        rows,
        violations,
        warnings,
    })
}

/// `count` points spaced evenly in `log γ` over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<Coupling> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| {
            let t = if count == 1 { 0.0 } else { i as f64 / (count - 1) as f64 };
            Coupling::Finite((a + (b - a) * t).exp())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_entry_is_the_constant_and_next_is_dipolar() {
        for g in [
            Coupling::Finite(0.0),
            Coupling::Finite(0.3),
            Coupling::Finite(5.0),
            Coupling::Infinite,
        ] {
            let t = assemble_spectrum(&ProblemSpec::ball(3, g).unwrap(), 8, 12).unwrap();
            assert_eq!(t.entries[0].lambda4, 0.0);
            assert_eq!(t.entries[1].ell, 1, "gamma = {g}");
            assert!(t.warnings.is_empty());
            assert!(t.entries.windows(2).all(|w| w[0].lambda4 <= w[1].lambda4));
        }
    }

    #[test]
    fn multiplicities_repeat_entries() {
        let t = assemble_spectrum(&ProblemSpec::ball(3, Coupling::Infinite).unwrap(), 4, 10).unwrap();
        // σ = 0, then ℓ=1 (λ⁴ = 5) three times
        assert_eq!(t.lambda4(), vec![0.0, 5.0, 5.0, 5.0]);
    }

    #[test]
    fn punctured_ball_matches_ball() {
        let g = Coupling::Finite(0.7);
        let a = assemble_spectrum(&ProblemSpec::ball(2, g).unwrap(), 10, 12).unwrap();
        let b = assemble_spectrum(&ProblemSpec::new(2, g, Geometry::PuncturedBall).unwrap(), 10, 12).unwrap();
        assert_eq!(a.entries, b.entries);
    }

    #[test]
    fn tight_ell_cap_warns() {
        let t = assemble_spectrum(&ProblemSpec::ball(2, Coupling::Finite(1.0)).unwrap(), 30, 1).unwrap();
        assert_eq!(t.warnings.len(), 1);
    }

    #[test]
    fn sweep_is_monotone() {
        let spec = ProblemSpec::ball(2, Coupling::Finite(1.0)).unwrap();
        let mut grid = log_grid(1e-2, 1e2, 8);
        grid.push(Coupling::Infinite);
        let t = gamma_sweep(&spec, &grid, 6, 12).unwrap();
        assert!(t.violations.is_empty(), "{:?}", t.violations);
        assert_eq!(t.rows.len(), 9);
        assert!(t.rows.iter().all(|r| r.lambda4[0] == 0.0));
    }

    #[test]
    fn unsorted_grid_is_rejected() {
        let spec = ProblemSpec::ball(2, Coupling::Finite(1.0)).unwrap();
        let grid = [Coupling::Finite(1.0), Coupling::Finite(0.5)];
        assert!(gamma_sweep(&spec, &grid, 3, 5).is_err());
    }
}
