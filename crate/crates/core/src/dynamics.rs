//! Eigen-expansion of the dynamic-boundary problem
//! `∂_t v = −Δ²v`, `∂_νv = 0`, `γ∂_t v = ∂_ν(Δv)` in one angular channel.
//!
//! Each eigenmode decays as `e^{−λ⁴t}`; the constant mode is conserved.

use crate::annulus::{annulus_eigenvalues, eigenfunction_annulus, MatrixConvention};
use crate::ball::{ball_eigenvalues, eigenfunction_ball};
use crate::eigenfunction::{l2_gamma_inner, radial_rule, RadialEigenfunction};
use crate::problem::{EigenResult, Geometry, ProblemSpec, Source};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Mode {
    pub result: EigenResult,
    /// Unit-norm profile in `L²_γ`.
    pub profile: RadialEigenfunction,
    pub coefficient: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState {
    pub spec: ProblemSpec,
    pub ell: u32,
    pub modes: Vec<Mode>,
    pub t: f64,
}

/// Result of [`project`]: the state and the `L²_γ` norm of `v₀ − Σc_ku_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub state: SpectralState,
    pub residual: f64,
}

/// The first `mode_count` normalised eigenmodes of angular order `ℓ`,
/// including the constant mode for `ℓ = 0`.
pub fn eigenmodes(spec: &ProblemSpec, ell: u32, mode_count: usize) -> Result<Vec<(EigenResult, RadialEigenfunction)>> {
    spec.validate()?;
    if mode_count < 1 {
        return Err(Error::Argument("mode_count must be at least 1".into()));
    }
    let n = spec.n;
    let mut out = Vec::with_capacity(mode_count);
    if ell == 0 {
        let c = EigenResult::new(n, 0, 0, 0.0, Source::ClosedForm, 0.0);
        let u = match spec.geometry {
            Geometry::Annulus(a) => eigenfunction_annulus(n, 0, spec.gamma, a, 0.0)?,
            _ => eigenfunction_ball(n, 0, spec.gamma, 0.0)?,
        };
        out.push((c, u));
    }
    let want = mode_count - out.len();
    if want == 0 {
        return Ok(out);
    }
    match spec.geometry {
        Geometry::Annulus(a) => {
            for r in annulus_eigenvalues(n, ell, spec.gamma, a, want, MatrixConvention::Physical)? {
                out.push((r, eigenfunction_annulus(n, ell, spec.gamma, a, r.lambda)?));
            }
        }
        _ => {
            for r in ball_eigenvalues(n, ell, spec.gamma, want)? {
                out.push((r, eigenfunction_ball(n, ell, spec.gamma, r.lambda)?));
            }
        }
    }
    Ok(out)
}

/// `|v′|` at the boundary radii by centred/one-sided differences, relative
/// to the largest sampled `|v|`.
fn neumann_residual<F: Fn(f64) -> f64>(v: &F, lo: f64) -> f64 {
    let h = 1e-5;
    let d1 = (3.0 * v(1.0) - 4.0 * v(1.0 - h) + v(1.0 - 2.0 * h)) / (2.0 * h);
    let mut worst = d1.abs();
    if lo > 0.0 {
        let da = (-3.0 * v(lo) + 4.0 * v(lo + h) - v(lo + 2.0 * h)) / (2.0 * h);
        worst = worst.max(da.abs());
    }
    let scale = (0..=64)
        .map(|i| v(lo + (1.0 - lo) * f64::from(i) / 64.0).abs())
        .fold(0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    worst / scale
}

/// Expands `v0` in the first `mode_count` eigenmodes:
/// `c_k = ⟨v₀, u_k⟩ / ⟨u_k, u_k⟩` in `L²_γ`.
pub fn project<F: Fn(f64) -> f64>(v0: F, spec: &ProblemSpec, ell: u32, mode_count: usize) -> Result<Projection> {
    let lo = spec.geometry.inner_radius().unwrap_or(0.0);
    let nr = neumann_residual(&v0, lo);
    if nr > 1e-4 {
        return Err(Error::Precondition(format!(
            "initial profile violates the Neumann condition (relative |v'| = {nr:e})"
        )));
    }
    let mut modes = Vec::new();
    for (result, profile) in eigenmodes(spec, ell, mode_count)? {
        let num = l2_gamma_inner(spec, |r| Ok(v0(r)), |r| profile.value(r))?;
        let den = profile.norm_squared()?;
        modes.push(Mode {
            result,
            profile,
            coefficient: num / den,
        });
    }
    let state = SpectralState {
        spec: *spec,
        ell,
        modes,
        t: 0.0,
    };
    let diff = |r: f64| -> Result<f64> { Ok(v0(r) - state.value(r)?) };
    let residual = l2_gamma_inner(spec, diff, diff)?.max(0.0).sqrt();
    Ok(Projection { state, residual })
}

/// Advances the state by `t`: `c_k ← c_k e^{−λ_k⁴ t}`.
pub fn evolve(state: &SpectralState, t: f64) -> Result<SpectralState> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Argument(format!("time step must be finite and >= 0, got {t}")));
    }
    let mut next = state.clone();
    for m in &mut next.modes {
        m.coefficient *= (-m.result.lambda4 * t).exp();
    }
    next.t += t;
    Ok(next)
}

impl SpectralState {
    pub fn value(&self, r: f64) -> Result<f64> {
        let mut s = 0.0;
        for m in &self.modes {
            if m.coefficient != 0.0 {
                s += m.coefficient * m.profile.value(r)?;
            }
        }
        Ok(s)
    }

    pub fn sample(&self, grid: &[f64]) -> Result<Vec<f64>> {
        grid.iter().map(|&r| self.value(r)).collect()
    }

    /// `⟨v, 1⟩_{L²_γ}`, the conserved mass. Zero for `ℓ ≥ 1`, where the
    /// spherical harmonic integrates to zero.
    pub fn mass(&self) -> Result<f64> {
        if self.ell != 0 {
            return Ok(0.0);
        }
        l2_gamma_inner(&self.spec, |r| self.value(r), |_| Ok(1.0))
    }

    /// `𝒬(v, v) = ∫ (Δ_ℓv)² r^{n−1} dr` by quadrature of the profile.
    pub fn energy(&self) -> Result<f64> {
        let rule = radial_rule(&self.spec.geometry, 8, 16);
        let w = self.spec.n as i32 - 1;
        let mut s = 0.0;
        for (&r, &wt) in rule.nodes.iter().zip(&rule.weights) {
            let mut lap = 0.0;
            for m in &self.modes {
                if m.coefficient != 0.0 {
                    lap += m.coefficient * m.profile.eval(r)?.lap;
                }
            }
            s += wt * lap * lap * r.powi(w);
        }
        Ok(s)
    }
}

/// Spectral state built directly from given coefficients on the first modes.
pub fn state_from_coefficients(spec: &ProblemSpec, ell: u32, coefficients: &[f64]) -> Result<SpectralState> {
    let modes = eigenmodes(spec, ell, coefficients.len())?
        .into_iter()
        .zip(coefficients)
        .map(|((result, profile), &coefficient)| Mode {
            result,
            profile,
            coefficient,
        })
        .collect();
    Ok(SpectralState {
        spec: *spec,
        ell,
        modes,
        t: 0.0,
    })
}
