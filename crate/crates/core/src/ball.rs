//! The unit ball: secular function, eigenvalues per angular order,
//! eigenfunctions and the `γ = 0` / `γ = ∞` limits.

use std::f64::consts::PI;

use crate::eigenfunction::{RadialBasis, RadialEigenfunction};
use crate::linalg::{self, Matrix};
use crate::problem::{validate_dimension, Coupling, EigenResult, ProblemSpec, Source};
use crate::roots::{brent, scan_roots, ScanParams};
use crate::specfun::{ultra_and_next, zeros_of_jprime, BesselOrder, Kind};
use crate::{Error, Result};

/// Scan start, step and refinement tolerance for secular roots.
pub const SCAN_START: f64 = 1e-3;
pub const SCAN_STEP: f64 = 0.05;
pub const ROOT_RTOL: f64 = 1e-14;

/// Ingredients of the secular function at one λ.
#[derive(Debug, Clone, Copy)]
struct Parts {
    jp: f64,
    ip: f64,
    /// `j′ĩ − ĩ′j = −(j_{ℓ+1}ĩ_ℓ + ĩ_{ℓ+1}j_ℓ)`
    cross: f64,
    /// `|j_{ℓ+1}ĩ_ℓ| + |ĩ_{ℓ+1}j_ℓ|`
    cross_scale: f64,
    /// `|ℓj_ℓ/λ| + |j_{ℓ+1}| + |j_ℓ|`, the size of `j′` and its neighbours
    jp_scale: f64,
}

fn parts(n: u32, ell: u32, lambda: f64) -> Result<Parts> {
    let (j, j1) = ultra_and_next(Kind::J, n, ell, lambda)?;
    let (i, i1) = ultra_and_next(Kind::I, n, ell, lambda)?;
    let l = f64::from(ell) / lambda;
    Ok(Parts {
        jp: l * j - j1,
        ip: l * i + i1,
        cross: -(j1 * i + i1 * j),
        cross_scale: (j1 * i).abs() + (i1 * j).abs(),
        jp_scale: (l * j).abs() + j1.abs() + j.abs(),
    })
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!(
            "lambda must be positive and finite, got {lambda}"
        )));
    }
    Ok(())
}

fn check_gamma(gamma: f64) -> Result<()> {
    Coupling::Finite(gamma).validate()
}

/// `e^{−λ}Φ_ℓ(λ) = 2j′_ℓĩ′_ℓ + γλ(j′_ℓĩ_ℓ − ĩ′_ℓj_ℓ)` with `ĩ = e^{−λ}i`.
///
/// Same zeros and sign as `Φ_ℓ`.
pub fn secular_phi(n: u32, ell: u32, gamma: f64, lambda: f64) -> Result<f64> {
    validate_dimension(n)?;
    check_gamma(gamma)?;
    check_lambda(lambda)?;
    let p = parts(n, ell, lambda)?;
    Ok(2.0 * p.jp * p.ip + gamma * lambda * p.cross)
}

/// `|Φ|` divided by the size of the terms it sums; 0 at an exact root.
fn relative_residual(n: u32, ell: u32, gamma: f64, lambda: f64) -> Result<f64> {
    let p = parts(n, ell, lambda)?;
    let phi = 2.0 * p.jp * p.ip + gamma * lambda * p.cross;
    let scale = 2.0 * (p.ip * p.jp_scale).abs() + gamma * lambda * p.cross_scale;
    Ok(if scale > 0.0 { phi.abs() / scale } else { 0.0 })
}

/// Secular function of the ball of radius `radius` with coupling `gamma`,
/// as a function of the fourth root `mu` of its eigenvalue.
///
/// Substituting `z = μR` gives `Φ_ℓ(z)` with coupling `γ/R`.
pub fn secular_phi_radius(n: u32, ell: u32, gamma: f64, mu: f64, radius: f64) -> Result<f64> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Argument(format!("radius must be positive, got {radius}")));
    }
    secular_phi(n, ell, gamma / radius, mu * radius)
}

/// Closed-form Steklov eigenvalue `ℓ²(2ℓ+n)` of angular order `ℓ`.
pub fn steklov_eigenvalue(n: u32, ell: u32) -> f64 {
    let l = f64::from(ell);
    l * l * (2.0 * l + f64::from(n))
}

/// Upper end of the λ-scan for `count` roots of order `ν`.
pub(crate) fn scan_cap(count: usize, nu: f64) -> f64 {
    60f64.max(4.0 * count as f64 * PI) + nu
}

/// First `count` positive eigenvalues of angular order `ℓ`, ascending.
///
/// `γ = 0` uses the zeros of `j′_ℓ`; `γ = ∞` returns the single Steklov
/// eigenvalue `ℓ²(2ℓ+n)` for `ℓ ≥ 1` and nothing for `ℓ = 0`. In that case
/// `lambda4` holds the Steklov eigenvalue.
pub fn ball_eigenvalues(n: u32, ell: u32, gamma: Coupling, count: usize) -> Result<Vec<EigenResult>> {
    validate_dimension(n)?;
    gamma.validate()?;
    if count < 1 {
        return Err(Error::Argument("count must be at least 1".into()));
    }
    let g = match gamma {
        Coupling::Infinite => {
            if ell == 0 {
                return Ok(Vec::new());
            }
            return Ok(vec![EigenResult::from_lambda4(
                n,
                ell,
                1,
                steklov_eigenvalue(n, ell),
                Source::ClosedForm,
            )]);
        }
        Coupling::Finite(g) => g,
    };
    let order = BesselOrder::new(n, ell)?;
    let xs: Vec<f64> = if g == 0.0 {
        zeros_of_jprime(order, count)?
    } else {
        let params = ScanParams::new(SCAN_START, SCAN_STEP, scan_cap(count, order.nu()), ROOT_RTOL);
        scan_roots(|x| secular_phi(n, ell, g, x), params, count, "ball_eigenvalues")?
            .into_iter()
            .map(|r| r.x)
            .collect()
    };
    xs.into_iter()
        .enumerate()
        .map(|(k, x)| {
            let res = relative_residual(n, ell, g, x)?;
            Ok(EigenResult::new(n, ell, k as u32 + 1, x, Source::Secular, res))
        })
        .collect()
}

/// `Ψ(λ) = −2/(ĩ/ĩ′ − j/j′) = −2ĩ′j′/(ĩj′ − ĩ′j)`.
///
/// Positive roots satisfy `γλ = Ψ(λ)`. Zeros of `j′_ℓ` are removable
/// points where `Ψ = 0`; the poles are the zeros of `ĩj′ − ĩ′j`, reported
/// as [`Error::Pole`] when the denominator is below `1e−13` of its terms.
pub fn fixed_point_psi(n: u32, ell: u32, lambda: f64) -> Result<f64> {
    validate_dimension(n)?;
    check_lambda(lambda)?;
    let p = parts(n, ell, lambda)?;
    let den = p.cross;
    if den.abs() <= 1e-13 * p.cross_scale {
        return Err(Error::Pole { n, ell, lambda });
    }
    Ok(-2.0 * p.ip * p.jp / den)
}

/// Poles of `Ψ` in `(0, lambda_max]`: the sign changes of `ĩj′ − ĩ′j`.
pub fn psi_poles(n: u32, ell: u32, lambda_max: f64) -> Result<Vec<f64>> {
    validate_dimension(n)?;
    check_lambda(lambda_max)?;
    let cross = |x: f64| parts(n, ell, x).map(|p| p.cross);
    let mut out = Vec::new();
    let mut x0 = SCAN_START;
    let mut f0 = cross(x0)?;
    while x0 < lambda_max {
        let x1 = (x0 + SCAN_STEP).min(lambda_max);
        let f1 = cross(x1)?;
        if f0 != 0.0 && f0.signum() != f1.signum() {
            out.push(brent(cross, x0, x1, ROOT_RTOL * x1, 200)?);
        }
        x0 = x1;
        f0 = f1;
    }
    Ok(out)
}

/// Normalised radial eigenfunction for a root `lambda` of `Φ_ℓ`.
///
/// `u = ĩ′(λ) j_ℓ(λr) − j′(λ) e^{−λ}i_ℓ(λr)`, a positive multiple of
/// `i′(λ)j(λr) − j′(λ)i(λr)`. `λ = 0` gives the constant mode and `γ = ∞`
/// the polynomial `(ℓ+2)r^ℓ − ℓr^{ℓ+2}`. Under `γ = ∞` the profile is
/// normalised on the boundary.
pub fn eigenfunction_ball(n: u32, ell: u32, gamma: Coupling, lambda: f64) -> Result<RadialEigenfunction> {
    let spec = ProblemSpec::ball(n, gamma)?;
    if lambda == 0.0 {
        if ell != 0 {
            return Err(Error::Precondition(format!(
                "lambda = 0 is not an eigenvalue for ell = {ell}"
            )));
        }
        return RadialEigenfunction::new(RadialBasis::Constant(1.0), 0.0, spec, 0).normalise();
    }
    match gamma {
        Coupling::Infinite => {
            if ell == 0 {
                return Err(Error::Precondition("no positive Steklov eigenvalue for ell = 0".into()));
            }
            let l = f64::from(ell);
            let mut cs = vec![0.0; ell as usize + 3];
            cs[ell as usize] = l + 2.0;
            cs[ell as usize + 2] = -l;
            let lam = steklov_eigenvalue(n, ell).powf(0.25);
            RadialEigenfunction::new(RadialBasis::Polynomial(cs), lam, spec, ell).normalise()
        }
        Coupling::Finite(g) => {
            check_lambda(lambda)?;
            let res = relative_residual(n, ell, g, lambda)?;
            if res > 1e-8 {
                return Err(Error::Precondition(format!(
                    "lambda = {lambda} is not a root of the secular function (relative residual {res:e})"
                )));
            }
            let p = parts(n, ell, lambda)?;
            let basis = RadialBasis::BesselBall { a_j: p.ip, a_i: -p.jp };
            RadialEigenfunction::new(basis, lambda, spec, ell).normalise()
        }
    }
}

/// Consecutive differences of the first `count` zeros of `j′_ℓ`.
pub fn gap_diagnostics(n: u32, ell: u32, count: usize) -> Result<Vec<f64>> {
    if count < 6 {
        return Err(Error::Argument(format!("gap diagnostics need count >= 6, got {count}")));
    }
    let z = zeros_of_jprime(BesselOrder::new(n, ell)?, count)?;
    Ok(z.windows(2).map(|w| w[1] - w[0]).collect())
}

/// Boundary matrix of `λ = 0` solutions regular at the origin,
/// `{r^ℓ, r^{ℓ+2}}`: rows `u′(1)` and `½(Δ_ℓu)′(1)`.
pub fn zero_mode_matrix_ball(n: u32, ell: u32) -> Result<Matrix> {
    validate_dimension(n)?;
    let l = f64::from(ell);
    let c = 2.0 * l + f64::from(n);
    Ok(Matrix::from_rows(&[[l, l + 2.0], [0.0, c * l]]))
}

/// Dimension of the `λ = 0` eigenspace for angular order `ℓ` on the ball.
pub fn zero_mode_nullity_ball(n: u32, ell: u32) -> Result<usize> {
    let m = zero_mode_matrix_ball(n, ell)?;
    Ok(2 - linalg::rank(&m, 1e-12))
}
