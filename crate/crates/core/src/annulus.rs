//! The annulus `a < |x| < 1`: the 4×4 boundary determinant, eigenfunctions,
//! zero modes, small-λ limits and the ℓ=0 bifurcation threshold.
//!
//! Two sign conventions for the third-order rows are supported. `Physical`
//! follows from the boundary condition with outward normals (`−r` at `r=a`);
//! `AsPrinted` is the same matrix with `γ → −γ`, which is the form the
//! closed-form small-λ limit and the threshold `F(a) = γn` come from.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::eigenfunction::{RadialBasis, RadialEigenfunction};
use crate::linalg::{self, Matrix};
use crate::problem::{validate_dimension, validate_inner_radius, Coupling, EigenResult, ProblemSpec, Source};
use crate::roots::{brent, scan_roots, ScanParams};
use crate::specfun::{ultra_with_deriv, BesselOrder, Kind};
use crate::{Error, Result};

/// Lower end of the λ-scan; `(0, λ_min)` is covered by [`det_zero_limit`].
pub const LAMBDA_MIN: f64 = 1e-2;
pub const SCAN_STEP: f64 = 0.05;
pub const ROOT_RTOL: f64 = 1e-14;
/// Largest ℓ compared by [`fundamental_mode_annulus`].
pub const FUNDAMENTAL_ELL_CAP: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatrixConvention {
    #[default]
    Physical,
    AsPrinted,
}

impl MatrixConvention {
    /// Multiplier applied to γ in the third-order rows.
    pub fn gamma_sign(self) -> f64 {
        match self {
            MatrixConvention::Physical => 1.0,
            MatrixConvention::AsPrinted => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MatrixConvention::Physical => "physical",
            MatrixConvention::AsPrinted => "printed",
        }
    }
}

impl fmt::Display for MatrixConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MatrixConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "physical" => Ok(MatrixConvention::Physical),
            "printed" | "as-printed" => Ok(MatrixConvention::AsPrinted),
            other => Err(Error::Argument(format!(
                "unknown matrix convention {other:?} (expected physical or printed)"
            ))),
        }
    }
}

/// Column-scaled boundary matrix `W_ℓ(λ)`.
///
/// Rows: `u′(a) = 0`, `u′(1) = 0`, third-order condition at `a`, at `1`.
/// Columns: `j_ℓ, y_ℓ, i_ℓ, k_ℓ`, the last two multiplied by
/// `column_scales = (1, 1, e^{−λ}, e^{λa})`.
#[derive(Debug, Clone, PartialEq)]
pub struct SecularMatrix {
    pub entries: Matrix,
    pub column_scales: [f64; 4],
}

impl SecularMatrix {
    pub fn determinant(&self) -> f64 {
        linalg::determinant(&self.entries)
    }

    /// `|det| / Π‖row‖`, the scale-free size of the determinant.
    pub fn relative_determinant(&self) -> f64 {
        let mut scale = 1.0;
        for i in 0..4 {
            scale *= self.entries.row(i).iter().map(|x| x * x).sum::<f64>().sqrt();
        }
        let d = self.determinant().abs();
        if scale > 0.0 {
            d / scale
        } else {
            d
        }
    }
}

fn check_args(n: u32, a: f64, lambda: f64) -> Result<()> {
    validate_dimension(n)?;
    validate_inner_radius(a)?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!(
            "lambda must be positive and finite, got {lambda}"
        )));
    }
    Ok(())
}

fn finite_gamma(gamma: Coupling, op: &str) -> Result<f64> {
    gamma.validate()?;
    gamma
        .finite()
        .ok_or_else(|| Error::Argument(format!("{op} needs a finite gamma; inf has no annulus closed form")))
}

/// Builds the scaled `W_ℓ(λ)`.
pub fn secular_matrix(
    n: u32,
    ell: u32,
    gamma: f64,
    a: f64,
    lambda: f64,
    convention: MatrixConvention,
) -> Result<SecularMatrix> {
    check_args(n, a, lambda)?;
    Coupling::Finite(gamma).validate()?;
    let overflow = |e: Error| match e {
        Error::Numerical { .. } => Error::Domain(format!(
            "lambda = {lambda} is too small for a = {a}, ell = {ell}: scaled y/k entries overflow; \
             use lambda >= lambda_min = {LAMBDA_MIN} and det_zero_limit below it"
        )),
        other => other,
    };
    let g = convention.gamma_sign() * gamma * lambda;
    let za = lambda * a;
    let (ja, dja) = ultra_with_deriv(Kind::J, n, ell, za).map_err(overflow)?;
    let (ya, dya) = ultra_with_deriv(Kind::Y, n, ell, za).map_err(overflow)?;
    let (ia, dia) = ultra_with_deriv(Kind::I, n, ell, za).map_err(overflow)?;
    let (ka, dka) = ultra_with_deriv(Kind::K, n, ell, za).map_err(overflow)?;
    let (j1, dj1) = ultra_with_deriv(Kind::J, n, ell, lambda).map_err(overflow)?;
    let (y1, dy1) = ultra_with_deriv(Kind::Y, n, ell, lambda).map_err(overflow)?;
    let (i1, di1) = ultra_with_deriv(Kind::I, n, ell, lambda).map_err(overflow)?;
    let (k1, dk1) = ultra_with_deriv(Kind::K, n, ell, lambda).map_err(overflow)?;
    // e^{−λ}i(λa) = ĩ(λa)e^{−λ(1−a)}, e^{λa}k(λ) = k̃(λ)e^{−λ(1−a)}
    let w = (-lambda * (1.0 - a)).exp();
    let (ia, dia) = (ia * w, dia * w);
    let (k1, dk1) = (k1 * w, dk1 * w);
    let entries = Matrix::from_rows(&[
        [dja, dya, dia, dka],
        [dj1, dy1, di1, dk1],
        [dja + g * ja, dya + g * ya, -dia + g * ia, -dka + g * ka],
        [dj1 - g * j1, dy1 - g * y1, -di1 - g * i1, -dk1 - g * k1],
    ]);
    if (0..4).any(|i| entries.row(i).iter().any(|x| !x.is_finite())) {
        return Err(overflow(Error::numerical("secular_matrix", "")));
    }
    Ok(SecularMatrix {
        entries,
        column_scales: [1.0, 1.0, (-lambda).exp(), (lambda * a).exp()],
    })
}

/// Determinant of the column-scaled `W_ℓ(λ)`; equals `e^{−λ(1−a)}·det W_ℓ(λ)`.
pub fn secular_det(n: u32, ell: u32, gamma: f64, a: f64, lambda: f64, convention: MatrixConvention) -> Result<f64> {
    Ok(secular_matrix(n, ell, gamma, a, lambda, convention)?.determinant())
}

fn scan_cap(count: usize, a: f64, nu: f64) -> f64 {
    60f64.max(4.0 * count as f64 * PI / (1.0 - a)) + nu
}

/// A root of `det W_0` in `(0, λ_min)`, detected by comparing the sign at
/// `λ_min` with the sign of the small-λ limit.
fn root_below_lambda_min(n: u32, gamma: f64, a: f64, convention: MatrixConvention, f_min: f64) -> Result<Option<f64>> {
    let limit = det_zero_limit(n, gamma, a, convention)?;
    if limit == 0.0 || limit.signum() == f_min.signum() {
        return Ok(None);
    }
    let f = |x: f64| secular_det(n, 0, gamma, a, x, convention);
    let mut hi = LAMBDA_MIN;
    let mut lo = 0.5 * hi;
    while lo > 1e-6 {
        let fl = f(lo)?;
        if fl.signum() == limit.signum() {
            let x = brent(f, lo, hi, ROOT_RTOL * lo, 200)?;
            return Ok(Some(x));
        }
        hi = lo;
        lo *= 0.5;
    }
    Ok(None)
}

/// First `count` positive roots of `det W_ℓ` in increasing λ.
///
/// The scan starts at [`LAMBDA_MIN`]. For `ℓ = 0` a root below it is
/// recovered when the determinant at `λ_min` and [`det_zero_limit`]
/// disagree in sign.
pub fn annulus_eigenvalues(
    n: u32,
    ell: u32,
    gamma: Coupling,
    a: f64,
    count: usize,
    convention: MatrixConvention,
) -> Result<Vec<EigenResult>> {
    validate_dimension(n)?;
    validate_inner_radius(a)?;
    let g = finite_gamma(gamma, "annulus_eigenvalues")?;
    if count < 1 {
        return Err(Error::Argument("count must be at least 1".into()));
    }
    let order = BesselOrder::new(n, ell)?;
    let f = |x: f64| secular_det(n, ell, g, a, x, convention);
    let mut xs = Vec::with_capacity(count);
    if ell == 0 {
        let f_min = f(LAMBDA_MIN)?;
        if let Some(x) = root_below_lambda_min(n, g, a, convention, f_min)? {
            xs.push(x);
        }
    }
    if xs.len() < count {
        let params = ScanParams::new(LAMBDA_MIN, SCAN_STEP, scan_cap(count, a, order.nu()), ROOT_RTOL);
        let found = scan_roots(f, params, count - xs.len(), "annulus_eigenvalues")?;
        xs.extend(found.into_iter().map(|r| r.x));
    }
    xs.into_iter()
        .enumerate()
        .map(|(k, x)| {
            let res = secular_matrix(n, ell, g, a, x, convention)?.relative_determinant();
            Ok(EigenResult::new(n, ell, k as u32 + 1, x, Source::Secular, res))
        })
        .collect()
}

/// Null vector of a 4×4 matrix with one-dimensional kernel.
///
/// The entry with the largest cofactor is fixed to 1 and the complementary
/// 3×3 system is solved.
pub fn null_vector(w: &Matrix) -> Result<Vec<f64>> {
    let minor = |skip_r: usize, skip_c: usize| -> Matrix {
        let mut m = Matrix::zeros(3, 3);
        for (ri, r) in (0..4).filter(|&r| r != skip_r).enumerate() {
            for (ci, c) in (0..4).filter(|&c| c != skip_c).enumerate() {
                m[(ri, ci)] = w[(r, c)];
            }
        }
        m
    };
    let mut best = (0, 0, 0.0f64);
    for i in 0..4 {
        for j in 0..4 {
            let c = linalg::determinant(&minor(i, j)).abs();
            if c > best.2 {
                best = (i, j, c);
            }
        }
    }
    let (bi, bj, cmax) = best;
    let wn = w.norm();
    if !(cmax > 1e-13 * wn.powi(3)) {
        return Err(Error::Degenerate(format!(
            "largest 3x3 cofactor {cmax:e} is negligible against |W|^3 = {:e}; kernel dimension > 1",
            wn.powi(3)
        )));
    }
    let m = minor(bi, bj);
    let rhs: Vec<f64> = (0..4).filter(|&r| r != bi).map(|r| -w[(r, bj)]).collect();
    let sol = linalg::solve(&m, &rhs)?;
    let mut v = Vec::with_capacity(4);
    let mut it = sol.into_iter();
    for c in 0..4 {
        v.push(if c == bj { 1.0 } else { it.next().unwrap_or(0.0) });
    }
    let wv = w.matvec(&v);
    let res = wv.iter().map(|x| x * x).sum::<f64>().sqrt();
    let vn = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if res > 1e-8 * wn * vn {
        return Err(Error::Degenerate(format!(
            "null-vector residual {res:e} exceeds 1e-8 |W| |v| = {:e}",
            1e-8 * wn * vn
        )));
    }
    Ok(v)
}

/// Normalised radial eigenfunction of the physical problem at a root `lambda`.
///
/// `λ = 0` gives the constant profile.
pub fn eigenfunction_annulus(n: u32, ell: u32, gamma: Coupling, a: f64, lambda: f64) -> Result<RadialEigenfunction> {
    let spec = ProblemSpec::annulus(n, gamma, a)?;
    if lambda == 0.0 {
        if ell != 0 {
            return Err(Error::Precondition(format!(
                "lambda = 0 is not an eigenvalue for ell = {ell}"
            )));
        }
        return RadialEigenfunction::new(RadialBasis::Constant(1.0), 0.0, spec, 0).normalise();
    }
    let g = finite_gamma(gamma, "eigenfunction_annulus")?;
    let w = secular_matrix(n, ell, g, a, lambda, MatrixConvention::Physical)?;
    let rel = w.relative_determinant();
    if rel > 1e-8 {
        return Err(Error::Precondition(format!(
            "lambda = {lambda} is not a root of det W (relative determinant {rel:e})"
        )));
    }
    let v = null_vector(&w.entries)?;
    let basis = RadialBasis::BesselAnnulus {
        a: v[0],
        b: v[1],
        c: v[2],
        d: v[3],
    };
    RadialEigenfunction::new(basis, lambda, spec, ell).normalise()
}

/// One radial solution of `Δ_ℓ²φ = 0`: `r^β`, or `r^β log r` when `log`.
#[derive(Debug, Clone, Copy)]
struct ZeroBasis {
    beta: f64,
    log: bool,
}

impl ZeroBasis {
    /// `(φ′(r), ½(Δ_ℓφ)′(r))`.
    fn rows(self, n: u32, ell: u32, r: f64) -> (f64, f64) {
        let (nf, l) = (f64::from(n), f64::from(ell));
        let b = self.beta;
        let c = b * (b + nf - 2.0) - l * (l + nf - 2.0);
        if self.log {
            let lr = r.ln();
            let d = 2.0 * b + nf - 2.0;
            let du = r.powf(b - 1.0) * (b * lr + 1.0);
            let dlap = r.powf(b - 3.0) * ((b - 2.0) * (c * lr + d) + c);
            (du, 0.5 * dlap)
        } else {
            (b * r.powf(b - 1.0), 0.5 * c * (b - 2.0) * r.powf(b - 3.0))
        }
    }
}

/// The four solutions used for the `λ = 0` analysis, with logarithmic
/// replacements where powers coincide (n=2 with ℓ ∈ {0,1}, n=4 with ℓ=0).
fn zero_basis(n: u32, ell: u32) -> [ZeroBasis; 4] {
    let p = |beta: f64| ZeroBasis { beta, log: false };
    let lg = |beta: f64| ZeroBasis { beta, log: true };
    let (nf, l) = (f64::from(n), f64::from(ell));
    match (n, ell) {
        (2, 0) => [p(0.0), p(2.0), lg(0.0), lg(2.0)],
        (2, 1) => [p(1.0), p(3.0), p(-1.0), lg(1.0)],
        (4, 0) => [p(0.0), p(2.0), p(-2.0), lg(0.0)],
        _ => [p(l), p(2.0 - nf - l), p(l + 2.0), p(4.0 - nf - l)],
    }
}

/// Boundary matrix of the `λ = 0` solutions: rows `φ′(a)`, `φ′(1)`,
/// `½(Δ_ℓφ)′(a)`, `½(Δ_ℓφ)′(1)`. Independent of γ.
pub fn zero_mode_matrix(n: u32, ell: u32, a: f64) -> Result<Matrix> {
    validate_dimension(n)?;
    validate_inner_radius(a)?;
    let basis = zero_basis(n, ell);
    let mut m = Matrix::zeros(4, 4);
    for (c, b) in basis.iter().enumerate() {
        let (da, la) = b.rows(n, ell, a);
        let (d1, l1) = b.rows(n, ell, 1.0);
        m[(0, c)] = da;
        m[(1, c)] = d1;
        m[(2, c)] = la;
        m[(3, c)] = l1;
    }
    Ok(m)
}

pub fn zero_mode_determinant(n: u32, ell: u32, a: f64) -> Result<f64> {
    Ok(linalg::determinant(&zero_mode_matrix(n, ell, a)?))
}

/// `−(a^{ℓ−1} − a^{1−n−ℓ})² ℓ²(2ℓ+n)(2ℓ+n−4)(ℓ+n−2)²` for the power basis.
pub fn zero_mode_determinant_closed_form(n: u32, ell: u32, a: f64) -> f64 {
    let (nf, l) = (f64::from(n), f64::from(ell));
    let p = a.powf(l - 1.0) - a.powf(1.0 - nf - l);
    -p * p * l * l * (2.0 * l + nf) * (2.0 * l + nf - 4.0) * (l + nf - 2.0).powi(2)
}

pub fn zero_mode_rank(n: u32, ell: u32, a: f64) -> Result<usize> {
    Ok(linalg::rank(&zero_mode_matrix(n, ell, a)?, 1e-11))
}

/// Small-λ coefficient of `det W_0`: the limit itself for `n = 2` and the
/// prefactor of `λ^{−4s}` for `n > 2`,
///
/// `2(a^{2s+2} − 1)(a^{2s+2} + 2γ̂(s+1)a^{2s+1} + 2γ̂(s+1) − 1) / (πa^{4s+2}(s+1)²)`
///
/// with `γ̂ = γ` for `AsPrinted` and `γ̂ = −γ` for `Physical`.
pub fn det_zero_limit(n: u32, gamma: f64, a: f64, convention: MatrixConvention) -> Result<f64> {
    validate_dimension(n)?;
    validate_inner_radius(a)?;
    Coupling::Finite(gamma).validate()?;
    let g = -convention.gamma_sign() * gamma;
    let s = (f64::from(n) - 2.0) / 2.0;
    let p = a.powf(2.0 * s + 2.0);
    let t = 2.0 * g * (s + 1.0);
    Ok(2.0 * (p - 1.0) * (p + t * a.powf(2.0 * s + 1.0) + t - 1.0) / (PI * a.powf(4.0 * s + 2.0) * (s + 1.0).powi(2)))
}

/// Result of the threshold analysis `F(a) = (1 − aⁿ)/(1 + a^{n−1}) = σγn`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BifurcationReport {
    pub n: u32,
    pub gamma: f64,
    pub convention: MatrixConvention,
    pub exists: bool,
    pub a_star: Option<f64>,
    /// `|F(a_star) − σγn|`.
    pub residual: Option<f64>,
}

impl BifurcationReport {
    /// `F(a) − σγn`, positive below `a_star` and negative above.
    pub fn criterion_value_at(&self, a: f64) -> f64 {
        threshold_function(self.n, a) + self.convention.gamma_sign() * self.gamma * f64::from(self.n)
    }
}

/// `F(a) = (1 − aⁿ)/(1 + a^{n−1})`, strictly decreasing from 1 to 0 on (0,1).
pub fn threshold_function(n: u32, a: f64) -> f64 {
    (1.0 - a.powi(n as i32)) / (1.0 + a.powi(n as i32 - 1))
}

/// Inner radius where the ℓ=0 small-λ coefficient changes sign.
///
/// Under `AsPrinted` this solves `F(a) = γn` and exists iff `0 < γ < 1/n`;
/// under `Physical` the equation reads `F(a) = −γn` and has no solution.
pub fn bifurcation_threshold(n: u32, gamma: f64, convention: MatrixConvention) -> Result<BifurcationReport> {
    validate_dimension(n)?;
    Coupling::Finite(gamma).validate()?;
    let mut report = BifurcationReport {
        n,
        gamma,
        convention,
        exists: false,
        a_star: None,
        residual: None,
    };
    let target = -convention.gamma_sign() * gamma * f64::from(n);
    if !(target > 0.0 && target < 1.0) {
        return Ok(report);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if threshold_function(n, mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 {
            break;
        }
    }
    let a = 0.5 * (lo + hi);
    report.exists = true;
    report.a_star = Some(a);
    report.residual = Some((threshold_function(n, a) - target).abs());
    Ok(report)
}

/// Smallest positive eigenvalue over `ℓ ∈ {0, …, 6}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalMode {
    /// Winning angular orders; more than one when tied within 1e−9.
    pub ells: Vec<u32>,
    pub result: EigenResult,
    /// Smallest root of each examined ℓ.
    pub per_ell: Vec<EigenResult>,
}

impl FundamentalMode {
    pub fn ell(&self) -> u32 {
        self.ells[0]
    }
}

pub fn fundamental_mode_annulus(
    n: u32,
    gamma: Coupling,
    a: f64,
    convention: MatrixConvention,
) -> Result<FundamentalMode> {
    fundamental_mode_upto(n, gamma, a, convention, FUNDAMENTAL_ELL_CAP)
}

pub fn fundamental_mode_upto(
    n: u32,
    gamma: Coupling,
    a: f64,
    convention: MatrixConvention,
    ell_cap: u32,
) -> Result<FundamentalMode> {
    let mut per_ell = Vec::new();
    for ell in 0..=ell_cap {
        per_ell.push(annulus_eigenvalues(n, ell, gamma, a, 1, convention)?[0]);
    }
    let best = per_ell
        .iter()
        .min_by(|x, y| x.lambda4.total_cmp(&y.lambda4))
        .copied()
        .ok_or_else(|| Error::numerical("fundamental_mode_annulus", "no branches"))?;
    let ells = per_ell
        .iter()
        .filter(|r| (r.lambda4 - best.lambda4).abs() <= 1e-9 * best.lambda4)
        .map(|r| r.ell)
        .collect();
    Ok(FundamentalMode {
        ells,
        result: best,
        per_ell,
    })
}
