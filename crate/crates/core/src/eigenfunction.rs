//! Radial eigenfunction profiles.

use crate::problem::{Coupling, Geometry, ProblemSpec};
use crate::quadrature::Rule;
use crate::specfun::{ultra_with_deriv, Kind};
use crate::{Error, Result};

/// Coefficients of a radial profile.
///
/// The Bessel variants use column-scaled modified functions so that no
/// coefficient overflows: `I(r) = e^{−λ} i_ℓ(λr)` and `K(r) = e^{λa} k_ℓ(λr)`.
#[derive(Debug, Clone, PartialEq)]
pub enum RadialBasis {
    /// `u = A_j j_ℓ(λr) + A_i I(r)`.
    BesselBall {
        a_j: f64,
        a_i: f64,
    },
    /// `u = A j_ℓ(λr) + B y_ℓ(λr) + C I(r) + D K(r)`.
    BesselAnnulus {
        a: f64,
        b: f64,
        c: f64,
        d: f64,
    },
    /// `u = Σ c_k r^k`.
    Polynomial(Vec<f64>),
    Constant(f64),
}

/// Value, first derivative, `Δ_ℓu` and `(Δ_ℓu)′` at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub u: f64,
    pub du: f64,
    pub lap: f64,
    pub dlap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialEigenfunction {
    pub basis: RadialBasis,
    pub lambda: f64,
    pub spec: ProblemSpec,
    pub ell: u32,
}

/// Radii below this are evaluated here; regular profiles change by
/// O(1e−16) relative over that distance.
const R_FLOOR: f64 = 1e-8;

impl RadialEigenfunction {
    pub(crate) fn new(basis: RadialBasis, lambda: f64, spec: ProblemSpec, ell: u32) -> Self {
        RadialEigenfunction {
            basis,
            lambda,
            spec,
            ell,
        }
    }

    /// Inner radius of the domain (0 for balls).
    pub fn inner_radius(&self) -> f64 {
        self.spec.geometry.inner_radius().unwrap_or(0.0)
    }

    pub fn eval(&self, r: f64) -> Result<ProfilePoint> {
        let lo = self.inner_radius();
        if !(r >= lo - 1e-12 && r <= 1.0 + 1e-12) {
            return Err(Error::Domain(format!("radius {r} outside [{lo}, 1]")));
        }
        let (n, ell, lam) = (self.spec.n, self.ell, self.lambda);
        match &self.basis {
            RadialBasis::Constant(c) => Ok(ProfilePoint {
                u: *c,
                du: 0.0,
                lap: 0.0,
                dlap: 0.0,
            }),
            RadialBasis::Polynomial(cs) => Ok(poly_point(cs, n, ell, r.max(R_FLOOR))),
            RadialBasis::BesselBall { a_j, a_i } => {
                let r = r.max(R_FLOOR);
                let z = lam * r;
                let (j, dj) = ultra_with_deriv(Kind::J, n, ell, z)?;
                let (i, di) = scaled_i(n, ell, lam, r)?;
                Ok(combine(lam, [(*a_j, j, dj, -1.0), (*a_i, i, di, 1.0)]))
            }
            RadialBasis::BesselAnnulus { a, b, c, d } => {
                let z = lam * r;
                let (j, dj) = ultra_with_deriv(Kind::J, n, ell, z)?;
                let (y, dy) = ultra_with_deriv(Kind::Y, n, ell, z)?;
                let (i, di) = scaled_i(n, ell, lam, r)?;
                let (k, dk) = ultra_with_deriv(Kind::K, n, ell, z)?;
                let w = (-lam * (r - lo)).exp();
                Ok(combine(
                    lam,
                    [
                        (*a, j, dj, -1.0),
                        (*b, y, dy, -1.0),
                        (*c, i, di, 1.0),
                        (*d, k * w, dk * w, 1.0),
                    ],
                ))
            }
        }
    }

    pub fn value(&self, r: f64) -> Result<f64> {
        Ok(self.eval(r)?.u)
    }

    pub fn derivative(&self, r: f64) -> Result<f64> {
        Ok(self.eval(r)?.du)
    }

    /// Samples of `u` on `grid`.
    pub fn sample(&self, grid: &[f64]) -> Result<Vec<f64>> {
        grid.iter().map(|&r| self.value(r)).collect()
    }

    /// `∫ u² r^{n−1} dr + γ(u(1)² + a^{n−1}u(a)²)`; for `γ = ∞` only the
    /// boundary part is used.
    pub fn norm_squared(&self) -> Result<f64> {
        l2_gamma_inner(&self.spec, |r| self.value(r), |r| self.value(r))
    }

    /// Rescales to unit norm with `u(1) ≥ 0`.
    pub(crate) fn normalise(mut self) -> Result<Self> {
        let nrm = self.norm_squared()?.sqrt();
        if !(nrm > 0.0 && nrm.is_finite()) {
            return Err(Error::numerical("eigenfunction", format!("profile norm is {nrm}")));
        }
        let sign = if self.value(1.0)? < 0.0 { -1.0 } else { 1.0 };
        let f = sign / nrm;
        match &mut self.basis {
            RadialBasis::BesselBall { a_j, a_i } => {
                *a_j *= f;
                *a_i *= f;
            }
            RadialBasis::BesselAnnulus { a, b, c, d } => {
                *a *= f;
                *b *= f;
                *c *= f;
                *d *= f;
            }
            RadialBasis::Polynomial(cs) => cs.iter_mut().for_each(|c| *c *= f),
            RadialBasis::Constant(c) => *c *= f,
        }
        Ok(self)
    }

    /// `|u′|` at each boundary radius relative to `λ·max|u|` on the
    /// boundary; `(inner, outer)`, inner is 0 for balls.
    pub fn neumann_residuals(&self) -> Result<(f64, f64)> {
        let lo = self.inner_radius();
        let outer = self.eval(1.0)?;
        let inner = if lo > 0.0 { Some(self.eval(lo)?) } else { None };
        let mut scale = outer.u.abs();
        if let Some(p) = inner {
            scale = scale.max(p.u.abs());
        }
        let scale = scale.max(1e-300) * self.lambda.max(1.0);
        Ok((inner.map_or(0.0, |p| p.du.abs() / scale), outer.du.abs() / scale))
    }
}

/// `e^{−λ}i(λr)` and its r-derivative divided by λ, from `e^{−z}i(z)`.
fn scaled_i(n: u32, ell: u32, lam: f64, r: f64) -> Result<(f64, f64)> {
    let (i, di) = ultra_with_deriv(Kind::I, n, ell, lam * r)?;
    let w = (lam * (r - 1.0)).exp();
    Ok((i * w, di * w))
}

/// Each term is `(coefficient, f(λr), f′(λr), σ)` with `Δ_ℓ f(λr) = σλ² f(λr)`.
fn combine<const N: usize>(lam: f64, terms: [(f64, f64, f64, f64); N]) -> ProfilePoint {
    let mut p = ProfilePoint {
        u: 0.0,
        du: 0.0,
        lap: 0.0,
        dlap: 0.0,
    };
    let l2 = lam * lam;
    for (c, f, df, sigma) in terms {
        if c == 0.0 {
            continue;
        }
        p.u += c * f;
        p.du += c * lam * df;
        p.lap += sigma * l2 * c * f;
        p.dlap += sigma * l2 * lam * c * df;
    }
    p
}

fn poly_point(cs: &[f64], n: u32, ell: u32, r: f64) -> ProfilePoint {
    let nf = f64::from(n);
    let big_l = f64::from(ell) * (f64::from(ell) + nf - 2.0);
    let mut p = ProfilePoint {
        u: 0.0,
        du: 0.0,
        lap: 0.0,
        dlap: 0.0,
    };
    for (k, &c) in cs.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let b = k as f64;
        let cb = b * (b + nf - 2.0) - big_l;
        p.u += c * r.powf(b);
        p.du += c * b * r.powf(b - 1.0);
        p.lap += c * cb * r.powf(b - 2.0);
        p.dlap += c * cb * (b - 2.0) * r.powf(b - 3.0);
    }
    p
}

/// Gauss rule on the radial interval of `geometry`.
pub(crate) fn radial_rule(geometry: &Geometry, panels: usize, order: usize) -> Rule {
    let lo = geometry.inner_radius().unwrap_or(0.0);
    Rule::composite(lo, 1.0, panels, order)
}

/// `⟨f, g⟩_{L²_γ} = ∫ f g r^{n−1} dr + γ(f(1)g(1) + a^{n−1}f(a)g(a))`,
/// with a 128-node composite Gauss rule. For `γ = ∞` only the boundary
/// pairing is kept.
pub fn l2_gamma_inner<F, G>(spec: &ProblemSpec, mut f: F, mut g: G) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
    G: FnMut(f64) -> Result<f64>,
{
    let n = spec.n as i32;
    let a = spec.geometry.inner_radius();
    let boundary = |f: &mut F, g: &mut G| -> Result<f64> {
        let mut s = f(1.0)? * g(1.0)?;
        if let Some(a) = a {
            s += a.powi(n - 1) * f(a)? * g(a)?;
        }
        Ok(s)
    };
    match spec.gamma {
        Coupling::Infinite => boundary(&mut f, &mut g),
        Coupling::Finite(gamma) => {
            let rule = radial_rule(&spec.geometry, 8, 16);
            let mut bulk = 0.0;
            for (&r, &w) in rule.nodes.iter().zip(&rule.weights) {
                bulk += w * f(r)? * g(r)? * r.powi(n - 1);
            }
            let b = if gamma == 0.0 {
                0.0
            } else {
                gamma * boundary(&mut f, &mut g)?
            };
            Ok(bulk + b)
        }
    }
}
