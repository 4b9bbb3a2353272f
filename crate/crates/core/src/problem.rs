//! Problem description shared by every solver.

use std::fmt;

use crate::{Error, Result};

/// Bulk-boundary coupling γ. `Infinite` is the Steklov limit and is always
/// routed to closed forms, never emulated by a large finite value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupling {
    Finite(f64),
    Infinite,
}

impl Coupling {
    pub fn finite(&self) -> Option<f64> {
        match *self {
            Coupling::Finite(g) => Some(g),
            Coupling::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Coupling::Infinite)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Coupling::Finite(g) if !(g.is_finite() && g >= 0.0) => Err(Error::Argument(format!(
                "gamma must be a finite non-negative number or inf, got {g}"
            ))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coupling::Finite(g) => write!(f, "{g}"),
            Coupling::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Coupling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(Coupling::Infinite);
        }
        let g: f64 = t
            .parse()
            .map_err(|_| Error::Argument(format!("cannot parse gamma from {s:?}")))?;
        let c = Coupling::Finite(g);
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    Ball,
    /// `a < |x| < 1` with `0 < a < 1`.
    Annulus(f64),
    /// `0 < |x| < 1`; spectrally identical to [`Geometry::Ball`].
    PuncturedBall,
}

impl Geometry {
    pub fn inner_radius(&self) -> Option<f64> {
        match *self {
            Geometry::Annulus(a) => Some(a),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Geometry::Ball => "ball",
            Geometry::Annulus(_) => "annulus",
            Geometry::PuncturedBall => "punctured-ball",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemSpec {
    pub n: u32,
    pub gamma: Coupling,
    pub geometry: Geometry,
}

impl ProblemSpec {
    pub fn new(n: u32, gamma: Coupling, geometry: Geometry) -> Result<Self> {
        let spec = ProblemSpec { n, gamma, geometry };
        spec.validate()?;
        Ok(spec)
    }

    pub fn ball(n: u32, gamma: Coupling) -> Result<Self> {
        Self::new(n, gamma, Geometry::Ball)
    }

    pub fn annulus(n: u32, gamma: Coupling, a: f64) -> Result<Self> {
        Self::new(n, gamma, Geometry::Annulus(a))
    }

    pub fn validate(&self) -> Result<()> {
        validate_dimension(self.n)?;
        self.gamma.validate()?;
        if let Geometry::Annulus(a) = self.geometry {
            validate_inner_radius(a)?;
        }
        Ok(())
    }
}

pub(crate) fn validate_dimension(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::Argument(format!("dimension n must be >= 2, got {n}")));
    }
    Ok(())
}

pub(crate) fn validate_inner_radius(a: f64) -> Result<()> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Argument(format!(
            "annulus inner radius must satisfy 0 < a < 1, got {a}"
        )));
    }
    Ok(())
}

/// Angular order ℓ and radial index k (1-based) of one eigenbranch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeIndex {
    pub ell: u32,
    pub k: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    /// Root of a secular function (Φ_ℓ or det W_ℓ).
    Secular,
    /// Closed form: the Steklov limit or the constant mode.
    ClosedForm,
    /// Rayleigh–Ritz estimate.
    Oracle,
}

impl Source {
    pub fn as_str(&self) -> &'static str {
        match self {
            Source::Secular => "secular",
            Source::ClosedForm => "closed-form",
            Source::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenResult {
    pub ell: u32,
    pub k: u32,
    /// Fourth root of the eigenvalue.
    pub lambda: f64,
    pub lambda4: f64,
    pub multiplicity: u64,
    pub source: Source,
    /// Relative secular residual at the returned root (0 for closed forms).
    pub residual: f64,
}

impl EigenResult {
    pub(crate) fn new(n: u32, ell: u32, k: u32, lambda: f64, source: Source, residual: f64) -> Self {
        EigenResult {
            ell,
            k,
            lambda,
            lambda4: lambda.powi(4),
            multiplicity: multiplicity(n, ell),
            source,
            residual,
        }
    }

    pub(crate) fn from_lambda4(n: u32, ell: u32, k: u32, lambda4: f64, source: Source) -> Self {
        EigenResult {
            ell,
            k,
            lambda: lambda4.powf(0.25),
            lambda4,
            multiplicity: multiplicity(n, ell),
            source,
            residual: 0.0,
        }
    }

    pub fn mode(&self) -> ModeIndex {
        ModeIndex {
            ell: self.ell,
            k: self.k,
        }
    }
}

/// Dimension of the space of degree-ℓ spherical harmonics on S^{n−1}:
/// `C(n+ℓ−1, ℓ) − C(n+ℓ−3, ℓ−2)`.
pub fn multiplicity(n: u32, ell: u32) -> u64 {
    if ell == 0 {
        return 1;
    }
    let n = n as u64;
    let l = ell as u64;
    let lower = if l >= 2 { binomial(n + l - 3, l - 2) } else { 0 };
    binomial(n + l - 1, l) - lower
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplicities_match_known_dimensions() {
        // circle: 1, 2, 2, ...; sphere: 2ℓ+1; S^3: (ℓ+1)²
        assert_eq!(multiplicity(2, 0), 1);
        assert_eq!(multiplicity(2, 5), 2);
        for l in 0..8 {
            assert_eq!(multiplicity(3, l), 2 * l as u64 + 1);
            assert_eq!(multiplicity(4, l), (l as u64 + 1).pow(2));
        }
        // S^4: (ℓ+1)(ℓ+2)(2ℓ+3)/6
        for l in 0..8u64 {
            assert_eq!(multiplicity(5, l as u32), (l + 1) * (l + 2) * (2 * l + 3) / 6);
        }
    }

    #[test]
    fn coupling_parses_inf_and_rejects_negative() {
        assert_eq!("inf".parse::<Coupling>().unwrap(), Coupling::Infinite);
        assert_eq!("0.4".parse::<Coupling>().unwrap(), Coupling::Finite(0.4));
        assert!("-1".parse::<Coupling>().is_err());
        assert!("nan".parse::<Coupling>().is_err());
        assert!("abc".parse::<Coupling>().is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(ProblemSpec::annulus(2, Coupling::Finite(1.0), 0.0).is_err());
        assert!(ProblemSpec::annulus(2, Coupling::Finite(1.0), 1.0).is_err());
        assert!(ProblemSpec::ball(1, Coupling::Finite(1.0)).is_err());
        assert!(ProblemSpec::annulus(3, Coupling::Infinite, 0.5).is_ok());
    }
}
