//! Ultraspherical Bessel functions
//!
//! `j_ℓ, y_ℓ, i_ℓ, k_ℓ = z^{−s}·(J, Y, I, K)_{ℓ+s}(z)` with `s = (n−2)/2`,
//! their first derivatives, and zeros of `j′_ℓ`. Orders are integers for
//! even `n` and half-integers for odd `n`.
//!
//! Values that may leave the double range are returned as [`FnValue`], a
//! mantissa with a natural-log exponent. Scaled requests return
//! `e^{−z}i_ℓ` and `e^{z}k_ℓ`.

mod dd;
mod kernel;
pub mod selftest;
mod zeros;

use kernel::{mul_exp, pair, Pair};
pub use zeros::zeros_of_jprime;

use crate::problem::validate_dimension;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    J,
    Y,
    I,
    K,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::J, Kind::Y, Kind::I, Kind::K];
}

/// Order of an ultraspherical function: dimension `n ≥ 2` and angular
/// order `ℓ`. The Bessel order is `ν = ℓ + s`, `s = (n−2)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BesselOrder {
    pub n: u32,
    pub ell: u32,
}

impl BesselOrder {
    pub fn new(n: u32, ell: u32) -> Result<Self> {
        validate_dimension(n)?;
        Ok(BesselOrder { n, ell })
    }

    pub fn nu(&self) -> f64 {
        f64::from(self.twice_nu()) / 2.0
    }

    pub fn s(&self) -> f64 {
        (f64::from(self.n) - 2.0) / 2.0
    }

    /// `2ν = 2ℓ + n − 2`, exact.
    pub fn twice_nu(&self) -> u32 {
        2 * self.ell + self.n - 2
    }

    pub fn is_half_integer(&self) -> bool {
        self.n % 2 == 1
    }
}

/// `value · e^{scale_exponent}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FnValue {
    pub value: f64,
    pub scale_exponent: f64,
}

impl FnValue {
    /// The represented number as a plain `f64` (may be `±inf` or 0).
    pub fn to_f64(&self) -> f64 {
        mul_exp(self.value, self.scale_exponent)
    }

    /// Natural log of the magnitude.
    pub fn ln_abs(&self) -> f64 {
        self.value.abs().ln() + self.scale_exponent
    }

    /// Builds a value whose mantissa stays inside `[1e−300, 1e300]`,
    /// keeping `base` as the exponent whenever possible.
    fn normalised(m: f64, e: f64, base: f64) -> FnValue {
        if m == 0.0 {
            return FnValue {
                value: 0.0,
                scale_exponent: base,
            };
        }
        let v = mul_exp(m, e - base);
        if v.is_finite() && v.abs() >= 1e-300 && v.abs() <= 1e300 {
            return FnValue {
                value: v,
                scale_exponent: base,
            };
        }
        // fold everything but a unit-sized mantissa into the exponent
        let shift = m.abs().ln().round();
        FnValue {
            value: mul_exp(m, -shift),
            scale_exponent: e + shift,
        }
    }
}

fn check_z(z: f64) -> Result<()> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::Domain(format!(
            "argument z must be positive and finite, got {z}"
        )));
    }
    Ok(())
}

fn base_exponent(kind: Kind, z: f64, scaled: bool) -> f64 {
    match (kind, scaled) {
        (Kind::I, true) => z,
        (Kind::K, true) => -z,
        _ => 0.0,
    }
}

fn finish(kind: Kind, nu: f64, z: f64, m: f64, e: f64, scaled: bool) -> Result<FnValue> {
    if !(m.is_finite() && e.is_finite()) {
        return Err(Error::numerical(
            "specfun",
            format!("overflow evaluating {kind:?} of order {nu} at z = {z}"),
        ));
    }
    Ok(FnValue::normalised(m, e, base_exponent(kind, z, scaled)))
}

/// Ordinary Bessel function `F_ν(z)` with `ν = twice_nu/2`.
pub fn bessel(kind: Kind, twice_nu: u32, z: f64, scaled: bool) -> Result<FnValue> {
    check_z(z)?;
    let p = pair(kind, twice_nu, z)?;
    finish(kind, f64::from(twice_nu) / 2.0, z, p.f0, p.e, scaled)
}

/// `z^{−s}` folded into a pair's exponent.
fn ultra_pair(kind: Kind, order: BesselOrder, z: f64) -> Result<Pair> {
    let mut p = pair(kind, order.twice_nu(), z)?;
    let s = order.s();
    if s != 0.0 {
        p.e -= s * z.ln();
    }
    Ok(p)
}

/// `f_ℓ(z)` for `f ∈ {j, y, i, k}`.
pub fn eval_ultra(kind: Kind, order: BesselOrder, z: f64, scaled: bool) -> Result<FnValue> {
    check_z(z)?;
    validate_dimension(order.n)?;
    let p = ultra_pair(kind, order, z)?;
    finish(kind, order.nu(), z, p.f0, p.e, scaled)
}

/// `f′_ℓ(z) = (ℓ/z) f_ℓ ∓ f_{ℓ+1}`, with `+` for `i` and `−` otherwise.
pub fn eval_ultra_deriv(kind: Kind, order: BesselOrder, z: f64, scaled: bool) -> Result<FnValue> {
    check_z(z)?;
    validate_dimension(order.n)?;
    let p = ultra_pair(kind, order, z)?;
    let d = deriv_from_pair(kind, order.ell, z, &p);
    finish(kind, order.nu(), z, d, p.e, scaled)
}

fn deriv_from_pair(kind: Kind, ell: u32, z: f64, p: &Pair) -> f64 {
    let lead = f64::from(ell) / z * p.f0;
    match kind {
        Kind::I => lead + p.f1,
        _ => lead - p.f1,
    }
}

/// `f′_ℓ = f_{ℓ−1} − ((ℓ+n−2)/z) f_ℓ` for J and Y (`ℓ ≥ 1`); used to
/// cross-check the forward form.
pub fn eval_ultra_deriv_lowered(kind: Kind, order: BesselOrder, z: f64) -> Result<f64> {
    check_z(z)?;
    if order.ell == 0 || !matches!(kind, Kind::J | Kind::Y) {
        return Err(Error::Argument("lowered recurrence needs J or Y with ell >= 1".into()));
    }
    let lower = BesselOrder {
        n: order.n,
        ell: order.ell - 1,
    };
    let p = ultra_pair(kind, lower, z)?;
    let c = f64::from(order.ell + order.n - 2) / z;
    Ok(mul_exp(p.f0 - c * p.f1, p.e))
}

/// Value and derivative as plain doubles in the working scaling used by the
/// secular functions: `j, y` unscaled, `e^{−z}i`, `e^{z}k`.
pub(crate) fn ultra_with_deriv(kind: Kind, n: u32, ell: u32, z: f64) -> Result<(f64, f64)> {
    let order = BesselOrder { n, ell };
    let p = ultra_pair(kind, order, z)?;
    let shift = p.e - base_exponent(kind, z, true);
    let f = mul_exp(p.f0, shift);
    let d = mul_exp(deriv_from_pair(kind, ell, z, &p), shift);
    if !(f.is_finite() && d.is_finite()) {
        return Err(Error::numerical(
            "specfun",
            format!("{kind:?} of order {} at z = {z} is not representable", order.nu()),
        ));
    }
    Ok((f, d))
}

/// `(f_ℓ, f_{ℓ+1})` in the working scaling.
pub(crate) fn ultra_and_next(kind: Kind, n: u32, ell: u32, z: f64) -> Result<(f64, f64)> {
    let p = ultra_pair(kind, BesselOrder { n, ell }, z)?;
    let shift = p.e - base_exponent(kind, z, true);
    let (a, b) = (mul_exp(p.f0, shift), mul_exp(p.f1, shift));
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::numerical(
            "specfun",
            format!(
                "{kind:?} of order {} at z = {z} is not representable",
                f64::from(2 * ell + n - 2) / 2.0
            ),
        ));
    }
    Ok((a, b))
}

/// Cross-product residuals
/// `(J_{ν+1}Y_ν − J_νY_{ν+1} − 2/(πz), I_νK_{ν+1} + I_{ν+1}K_ν − 1/z)`,
/// equivalent to the Wronskians `W[J,Y] = 2/(πz)` and `W[I,K] = −1/z`.
pub fn wronskian_residual(twice_nu: u32, z: f64) -> Result<(f64, f64)> {
    check_z(z)?;
    let j = pair(Kind::J, twice_nu, z)?;
    let y = pair(Kind::Y, twice_nu, z)?;
    let i = pair(Kind::I, twice_nu, z)?;
    let k = pair(Kind::K, twice_nu, z)?;
    let jy = mul_exp(j.f1 * y.f0 - j.f0 * y.f1, j.e + y.e);
    let ik = mul_exp(i.f0 * k.f1 + i.f1 * k.f0, i.e + k.e);
    Ok((jy - 2.0 / (std::f64::consts::PI * z), ik - 1.0 / z))
}

impl From<BesselOrder> for (u32, u32) {
    fn from(o: BesselOrder) -> (u32, u32) {
        (o.n, o.ell)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn order(n: u32, ell: u32) -> BesselOrder {
        BesselOrder::new(n, ell).unwrap()
    }

    #[test]
    fn order_bookkeeping() {
        let o = order(3, 2);
        assert_eq!(o.nu(), 2.5);
        assert_eq!(o.s(), 0.5);
        assert!(o.is_half_integer());
        assert_eq!(order(4, 0).nu(), 1.0);
        assert!(BesselOrder::new(1, 0).is_err());
    }

    #[test]
    fn j0_in_three_dimensions_vanishes_at_pi() {
        let v = eval_ultra(Kind::J, order(3, 0), PI, false).unwrap();
        assert!(v.to_f64().abs() < 1e-16);
    }

    #[test]
    fn scaled_i0_in_three_dimensions() {
        // e^{−1}·√(2/π)·sinh(1)
        let v = eval_ultra(Kind::I, order(3, 0), 1.0, true).unwrap();
        assert_eq!(v.scale_exponent, 1.0);
        let exact = (-1f64).exp() * (2.0 / PI).sqrt() * 1f64.sinh();
        assert!((v.value - exact).abs() < 1e-15 * exact);
        assert!((v.value - 0.344_951_313_888_244_6).abs() < 1e-15);
    }

    #[test]
    fn j0_in_the_plane_tends_to_one() {
        let v = eval_ultra(Kind::J, order(2, 0), 1e-12, false).unwrap();
        assert!((v.to_f64() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn non_positive_argument_is_a_domain_error() {
        assert!(matches!(
            eval_ultra(Kind::J, order(2, 0), 0.0, false),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            eval_ultra(Kind::K, order(2, 0), -1.0, true),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn jprime_vanishes_at_first_zero_of_j1() {
        let v = eval_ultra_deriv(Kind::J, order(2, 0), 3.831_705_970_2, false).unwrap();
        assert!(v.to_f64().abs() < 1e-9);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let o = order(3, 1);
        for &z in &[0.5, 2.0, 10.0, 40.0] {
            let h = 1e-6;
            let fp = eval_ultra(Kind::J, o, z + h, false).unwrap().to_f64();
            let fm = eval_ultra(Kind::J, o, z - h, false).unwrap().to_f64();
            let d = eval_ultra_deriv(Kind::J, o, z, false).unwrap().to_f64();
            assert!(((fp - fm) / (2.0 * h) - d).abs() < 1e-8, "z={z}");
        }
    }

    #[test]
    fn i_derivative_is_positive() {
        for n in 2..=5 {
            for ell in 0..6 {
                for &z in &[1e-3, 0.4, 3.0, 25.0, 80.0] {
                    let d = eval_ultra_deriv(Kind::I, order(n, ell), z, true).unwrap();
                    assert!(d.value > 0.0 || (ell == 0 && z < 1e-2 && d.value >= 0.0));
                }
            }
        }
    }

    #[test]
    fn wronskian_examples() {
        for &(twice, z, tol) in &[(1u32, 1.0, 1e-12), (10, 30.0, 1e-12), (3, 0.01, 1e-10)] {
            let (a, b) = wronskian_residual(twice, z).unwrap();
            assert!(a.abs() <= tol * 2.0 / (PI * z), "JY twice={twice} z={z}: {a}");
            assert!(b.abs() <= tol / z, "IK twice={twice} z={z}: {b}");
        }
    }

    #[test]
    fn tiny_argument_y_and_k_come_back_scaled() {
        let o = order(5, 30);
        let y = eval_ultra(Kind::Y, o, 1e-9, false).unwrap();
        assert!(y.value.is_finite() && y.scale_exponent > 300.0);
        let k = eval_ultra(Kind::K, o, 1e-9, true).unwrap();
        assert!(k.value > 0.0 && k.value.is_finite());
    }

    #[test]
    fn scaled_and_unscaled_agree() {
        for &z in &[0.3, 4.0, 30.0] {
            for kind in [Kind::I, Kind::K] {
                let a = eval_ultra(kind, order(4, 2), z, true).unwrap().to_f64();
                let b = eval_ultra(kind, order(4, 2), z, false).unwrap().to_f64();
                assert!((a - b).abs() <= 1e-14 * b.abs());
            }
        }
    }

    #[test]
    fn working_scaling_matches_public_values() {
        let (f, d) = ultra_with_deriv(Kind::K, 3, 2, 5.0).unwrap();
        let v = eval_ultra(Kind::K, order(3, 2), 5.0, true).unwrap();
        let dv = eval_ultra_deriv(Kind::K, order(3, 2), 5.0, true).unwrap();
        assert!((f - v.value).abs() < 1e-15 * f.abs());
        assert!((d - dv.value).abs() < 1e-15 * d.abs());
        let (a, b) = ultra_and_next(Kind::J, 2, 1, 3.0).unwrap();
        let a2 = eval_ultra(Kind::J, order(2, 1), 3.0, false).unwrap().value;
        let b2 = eval_ultra(Kind::J, order(2, 2), 3.0, false).unwrap().value;
        assert_eq!((a, b), (a2, b2));
    }
}
