//! Ordinary Bessel functions J, Y, I, K of integer and half-integer order.
//!
//! Orders 0 and 1 (or ±1/2) are evaluated directly: ascending series below
//! `ν + 18`, Hankel asymptotics above, closed forms for half-integers and a
//! trapezoid integral for K. Higher orders come from the three-term
//! recurrences run in their stable direction: forward for Y and K, forward
//! for J when `z ≥ ν`, and backward from a continued-fraction ratio for J
//! with `z < ν` and for I.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2, PI};

use super::dd::Dd;
use super::Kind;
use crate::{Error, Result};

/// Ascending series is used for `z < ν + SERIES_CUTOFF`.
pub(crate) const SERIES_CUTOFF: f64 = 18.0;

const RESCALE_BITS: i32 = 830;
const BIG: f64 = 1.0e250;

const EULER_GAMMA: Dd = Dd::from_parts(0.577_215_664_901_532_9, -4.942_915_152_430_645e-18);
const FRAC_1_PI: Dd = Dd::from_parts(std::f64::consts::FRAC_1_PI, -1.967_867_667_518_248_6e-17);

/// `F_ν = f0·e^e`, `F_{ν+1} = f1·e^e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Pair {
    pub f0: f64,
    pub f1: f64,
    pub e: f64,
}

/// `m · exp(e)` without forming `exp(e)` when it would overflow.
pub(crate) fn mul_exp(m: f64, e: f64) -> f64 {
    let (mut r, mut e) = (m, e);
    while e > 600.0 && r.is_finite() && r != 0.0 {
        r *= 600f64.exp();
        e -= 600.0;
    }
    while e < -600.0 && r.is_finite() && r != 0.0 {
        r *= (-600f64).exp();
        e += 600.0;
    }
    r * e.exp()
}

/// Values of `F_ν` and `F_{ν+1}` for `ν = twice_nu / 2`.
pub(crate) fn pair(kind: Kind, twice_nu: u32, z: f64) -> Result<Pair> {
    let half = twice_nu % 2 == 1;
    let nu = f64::from(twice_nu) / 2.0;
    let mu0 = if half { -0.5 } else { 0.0 };
    let steps = (nu - mu0).round() as usize;
    let (b0, b1, e0) = base(kind, half, z);
    let out = if steps == 0 {
        Pair { f0: b0, f1: b1, e: e0 }
    } else {
        match kind {
            Kind::Y | Kind::K => forward(kind, b0, b1, e0, mu0, steps, z),
            Kind::J if z >= nu => forward(kind, b0, b1, e0, mu0, steps, z),
            Kind::J | Kind::I => backward(kind, b0, b1, e0, steps, nu, z)?,
        }
    };
    if !(out.f0.is_finite() && out.f1.is_finite() && out.e.is_finite()) {
        return Err(Error::numerical(
            "specfun",
            format!("overflow evaluating {kind:?}_{nu} at z = {z}"),
        ));
    }
    Ok(out)
}

/// Values at the two lowest orders of the recurrence chain.
fn base(kind: Kind, half: bool, z: f64) -> (f64, f64, f64) {
    if half {
        let c = (2.0 / (PI * z)).sqrt();
        let (s, co) = z.sin_cos();
        match kind {
            Kind::J => (c * co, c * s, 0.0),
            Kind::Y => (c * s, -c * co, 0.0),
            Kind::I => {
                let t = (-2.0 * z).exp();
                (0.5 * c * (1.0 + t), -0.5 * c * (-2.0 * z).exp_m1(), z)
            }
            Kind::K => {
                let k = (PI / (2.0 * z)).sqrt();
                (k, k, -z)
            }
        }
    } else {
        match kind {
            Kind::J | Kind::Y => {
                let a = integer_direct(kind, 0, z);
                let b = integer_direct(kind, 1, z);
                (a, b, 0.0)
            }
            Kind::I => (integer_direct(kind, 0, z), integer_direct(kind, 1, z), z),
            Kind::K => (integer_direct(kind, 0, z), integer_direct(kind, 1, z), -z),
        }
    }
}

/// Direct evaluation for an integer order: J and Y plain, I as `e^{−z}I`,
/// K as `e^{z}K`.
pub(crate) fn integer_direct(kind: Kind, nu: u32, z: f64) -> f64 {
    let use_series = z < f64::from(nu) + SERIES_CUTOFF;
    match kind {
        Kind::J if use_series => series_j(nu, z),
        Kind::Y if use_series => series_y(nu, z),
        Kind::I if use_series => series_i(nu, z) * (-z).exp(),
        Kind::K if use_series => k_integral(2 * nu, z),
        _ => {
            let h = hankel(2 * nu, z);
            match kind {
                Kind::J => h.j,
                Kind::Y => h.y,
                Kind::I => h.i_scaled,
                Kind::K => h.k_scaled,
            }
        }
    }
}

fn forward(kind: Kind, b0: f64, b1: f64, e0: f64, mu0: f64, steps: usize, z: f64) -> Pair {
    let sign = if kind == Kind::K { 1.0 } else { -1.0 };
    let (mut prev, mut cur, mut e) = (b0, b1, e0);
    for i in 0..steps {
        let mu = mu0 + 1.0 + i as f64;
        let next = (2.0 * mu / z) * cur + sign * prev;
        prev = cur;
        cur = next;
        if cur.abs() > BIG {
            let f = 2f64.powi(-RESCALE_BITS);
            prev *= f;
            cur *= f;
            e += f64::from(RESCALE_BITS) * LN_2;
        }
    }
    Pair { f0: prev, f1: cur, e }
}

#[allow(clippy::too_many_arguments)]
fn backward(kind: Kind, b0: f64, b1: f64, e0: f64, steps: usize, nu: f64, z: f64) -> Result<Pair> {
    let sign = if kind == Kind::I { 1.0 } else { -1.0 };
    let h = cf1(nu, z, sign)?;
    // (u_hi, u_lo) walk down from (h, 1) at orders (ν+1, ν)
    let (mut u_hi, mut u_lo) = (h, 1.0);
    let mut rescales = 0i32;
    for i in 0..steps {
        let mu = nu - i as f64;
        let next = (2.0 * mu / z) * u_lo + sign * u_hi;
        u_hi = u_lo;
        u_lo = next;
        if u_lo.abs() > BIG {
            let f = 2f64.powi(-RESCALE_BITS);
            u_hi *= f;
            u_lo *= f;
            rescales += 1;
        }
    }
    // u_lo ~ F_{mu0}, u_hi ~ F_{mu0+1}; the top value 1 is worth 2^{-830·r}
    let scale = if kind == Kind::I || b0.abs() >= b1.abs() {
        b0 / u_lo
    } else {
        b1 / u_hi
    };
    let e = e0 - f64::from(rescales * RESCALE_BITS) * LN_2;
    Ok(Pair {
        f0: scale,
        f1: scale * h,
        e,
    })
}

/// `F_{ν+1}/F_ν` by modified Lentz on
/// `1/(b₁ + s/(b₂ + s/(b₃ + …)))`, `b_k = 2(ν+k)/z`,
/// `s = −1` for J and `+1` for I.
fn cf1(nu: f64, z: f64, s: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let b = |k: f64| 2.0 * (nu + k) / z;
    let mut f = b(1.0);
    if f == 0.0 {
        f = TINY;
    }
    let (mut c, mut d) = (f, 0.0);
    for k in 2..200_000 {
        let bk = b(k as f64);
        d = bk + s * d;
        if d == 0.0 {
            d = TINY;
        }
        c = bk + s / c;
        if c == 0.0 {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            return Ok(1.0 / f);
        }
    }
    Err(Error::numerical(
        "specfun",
        format!("continued fraction for order {nu} did not converge at z = {z}"),
    ))
}

// --- ascending series -------------------------------------------------------

/// Terms `t_k = (∓q)^k / (k!(ν+1)_k)`, summed with and without digamma
/// weights; returns `(w^ν/ν!, Σ t_k, Σ t_k·[ψ(k+1)+ψ(ν+k+1)])`.
fn ascending(nu: u32, z: f64, alternating: bool, with_psi: bool) -> (Dd, Dd, Dd) {
    let w = 0.5 * z;
    let mut pre = Dd::from_f64(1.0);
    for k in 1..=nu {
        pre = pre.mul_f64(w).div_f64(f64::from(k));
    }
    let q = Dd::square_f64(z).mul_f64(0.25);
    let q = if alternating { -q } else { q };

    // ψ(1) = −γ, ψ(ν+1) = −γ + H_ν
    let mut psi_a = -EULER_GAMMA;
    let mut psi_b = -EULER_GAMMA;
    for m in 1..=nu {
        psi_b = psi_b + Dd::from_f64(1.0).div_f64(f64::from(m));
    }
    let mut t = Dd::from_f64(1.0);
    let mut sum = t;
    let mut sum_psi = if with_psi { psi_a + psi_b } else { Dd::ZERO };
    let peak = w;
    for k in 1..600u32 {
        let kf = f64::from(k);
        t = (t * q).div_f64(kf * (f64::from(nu) + kf));
        sum = sum + t;
        if with_psi {
            psi_a = psi_a + Dd::from_f64(1.0).div_f64(kf);
            psi_b = psi_b + Dd::from_f64(1.0).div_f64(f64::from(nu) + kf);
            sum_psi = sum_psi + t * (psi_a + psi_b);
        }
        let small = t.to_f64().abs() * (2.0 + kf.ln()) < 1e-33 * sum.to_f64().abs().max(1e-300);
        if kf > peak && small {
            break;
        }
    }
    (pre, sum, sum_psi)
}

pub(crate) fn series_j(nu: u32, z: f64) -> f64 {
    let (pre, s, _) = ascending(nu, z, true, false);
    (pre * s).to_f64()
}

pub(crate) fn series_i(nu: u32, z: f64) -> f64 {
    let (pre, s, _) = ascending(nu, z, false, false);
    (pre * s).to_f64()
}

/// Neumann's series for `Y_ν`, integer `ν`.
pub(crate) fn series_y(nu: u32, z: f64) -> f64 {
    let w = 0.5 * z;
    let (pre, s, s_psi) = ascending(nu, z, true, true);
    let j = pre * s;

    // Σ_{k<ν} (ν−k−1)!/k! · w^{2k−ν}
    let mut finite = Dd::ZERO;
    if nu > 0 {
        let mut term = Dd::from_f64(1.0);
        for m in 1..nu {
            term = term.mul_f64(f64::from(m));
        }
        for _ in 0..nu {
            term = term.div_f64(w);
        }
        let w2 = Dd::square_f64(w);
        for k in 0..nu {
            finite = finite + term;
            if k + 1 < nu {
                term = (term * w2).div_f64(f64::from((k + 1) * (nu - k - 1)));
            }
        }
    }
    let log_part = j.mul_f64(2.0 * w.ln());
    let total = log_part - finite - pre * s_psi;
    (total * FRAC_1_PI).to_f64()
}

// --- Hankel asymptotics -----------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub(crate) struct Hankel {
    pub j: f64,
    pub y: f64,
    /// `e^{−z} I_ν(z)`
    pub i_scaled: f64,
    /// `e^{z} K_ν(z)`
    pub k_scaled: f64,
}

/// Large-argument expansions with coefficients
/// `a_k(ν) = ∏_{j=1}^{k} (4ν² − (2j−1)²) / (k! 8^k)`.
pub(crate) fn hankel(twice_nu: u32, z: f64) -> Hankel {
    let mu = f64::from(twice_nu).powi(2);
    let (mut p, mut q) = (1.0, 0.0);
    let (mut s_i, mut s_k) = (1.0, 1.0);
    let mut t: f64 = 1.0;
    for k in 1..200u32 {
        let kf = f64::from(k);
        let next = t * (mu - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0 * z);
        if next == 0.0 || (next.abs() > t.abs() && kf > 1.0) {
            break;
        }
        t = next;
        s_k += t;
        s_i += if k % 2 == 1 { -t } else { t };
        match k % 4 {
            1 => q += t,
            2 => p -= t,
            3 => q -= t,
            _ => p += t,
        }
        if t.abs() < 1e-17 {
            break;
        }
    }
    // χ = z − φ with φ = (2ν+1)π/4, an exact multiple of π/4
    let (cphi, sphi) = quarter_turn((twice_nu + 1) % 8);
    let (sz, cz) = z.sin_cos();
    let cchi = cz * cphi + sz * sphi;
    let schi = sz * cphi - cz * sphi;
    let amp = (2.0 / (PI * z)).sqrt();
    Hankel {
        j: amp * (p * cchi - q * schi),
        y: amp * (p * schi + q * cchi),
        i_scaled: s_i / (2.0 * PI * z).sqrt(),
        k_scaled: (PI / (2.0 * z)).sqrt() * s_k,
    }
}

/// `(cos, sin)` of `m·π/4`.
fn quarter_turn(m: u32) -> (f64, f64) {
    let r = FRAC_1_SQRT_2;
    match m {
        0 => (1.0, 0.0),
        1 => (r, r),
        2 => (0.0, 1.0),
        3 => (-r, r),
        4 => (-1.0, 0.0),
        5 => (-r, -r),
        6 => (0.0, -1.0),
        _ => (r, -r),
    }
}

// --- K by quadrature --------------------------------------------------------

/// `e^{z} K_ν(z) = ∫₀^∞ exp(−z(cosh t − 1)) cosh(νt) dt` by the trapezoid
/// rule, which converges geometrically for this analytic integrand.
pub(crate) fn k_integral(twice_nu: u32, z: f64) -> f64 {
    let nu = f64::from(twice_nu) / 2.0;
    let log_f = |t: f64| {
        let sh = (0.5 * t).sinh();
        let x = nu * t;
        -2.0 * z * sh * sh + x + (-2.0 * x).exp().ln_1p() - LN_2
    };
    let t_peak = if nu > 0.0 { (nu / z).asinh() } else { 0.0 };
    let top = log_f(t_peak);
    let h = 1.0 / 16.0;
    let mut sum = 0.5 * (log_f(0.0) - top).exp();
    let mut k = 1u32;
    loop {
        let t = h * f64::from(k);
        let term = (log_f(t) - top).exp();
        sum += term;
        if t > t_peak && term < 1e-18 * sum {
            break;
        }
        k += 1;
    }
    mul_exp(h * sum, top)
}
