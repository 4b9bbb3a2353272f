//! Invariant checks on the Bessel kernel, shared by the test suite and the
//! `specfun-selftest` command.

use std::f64::consts::PI;

use super::kernel::{hankel, k_integral, series_i, series_j, series_y};
use super::{
    eval_ultra, eval_ultra_deriv, eval_ultra_deriv_lowered, wronskian_residual, zeros_of_jprime, BesselOrder, Kind,
};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub name: &'static str,
    /// Largest observed error in the units of `tolerance`.
    pub worst: f64,
    pub tolerance: f64,
    pub samples: usize,
}

impl CheckRow {
    pub fn passed(&self) -> bool {
        self.worst <= self.tolerance
    }
}

fn log_grid(lo: f64, hi: f64, points: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..points).map(move |i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
}

/// Relative Wronskian residuals for `ν ∈ {0, 1/2, …, 6}` on a 100-point log
/// grid over `[1e−2, 1e2]`.
pub fn wronskians() -> Result<CheckRow> {
    let mut worst = 0f64;
    let mut samples = 0;
    for twice in 0..=12u32 {
        for z in log_grid(1e-2, 1e2, 100) {
            let (a, b) = wronskian_residual(twice, z)?;
            worst = worst.max(a.abs() / (2.0 / (PI * z))).max(b.abs() * z);
            samples += 1;
        }
    }
    Ok(CheckRow {
        name: "wronskian",
        worst,
        tolerance: 1e-12,
        samples,
    })
}

/// Both recurrence forms of `j′_ℓ`, `ℓ ∈ [1,10]`, `z ∈ [0.1, 50]`,
/// `n ∈ {2,…,5}`. The difference is measured against the size of the terms
/// being combined, since `j′_ℓ` itself has zeros on the grid.
pub fn recurrences() -> Result<CheckRow> {
    let mut worst = 0f64;
    let mut samples = 0;
    for n in 2..=5 {
        for ell in 1..=10 {
            let o = BesselOrder::new(n, ell)?;
            let up = BesselOrder::new(n, ell + 1)?;
            for z in log_grid(0.1, 50.0, 60) {
                let d1 = eval_ultra_deriv(Kind::J, o, z, false)?.to_f64();
                let d2 = eval_ultra_deriv_lowered(Kind::J, o, z)?;
                let f = eval_ultra(Kind::J, o, z, false)?.to_f64();
                let g = eval_ultra(Kind::J, up, z, false)?.to_f64();
                let scale = (f64::from(ell) / z * f).abs() + g.abs();
                worst = worst.max((d1 - d2).abs() / scale);
                samples += 1;
            }
        }
    }
    Ok(CheckRow {
        name: "recurrence",
        worst,
        tolerance: 1e-11,
        samples,
    })
}

/// Scaled and unscaled I, K agree once un-scaled.
pub fn scaling() -> Result<CheckRow> {
    let mut worst = 0f64;
    let mut samples = 0;
    for n in 2..=5 {
        for ell in 0..=6 {
            let o = BesselOrder::new(n, ell)?;
            for z in log_grid(1e-2, 200.0, 40) {
                for kind in [Kind::I, Kind::K] {
                    let a = eval_ultra(kind, o, z, true)?.to_f64();
                    let b = eval_ultra(kind, o, z, false)?.to_f64();
                    if a.is_finite() && b.is_finite() && a.abs() > 1e-290 && a.abs() < 1e290 {
                        worst = worst.max((a - b).abs() / b.abs());
                        samples += 1;
                    }
                }
            }
        }
    }
    Ok(CheckRow {
        name: "scaled-vs-unscaled",
        worst,
        tolerance: 1e-13,
        samples,
    })
}

/// Series and asymptotic branches on `z ∈ [ν+15, ν+25]`, integer `ν ≤ 6`.
pub fn crossover() -> Result<CheckRow> {
    let mut worst = 0f64;
    let mut samples = 0;
    for nu in 0..=6u32 {
        for i in 0..=40 {
            let z = f64::from(nu) + 15.0 + 0.25 * f64::from(i);
            let h = hankel(2 * nu, z);
            let amp = (2.0 / (PI * z)).sqrt();
            let e_j = (series_j(nu, z) - h.j).abs() / amp;
            let e_y = (series_y(nu, z) - h.y).abs() / amp;
            let e_i = (series_i(nu, z) * (-z).exp() - h.i_scaled).abs() / h.i_scaled;
            let e_k = (k_integral(2 * nu, z) - h.k_scaled).abs() / h.k_scaled;
            worst = worst.max(e_j).max(e_y).max(e_i).max(e_k);
            samples += 4;
        }
    }
    Ok(CheckRow {
        name: "series-vs-asymptotic",
        worst,
        tolerance: 1e-10,
        samples,
    })
}

/// `j_1 > 0` on `(0, p₁₁]` and `j_0 > 0` on `(0, p₁₁)`, `n ∈ {2,…,5}`.
/// Reported as the count of violations.
pub fn lemma_positivity() -> Result<CheckRow> {
    let mut bad = 0usize;
    let mut samples = 0;
    for n in 2..=5 {
        let p11 = zeros_of_jprime(BesselOrder::new(n, 1)?, 1)?[0];
        for i in 1..=400 {
            let z = p11 * f64::from(i) / 400.0;
            let j1 = eval_ultra(Kind::J, BesselOrder::new(n, 1)?, z, false)?.to_f64();
            let j0 = eval_ultra(Kind::J, BesselOrder::new(n, 0)?, z, false)?.to_f64();
            if j1 <= 0.0 || (i < 400 && j0 <= 0.0) {
                bad += 1;
            }
            samples += 1;
        }
    }
    Ok(CheckRow {
        name: "lemma-positivity",
        worst: bad as f64,
        tolerance: 0.0,
        samples,
    })
}

/// All kernel checks in a fixed order.
pub fn run_all() -> Result<Vec<CheckRow>> {
    Ok(vec![
        wronskians()?,
        recurrences()?,
        scaling()?,
        crossover()?,
        lemma_positivity()?,
    ])
}
