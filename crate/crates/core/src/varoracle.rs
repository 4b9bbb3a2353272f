//! Rayleigh–Ritz oracle for one angular order.
//!
//! Works on polynomial trial spaces inside `H²_*` (vanishing `u′` on every
//! boundary sphere) and never evaluates a Bessel function, so agreement
//! with the secular solvers is an independent check. The sphere area is
//! divided out of both forms; the inner boundary keeps its weight `a^{n−1}`.

use crate::linalg::{self, Matrix};
use crate::problem::{Coupling, Geometry, ProblemSpec};
use crate::quadrature::{gauss_legendre, Rule};
use crate::{Error, Result};

pub const MIN_SIZE: usize = 4;
pub const MAX_SIZE: usize = 32;

/// Trial-space parametrisation. Both span the same space for a given size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RitzBasis {
    /// Differences of Legendre polynomials (in `2r²−1` on the ball, in the
    /// affine coordinate of `[a,1]` on the annulus) arranged to cancel `u′`
    /// at the boundary. Well conditioned up to the size cap.
    #[default]
    Legendre,
    /// `r^{ℓ+2m} − (ℓ+2m)/(ℓ+2m+2)·r^{ℓ+2m+2}` on the ball and constrained
    /// monomials on the annulus, with exact power integrals. Only usable for
    /// small sizes.
    Monomial,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RitzSystem {
    /// `∫ Δ_ℓφ_i Δ_ℓφ_j r^{n−1} dr`.
    pub stiffness: Matrix,
    /// `∫ φ_iφ_j r^{n−1} dr + γ[φ_i(1)φ_j(1) + a^{n−1}φ_i(a)φ_j(a)]`.
    pub mass: Matrix,
    pub basis: RitzBasis,
    pub size: usize,
    pub spec: ProblemSpec,
    pub ell: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RitzEstimate {
    /// Ascending approximations of `λ⁴`.
    pub values: Vec<f64>,
    pub size: usize,
    /// `μ_i(N−4) − μ_i(N)`; empty when `N − 4 < 4`.
    pub delta: Vec<f64>,
    /// Whether every delta is non-negative up to `1e−9` relative.
    pub monotone: bool,
}

/// Assembles the Ritz pencil with the default basis.
pub fn build_ritz(n: u32, ell: u32, gamma: Coupling, geometry: Geometry, size: usize) -> Result<RitzSystem> {
    build_ritz_with(&ProblemSpec::new(n, gamma, geometry)?, ell, size, RitzBasis::Legendre)
}

pub fn build_ritz_with(spec: &ProblemSpec, ell: u32, size: usize, basis: RitzBasis) -> Result<RitzSystem> {
    spec.validate()?;
    if !(MIN_SIZE..=MAX_SIZE).contains(&size) {
        return Err(Error::Argument(format!(
            "Ritz basis size must lie in [{MIN_SIZE}, {MAX_SIZE}], got {size}"
        )));
    }
    let gamma = spec.gamma.finite().ok_or_else(|| {
        Error::Argument("the Ritz pencil needs a finite gamma (inf makes the mass boundary-only)".into())
    })?;
    let (stiffness, mass) = match basis {
        RitzBasis::Legendre => assemble_quadrature(spec, ell, size, gamma),
        RitzBasis::Monomial => assemble_exact(spec, ell, size, gamma),
    };
    Ok(RitzSystem {
        stiffness,
        mass,
        basis,
        size,
        spec: *spec,
        ell,
    })
}

/// `(P_m, P′_m, P″_m)` at `t` for `m = 0..=top`.
fn legendre_table(top: usize, t: f64) -> Vec<(f64, f64, f64)> {
    let mut out = vec![(1.0, 0.0, 0.0); top + 1];
    if top >= 1 {
        out[1] = (t, 1.0, 0.0);
    }
    for k in 1..top {
        let kf = k as f64;
        let (pk, dk, _) = out[k];
        let (pm, dm, sm) = out[k - 1];
        let p = ((2.0 * kf + 1.0) * t * pk - kf * pm) / (kf + 1.0);
        // P′_{k+1} = P′_{k−1} + (2k+1)P_k, same for the next derivative
        let d = dm + (2.0 * kf + 1.0) * pk;
        let s = sm + (2.0 * kf + 1.0) * dk;
        out[k + 1] = (p, d, s);
    }
    out
}

/// Values and `Δ_ℓ` of the Legendre-type basis at radius `r`.
fn legendre_basis(spec: &ProblemSpec, ell: u32, size: usize, r: f64) -> (Vec<f64>, Vec<f64>) {
    let nf = f64::from(spec.n);
    let l = f64::from(ell);
    let mut u = Vec::with_capacity(size);
    let mut lap = Vec::with_capacity(size);
    match spec.geometry.inner_radius() {
        None => {
            // ψ_m = r^ℓ P_m(2r²−1), Δ_ℓψ_m = r^ℓ[16r²P″_m + 4(2ℓ+n)P′_m],
            // ψ′_m(1) = ℓ + 2m(m+1)
            let t = 2.0 * r * r - 1.0;
            let tab = legendre_table(size + 1, t);
            let rl = r.powi(ell as i32);
            let psi = |m: usize| {
                let (p, d, s) = tab[m];
                (rl * p, rl * (16.0 * r * r * s + 4.0 * (2.0 * l + nf) * d))
            };
            let dm = |m: usize| l + 2.0 * (m * (m + 1)) as f64;
            let first = if ell == 0 { 1 } else { 0 };
            if ell == 0 {
                u.push(1.0);
                lap.push(0.0);
            }
            for k in first..size + first - u.len() {
                let (p0, q0) = psi(k);
                let (p1, q1) = psi(k + 1);
                let (d0, d1) = (dm(k), dm(k + 1));
                u.push(p0 / d0 - p1 / d1);
                lap.push(q0 / d0 - q1 / d1);
            }
        }
        Some(a) => {
            // φ_k = P_k − k(k+1)/((k+2)(k+3))·P_{k+2} in t = (2r−1−a)/(1−a)
            let c = 2.0 / (1.0 - a);
            let t = c * r - (1.0 + a) / (1.0 - a);
            let tab = legendre_table(size + 2, t);
            let big_l = l * (l + nf - 2.0);
            for k in 0..size {
                let kf = k as f64;
                let w = kf * (kf + 1.0) / ((kf + 2.0) * (kf + 3.0));
                let (p0, d0, s0) = tab[k];
                let (p2, d2, s2) = tab[k + 2];
                let (f, df, sf) = (p0 - w * p2, c * (d0 - w * d2), c * c * (s0 - w * s2));
                u.push(f);
                lap.push(sf + (nf - 1.0) * df / r - big_l * f / (r * r));
            }
        }
    }
    (u, lap)
}

fn assemble_quadrature(spec: &ProblemSpec, ell: u32, size: usize, gamma: f64) -> (Matrix, Matrix) {
    let n = spec.n;
    let rule = match spec.geometry.inner_radius() {
        // polynomial integrands of degree ≤ 2ℓ + 4size + n + 3
        None => {
            let m = ell as usize + 2 * size + n as usize / 2 + 4;
            let (x, w) = gauss_legendre(m);
            Rule {
                nodes: x.iter().map(|x| 0.5 * (x + 1.0)).collect(),
                weights: w.iter().map(|w| 0.5 * w).collect(),
            }
        }
        Some(a) => Rule::composite(a, 1.0, 8, 48),
    };
    let mut k = Matrix::zeros(size, size);
    let mut m = Matrix::zeros(size, size);
    for (&r, &w) in rule.nodes.iter().zip(&rule.weights) {
        let (u, lap) = legendre_basis(spec, ell, size, r);
        let wr = w * r.powi(n as i32 - 1);
        for i in 0..size {
            for j in 0..=i {
                k[(i, j)] += wr * lap[i] * lap[j];
                m[(i, j)] += wr * u[i] * u[j];
            }
        }
    }
    if gamma != 0.0 {
        add_boundary(&mut m, spec, gamma, |r| legendre_basis(spec, ell, size, r).0);
    }
    symmetrise(&mut k);
    symmetrise(&mut m);
    (k, m)
}

fn add_boundary<F: Fn(f64) -> Vec<f64>>(m: &mut Matrix, spec: &ProblemSpec, gamma: f64, values: F) {
    let size = m.rows();
    let mut sides = vec![(1.0, 1.0)];
    if let Some(a) = spec.geometry.inner_radius() {
        sides.push((a, a.powi(spec.n as i32 - 1)));
    }
    for (r, weight) in sides {
        let u = values(r);
        for i in 0..size {
            for j in 0..=i {
                m[(i, j)] += gamma * weight * u[i] * u[j];
            }
        }
    }
}

/// Copies the lower triangle into the upper one.
fn symmetrise(m: &mut Matrix) {
    for i in 0..m.rows() {
        for j in 0..i {
            m[(j, i)] = m[(i, j)];
        }
    }
}

/// A function `Σ c·r^β` as (coefficient, exponent) terms.
type Terms = Vec<(f64, f64)>;

fn monomial_basis(spec: &ProblemSpec, ell: u32, size: usize) -> Vec<Terms> {
    let l = f64::from(ell);
    match spec.geometry.inner_radius() {
        None => (0..size)
            .map(|m| {
                let b = l + 2.0 * m as f64;
                vec![(1.0, b), (-b / (b + 2.0), b + 2.0)]
            })
            .collect(),
        Some(a) => {
            // r^f + αr + βr² with p′(a) = p′(1) = 0, f ∈ {0, 3, …, size+1}
            let mut out = vec![vec![(1.0, 0.0)]];
            for f in 3..=size + 1 {
                let ff = f as f64;
                let beta = -ff * (1.0 - a.powi(f as i32 - 1)) / (2.0 * (1.0 - a));
                let alpha = -ff - 2.0 * beta;
                out.push(vec![(1.0, ff), (alpha, 1.0), (beta, 2.0)]);
            }
            out
        }
    }
}

fn laplacian_terms(t: &Terms, n: u32, ell: u32) -> Terms {
    let (nf, l) = (f64::from(n), f64::from(ell));
    t.iter()
        .filter_map(|&(c, b)| {
            let cb = b * (b + nf - 2.0) - l * (l + nf - 2.0);
            (cb != 0.0).then_some((c * cb, b - 2.0))
        })
        .collect()
}

/// `∫_lo^1 r^p dr`.
fn power_integral(p: f64, lo: f64) -> f64 {
    if p == -1.0 {
        -lo.ln()
    } else {
        (1.0 - lo.powf(p + 1.0)) / (p + 1.0)
    }
}

fn pair_integral(f: &Terms, g: &Terms, weight_power: f64, lo: f64) -> f64 {
    let mut s = 0.0;
    for &(c1, b1) in f {
        for &(c2, b2) in g {
            s += c1 * c2 * power_integral(b1 + b2 + weight_power, lo);
        }
    }
    s
}

fn eval_terms(t: &Terms, r: f64) -> f64 {
    t.iter().map(|&(c, b)| c * r.powf(b)).sum()
}

fn assemble_exact(spec: &ProblemSpec, ell: u32, size: usize, gamma: f64) -> (Matrix, Matrix) {
    let n = spec.n;
    let lo = spec.geometry.inner_radius().unwrap_or(0.0);
    let w = f64::from(n) - 1.0;
    let phi = monomial_basis(spec, ell, size);
    let lap: Vec<Terms> = phi.iter().map(|t| laplacian_terms(t, n, ell)).collect();
    let mut k = Matrix::zeros(size, size);
    let mut m = Matrix::zeros(size, size);
    for i in 0..size {
        for j in 0..=i {
            k[(i, j)] = pair_integral(&lap[i], &lap[j], w, lo);
            m[(i, j)] = pair_integral(&phi[i], &phi[j], w, lo);
        }
    }
    if gamma != 0.0 {
        add_boundary(&mut m, spec, gamma, |r| phi.iter().map(|t| eval_terms(t, r)).collect());
    }
    symmetrise(&mut k);
    symmetrise(&mut m);
    (k, m)
}

/// Ascending generalized eigenvalues of `(K, M)` with Rayleigh-quotient
/// refinement.
fn pencil_eigenvalues(k: &Matrix, m: &Matrix) -> Result<Vec<f64>> {
    let size = k.rows();
    let l = linalg::cholesky(m).map_err(|_| {
        Error::numerical(
            "solve_sym_gevp",
            format!("mass matrix of size {size} is not numerically positive definite; reduce the basis size"),
        )
    })?;
    let y = linalg::forward_substitute(&l, k);
    let mut c = linalg::forward_substitute(&l, &y.transpose());
    for i in 0..size {
        for j in 0..i {
            let v = 0.5 * (c[(i, j)] + c[(j, i)]);
            c[(i, j)] = v;
            c[(j, i)] = v;
        }
    }
    let (_, vecs) = linalg::jacobi_eigen(&c)?;
    let mut out = Vec::with_capacity(size);
    for col in 0..size {
        let v: Vec<f64> = (0..size).map(|r| vecs[(r, col)]).collect();
        let x = linalg::back_substitute_transpose(&l, &v);
        out.push(k.bilinear(&x, &x) / m.bilinear(&x, &x));
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Solves `Kx = μMx` by Cholesky of `M` and Jacobi rotations, refines each
/// value as the Rayleigh quotient of its vector, and compares with the
/// nested system of size `N − 4`.
pub fn solve_sym_gevp(system: &RitzSystem) -> Result<RitzEstimate> {
    let values = pencil_eigenvalues(&system.stiffness, &system.mass)?;
    let mut delta = Vec::new();
    if system.size >= MIN_SIZE + 4 {
        let small = build_ritz_with(&system.spec, system.ell, system.size - 4, system.basis)?;
        let coarse = pencil_eigenvalues(&small.stiffness, &small.mass)?;
        delta = coarse.iter().zip(&values).map(|(c, f)| c - f).collect();
    }
    let monotone = delta.iter().zip(&values).all(|(d, v)| *d >= -1e-9 * v.abs().max(1e-12));
    Ok(RitzEstimate {
        values,
        size: system.size,
        delta,
        monotone,
    })
}

/// Ritz values of the default basis.
pub fn ritz_eigenvalues(spec: &ProblemSpec, ell: u32, size: usize) -> Result<Vec<f64>> {
    let sys = build_ritz_with(spec, ell, size, RitzBasis::Legendre)?;
    pencil_eigenvalues(&sys.stiffness, &sys.mass)
}

/// Finite-difference weights (Fornberg) for derivatives `0..=order` at `x0`.
fn fd_weights(x0: f64, xs: &[f64], order: usize) -> Vec<Vec<f64>> {
    let np = xs.len();
    let mut c = vec![vec![0.0; np]; order + 1];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for i in 1..np {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// `(u′, u″)` at every grid point from 9-point stencils (one-sided near the
/// ends).
fn derivatives(grid: &[f64], u: &[f64]) -> Vec<(f64, f64)> {
    const W: usize = 9;
    let np = grid.len();
    (0..np)
        .map(|i| {
            let start = i.saturating_sub(W / 2).min(np - W);
            let xs = &grid[start..start + W];
            let c = fd_weights(grid[i], xs, 2);
            let d1 = (0..W).map(|k| c[1][k] * u[start + k]).sum();
            let d2 = (0..W).map(|k| c[2][k] * u[start + k]).sum();
            (d1, d2)
        })
        .collect()
}

/// Composite Simpson on a uniform grid, closing with a 3/8 panel when the
/// interval count is odd.
fn simpson(h: f64, f: &[f64]) -> f64 {
    let intervals = f.len() - 1;
    let (simpson_end, tail) = if intervals.is_multiple_of(2) {
        (intervals, false)
    } else {
        (intervals - 3, true)
    };
    let mut s = 0.0;
    for i in (0..simpson_end).step_by(2) {
        s += h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
    }
    if tail {
        let i = simpson_end;
        s += 3.0 * h / 8.0 * (f[i] + 3.0 * f[i + 1] + 3.0 * f[i + 2] + f[i + 3]);
    }
    s
}

/// Rayleigh quotient of a sampled radial profile.
///
/// `grid` must be uniform on `[a, 1]` (or `[0, 1]`) with at least 64
/// points. Returns `E_γ[u] = ∫(Δ_ℓu)²r^{n−1} / (∫u²r^{n−1} + γ∮u²)`; for
/// `γ = ∞` the γ-scaled quotient `∫(Δ_ℓu)²r^{n−1} / ∮u²`.
pub fn rayleigh_quotient(grid: &[f64], samples: &[f64], spec: &ProblemSpec, ell: u32) -> Result<f64> {
    spec.validate()?;
    let np = grid.len();
    if np < 64 || samples.len() != np {
        return Err(Error::Argument(format!(
            "need at least 64 grid points with matching samples, got {np} and {}",
            samples.len()
        )));
    }
    let lo = spec.geometry.inner_radius().unwrap_or(0.0);
    let h = (grid[np - 1] - grid[0]) / (np - 1) as f64;
    let uniform = grid
        .iter()
        .enumerate()
        .all(|(i, &r)| (r - (grid[0] + h * i as f64)).abs() <= 1e-9 * h);
    if !uniform || (grid[0] - lo).abs() > 1e-12 || (grid[np - 1] - 1.0).abs() > 1e-12 {
        return Err(Error::Argument(format!("grid must be uniform on [{lo}, 1]")));
    }
    let d = derivatives(grid, samples);
    let umax = samples.iter().fold(0f64, |m, v| m.max(v.abs()));
    let mut ends = vec![np - 1];
    if lo > 0.0 {
        ends.push(0);
    }
    for &i in &ends {
        if d[i].0.abs() > 1e-4 * umax.max(f64::MIN_POSITIVE) {
            return Err(Error::Precondition(format!(
                "profile derivative {} at r = {} violates the Neumann condition",
                d[i].0, grid[i]
            )));
        }
    }
    let nf = f64::from(spec.n);
    let big_l = f64::from(ell) * (f64::from(ell) + nf - 2.0);
    let w = spec.n as i32 - 1;
    let num_f: Vec<f64> = (0..np)
        .map(|i| {
            let r = grid[i];
            if r == 0.0 {
                return 0.0;
            }
            let lap = d[i].1 + (nf - 1.0) * d[i].0 / r - big_l * samples[i] / (r * r);
            lap * lap * r.powi(w)
        })
        .collect();
    let bulk_f: Vec<f64> = (0..np).map(|i| samples[i] * samples[i] * grid[i].powi(w)).collect();
    let num = simpson(h, &num_f);
    let mut bnd = samples[np - 1].powi(2);
    if lo > 0.0 {
        bnd += lo.powi(w) * samples[0].powi(2);
    }
    let den = match spec.gamma {
        Coupling::Infinite => bnd,
        Coupling::Finite(g) => simpson(h, &bulk_f) + g * bnd,
    };
    if num == 0.0 {
        return Ok(0.0);
    }
    if !(den > 0.0) {
        return Err(Error::Precondition("profile has zero L2_gamma norm".into()));
    }
    Ok(num / den)
}
