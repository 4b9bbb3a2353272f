//! Bracketing root finders: Brent refinement and a sign-change scanner.

use crate::{Error, Result};

/// A root refined from a sign-change bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketedRoot {
    pub x: f64,
    pub lo: f64,
    pub hi: f64,
    /// Secant slope across the final scan bracket.
    pub slope: f64,
}

/// Brent's method on a bracket `[a, b]` with `f(a)·f(b) ≤ 0`.
///
/// Converges when the bracket is narrower than `xtol + 4·eps·|x|`.
pub fn brent<F>(mut f: F, a: f64, b: f64, xtol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let fa0 = f(a)?;
    let fb0 = f(b)?;
    brent_with_values(&mut f, a, b, fa0, fb0, xtol, max_iter)
}

pub(crate) fn brent_with_values<F>(
    f: &mut F,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    xtol: f64,
    max_iter: usize,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::numerical(
            "brent",
            format!("root not bracketed in [{a}, {b}] (f = {fa}, {fb})"),
        ));
    }
    let (mut a, mut b, mut fa, mut fb) = (a, b, fa, fb);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Err(Error::numerical(
        "brent",
        format!("no convergence after {max_iter} iterations near {b}"),
    ))
}

/// Parameters of a sign-change scan.
#[derive(Debug, Clone, Copy)]
pub struct ScanParams {
    pub start: f64,
    pub step: f64,
    pub cap: f64,
    /// Relative tolerance of the Brent refinement.
    pub rtol: f64,
    /// A crossing whose rise `|f₁ − f₀|` is below this fraction of the
    /// largest `|f|` seen so far is treated as a suspected tangency.
    pub tangency_slope: f64,
}

impl ScanParams {
    pub fn new(start: f64, step: f64, cap: f64, rtol: f64) -> Self {
        ScanParams {
            start,
            step,
            cap,
            rtol,
            tangency_slope: 1e-8,
        }
    }
}

/// Finds the first `count` roots of `f` on `[start, cap]` by stepping and
/// refining each sign change with Brent.
///
/// A bracket whose secant slope is tiny is split at its quarter points, and
/// a same-sign dip in `|f|` between three scan points is rescanned on a finer
/// grid, so that close root pairs are not merged or skipped.
pub fn scan_roots<F>(mut f: F, params: ScanParams, count: usize, op: &'static str) -> Result<Vec<BracketedRoot>>
where
    F: FnMut(f64) -> Result<f64>,
{
    if count == 0 {
        return Ok(Vec::new());
    }
    let mut roots = Vec::with_capacity(count);
    let mut x0 = params.start;
    let mut f0 = f(x0)?;
    let mut prev: Option<(f64, f64)> = None;
    // running magnitude of f, the yardstick for a suspiciously flat crossing
    let mut fscale = f0.abs();
    while roots.len() < count {
        if x0 >= params.cap {
            return Err(Error::numerical(
                op,
                format!(
                    "found {} of {count} roots before the scan cap {}",
                    roots.len(),
                    params.cap
                ),
            ));
        }
        let x1 = (x0 + params.step).min(params.cap);
        let f1 = f(x1)?;
        fscale = fscale.max(f1.abs());

        // same-sign dip: |f| has a local minimum at x0 and the sign never changed
        if let Some((xp, fp)) = prev {
            if fp.signum() == f0.signum() && f0.signum() == f1.signum() && f0.abs() < fp.abs() && f0.abs() < f1.abs() {
                let mut inner = fine_scan(&mut f, xp, x1, 64, params, op)?;
                inner.retain(|r| {
                    roots
                        .iter()
                        .all(|q: &BracketedRoot| (q.x - r.x).abs() > params.rtol * r.x.abs().max(1.0))
                });
                for r in inner {
                    if roots.len() < count {
                        roots.push(r);
                    }
                }
                if roots.len() >= count {
                    break;
                }
            }
        }

        if f0 == 0.0 || f0.signum() != f1.signum() {
            let slope = (f1 - f0) / (x1 - x0);
            if (f1 - f0).abs() < params.tangency_slope * fscale {
                // almost flat crossing: look for a hidden pair inside
                for r in fine_scan(&mut f, x0, x1, 4, params, op)? {
                    if roots.len() < count {
                        roots.push(r);
                    }
                }
            } else if f0 != 0.0 || roots.last().is_none_or(|r: &BracketedRoot| r.x != x0) {
                let x = refine(&mut f, x0, x1, f0, f1, params.rtol)?;
                roots.push(BracketedRoot {
                    x,
                    lo: x0,
                    hi: x1,
                    slope,
                });
            }
        }
        prev = Some((x0, f0));
        x0 = x1;
        f0 = f1;
    }
    roots.sort_by(|a, b| a.x.total_cmp(&b.x));
    roots.truncate(count);
    Ok(roots)
}

fn refine<F>(f: &mut F, lo: f64, hi: f64, flo: f64, fhi: f64, rtol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let xtol = rtol * lo.abs().max(hi.abs()) * 0.5;
    brent_with_values(f, lo, hi, flo, fhi, xtol, 200)
}

fn fine_scan<F>(
    f: &mut F,
    lo: f64,
    hi: f64,
    pieces: usize,
    params: ScanParams,
    _op: &'static str,
) -> Result<Vec<BracketedRoot>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let h = (hi - lo) / pieces as f64;
    let mut out = Vec::new();
    let mut xa = lo;
    let mut fa = f(xa)?;
    for i in 1..=pieces {
        let xb = if i == pieces { hi } else { lo + h * i as f64 };
        let fb = f(xb)?;
        if fa.signum() != fb.signum() || fb == 0.0 {
            let x = refine(f, xa, xb, fa, fb, params.rtol)?;
            out.push(BracketedRoot {
                x,
                lo: xa,
                hi: xb,
                slope: (fb - fa) / (xb - xa),
            });
        }
        xa = xb;
        fa = fb;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_cubic_root() {
        let r = brent(|x| Ok(x * x * x - 2.0 * x - 5.0), 2.0, 3.0, 1e-14, 100).unwrap();
        assert!((r - 2.094_551_481_542_326_5).abs() < 1e-13);
    }

    #[test]
    fn brent_rejects_unbracketed() {
        assert!(brent(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-12, 50).is_err());
    }

    #[test]
    fn scanner_finds_sine_roots_in_order() {
        let p = ScanParams::new(0.5, 0.05, 40.0, 1e-13);
        let roots = scan_roots(|x| Ok(x.sin()), p, 5, "test").unwrap();
        for (k, r) in roots.iter().enumerate() {
            let exact = std::f64::consts::PI * (k + 1) as f64;
            assert!((r.x - exact).abs() < 1e-11, "{} vs {}", r.x, exact);
        }
    }

    #[test]
    fn scanner_splits_close_pair_hidden_between_grid_points() {
        // roots at 1.01 and 1.02 lie inside one 0.1-wide step
        let f = |x: f64| Ok((x - 1.01) * (x - 1.02));
        let p = ScanParams::new(0.95, 0.1, 3.0, 1e-13);
        let roots = scan_roots(f, p, 2, "test").unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0].x - 1.01).abs() < 1e-10);
        assert!((roots[1].x - 1.02).abs() < 1e-10);
    }

    #[test]
    fn scanner_reports_cap_exhaustion() {
        let p = ScanParams::new(0.5, 0.1, 5.0, 1e-12);
        let err = scan_roots(|x| Ok(x.sin()), p, 3, "test").unwrap_err();
        assert!(matches!(err, Error::Numerical { op: "test", .. }));
    }
}
