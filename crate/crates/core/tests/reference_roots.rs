//! Roots checked against an independent 40-digit evaluation (mpmath
//! `besselj`/`besseli` with `findroot`) of the unscaled determinants.

// reference digits are kept as printed by the high-precision run
#![allow(clippy::excessive_precision)]

use bilap_core::annulus::{annulus_eigenvalues, MatrixConvention};
use bilap_core::ball::ball_eigenvalues;
use bilap_core::Coupling;

fn close(got: f64, want: f64) {
    assert!((got - want).abs() <= 1e-12 * want, "got {got}, want {want}");
}

#[test]
fn ball_roots_match_high_precision_values() {
    let cases: [(u32, u32, f64, &[f64]); 3] = [
        (
            2,
            1,
            0.4,
            &[1.5218361296374856391, 4.8911870238979469094, 8.0087963097776324024],
        ),
        (3, 0, 1.0, &[4.0400304095695164543, 7.1592641345576952406]),
        (4, 2, 10.0, &[1.3314170383390629372, 7.154336462638746376]),
    ];
    for (n, ell, g, want) in cases {
        let got = ball_eigenvalues(n, ell, Coupling::Finite(g), want.len()).unwrap();
        for (r, &w) in got.iter().zip(want) {
            close(r.lambda, w);
            close(r.lambda4, w.powi(4));
        }
    }
}

#[test]
fn annulus_roots_match_high_precision_values() {
    let cases: [(u32, u32, f64, f64, &[f64]); 2] = [
        (2, 0, 0.4, 0.3, &[3.5833025796877358595, 7.5218272132208731516]),
        (3, 1, 2.0, 0.6, &[0.94820351603055089358, 3.9596024026678073135]),
    ];
    for (n, ell, g, a, want) in cases {
        let got = annulus_eigenvalues(n, ell, Coupling::Finite(g), a, want.len(), MatrixConvention::Physical).unwrap();
        for (r, &w) in got.iter().zip(want) {
            close(r.lambda, w);
        }
    }
}

#[test]
fn steklov_limit_is_exact() {
    for (n, ell, want) in [(2, 1, 4.0), (3, 2, 28.0), (4, 3, 90.0)] {
        let r = ball_eigenvalues(n, ell, Coupling::Infinite, 1).unwrap();
        assert_eq!(r[0].lambda4, want);
    }
}
