use bilap_core::annulus::{annulus_eigenvalues, eigenfunction_annulus, null_vector, secular_matrix, MatrixConvention};
use bilap_core::ball::{ball_eigenvalues, eigenfunction_ball, fixed_point_psi, secular_phi_radius};
use bilap_core::dynamics::{evolve, state_from_coefficients};
use bilap_core::problem::multiplicity;
use bilap_core::roots::brent;
use bilap_core::specfun::{eval_ultra, eval_ultra_deriv, BesselOrder, Kind};
use bilap_core::spectrum::assemble_spectrum;
use bilap_core::{Coupling, ProblemSpec};
use proptest::prelude::*;

/// Dimension of degree-ℓ harmonic polynomials in n variables, by counting
/// monomials: C(ℓ+n−1, n−1) − C(ℓ+n−3, n−1).
fn harmonic_dim(n: u32, ell: u32) -> u64 {
    fn binom(a: i64, b: i64) -> u64 {
        if a < b || b < 0 {
            return 0;
        }
        (0..b).fold(1u64, |acc, i| acc * (a - i) as u64 / (i + 1) as u64)
    }
    let (n, l) = (i64::from(n), i64::from(ell));
    binom(l + n - 1, n - 1) - binom(l + n - 3, n - 1)
}

#[test]
fn multiplicity_counts_harmonic_polynomials() {
    for n in 2..=7 {
        for ell in 0..=9 {
            assert_eq!(multiplicity(n, ell), harmonic_dim(n, ell), "n={n} ell={ell}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ball_radius_scaling(n in 2u32..=4, ell in 0u32..=3, g in 0.05f64..20.0, big_r in prop::sample::select(vec![0.5, 2.0])) {
        let lam = ball_eigenvalues(n, ell, Coupling::Finite(g), 1).unwrap()[0].lambda;
        // on B_R with coupling Rγ the first root sits at μ = λ/R
        let f = |mu: f64| secular_phi_radius(n, ell, big_r * g, mu, big_r);
        let guess = lam / big_r;
        let mu = brent(f, guess * 0.97, guess * 1.03, 1e-15, 200).unwrap();
        let lam4_r = mu.powi(4);
        prop_assert!((lam.powi(4) - big_r.powi(4) * lam4_r).abs() <= 1e-10 * lam.powi(4));
    }

    #[test]
    fn ball_roots_are_fixed_points(n in 2u32..=4, ell in 0u32..=3, g in 0.05f64..20.0) {
        for r in ball_eigenvalues(n, ell, Coupling::Finite(g), 3).unwrap() {
            let psi = fixed_point_psi(n, ell, r.lambda).unwrap();
            prop_assert!((psi - g * r.lambda).abs() <= 1e-9 * (1.0 + psi.abs()));
        }
    }

    #[test]
    fn ball_eigenfunctions_are_neumann(n in 2u32..=4, ell in 0u32..=3, g in 0.05f64..20.0) {
        for r in ball_eigenvalues(n, ell, Coupling::Finite(g), 3).unwrap() {
            let u = eigenfunction_ball(n, ell, Coupling::Finite(g), r.lambda).unwrap();
            let (_, outer) = u.neumann_residuals().unwrap();
            prop_assert!(outer <= 1e-10);
            prop_assert!((u.norm_squared().unwrap() - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn column_scaling_matches_unscaled_functions(
        n in 2u32..=4, ell in 0u32..=3, g in 0.0f64..5.0, a in 0.1f64..0.9, lam in 0.3f64..12.0,
    ) {
        let w = secular_matrix(n, ell, g, a, lam, MatrixConvention::Physical).unwrap();
        let order = BesselOrder::new(n, ell).unwrap();
        let kinds = [Kind::J, Kind::Y, Kind::I, Kind::K];
        for (col, kind) in kinds.into_iter().enumerate() {
            let f = |z: f64| eval_ultra(kind, order, z, false).unwrap().to_f64();
            let df = |z: f64| eval_ultra_deriv(kind, order, z, false).unwrap().to_f64();
            let s = w.column_scales[col];
            let e = if col < 2 { 1.0 } else { -1.0 };
            let want = [
                df(lam * a),
                df(lam),
                e * df(lam * a) + g * lam * f(lam * a),
                e * df(lam) - g * lam * f(lam),
            ];
            for (row, want) in want.into_iter().enumerate() {
                let got = w.entries.row(row)[col];
                let scale = w.entries.row(row).iter().fold(0f64, |m, x| m.max(x.abs()));
                prop_assert!((got - s * want).abs() <= 1e-11 * scale, "row {row} col {col}: {got} vs {}", s * want);
            }
        }
    }

    #[test]
    fn annulus_null_vector_annihilates(n in 2u32..=3, ell in 0u32..=2, g in 0.05f64..5.0, a in 0.2f64..0.8) {
        let roots = annulus_eigenvalues(n, ell, Coupling::Finite(g), a, 2, MatrixConvention::Physical).unwrap();
        for r in roots {
            let w = secular_matrix(n, ell, g, a, r.lambda, MatrixConvention::Physical).unwrap();
            let v = null_vector(&w.entries).unwrap();
            let res = w.entries.matvec(&v).iter().fold(0f64, |m, x| m.max(x.abs()));
            prop_assert!(res <= 1e-8 * w.entries.norm(), "residual {res}");
            let u = eigenfunction_annulus(n, ell, Coupling::Finite(g), a, r.lambda).unwrap();
            let (inner, outer) = u.neumann_residuals().unwrap();
            prop_assert!(inner <= 1e-8 && outer <= 1e-8);
        }
    }

    #[test]
    fn spectra_are_sorted_with_multiplicity(n in 2u32..=4, g in prop_oneof![Just(f64::INFINITY), 0.0f64..30.0]) {
        let gamma = if g.is_infinite() { Coupling::Infinite } else { Coupling::Finite(g) };
        let t = assemble_spectrum(&ProblemSpec::ball(n, gamma).unwrap(), 15, 30).unwrap();
        prop_assert_eq!(t.entries.len(), 15);
        prop_assert_eq!(t.entries[0].lambda4, 0.0);
        prop_assert!(t.entries.windows(2).all(|w| w[0].lambda4 <= w[1].lambda4));
        prop_assert_eq!(t.entries[1].ell, 1);
        let mut i = 0;
        while i < t.entries.len() {
            let e = t.entries[i];
            let m = multiplicity(n, e.ell) as usize;
            let run = t.entries[i..].iter().take_while(|x| x.ell == e.ell && x.k == e.k).count();
            prop_assert!(run == m || i + run == t.entries.len());
            i += run;
        }
    }

    #[test]
    fn evolution_is_a_semigroup(s in 0.0f64..0.5, t in 0.0f64..0.5, c in prop::collection::vec(-2.0f64..2.0, 4)) {
        let spec = ProblemSpec::ball(3, Coupling::Finite(0.7)).unwrap();
        let st = state_from_coefficients(&spec, 0, &c).unwrap();
        let two = evolve(&evolve(&st, s).unwrap(), t).unwrap();
        let one = evolve(&st, s + t).unwrap();
        for (x, y) in two.modes.iter().zip(&one.modes) {
            prop_assert!((x.coefficient - y.coefficient).abs() <= 1e-12 * y.coefficient.abs().max(1e-300));
        }
        prop_assert!((two.value(0.4).unwrap() - one.value(0.4).unwrap()).abs() <= 1e-12);
    }
}
