use super::{ultra_with_deriv, BesselOrder, Kind};
use crate::roots::{scan_roots, ScanParams};
use crate::{Error, Result};

/// First `count` positive zeros of `j′_ℓ`, strictly increasing.
///
/// Sign changes are located on a grid of step 0.05 and refined by Brent to
/// about 1e−14 relative. For `ℓ = 1` the positivity of `j′_1` on the grid
/// below the first zero is checked as well.
pub fn zeros_of_jprime(order: BesselOrder, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::Argument("count must be at least 1".into()));
    }
    let (n, ell) = (order.n, order.ell);
    let f = |z: f64| ultra_with_deriv(Kind::J, n, ell, z).map(|(_, d)| d);
    let cap = 60f64.max(4.0 * count as f64 * std::f64::consts::PI) + order.nu();
    let params = ScanParams::new(1e-3, 0.05, cap, 1e-14);
    let roots: Vec<f64> = scan_roots(f, params, count, "zeros_of_jprime")?
        .into_iter()
        .map(|r| r.x)
        .collect();
    if roots.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::numerical("zeros_of_jprime", "zeros are not strictly increasing"));
    }
    if ell == 1 {
        let first = roots[0];
        let mut z = 0.01;
        while z < first {
            if f(z)? <= 0.0 {
                return Err(Error::numerical(
                    "zeros_of_jprime",
                    format!("j'_1 is not positive at z = {z} below its first zero {first}"),
                ));
            }
            z += 0.01;
        }
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_zeros_in_the_plane() {
        let z = zeros_of_jprime(BesselOrder::new(2, 1).unwrap(), 1).unwrap();
        assert!((z[0] - 1.841_183_781_340_659_3).abs() < 1e-12);
        let z = zeros_of_jprime(BesselOrder::new(2, 0).unwrap(), 1).unwrap();
        assert!((z[0] - 3.831_705_970_207_512_3).abs() < 1e-12);
    }

    #[test]
    fn three_dimensional_radial_zeros_solve_tan_z_eq_z() {
        // j_0 ∝ sin z / z so j_0' = 0 ⇔ tan z = z
        let z = zeros_of_jprime(BesselOrder::new(3, 0).unwrap(), 2).unwrap();
        for &x in &z {
            assert!((x.tan() - x).abs() < 1e-9 * x);
        }
        assert!(z[1] - z[0] > 0.0 && z[1] - z[0] <= 4.0 * std::f64::consts::PI);
    }

    #[test]
    fn zero_count_is_rejected() {
        assert!(zeros_of_jprime(BesselOrder::new(2, 0).unwrap(), 0).is_err());
    }
}
