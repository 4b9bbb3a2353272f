//! Gauss–Legendre rules.

/// Nodes and weights of the `m`-point Gauss–Legendre rule on `[−1, 1]`,
/// nodes ascending.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1);
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    let half = m.div_ceil(2);
    for i in 0..half {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(m, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(m, z);
        dp = if d.is_finite() { d } else { dp };
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = wi;
        w[m - 1 - i] = wi;
    }
    (x, w)
}

/// `(P_m(z), P′_m(z))` by the three-term recurrence.
fn legendre_and_derivative(m: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Composite rule: `panels` equal sub-intervals of `[a, b]`, each with an
/// `order`-point Gauss–Legendre rule.
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn composite(a: f64, b: f64, panels: usize, order: usize) -> Rule {
        let (x, w) = gauss_legendre(order);
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let lo = a + h * p as f64;
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(lo + 0.5 * h * (xi + 1.0));
                weights.push(0.5 * h * wi);
            }
        }
        Rule { nodes, weights }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_is_exact_for_high_degree_polynomials() {
        let (x, w) = gauss_legendre(10);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-15);
        // ∫ x^18 = 2/19
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((s - 2.0 / 19.0).abs() < 1e-15);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn odd_rule_has_centre_node() {
        let (x, w) = gauss_legendre(5);
        assert_eq!(x[2], 0.0);
        assert!((w[2] - 128.0 / 225.0).abs() < 1e-15);
    }

    #[test]
    fn composite_rule_integrates_smooth_functions() {
        let r = Rule::composite(0.0, std::f64::consts::PI, 8, 16);
        assert!((r.integrate(f64::sin) - 2.0).abs() < 1e-14);
    }
}
