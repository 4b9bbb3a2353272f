//! Double-double arithmetic for summing alternating ascending series.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Dd { hi, lo }
    }

    /// Caller guarantees `|lo| ≤ ulp(hi)/2`.
    pub const fn from_parts(hi: f64, lo: f64) -> Self {
        Dd { hi, lo }
    }

    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Exact square of an f64.
    pub fn square_f64(x: f64) -> Self {
        let (p, e) = two_prod(x, x);
        Dd::new(p, e)
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        Dd::new(p, e + self.lo * b)
    }

    pub fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let r = self - Dd::from_f64(b).mul_f64(q1);
        let q2 = r.hi / b;
        let r = r - Dd::from_f64(b).mul_f64(q2);
        let q3 = r.hi / b;
        Dd::new(q1, q2) + Dd::from_f64(q3)
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        Dd::new(p, e + (self.hi * b.lo + self.lo * b.hi))
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        Dd::new(q1, q2) + Dd::from_f64(q3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_bits_lost_in_plain_f64() {
        let big = Dd::from_f64(1e17);
        let s = big + Dd::from_f64(1.0) - big;
        assert_eq!(s.to_f64(), 1.0);
        let third = Dd::from_f64(1.0).div_f64(3.0);
        let back = third.mul_f64(3.0) - Dd::from_f64(1.0);
        assert!(back.to_f64().abs() < 1e-30);
        let q = Dd::from_f64(2.0) / Dd::from_f64(7.0);
        assert!((q * Dd::from_f64(7.0) - Dd::from_f64(2.0)).to_f64().abs() < 1e-30);
    }
}
