//! Small dense linear algebra: LU determinants, rank, Cholesky and cyclic
//! Jacobi for symmetric matrices.

use std::ops::{Index, IndexMut};

use crate::{Error, Result};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows<const C: usize>(rows: &[[f64; C]]) -> Self {
        let mut m = Self::zeros(rows.len(), C);
        for (i, r) in rows.iter().enumerate() {
            m.data[i * C..(i + 1) * C].copy_from_slice(r);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, b: &Matrix) -> Matrix {
        assert_eq!(self.cols, b.rows);
        let mut c = Matrix::zeros(self.rows, b.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..b.cols {
                    c[(i, j)] += a * b[(k, j)];
                }
            }
        }
        c
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Quadratic form `xᵀ A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        x.iter().zip(self.matvec(y)).map(|(a, b)| a * b).sum()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Determinant by LU with partial pivoting.
pub fn determinant(a: &Matrix) -> f64 {
    assert_eq!(a.rows, a.cols, "determinant of a non-square matrix");
    let n = a.rows;
    let mut m = a.clone();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| m[(i, k)].abs().total_cmp(&m[(j, k)].abs()))
            .unwrap_or(k);
        if m[(p, k)] == 0.0 {
            return 0.0;
        }
        if p != k {
            for j in 0..n {
                m.data.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        let piv = m[(k, k)];
        det *= piv;
        for i in k + 1..n {
            let f = m[(i, k)] / piv;
            if f != 0.0 {
                for j in k + 1..n {
                    let v = m[(k, j)];
                    m[(i, j)] -= f * v;
                }
            }
        }
    }
    det
}

/// Numerical rank by Gaussian elimination with complete pivoting; pivots
/// below `rtol·max|a_ij|` count as zero.
pub fn rank(a: &Matrix, rtol: f64) -> usize {
    let mut m = a.clone();
    let scale = m.data.iter().fold(0f64, |s, x| s.max(x.abs()));
    if scale == 0.0 {
        return 0;
    }
    let (r, c) = (m.rows, m.cols);
    let mut rank = 0;
    for k in 0..r.min(c) {
        let mut best = (k, k, 0f64);
        for i in k..r {
            for j in k..c {
                if m[(i, j)].abs() > best.2 {
                    best = (i, j, m[(i, j)].abs());
                }
            }
        }
        if best.2 <= rtol * scale {
            break;
        }
        let (pi, pj, _) = best;
        for j in 0..c {
            m.data.swap(k * c + j, pi * c + j);
        }
        for i in 0..r {
            m.data.swap(i * c + k, i * c + pj);
        }
        rank += 1;
        for i in k + 1..r {
            let f = m[(i, k)] / m[(k, k)];
            for j in k..c {
                let v = m[(k, j)];
                m[(i, j)] -= f * v;
            }
        }
    }
    rank
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn solve(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.rows;
    let mut m = a.clone();
    let mut x = b.to_vec();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| m[(i, k)].abs().total_cmp(&m[(j, k)].abs()))
            .unwrap_or(k);
        if m[(p, k)] == 0.0 {
            return Err(Error::numerical("solve", "singular matrix"));
        }
        if p != k {
            for j in 0..n {
                m.data.swap(k * n + j, p * n + j);
            }
            x.swap(k, p);
        }
        for i in k + 1..n {
            let f = m[(i, k)] / m[(k, k)];
            for j in k..n {
                let v = m[(k, j)];
                m[(i, j)] -= f * v;
            }
            x[i] -= f * x[k];
        }
    }
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| m[(k, j)] * x[j]).sum();
        x[k] = (x[k] - s) / m[(k, k)];
    }
    Ok(x)
}

/// Lower-triangular `L` with `A = L Lᵀ`.
pub fn cholesky(a: &Matrix) -> Result<Matrix> {
    let n = a.rows;
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let d = a[(j, j)] - (0..j).map(|k| l[(j, k)] * l[(j, k)]).sum::<f64>();
        if !(d > 0.0) {
            return Err(Error::numerical(
                "cholesky",
                format!("matrix of size {n} is not positive definite (pivot {j} = {d:e})"),
            ));
        }
        let ljj = d.sqrt();
        l[(j, j)] = ljj;
        for i in j + 1..n {
            let s = a[(i, j)] - (0..j).map(|k| l[(i, k)] * l[(j, k)]).sum::<f64>();
            l[(i, j)] = s / ljj;
        }
    }
    Ok(l)
}

/// `L⁻¹ B` for lower-triangular `L`.
pub fn forward_substitute(l: &Matrix, b: &Matrix) -> Matrix {
    let n = l.rows;
    let mut x = b.clone();
    for c in 0..b.cols {
        for i in 0..n {
            let s: f64 = (0..i).map(|k| l[(i, k)] * x[(k, c)]).sum();
            x[(i, c)] = (x[(i, c)] - s) / l[(i, i)];
        }
    }
    x
}

/// `L⁻ᵀ y` for lower-triangular `L`.
pub fn back_substitute_transpose(l: &Matrix, y: &[f64]) -> Vec<f64> {
    let n = l.rows;
    let mut x = y.to_vec();
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| l[(k, i)] * x[k]).sum();
        x[i] = (x[i] - s) / l[(i, i)];
    }
    x
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Sweeps continue until the off-diagonal Frobenius norm is below
/// `1e−13·‖A‖` and every `|a_pq| ≤ 1e−15·√|a_pp a_qq|`; the second test
/// keeps small eigenvalues accurate next to large ones. Eigenvalues ascend;
/// eigenvectors are the columns of the returned matrix.
pub fn jacobi_eigen(a: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let n = a.rows;
    let mut m = a.clone();
    let mut v = Matrix::identity(n);
    let total = a.norm().max(f64::MIN_POSITIVE);
    let off = |m: &Matrix| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)] * m[(i, j)];
                }
            }
        }
        s.sqrt()
    };
    let floor = 1e-300f64.max(1e-30 * total);
    let loose = |m: &Matrix, p: usize, q: usize| {
        let apq = m[(p, q)].abs();
        apq > floor && apq > 1e-15 * (m[(p, p)] * m[(q, q)]).abs().sqrt()
    };
    let unconverged = |m: &Matrix| off(m) > 1e-13 * total || (0..n).any(|p| (p + 1..n).any(|q| loose(m, p, q)));
    let mut sweeps = 0;
    while unconverged(&m) {
        sweeps += 1;
        if sweeps > 100 {
            return Err(Error::numerical("jacobi", format!("no convergence for size {n}")));
        }
        let frob_ok = off(&m) <= 1e-13 * total;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 || (frob_ok && !loose(&m, p, q)) {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let vals = order.iter().map(|&i| m[(i, i)]).collect();
    let mut vecs = Matrix::zeros(n, n);
    for (c, &i) in order.iter().enumerate() {
        for r in 0..n {
            vecs[(r, c)] = v[(r, i)];
        }
    }
    Ok((vals, vecs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_of_known_matrix() {
        let a = Matrix::from_rows(&[
            [2.0, -1.0, 0.0, 1.0],
            [1.0, 3.0, 2.0, 0.0],
            [0.0, 1.0, 4.0, -2.0],
            [3.0, 0.0, 1.0, 1.0],
        ]);
        assert!((determinant(&a) - (-5.0)).abs() < 1e-12);
    }

    #[test]
    fn rank_detects_dependent_rows() {
        let a = Matrix::from_rows(&[[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 1.0, 1.0]]);
        assert_eq!(rank(&a, 1e-12), 2);
        assert_eq!(rank(&Matrix::identity(4), 1e-12), 4);
    }

    #[test]
    fn solve_and_cholesky_round_trip() {
        let a = Matrix::from_rows(&[[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]]);
        let x = solve(&a, &[1.0, 2.0, 3.0]).unwrap();
        let r = a.matvec(&x);
        assert!((r[0] - 1.0).abs() + (r[1] - 2.0).abs() + (r[2] - 3.0).abs() < 1e-14);
        let l = cholesky(&a).unwrap();
        let back = l.matmul(&l.transpose());
        for i in 0..3 {
            for j in 0..3 {
                assert!((back[(i, j)] - a[(i, j)]).abs() < 1e-14);
            }
        }
        assert!(cholesky(&Matrix::from_rows(&[[1.0, 2.0], [2.0, 1.0]])).is_err());
    }

    #[test]
    fn jacobi_recovers_spectrum() {
        // tridiagonal (−1, 2, −1): eigenvalues 2 − 2cos(kπ/(n+1))
        let n = 8;
        let mut a = Matrix::zeros(n, n);
        for i in 0..n {
            a[(i, i)] = 2.0;
            if i + 1 < n {
                a[(i, i + 1)] = -1.0;
                a[(i + 1, i)] = -1.0;
            }
        }
        let (vals, vecs) = jacobi_eigen(&a).unwrap();
        for (k, v) in vals.iter().enumerate() {
            let exact = 2.0 - 2.0 * (std::f64::consts::PI * (k + 1) as f64 / (n + 1) as f64).cos();
            assert!((v - exact).abs() < 1e-13);
        }
        let vtv = vecs.transpose().matmul(&vecs);
        for i in 0..n {
            for j in 0..n {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((vtv[(i, j)] - e).abs() < 1e-13);
            }
        }
    }
}
