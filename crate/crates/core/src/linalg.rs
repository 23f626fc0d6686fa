//! Small dense square matrices. Everything here is sized by the alphabet,
//! so no blocking or sparse storage.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Dense row-major square matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix { dim, data: vec![0.0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Matrix { dim, data }
    }

    /// Builds from nested rows; panics if the rows are not square.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        Matrix { dim, data: rows.iter().flatten().copied().collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    /// `A x`
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `xᵀ A`
    pub fn vec_mul(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (i, xi) in x.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += xi * a;
            }
        }
        out
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn scale(&mut self, c: f64) {
        self.data.iter_mut().for_each(|x| *x *= c);
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.dim, |i, j| self[(j, i)])
    }

    /// `log trace(Aⁿ)` by repeated squaring with rescaling, for nonnegative `A`.
    pub fn log_trace_pow(&self, n: u64) -> f64 {
        // Each factor is stored as (matrix, log scale) with the matrix normalized to max 1.
        let normalize = |m: &mut Matrix| -> f64 {
            let s = m.max_abs();
            if s > 0.0 {
                m.scale(1.0 / s);
                s.ln()
            } else {
                f64::NEG_INFINITY
            }
        };
        let mut base = self.clone();
        let mut base_log = normalize(&mut base);
        let mut acc = Matrix::identity(self.dim);
        let mut acc_log = 0.0;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.matmul(&base);
                acc_log += base_log + normalize(&mut acc);
            }
            e >>= 1;
            if e > 0 {
                base = base.matmul(&base);
                base_log = 2.0 * base_log + normalize(&mut base);
            }
        }
        acc_log + acc.trace().ln()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Perron eigendata of a nonnegative primitive matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Perron {
    pub lambda: f64,
    /// Right eigenvector, entries summing to 1.
    pub right: Vec<f64>,
    /// Left eigenvector, scaled so that `left · right = 1`.
    pub left: Vec<f64>,
    /// Relative sup-norm residual `max(|Av - λv|, |uA - λu|) / (λ·|·|)` reached.
    pub residual: f64,
    pub iterations: usize,
}

fn relative_residual(image: &[f64], lambda: f64, v: &[f64]) -> f64 {
    let scale = lambda * v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let r = image.iter().zip(v).fold(0.0f64, |m, (a, b)| m.max((a - lambda * b).abs()));
    if scale > 0.0 {
        r / scale
    } else {
        r
    }
}

/// Power iteration from the uniform vector on both sides until the
/// relative residual of both eigen-equations is at most `tol`.
pub fn perron(a: &Matrix, tol: f64, max_iter: usize) -> Result<Perron> {
    let n = a.dim();
    let mut v = vec![1.0 / n as f64; n];
    let mut u = v.clone();
    let mut residual = f64::INFINITY;
    for it in 1..=max_iter {
        let av = a.mul_vec(&v);
        let ua = a.vec_mul(&u);
        let lv: f64 = av.iter().sum();
        let lu: f64 = ua.iter().sum();
        if !(lv > 0.0 && lu > 0.0) || !lv.is_finite() {
            return Err(Error::NoConvergence { iterations: it, residual });
        }
        residual = relative_residual(&av, lv, &v).max(relative_residual(&ua, lu, &u));
        v = av.into_iter().map(|x| x / lv).collect();
        u = ua.into_iter().map(|x| x / lu).collect();
        if residual <= tol {
            let lambda = a.mul_vec(&v).iter().sum::<f64>();
            let dot: f64 = u.iter().zip(&v).map(|(x, y)| x * y).sum();
            let left = u.into_iter().map(|x| x / dot).collect();
            return Ok(Perron { lambda, right: v, left, residual, iterations: it });
        }
    }
    Err(Error::NoConvergence { iterations: max_iter, residual })
}

/// Boolean square matrix with bit-packed rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BoolMatrix {
    dim: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BoolMatrix {
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let words = dim.div_ceil(64);
        let mut bits = vec![0u64; dim * words];
        for i in 0..dim {
            for j in 0..dim {
                if f(i, j) {
                    bits[i * words + j / 64] |= 1 << (j % 64);
                }
            }
        }
        BoolMatrix { dim, words, bits }
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn mul(&self, other: &BoolMatrix) -> BoolMatrix {
        let w = self.words;
        let mut bits = vec![0u64; self.dim * w];
        for i in 0..self.dim {
            for k in 0..self.dim {
                if self.get(i, k) {
                    for t in 0..w {
                        bits[i * w + t] |= other.bits[k * w + t];
                    }
                }
            }
        }
        BoolMatrix { dim: self.dim, words: w, bits }
    }

    pub fn all_set(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.get(i, j)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_trace_matches_direct_power() {
        let a = Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 0.0]]);
        let mut p = Matrix::identity(2);
        for _ in 0..13 {
            p = p.matmul(&a);
        }
        assert!((a.log_trace_pow(13) - p.trace().ln()).abs() < 1e-12);
        // Lucas number L_13 = 521
        assert!((p.trace() - 521.0).abs() < 1e-9);
    }

    #[test]
    fn bool_product() {
        let m = BoolMatrix::from_fn(2, |i, j| !(i == 1 && j == 1));
        assert!(!m.all_set());
        assert!(m.mul(&m).all_set());
        let big = BoolMatrix::from_fn(70, |i, j| j == (i + 1) % 70);
        let sq = big.mul(&big);
        assert!(sq.get(68, 0) && sq.get(69, 1) && !sq.get(0, 1));
    }
}
