use std::sync::Arc;

use crate::error::{Error, Result};

/// Row-compressed sparsity pattern with sorted column indices per row.
#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    pub row_ptr: Vec<usize>,
    pub col: Vec<usize>,
}

impl Pattern {
    /// Pattern of `nodes x nodes` with the given (unsorted, possibly
    /// repeated) adjacency lists; the diagonal is always present.
    pub fn from_adjacency(mut adj: Vec<Vec<usize>>) -> Self {
        let mut row_ptr = Vec::with_capacity(adj.len() + 1);
        let mut col = Vec::new();
        row_ptr.push(0);
        for (i, row) in adj.iter_mut().enumerate() {
            row.push(i);
            row.sort_unstable();
            row.dedup();
            col.extend_from_slice(row);
            row_ptr.push(col.len());
        }
        Pattern { row_ptr, col }
    }

    pub fn n(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn nnz(&self) -> usize {
        self.col.len()
    }

    pub fn row(&self, i: usize) -> std::ops::Range<usize> {
        self.row_ptr[i]..self.row_ptr[i + 1]
    }

    pub fn find(&self, i: usize, j: usize) -> Option<usize> {
        let r = self.row(i);
        self.col[r.clone()].binary_search(&j).ok().map(|k| r.start + k)
    }
}

/// Scalar CSR matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    pub pattern: Arc<Pattern>,
    pub val: Vec<f64>,
}

impl CsrMatrix {
    pub fn zeros(pattern: Arc<Pattern>) -> Self {
        let val = vec![0.0; pattern.nnz()];
        CsrMatrix { pattern, val }
    }

    pub fn n(&self) -> usize {
        self.pattern.n()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.pattern.find(i, j).map_or(0.0, |k| self.val[k])
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.get(i, i)).collect()
    }

    pub fn add_diagonal(&mut self, d: &[f64]) {
        for (i, &di) in d.iter().enumerate() {
            let k = self.pattern.find(i, i).expect("diagonal in pattern");
            self.val[k] += di;
        }
    }

    /// `self += s * other` for a matrix on the same pattern.
    pub fn axpy(&mut self, s: f64, other: &CsrMatrix) {
        assert!(Arc::ptr_eq(&self.pattern, &other.pattern) || self.pattern == other.pattern);
        for (a, b) in self.val.iter_mut().zip(&other.val) {
            *a += s * b;
        }
    }

    pub fn scaled(&self, s: f64) -> CsrMatrix {
        CsrMatrix { pattern: self.pattern.clone(), val: self.val.iter().map(|v| s * v).collect() }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n()];
        self.mul_vec_into(x, &mut y);
        y
    }

    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        let p = &*self.pattern;
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = 0.0;
            for k in p.row(i) {
                s += self.val[k] * x[p.col[k]];
            }
            *yi = s;
        }
    }

    /// Largest entrywise asymmetry `|a_ij - a_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let p = &*self.pattern;
        let mut worst: f64 = 0.0;
        for i in 0..self.n() {
            for k in p.row(i) {
                worst = worst.max((self.val[k] - self.get(p.col[k], i)).abs());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.val.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Matrix of 3x3 blocks on a nodal pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockCsr {
    pub pattern: Arc<Pattern>,
    pub val: Vec<[[f64; 3]; 3]>,
}

impl BlockCsr {
    pub fn zeros(pattern: Arc<Pattern>) -> Self {
        let val = vec![[[0.0; 3]; 3]; pattern.nnz()];
        BlockCsr { pattern, val }
    }

    pub fn n(&self) -> usize {
        self.pattern.n()
    }

    pub fn block(&self, i: usize, j: usize) -> [[f64; 3]; 3] {
        self.pattern.find(i, j).map_or([[0.0; 3]; 3], |k| self.val[k])
    }

    pub fn mul_vec(&self, x: &[[f64; 3]]) -> Vec<[f64; 3]> {
        let p = &*self.pattern;
        (0..self.n())
            .map(|i| {
                let mut s = [0.0; 3];
                for k in p.row(i) {
                    let b = &self.val[k];
                    let xj = &x[p.col[k]];
                    for r in 0..3 {
                        s[r] += b[r][0] * xj[0] + b[r][1] * xj[1] + b[r][2] * xj[2];
                    }
                }
                s
            })
            .collect()
    }

    /// Largest entrywise asymmetry of the expanded scalar matrix.
    pub fn asymmetry(&self) -> f64 {
        let p = &*self.pattern;
        let mut worst: f64 = 0.0;
        for i in 0..self.n() {
            for k in p.row(i) {
                let t = self.block(p.col[k], i);
                for r in 0..3 {
                    for c in 0..3 {
                        worst = worst.max((self.val[k][r][c] - t[c][r]).abs());
                    }
                }
            }
        }
        worst
    }
}

/// Outcome of a conjugate-gradient solve.
#[derive(Debug, Clone, Copy)]
pub struct CgInfo {
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Jacobi-preconditioned conjugate gradients for a symmetric positive
/// definite matrix, started from `x`, stopping at `|b - Ax| <= tol |b|`.
pub fn solve_cg(a: &CsrMatrix, b: &[f64], x: &mut [f64], tol: f64) -> Result<CgInfo> {
    let n = a.n();
    assert_eq!(b.len(), n);
    assert_eq!(x.len(), n);
    let bnorm = norm(b);
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(CgInfo { iterations: 0, relative_residual: 0.0 });
    }
    let inv_diag: Vec<f64> = a
        .diagonal()
        .iter()
        .map(|&d| if d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let mut r = a.mul_vec(x);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let max_iter = 20 * n + 1000;
    let mut res = norm(&r) / bnorm;
    let mut it = 0;
    while res > tol {
        if it == max_iter {
            return Err(Error::LinearSolver { residual: res, iterations: it });
        }
        a.mul_vec_into(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(Error::LinearSolver { residual: res, iterations: it });
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        it += 1;
        // Recompute the true residual now and then to guard against drift.
        if it % 200 == 0 {
            let ax = a.mul_vec(x);
            for i in 0..n {
                r[i] = b[i] - ax[i];
            }
        }
        res = norm(&r) / bnorm;
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    // Report the true residual.
    let ax = a.mul_vec(x);
    let true_res = norm(&b.iter().zip(&ax).map(|(b, a)| b - a).collect::<Vec<_>>()) / bnorm;
    if true_res > tol * 10.0 {
        return Err(Error::LinearSolver { residual: true_res, iterations: it });
    }
    Ok(CgInfo { iterations: it, relative_residual: true_res })
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
