//! Dense complex linear algebra for the small systems the solver produces.

use num_complex::Complex64;

pub type CMatrix = Vec<Vec<Complex64>>;

/// LU factorization with partial pivoting, stored in place.
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
}

impl Lu {
    /// Returns `None` when a pivot falls below `tiny` times the largest
    /// entry of the input.
    pub fn factor(mut a: CMatrix) -> Option<Self> {
        let n = a.len();
        let scale = a
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0f64, f64::max);
        if n == 0 || scale == 0.0 {
            return None;
        }
        let tiny = scale * 1e-13;
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (piv, best) = (k..n)
                .map(|i| (i, a[i][k].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best <= tiny {
                return None;
            }
            a.swap(k, piv);
            perm.swap(k, piv);
            let pivot = a[k][k];
            for i in k + 1..n {
                let factor = a[i][k] / pivot;
                a[i][k] = factor;
                for j in k + 1..n {
                    let t = a[k][j];
                    a[i][j] -= factor * t;
                }
            }
        }
        Some(Self { lu: a, perm })
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.len();
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let t = self.lu[i][j] * x[j];
                x[i] -= t;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = self.lu[i][j] * x[j];
                x[i] -= t;
            }
            x[i] /= self.lu[i][i];
        }
        x
    }

    pub fn inverse(&self) -> CMatrix {
        let n = self.lu.len();
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[j] = Complex64::new(1.0, 0.0);
            cols.push(self.solve(&e));
        }
        (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect()
    }
}

/// Greedy selection of linearly independent rows, taking `order` in turn and
/// keeping a row when it is not (numerically) in the span of those kept.
pub fn independent_rows(rows: &[Vec<Complex64>], order: &[usize], rel_tol: f64) -> Vec<usize> {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut kept = Vec::new();
    for &i in order {
        let row = &rows[i];
        let norm0 = norm(row);
        if norm0 == 0.0 {
            continue;
        }
        let mut v = row.clone();
        // Two passes of modified Gram-Schmidt.
        for _ in 0..2 {
            for b in &basis {
                let proj: Complex64 = b.iter().zip(&v).map(|(bi, vi)| bi.conj() * vi).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= proj * bi;
                }
            }
        }
        let nv = norm(&v);
        if nv > rel_tol * norm0 {
            for vi in v.iter_mut() {
                *vi /= nv;
            }
            basis.push(v);
            kept.push(i);
        }
    }
    kept
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
