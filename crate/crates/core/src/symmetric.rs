//! Exact signature of symmetric integer matrices by congruence diagonalization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Signature (positive minus negative inertia) of a symmetric integer matrix.
///
/// Works entirely in arbitrary-precision integers: each elimination step
/// replaces the trailing block by `pivot * schur_complement`, which is a
/// congruence up to the sign of the pivot, so no rational arithmetic is needed.
///
/// Panics if `m` is not square or not symmetric.
pub fn signature(m: &[Vec<BigInt>]) -> i64 {
    let n = m.len();
    for (i, row) in m.iter().enumerate() {
        assert_eq!(row.len(), n, "matrix is not square");
        for j in 0..i {
            assert_eq!(m[i][j], m[j][i], "matrix is not symmetric");
        }
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sig = 0i64;
    // Sign multiplier accumulated from scaling by pivots.
    let mut flip = 1i64;

    while !a.is_empty() {
        reduce_content(&mut a);
        let n = a.len();
        let pivot = match (0..n).find(|&i| !a[i][i].is_zero()) {
            Some(i) => i,
            None => {
                let Some((i, j)) = (0..n)
                    .flat_map(|i| (0..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !a[i][j].is_zero())
                else {
                    break;
                };
                // Row/column i += row/column j makes a[i][i] = 2 a[i][j] != 0.
                for k in 0..n {
                    let v = a[j][k].clone();
                    a[i][k] += v;
                }
                for k in 0..n {
                    let v = a[k][j].clone();
                    a[k][i] += v;
                }
                i
            }
        };

        let p = a[pivot][pivot].clone();
        let s = if p.is_positive() { 1 } else { -1 };
        sig += flip * s;

        let rest: Vec<usize> = (0..n).filter(|&k| k != pivot).collect();
        let next: Vec<Vec<BigInt>> = rest
            .iter()
            .map(|&r| {
                rest.iter()
                    .map(|&c| &p * &a[r][c] - &a[r][pivot] * &a[pivot][c])
                    .collect()
            })
            .collect();
        flip *= s;
        a = next;
    }
    sig
}

fn reduce_content(a: &mut [Vec<BigInt>]) {
    let mut g = BigInt::zero();
    for row in a.iter() {
        for v in row {
            g = g.gcd(v);
        }
    }
    if g > BigInt::from(1) {
        for row in a.iter_mut() {
            for v in row.iter_mut() {
                *v /= &g;
            }
        }
    }
}

/// Symmetric tridiagonal matrix with the given diagonal and constant off-diagonal.
pub fn tridiagonal(diagonal: &[BigInt], off: i64) -> Vec<Vec<BigInt>> {
    let n = diagonal.len();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        m[i][i] = diagonal[i].clone();
        if i + 1 < n {
            m[i][i + 1] = BigInt::from(off);
            m[i + 1][i] = BigInt::from(off);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn diagonal_matrices() {
        assert_eq!(signature(&mat(&[&[3, 0], &[0, -5]])), 0);
        assert_eq!(signature(&mat(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 7]])), 3);
        assert_eq!(signature(&mat(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(signature(&[]), 0);
    }

    #[test]
    fn hyperbolic_plane_has_zero_signature() {
        assert_eq!(signature(&mat(&[&[0, 1], &[1, 0]])), 0);
        assert_eq!(signature(&mat(&[&[0, 3, 0], &[3, 0, 0], &[0, 0, -2]])), -1);
    }

    #[test]
    fn negative_definite_chain() {
        let d: Vec<BigInt> = vec![BigInt::from(-2); 4];
        assert_eq!(signature(&tridiagonal(&d, 1)), -4);
    }

    #[test]
    fn matches_eigenvalue_count_on_small_cases() {
        // [[1,2],[2,1]] has eigenvalues 3 and -1.
        assert_eq!(signature(&mat(&[&[1, 2], &[2, 1]])), 0);
        // [[2,1],[1,2]] has eigenvalues 3 and 1.
        assert_eq!(signature(&mat(&[&[2, 1], &[1, 2]])), 2);
    }
}
