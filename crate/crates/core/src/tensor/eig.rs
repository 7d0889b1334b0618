//! Complex hermitian eigensolver (cyclic Jacobi).
//!
//! Every eigenproblem in this crate is dense, hermitian and small (n <= 729
//! for the brute-force protocol checks, n <= 32 for the rank-two search), so
//! a classical two-sided Jacobi iteration is accurate, dependency-free and
//! trivially reentrant. Rotations are chosen to annihilate one off-diagonal
//! entry at a time; convergence is quadratic once the matrix is nearly
//! diagonal.

use crate::error::{Error, Result};
use num_complex::Complex64;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues (ascending) of a hermitian matrix given as a row-major slice
/// of length n*n, optionally with eigenvectors. Column k of the returned
/// row-major vector matrix is the eigenvector for eigenvalue k.
///
/// The input is symmetrized internally; callers enforce hermiticity
/// tolerances beforehand.
pub fn hermitian_eigh(
    n: usize,
    data: &[Complex64],
    want_vectors: bool,
) -> Result<(Vec<f64>, Option<Vec<Complex64>>)> {
    assert_eq!(data.len(), n * n, "matrix data length");
    if n == 0 {
        return Ok((Vec::new(), want_vectors.then(Vec::new)));
    }

    // Work on the hermitian average so tiny asymmetries cannot bias sweeps.
    let mut a = vec![Complex64::ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = 0.5 * (data[i * n + j] + data[j * n + i].conj());
        }
    }
    let mut v = if want_vectors {
        let mut id = vec![Complex64::ZERO; n * n];
        for i in 0..n {
            id[i * n + i] = Complex64::ONE;
        }
        Some(id)
    } else {
        None
    };

    let scale: f64 = a
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt()
        .max(f64::MIN_POSITIVE);
    let stop = 1e-14 * scale;

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let off: f64 = {
            let mut s = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    s += a[p * n + q].norm_sqr();
                }
            }
            s.sqrt()
        };
        if off <= stop {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let phase = apq / r;
                // Annihilation condition: t^2 - 2*tau*t - 1 = 0 with
                // tau = (app - aqq)/(2r); take the small-magnitude root.
                let tau = (app - aqq) / (2.0 * r);
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = phase * (t * c);
                // Columns: col_p <- c*col_p - conj(s)*col_q; col_q <- s*col_p + c*col_q.
                for i in 0..n {
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s.conj() * aiq;
                    a[i * n + q] = s * aip + c * aiq;
                }
                // Rows: row_p <- c*row_p - s*row_q; row_q <- conj(s)*row_p + c*row_q.
                for j in 0..n {
                    let apj = a[p * n + j];
                    let aqj = a[q * n + j];
                    a[p * n + j] = c * apj - s * aqj;
                    a[q * n + j] = s.conj() * apj + c * aqj;
                }
                // Clean the rotated pair against round-off drift.
                a[p * n + q] = Complex64::ZERO;
                a[q * n + p] = Complex64::ZERO;
                a[p * n + p] = Complex64::new(a[p * n + p].re, 0.0);
                a[q * n + q] = Complex64::new(a[q * n + q].re, 0.0);
                if let Some(vm) = v.as_mut() {
                    for i in 0..n {
                        let vip = vm[i * n + p];
                        let viq = vm[i * n + q];
                        vm[i * n + p] = c * vip - s.conj() * viq;
                        vm[i * n + q] = s * vip + c * viq;
                    }
                }
            }
        }
    }
    if !converged {
        // One final check: the last sweep may have reached the target.
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q].norm_sqr();
            }
        }
        if off.sqrt() > stop {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    order.sort_by(|&x, &y| diag[x].partial_cmp(&diag[y]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&k| diag[k]).collect();
    let vecs = v.map(|vm| {
        let mut sorted = vec![Complex64::ZERO; n * n];
        for (new_col, &old_col) in order.iter().enumerate() {
            for i in 0..n {
                sorted[i * n + new_col] = vm[i * n + old_col];
            }
        }
        sorted
    });
    Ok((vals, vecs))
}

/// Convenience: smallest eigenvalue and its eigenvector.
pub fn min_eigenpair(n: usize, data: &[Complex64]) -> Result<(f64, Vec<Complex64>)> {
    let (vals, vecs) = hermitian_eigh(n, data, true)?;
    let vecs = vecs.expect("vectors requested");
    let mut v = vec![Complex64::ZERO; n];
    for i in 0..n {
        v[i] = vecs[i * n];
    }
    Ok((vals[0], v))
}

/// Singular value decomposition of a rows x cols complex matrix.
#[derive(Debug, Clone)]
pub struct Svd {
    /// Singular values, descending.
    pub sigma: Vec<f64>,
    /// Left singular vectors (length `rows`), one per singular value. For
    /// singular values at the round-off floor the direction is meaningless
    /// but the vectors returned are still orthonormal where possible.
    pub u: Vec<Vec<Complex64>>,
    /// Right singular vectors (length `cols`), one per singular value.
    pub v: Vec<Vec<Complex64>>,
}

/// One-sided Jacobi SVD. Column pairs are rotated until mutually orthogonal
/// relative to their norms, which keeps tiny singular values accurate (the
/// gram-matrix route would square the conditioning and turn exact zeros
/// into ~1e-8 noise).
pub fn one_sided_svd(rows: usize, cols: usize, data: &[Complex64]) -> Result<Svd> {
    assert_eq!(data.len(), rows * cols, "matrix data length");
    // Work columnwise; accumulate the right rotations into v.
    let mut a: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| (0..rows).map(|i| data[i * cols + j]).collect())
        .collect();
    let mut v: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| {
            let mut e = vec![Complex64::ZERO; cols];
            e[j] = Complex64::ONE;
            e
        })
        .collect();
    let eps = 1e-15;
    // Columns this far below the matrix norm are round-off; rotating them
    // would chase noise forever because their direction is meaningless.
    let fro: f64 = data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let zero_col = 1e-14 * fro.max(f64::MIN_POSITIVE);
    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let app: f64 = a[p].iter().map(|z| z.norm_sqr()).sum();
                let aqq: f64 = a[q].iter().map(|z| z.norm_sqr()).sum();
                let np = app.sqrt();
                let nq = aqq.sqrt();
                if np <= zero_col || nq <= zero_col {
                    continue;
                }
                let apq: Complex64 = a[p].iter().zip(&a[q]).map(|(x, y)| x.conj() * y).sum();
                let r = apq.norm();
                if r <= eps * np * nq {
                    continue;
                }
                rotated = true;
                let phase = apq / r;
                let tau = (app - aqq) / (2.0 * r);
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = phase * (t * c);
                for i in 0..rows {
                    let x = a[p][i];
                    let y = a[q][i];
                    a[p][i] = c * x - s.conj() * y;
                    a[q][i] = s * x + c * y;
                }
                for i in 0..cols {
                    let x = v[p][i];
                    let y = v[q][i];
                    v[p][i] = c * x - s.conj() * y;
                    v[q][i] = s * x + c * y;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }
    let mut order: Vec<usize> = (0..cols).collect();
    let norms: Vec<f64> = a
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).unwrap());
    let mut sigma = Vec::with_capacity(cols);
    let mut u = Vec::with_capacity(cols);
    let mut vv = Vec::with_capacity(cols);
    for &k in &order {
        sigma.push(norms[k]);
        let col = if norms[k] > 0.0 {
            a[k].iter().map(|z| z / norms[k]).collect()
        } else {
            a[k].clone()
        };
        u.push(col);
        vv.push(v[k].clone());
    }
    Ok(Svd { sigma, u, v: vv })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonalizes_a_fixed_hermitian_matrix() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let a = vec![
            Complex64::new(2.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(2.0, 0.0),
        ];
        let (vals, vecs) = hermitian_eigh(2, &a, true).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((vals[1] - 3.0).abs() < 1e-12);
        // Residual ||A v - lambda v|| for each pair.
        let vecs = vecs.unwrap();
        for k in 0..2 {
            let v = [vecs[k], vecs[2 + k]];
            let av = [a[0] * v[0] + a[1] * v[1], a[2] * v[0] + a[3] * v[1]];
            for i in 0..2 {
                assert!((av[i] - vals[k] * v[i]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn eigenvectors_are_orthonormal() {
        // Deterministic pseudo-random hermitian matrix.
        let n = 12;
        let mut a = vec![Complex64::ZERO; n * n];
        let mut x: u64 = 0x2545F4914F6CDD1D;
        let mut next = || {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            (x >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for i in 0..n {
            for j in i..n {
                let z = if i == j {
                    Complex64::new(next(), 0.0)
                } else {
                    Complex64::new(next(), next())
                };
                a[i * n + j] = z;
                a[j * n + i] = z.conj();
            }
        }
        let (vals, vecs) = hermitian_eigh(n, &a, true).unwrap();
        let vecs = vecs.unwrap();
        for p in 0..n {
            for q in 0..n {
                let mut dot = Complex64::ZERO;
                for i in 0..n {
                    dot += vecs[i * n + p].conj() * vecs[i * n + q];
                }
                let expected = if p == q { 1.0 } else { 0.0 };
                assert!((dot.norm() - expected).abs() < 1e-10);
            }
        }
        let trace: f64 = (0..n).map(|i| a[i * n + i].re).sum();
        let sum: f64 = vals.iter().sum();
        assert!((trace - sum).abs() < 1e-9);
        for w in vals.windows(2) {
            assert!(w[0] <= w[1] + 1e-12);
        }
    }

    #[test]
    fn min_eigenpair_matches_spectrum() {
        let a = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(1.0, 0.0),
        ];
        let (val, vec) = min_eigenpair(2, &a).unwrap();
        assert!((val + 1.0).abs() < 1e-12);
        assert!((vec[0] + vec[1]).norm() < 1e-10 || (vec[0] - vec[1]).norm() > 1.0);
    }
}
