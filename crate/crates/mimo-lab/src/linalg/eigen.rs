//! Jacobi eigendecomposition of real symmetric matrices.
//!
//! Small dense problems only — correlation square roots in the channel
//! generator and reference eigenvalues in tests.

use crate::error::{Error, Result};

/// Eigendecomposition `A = V diag(values) Vᵀ` of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, column `j` paired with `values[j]`,
    /// row-major `n×n`.
    pub vectors: Vec<f64>,
    pub n: usize,
}

/// Cyclic Jacobi iteration on a row-major symmetric matrix.
pub fn symmetric_eigen(a: &[f64], n: usize) -> Result<SymmetricEigen> {
    assert_eq!(a.len(), n * n, "matrix size mismatch");
    let mut m = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let off = |m: &[f64]| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                s += m[p * n + q] * m[p * n + q];
            }
        }
        s.sqrt()
    };

    let scale: f64 = m.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let max_sweeps = 100 * n.max(1);
    let mut sweeps = 0;
    while off(&m) > 1e-14 * scale {
        sweeps += 1;
        if sweeps > max_sweeps {
            return Err(Error::NonConvergence { op: "symmetric_eigen", iterations: max_sweeps });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Rotate rows/cols p and q of m, and columns of v.
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[j * n + j].partial_cmp(&m[i * n + i]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| m[i * n + i]).collect();
    let mut vectors = vec![0.0; n * n];
    for (new_j, &old_j) in order.iter().enumerate() {
        for r in 0..n {
            vectors[r * n + new_j] = v[r * n + old_j];
        }
    }
    Ok(SymmetricEigen { values, vectors, n })
}

/// Symmetric positive semi-definite square root via eigendecomposition.
///
/// Negative eigenvalues from roundoff are floored at zero.
pub fn sqrt_spd(a: &[f64], n: usize) -> Result<Vec<f64>> {
    let eig = symmetric_eigen(a, n)?;
    let mut out = vec![0.0; n * n];
    for (j, &lam) in eig.values.iter().enumerate() {
        let s = lam.max(0.0).sqrt();
        for r in 0..n {
            for c in 0..n {
                out[r * n + c] += s * eig.vectors[r * n + j] * eig.vectors[c * n + j];
            }
        }
    }
    Ok(out)
}
