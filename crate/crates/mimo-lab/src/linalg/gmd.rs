//! Geometric mean decomposition: `H = Q R Pᴴ` with upper triangular real
//! `R` whose diagonal entries all equal the geometric mean of the singular
//! values.
//!
//! Kept for ECCN and rate lower-bound comparisons only; there is no
//! receiver chain behind it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::givens::rotate_pair;
use crate::linalg::matrix::ComplexMatrix;
use crate::linalg::svd::svd;

/// The GMD factors. `r` is a genuine upper triangular matrix — it is not
/// squeezed into a bidiagonal — so only its diagonal and reconstruction
/// validity are exposed for comparisons.
#[derive(Debug, Clone)]
pub struct GmdFactors {
    pub q: ComplexMatrix,
    r: ComplexMatrix,
    pub p: ComplexMatrix,
}

impl GmdFactors {
    pub fn diag(&self) -> Vec<f64> {
        (0..self.r.rows()).map(|i| self.r[(i, i)].re).collect()
    }

    pub fn r_matrix(&self) -> &ComplexMatrix {
        &self.r
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.r.rows();
        let mut expanded = ComplexMatrix::zeros(self.q.rows(), n);
        for i in 0..n {
            for j in 0..n {
                expanded[(i, j)] = self.r[(i, j)];
            }
        }
        self.q.mul(&expanded).mul(&self.p.hermitian())
    }

    pub fn residual(&self, h: &ComplexMatrix) -> f64 {
        h.relative_residual(&self.reconstruct())
    }
}

/// Standard Givens-chain GMD built on top of the SVD.
///
/// Each step symmetrically permutes a partner subchannel next to the working
/// position so the pair straddles the geometric mean, then rotates the pair
/// to pin the leading diagonal entry at the mean. Fill-in above the working
/// row is what makes `R` triangular rather than bidiagonal.
pub fn gmd(h: &ComplexMatrix) -> Result<GmdFactors> {
    let f = svd(h)?;
    let n = f.sigma.len();
    let sig_max = f.sigma[0];
    if f.sigma.iter().any(|&s| s <= sig_max * 1e-14 || s == 0.0) {
        return Err(Error::RankDeficient(
            "gmd requires strictly positive singular values".into(),
        ));
    }
    let mean = (f.sigma.iter().map(|s| s.ln()).sum::<f64>() / n as f64).exp();

    let mut r = ComplexMatrix::from_diag(n, n, &f.sigma);
    let mut q = f.u;
    let mut p = f.v;

    for k in 0..n.saturating_sub(1) {
        let dk = r[(k, k)].re;
        // Partner on the other side of the mean; one always exists because
        // the remaining entries keep geometric mean `mean`.
        let mut j = k + 1;
        if dk >= mean {
            for c in (k + 1)..n {
                if r[(c, c)].re <= r[(j, j)].re {
                    j = c;
                }
            }
        } else {
            for c in (k + 1)..n {
                if r[(c, c)].re >= r[(j, j)].re {
                    j = c;
                }
            }
        }
        if j != k + 1 {
            r.swap_rows(k + 1, j);
            r.swap_cols(k + 1, j);
            q.swap_cols(k + 1, j);
            p.swap_cols(k + 1, j);
        }
        if r[(k + 1, k + 1)].re > r[(k, k)].re {
            r.swap_rows(k, k + 1);
            r.swap_cols(k, k + 1);
            q.swap_cols(k, k + 1);
            p.swap_cols(k, k + 1);
        }

        let hi = r[(k, k)].re;
        let lo = r[(k + 1, k + 1)].re;
        let target = mean.clamp(lo, hi);
        let rot = rotate_pair(hi, lo, target);
        let gl = rot.g_left(hi, lo);
        let gr = rot.g_right();
        r.mix_rows(k, k + 1, gl);
        r.mix_cols(k, k + 1, gr);
        r[(k, k)] = Complex64::new(rot.b11, 0.0);
        r[(k, k + 1)] = Complex64::new(rot.fill, 0.0);
        r[(k + 1, k)] = Complex64::ZERO;
        r[(k + 1, k + 1)] = Complex64::new(rot.b22, 0.0);
        // Q ← Q·glᵀ, P ← P·gr (embedded at columns k, k+1).
        q.mix_cols(k, k + 1, [[gl[0][0], gl[1][0]], [gl[0][1], gl[1][1]]]);
        p.mix_cols(k, k + 1, gr);
    }

    Ok(GmdFactors { q, r, p })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_equalizes() {
        let h = ComplexMatrix::from_diag(2, 2, &[4.0, 1.0]);
        let g = gmd(&h).unwrap();
        let d = g.diag();
        assert!((d[0] - 2.0).abs() < 1e-12);
        assert!((d[1] - 2.0).abs() < 1e-12);
        assert!(g.residual(&h) < 1e-12);
    }

    #[test]
    fn already_equal_is_identity() {
        let h = ComplexMatrix::from_diag(3, 3, &[1.5, 1.5, 1.5]);
        let g = gmd(&h).unwrap();
        for d in g.diag() {
            assert!((d - 1.5).abs() < 1e-12);
        }
        assert!(g.residual(&h) < 1e-12);
    }

    #[test]
    fn rank_deficiency_rejected() {
        let h = ComplexMatrix::from_diag(2, 2, &[1.0, 0.0]);
        assert!(matches!(gmd(&h), Err(Error::RankDeficient(_))));
    }
}
