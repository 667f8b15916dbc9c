//! Singular value decomposition of dense complex matrices.
//!
//! One-sided Jacobi on the columns: rotations orthogonalize column pairs
//! until the Gram matrix is diagonal, after which the column norms are the
//! singular values. The tall case is handled directly and the wide case via
//! the adjoint, so the accumulated rotations always form the square unitary
//! factor.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::matrix::ComplexMatrix;

/// Economy-size SVD `H = U Λ Vᴴ`.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    /// Left factor, square unitary `N_r×N_r`.
    pub u: ComplexMatrix,
    /// Singular values in descending order, length `N_s = min(N_r, N_t)`.
    pub sigma: Vec<f64>,
    /// Right factor with orthonormal columns, `N_t×N_s`.
    pub v: ComplexMatrix,
}

impl SvdFactors {
    /// `U diag(σ) Vᴴ` at the source shape.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let lambda = ComplexMatrix::from_diag(self.u.rows(), self.sigma.len(), &self.sigma);
        self.u.mul(&lambda).mul(&self.v.hermitian())
    }
}

/// Computes the economy SVD with `N_s = min(rows, cols)` singular values.
///
/// Fails with a numerical error if the Jacobi sweeps do not converge within
/// `100·N_s` passes; this never silently returns inaccurate factors.
pub fn svd(h: &ComplexMatrix) -> Result<SvdFactors> {
    if !h.is_finite() {
        return Err(Error::Domain("svd input must be finite".into()));
    }
    if h.rows() >= h.cols() {
        let (u_tall, sigma, v_square) = jacobi_tall(h)?;
        // H = U_tall Σ V_squareᴴ; complete U to a square unitary.
        let u = complete_columns(u_tall, h.rows(), h.rows());
        Ok(SvdFactors { u, sigma, v: v_square })
    } else {
        // H is wide: decompose Hᴴ = A = U_A Σ V_Aᴴ, then H = V_A Σ U_Aᴴ.
        let a = h.hermitian();
        let (u_a, sigma, v_a) = jacobi_tall(&a)?;
        let v = complete_columns(u_a, h.cols(), h.rows());
        Ok(SvdFactors { u: v_a, sigma, v })
    }
}

/// One-sided Jacobi for `rows ≥ cols`. Returns (left columns, sigma, right
/// square unitary); left columns for numerically zero singular values are
/// left unset and must be completed by the caller.
fn jacobi_tall(h: &ComplexMatrix) -> Result<(PartialColumns, Vec<f64>, ComplexMatrix)> {
    let n = h.cols();
    let mut a = h.clone();
    let mut v = ComplexMatrix::identity(n);

    let scale_sq: f64 = (0..n).map(|c| a.col_norm_sq(c)).sum();
    let tol = 1e-14;
    let max_sweeps = 100 * n;
    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = a.col_norm_sq(p);
                let beta = a.col_norm_sq(q);
                let gamma = a.col_dot(p, q);
                let gnorm = gamma.norm();
                if gnorm <= tol * (alpha * beta).sqrt() || gnorm == 0.0 {
                    continue;
                }
                rotated = true;
                // Phase factor turns the 2×2 Gram block real, then a classic
                // Jacobi rotation annihilates it.
                let phase = gamma / gnorm;
                let tau = (beta - alpha) / (2.0 * gnorm);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                apply_rotation(&mut a, p, q, c, s, phase);
                apply_rotation(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        if sweeps > max_sweeps {
            return Err(Error::NonConvergence { op: "svd", iterations: max_sweeps });
        }
    }

    // Column norms are the singular values; sort descending.
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|c| a.col_norm_sq(c).sqrt()).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let sigma: Vec<f64> = order.iter().map(|&i| norms[i]).collect();
    let sig_max = sigma.first().copied().unwrap_or(0.0);
    let mut v_sorted = ComplexMatrix::zeros(n, n);
    let mut u_cols: Vec<Option<Vec<Complex64>>> = vec![None; n];
    for (new_j, &old_j) in order.iter().enumerate() {
        v_sorted.set_col(new_j, &v.col(old_j));
        let s = norms[old_j];
        if s > sig_max * 1e-14 && s > 0.0 {
            let col: Vec<Complex64> = a.col(old_j).iter().map(|z| z / s).collect();
            u_cols[new_j] = Some(col);
        }
    }
    // Guard: total column energy must be preserved (no silent blow-up).
    let out_sq: f64 = sigma.iter().map(|s| s * s).sum();
    if scale_sq > 0.0 && ((out_sq - scale_sq).abs() > 1e-8 * scale_sq) {
        return Err(Error::NonConvergence { op: "svd", iterations: sweeps });
    }
    Ok((PartialColumns { rows: h.rows(), cols: u_cols }, sigma, v_sorted))
}

struct PartialColumns {
    rows: usize,
    cols: Vec<Option<Vec<Complex64>>>,
}

/// Extends a partially determined orthonormal set to `width` orthonormal
/// columns of length `m`.
///
/// Each missing column is the standard basis vector with the largest
/// residual after projecting out the columns accumulated so far, with the
/// projection applied twice for orthogonality at working precision.
fn complete_columns(partial: PartialColumns, m: usize, width: usize) -> ComplexMatrix {
    debug_assert_eq!(partial.rows, m);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(width);
    let mut pending: Vec<usize> = Vec::new();
    let mut out = ComplexMatrix::zeros(m, width);
    for (j, col) in partial.cols.iter().enumerate().take(width) {
        match col {
            Some(c) => {
                out.set_col(j, c);
                cols.push(c.clone());
            }
            None => pending.push(j),
        }
    }
    for j in partial.cols.len()..width {
        pending.push(j);
    }
    let project = |cols: &[Vec<Complex64>], v: &mut Vec<Complex64>| {
        for existing in cols {
            let dot: Complex64 = existing.iter().zip(v.iter()).map(|(e, x)| e.conj() * x).sum();
            for (x, e) in v.iter_mut().zip(existing) {
                *x -= dot * e;
            }
        }
    };
    for j in pending {
        let mut best: Option<(f64, Vec<Complex64>)> = None;
        for i in 0..m {
            let mut cand = vec![Complex64::ZERO; m];
            cand[i] = Complex64::ONE;
            project(&cols, &mut cand);
            let norm_sq: f64 = cand.iter().map(|z| z.norm_sqr()).sum();
            if best.as_ref().map_or(true, |(b, _)| norm_sq > *b) {
                best = Some((norm_sq, cand));
            }
        }
        let (_, mut cand) = best.expect("non-empty basis");
        project(&cols, &mut cand);
        let norm = cand.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in cand.iter_mut() {
            *x /= norm;
        }
        out.set_col(j, &cand);
        cols.push(cand);
    }
    out
}

/// Applies the complex Jacobi rotation `[c, s·φ̄; -s·φ, c]`-style update to
/// columns `p, q`, where `φ` carries the Gram phase.
fn apply_rotation(a: &mut ComplexMatrix, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    // New columns: a_p' = c·a_p − s·phasē⁻¹... derivation keeps the pair
    // [a_p, a_q]·D·R with D = diag(1, phase⁻¹) and R the real rotation.
    let pc = phase.conj();
    for r in 0..a.rows() {
        let ap = a[(r, p)];
        let aq = a[(r, q)];
        a[(r, p)] = ap * c - aq * pc * s;
        a[(r, q)] = ap * s + aq * pc * c;
    }
}
