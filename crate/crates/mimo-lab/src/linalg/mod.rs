//! Dense complex linear algebra for transceiver design: SVD, Householder
//! bidiagonalization, 2×2 Givens construction, permutation assembly, the
//! GMD baseline, and factorization validity checks.

mod bidiag;
pub mod eigen;
mod givens;
mod gmd;
mod matrix;
mod permute;
mod svd;

pub use bidiag::{householder_bidiagonalize, BidiagonalReal, Decomposition, Scheme};
pub use givens::givens_pair;
pub use gmd::{gmd, GmdFactors};
pub use matrix::ComplexMatrix;
pub use permute::assemble_permuted;
pub use svd::{svd, SvdFactors};

/// Floors singular values (or diagonal gains) at `1e-12` of the largest
/// before ratio computations, reporting whether anything was clamped.
///
/// Near-zero modes from ill-conditioned channels otherwise overflow the
/// ECCN and pairing products.
pub fn clamp_gains(values: &[f64]) -> (Vec<f64>, bool) {
    let max = values.iter().cloned().fold(0.0f64, f64::max);
    let floor = max * 1e-12;
    let mut clamped = false;
    let out = values
        .iter()
        .map(|&v| {
            if v < floor {
                clamped = true;
                floor
            } else {
                v
            }
        })
        .collect();
    (out, clamped)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamp_reports_flooring() {
        let (v, clamped) = clamp_gains(&[1.0, 1e-20]);
        assert!(clamped);
        assert!((v[1] - 1e-12).abs() < 1e-24);
        let (_, untouched) = clamp_gains(&[1.0, 0.5]);
        assert!(!untouched);
    }
}
