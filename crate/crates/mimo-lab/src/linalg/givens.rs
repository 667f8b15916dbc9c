//! 2×2 Givens constructions that redistribute gain between two subchannels.

use crate::error::{Error, Result};
use crate::linalg::bidiag::BidiagonalReal;

/// Core 2×2 rotation pair: orthogonal `g_left`, `g_right` such that
/// `g_left · diag(delta_hi, delta_lo) · g_right` is upper triangular with
/// `(1,1)` entry equal to `target`.
///
/// Requires `delta_hi ≥ target ≥ delta_lo > 0`. The `(2,2)` entry is
/// `delta_hi·delta_lo / target`, so the determinant is preserved exactly.
pub(crate) struct PairRotation {
    pub c: f64,
    pub s: f64,
    pub b11: f64,
    pub fill: f64,
    pub b22: f64,
}

pub(crate) fn rotate_pair(delta_hi: f64, delta_lo: f64, target: f64) -> PairRotation {
    debug_assert!(delta_hi >= delta_lo && delta_lo > 0.0);
    if delta_hi == delta_lo || target >= delta_hi {
        // Equal gains need no rotation; target at the top end is a no-op.
        return PairRotation { c: 1.0, s: 0.0, b11: delta_hi, fill: 0.0, b22: delta_lo };
    }
    let hi2 = delta_hi * delta_hi;
    let lo2 = delta_lo * delta_lo;
    let t2 = target * target;
    let c = (((t2 - lo2) / (hi2 - lo2)).max(0.0)).sqrt().min(1.0);
    let s = (1.0 - c * c).max(0.0).sqrt();
    let fill = s * c * (hi2 - lo2) / target;
    let b22 = delta_hi * delta_lo / target;
    PairRotation { c, s, b11: target, fill, b22 }
}

impl PairRotation {
    /// Left factor, `(1/B₁₁)·[[c·λ_hi, −s·λ_lo], [s·λ_lo, c·λ_hi]]`.
    pub fn g_left(&self, delta_hi: f64, delta_lo: f64) -> [[f64; 2]; 2] {
        let inv = 1.0 / self.b11;
        [
            [self.c * delta_hi * inv, -self.s * delta_lo * inv],
            [self.s * delta_lo * inv, self.c * delta_hi * inv],
        ]
    }

    /// Right factor, `[[c, s], [−s, c]]`.
    pub fn g_right(&self) -> [[f64; 2]; 2] {
        [[self.c, self.s], [-self.s, self.c]]
    }
}

/// Builds the rotation pair placing `b11_target` on the first diagonal of a
/// 2×2 bidiagonal block, with `B₁₁·B₂₂ = λ_hi·λ_lo`.
///
/// The feasible targets are `√(λ_hi·λ_lo) ≤ b11_target ≤ λ_hi`; anything
/// outside (beyond roundoff slack) is a domain error. Equal gains return
/// identity rotations.
#[allow(clippy::type_complexity)]
pub fn givens_pair(
    lambda_hi: f64,
    lambda_lo: f64,
    b11_target: f64,
) -> Result<([[f64; 2]; 2], [[f64; 2]; 2], BidiagonalReal)> {
    if !(lambda_hi >= lambda_lo && lambda_lo > 0.0) {
        return Err(Error::Domain(format!(
            "givens_pair requires lambda_hi ≥ lambda_lo > 0, got ({lambda_hi}, {lambda_lo})"
        )));
    }
    let geo = (lambda_hi * lambda_lo).sqrt();
    let slack = 1e-12 * lambda_hi;
    if b11_target < geo - slack || b11_target > lambda_hi + slack {
        return Err(Error::Domain(format!(
            "b11 target {b11_target} outside feasible range [{geo}, {lambda_hi}]"
        )));
    }
    let target = b11_target.clamp(geo, lambda_hi);
    let rot = rotate_pair(lambda_hi, lambda_lo, target);
    let block = BidiagonalReal::new(vec![rot.b11, rot.b22], vec![rot.fill])?;
    Ok((rot.g_left(lambda_hi, lambda_lo), rot.g_right(), block))
}
