//! Equivalent channel condition number.

use crate::linalg::{clamp_gains, BidiagonalReal};
use crate::schemes::{NoiseModel, PowerAllocation};

/// ECCN of an equivalent channel's diagonal, with the flooring flag and
/// optional per-layer post-processing SNRs.
#[derive(Debug, Clone)]
pub struct EccnReport {
    /// `max B_{i,i} / min B_{i,i}` after floor-clamping.
    pub eccn: f64,
    pub diag_max: f64,
    pub diag_min: f64,
    /// Whether any diagonal entry was floor-clamped before the ratio.
    pub clamped: bool,
    /// `ρ_{o,i} = B_{i,i}²·φ_i/σ²`, empty unless requested.
    pub per_layer_post_snr: Vec<f64>,
}

/// ECCN from the diagonal gains of a decomposition.
pub fn eccn_of_diag(diag: &[f64]) -> EccnReport {
    let (clamped_vals, clamped) = clamp_gains(diag);
    let diag_max = clamped_vals.iter().cloned().fold(0.0f64, f64::max);
    let diag_min = clamped_vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let eccn = if diag_min > 0.0 { diag_max / diag_min } else { f64::INFINITY };
    EccnReport { eccn, diag_max, diag_min, clamped, per_layer_post_snr: vec![] }
}

/// ECCN of a bidiagonal equivalent channel.
pub fn eccn(b: &BidiagonalReal) -> EccnReport {
    eccn_of_diag(b.diag())
}

/// ECCN with post-processing SNRs for a concrete power split.
pub fn eccn_with_post_snr(
    b: &BidiagonalReal,
    power: &PowerAllocation,
    noise: &NoiseModel,
) -> EccnReport {
    let mut report = eccn(b);
    report.per_layer_post_snr = b
        .diag()
        .iter()
        .zip(power.phi())
        .map(|(d, phi)| d * d * phi / noise.sigma2())
        .collect();
    report
}
