//! Transceiver designers: diagonal (SVD), bidiagonal (CBD), and the
//! pairing-plus-rotation block design (GP-CBD).

use crate::detect::Constellation;
use crate::error::Result;
use crate::linalg::{
    assemble_permuted, clamp_gains, givens_pair, householder_bidiagonalize, svd, BidiagonalReal,
    ComplexMatrix, Decomposition, Scheme,
};
use crate::schemes::gap::optimal_pair_diagonals;
use crate::schemes::pairing::{compute_pairing, PairingPlan};
use crate::schemes::power::{mercury_waterfilling, waterfilling, PowerAllocation, PowerPolicy};
use crate::schemes::NoiseModel;

/// A complete transceiver: factorization, power split, and the design-time
/// diagnostics the experiments report.
#[derive(Debug, Clone)]
pub struct TransceiverDesign {
    pub decomposition: Decomposition,
    pub power: PowerAllocation,
    /// Equivalent channel condition number max/min of the `B` diagonal
    /// (floor-clamped).
    pub eccn: f64,
    /// Post-processing SNR per layer, `B_{i,i}²·φ_i/σ²`.
    pub post_snr: Vec<f64>,
    /// Conditioning products of the rotated pairs (GP-CBD only).
    pub mu_per_pair: Vec<f64>,
    /// The pairing plan behind a GP-CBD design.
    pub plan: Option<PairingPlan>,
}

impl TransceiverDesign {
    pub fn scheme(&self) -> Scheme {
        self.decomposition.scheme
    }

    /// Effective bidiagonal seen by the demodulator, `B·Φ^{1/2}`.
    pub fn effective_bidiagonal(&self) -> BidiagonalReal {
        self.decomposition.b.scale_columns(&self.power.sqrt_phi())
    }

    /// Precoder `F = P·Φ^{1/2}`.
    pub fn precoder(&self) -> ComplexMatrix {
        let mut f = self.decomposition.p.clone();
        for (j, s) in self.power.sqrt_phi().iter().enumerate() {
            f.scale_col(j, num_complex::Complex64::new(*s, 0.0));
        }
        f
    }

    /// Replaces the power split, recomputing the derived diagnostics.
    pub fn set_power(
        &mut self,
        policy: PowerPolicy,
        c: &Constellation,
        noise: &NoiseModel,
    ) -> Result<()> {
        let gains = self.decomposition.b.diag().to_vec();
        let total = gains.len() as f64;
        self.power = match policy {
            PowerPolicy::Uniform => PowerAllocation::uniform(gains.len()),
            PowerPolicy::WaterFilling => {
                let (g, _) = clamp_gains(&gains);
                waterfilling(&g, noise, total)?
            }
            PowerPolicy::MercuryWaterFilling => {
                let (g, _) = clamp_gains(&gains);
                mercury_waterfilling(&g, noise, c, total)?
            }
        };
        self.post_snr = post_snr(&self.decomposition.b, &self.power, noise);
        Ok(())
    }
}

fn post_snr(b: &BidiagonalReal, power: &PowerAllocation, noise: &NoiseModel) -> Vec<f64> {
    b.diag()
        .iter()
        .zip(power.phi())
        .map(|(d, phi)| d * d * phi / noise.sigma2())
        .collect()
}

fn diag_eccn(diag: &[f64]) -> f64 {
    let (clamped, _) = clamp_gains(diag);
    let max = clamped.iter().cloned().fold(0.0f64, f64::max);
    let min = clamped.iter().cloned().fold(f64::INFINITY, f64::min);
    if min > 0.0 {
        max / min
    } else {
        f64::INFINITY
    }
}

/// Diagonal transmission over the eigen-subchannels.
pub fn design_svd_mmse(h: &ComplexMatrix, noise: &NoiseModel) -> Result<TransceiverDesign> {
    let f = svd(h)?;
    let b = BidiagonalReal::from_diag(f.sigma.clone());
    let power = PowerAllocation::uniform(b.n());
    let post = post_snr(&b, &power, noise);
    let eccn = diag_eccn(b.diag());
    Ok(TransceiverDesign {
        decomposition: Decomposition { q: f.u, b, p: f.v, scheme: Scheme::Svd },
        power,
        eccn,
        post_snr: post,
        mu_per_pair: vec![],
        plan: None,
    })
}

/// Householder bidiagonalization with no further shaping.
pub fn design_cbd(h: &ComplexMatrix, noise: &NoiseModel) -> Result<TransceiverDesign> {
    let d = householder_bidiagonalize(h)?;
    let power = PowerAllocation::uniform(d.b.n());
    let post = post_snr(&d.b, &power, noise);
    let eccn = diag_eccn(d.b.diag());
    Ok(TransceiverDesign {
        decomposition: d,
        power,
        eccn,
        post_snr: post,
        mu_per_pair: vec![],
        plan: None,
    })
}

/// The pairing-and-rotation block design at the default threshold.
pub fn design_gp_cbd(
    h: &ComplexMatrix,
    noise: &NoiseModel,
    c: &Constellation,
) -> Result<TransceiverDesign> {
    design_gp_cbd_with_threshold(h, noise, c, crate::schemes::pairing::DEFAULT_NU)
}

/// GP-CBD with an explicit pair-conditioning threshold `nu`.
///
/// Runs the SVD, derives the pairing plan at the operating SNR, permutes
/// paired subchannels adjacent, and rotates each pair to its optimal
/// diagonal split. Unpaired subchannels stay diagonal, so the result is a
/// block-diagonal bidiagonal with 2×2 and 1×1 blocks and explicit
/// boundaries. With no pairs it degenerates to the SVD design exactly.
pub fn design_gp_cbd_with_threshold(
    h: &ComplexMatrix,
    noise: &NoiseModel,
    c: &Constellation,
    nu: f64,
) -> Result<TransceiverDesign> {
    let f = svd(h)?;
    let plan = compute_pairing(&f.sigma, noise, c, nu);
    let order = plan.permuted_order();
    let (mut q, lambda, mut p) = assemble_permuted(&f, &order)?;

    let n = lambda.len();
    let mut diag = vec![0.0; n];
    let mut superdiag = vec![0.0; n.saturating_sub(1)];
    let mut pair_internal = vec![false; n.saturating_sub(1)];
    let mut mu_per_pair = Vec::with_capacity(plan.pairs().len());

    let mut pos = 0;
    for _ in plan.pairs() {
        let (clamped, _) = clamp_gains(&[lambda[pos], lambda[pos + 1]]);
        let (b11, _, mu) = optimal_pair_diagonals(clamped[0], clamped[1], noise, c, nu);
        let (g_left, g_right, block) = givens_pair(clamped[0], clamped[1], b11)?;
        diag[pos] = block.diag()[0];
        diag[pos + 1] = block.diag()[1];
        superdiag[pos] = block.superdiag()[0];
        pair_internal[pos] = true;
        mu_per_pair.push(mu);
        // Q ← Q·Ĝᵀ and P ← P·G̃ embedded at this pair's columns.
        q.mix_cols(pos, pos + 1, transpose2(g_left));
        p.mix_cols(pos, pos + 1, g_right);
        pos += 2;
    }
    for &lam in &lambda[pos..] {
        diag[pos] = lam;
        pos += 1;
    }
    // Every coupling outside a pair is a structural zero.
    let boundaries: Vec<usize> =
        (0..n.saturating_sub(1)).filter(|&i| !pair_internal[i]).collect();

    let b = BidiagonalReal::with_boundaries(diag, superdiag, Some(boundaries))?;
    let power = PowerAllocation::uniform(n);
    let post = post_snr(&b, &power, noise);
    let eccn = diag_eccn(b.diag());
    Ok(TransceiverDesign {
        decomposition: Decomposition { q, b, p, scheme: Scheme::GpCbd },
        power,
        eccn,
        post_snr: post,
        mu_per_pair,
        plan: Some(plan),
    })
}

/// Designs for a scheme name, uniform power.
pub fn design(
    scheme: Scheme,
    h: &ComplexMatrix,
    noise: &NoiseModel,
    c: &Constellation,
    nu: f64,
) -> Result<TransceiverDesign> {
    match scheme {
        Scheme::Svd => design_svd_mmse(h, noise),
        Scheme::Cbd => design_cbd(h, noise),
        Scheme::GpCbd => design_gp_cbd_with_threshold(h, noise, c, nu),
        Scheme::Gmd => Err(crate::error::Error::Config(
            "gmd exposes no receiver chain; use linalg::gmd for its factors".into(),
        )),
    }
}

fn transpose2(g: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    [[g[0][0], g[1][0]], [g[0][1], g[1][1]]]
}
