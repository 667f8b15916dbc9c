//! SNR-adaptive eigen-subchannel pairing.

use crate::detect::Constellation;
use crate::schemes::NoiseModel;

/// Default pair-conditioning threshold ν.
pub const DEFAULT_NU: f64 = 1.7;

/// Which subchannels get paired and rotated.
///
/// Indices are zero-based. The first `cutoff` subchannels are considered
/// well-conditioned at the operating SNR; they are paired outermost-in as
/// `(n, cutoff-1-n)`. Everything else stays diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingPlan {
    cutoff: usize,
    pairs: Vec<(usize, usize)>,
    singletons: Vec<usize>,
}

impl PairingPlan {
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn singletons(&self) -> &[usize] {
        &self.singletons
    }

    /// Subchannel order with each pair adjacent (strong before weak),
    /// singletons after.
    pub fn permuted_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.pairs.len() * 2 + self.singletons.len());
        for &(i, j) in &self.pairs {
            order.push(i);
            order.push(j);
        }
        order.extend_from_slice(&self.singletons);
        order
    }
}

/// Conditioning product `μ = (d²λ_a²/σ²)·(d²λ_b²/σ²)` of two subchannels.
pub fn conditioning_product(
    lambda_a: f64,
    lambda_b: f64,
    noise: &NoiseModel,
    c: &Constellation,
) -> f64 {
    let scale = c.d2_min() / noise.sigma2();
    (scale * lambda_a * lambda_a) * (scale * lambda_b * lambda_b)
}

/// Finds the pairing cutoff and pairs for descending singular values.
///
/// The cutoff is the largest leading run where `μ(λ_0, λ_m) ≥ nu` — the
/// strongest subchannel tested against each candidate in turn, exactly the
/// printed loop — and pairs are `(n, cutoff-1-n)`. A cutoff of one or zero
/// yields no pairs, degenerating the design to plain diagonal transmission.
pub fn compute_pairing(
    sigma: &[f64],
    noise: &NoiseModel,
    c: &Constellation,
    nu: f64,
) -> PairingPlan {
    let n = sigma.len();
    let (clamped, _) = crate::linalg::clamp_gains(sigma);
    let mut cutoff = n;
    for m in 0..n {
        if conditioning_product(clamped[0], clamped[m], noise, c) < nu {
            cutoff = m;
            break;
        }
    }
    if cutoff <= 1 {
        return PairingPlan { cutoff, pairs: vec![], singletons: (0..n).collect() };
    }
    let mut pairs = Vec::with_capacity(cutoff / 2);
    for i in 0..cutoff / 2 {
        pairs.push((i, cutoff - 1 - i));
    }
    let mut singletons = Vec::new();
    if cutoff % 2 == 1 {
        singletons.push(cutoff / 2);
    }
    singletons.extend(cutoff..n);
    PairingPlan { cutoff, pairs, singletons }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::build_constellation;

    fn noise_for(sigma2: f64) -> NoiseModel {
        NoiseModel::from_sigma2(sigma2).unwrap()
    }

    #[test]
    fn full_pairing_order_matches_outermost_in() {
        // Strong subchannels throughout: cutoff 6 of 8 by construction.
        let c = build_constellation(4).unwrap();
        let noise = noise_for(1.0);
        // d² = 2: γ_i = 2λ_i². Want μ(λ0, λm) ≥ 1.7 for m ≤ 5, < 1.7 at 6.
        let sigma = [3.0, 2.5, 2.0, 1.5, 1.0, 0.5, 0.05, 0.02];
        let plan = compute_pairing(&sigma, &noise, &c, DEFAULT_NU);
        assert_eq!(plan.cutoff(), 6);
        assert_eq!(plan.pairs(), &[(0, 5), (1, 4), (2, 3)]);
        assert_eq!(plan.singletons(), &[6, 7]);
        assert_eq!(plan.permuted_order(), vec![0, 5, 1, 4, 2, 3, 6, 7]);
    }

    #[test]
    fn low_snr_yields_no_pairs() {
        let c = build_constellation(256).unwrap();
        let noise = noise_for(100.0);
        let sigma = [2.0, 1.5, 1.0, 0.5];
        let plan = compute_pairing(&sigma, &noise, &c, DEFAULT_NU);
        assert!(plan.pairs().is_empty());
        assert_eq!(plan.singletons(), &[0, 1, 2, 3]);
        assert_eq!(plan.permuted_order(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn odd_cutoff_keeps_middle_singleton() {
        // Construct a 6-value spectrum where the loop breaks at m = 5,
        // giving cutoff 5: pairs (0,4), (1,3), singleton 2, tail 5.
        let c = build_constellation(4).unwrap();
        let noise = noise_for(1.0);
        // γ = 2λ²: μ(λ0, λm) = 4λ0²λm². λ0 = 2 → μ_m = 16λm².
        // Want λ4: 16·λ4² ≥ 1.7 → λ4 ≥ 0.326; λ5 below.
        let sigma = [2.0, 1.8, 1.2, 0.8, 0.4, 0.2];
        let plan = compute_pairing(&sigma, &noise, &c, DEFAULT_NU);
        assert_eq!(plan.cutoff(), 5);
        assert_eq!(plan.pairs(), &[(0, 4), (1, 3)]);
        assert_eq!(plan.singletons(), &[2, 5]);
        assert_eq!(plan.permuted_order(), vec![0, 4, 1, 3, 2, 5]);
    }

    #[test]
    fn cutoff_monotone_in_snr() {
        let c = build_constellation(16).unwrap();
        let sigma = [2.5, 1.8, 1.1, 0.6, 0.3, 0.1];
        let mut last = 0;
        for snr_db in [-10.0, 0.0, 10.0, 20.0, 30.0, 40.0] {
            let noise = NoiseModel::from_snr_db(snr_db);
            let plan = compute_pairing(&sigma, &noise, &c, DEFAULT_NU);
            assert!(plan.cutoff() >= last, "cutoff dropped at {snr_db} dB");
            last = plan.cutoff();
        }
        assert_eq!(last, 6);
    }
}
