//! Transceiver designers and power allocation.

mod design;
mod gap;
mod pairing;
mod power;

pub use design::{
    design, design_cbd, design_gp_cbd, design_gp_cbd_with_threshold, design_svd_mmse,
    TransceiverDesign,
};
pub use gap::{optimal_pair_diagonals, rate_gap};
pub use pairing::{compute_pairing, conditioning_product, PairingPlan, DEFAULT_NU};
pub use power::{mercury_waterfilling, waterfilling, PowerAllocation, PowerPolicy};

use crate::error::{Error, Result};

/// Complex noise power per receive antenna, with the SNR convention
/// `ρ = 10·log10(1/σ²)` used throughout the experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    sigma2: f64,
}

impl NoiseModel {
    pub fn from_sigma2(sigma2: f64) -> Result<Self> {
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::Domain(format!("noise power {sigma2} must be positive")));
        }
        Ok(Self { sigma2 })
    }

    pub fn from_snr_db(snr_db: f64) -> Self {
        Self { sigma2: 10f64.powf(-snr_db / 10.0) }
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn snr_db(&self) -> f64 {
        10.0 * (1.0 / self.sigma2).log10()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{draw, ChannelModel};
    use crate::detect::build_constellation;
    use crate::linalg::{svd, ComplexMatrix, Scheme};

    #[test]
    fn noise_model_round_trip() {
        let n = NoiseModel::from_snr_db(17.0);
        assert!((n.snr_db() - 17.0).abs() < 1e-12);
        assert!(NoiseModel::from_sigma2(0.0).is_err());
    }

    #[test]
    fn identity_channel_designs_have_unit_eccn() {
        let h = ComplexMatrix::identity(2);
        let noise = NoiseModel::from_sigma2(1.0).unwrap();
        let c = build_constellation(4).unwrap();
        let svd_design = design_svd_mmse(&h, &noise).unwrap();
        assert!((svd_design.eccn - 1.0).abs() < 1e-12);
        let gp = design_gp_cbd(&h, &noise, &c).unwrap();
        assert!((gp.eccn - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_two_one_svd_eccn_two() {
        let h = ComplexMatrix::from_diag(2, 2, &[2.0, 1.0]);
        let noise = NoiseModel::from_sigma2(1.0).unwrap();
        let d = design_svd_mmse(&h, &noise).unwrap();
        assert!((d.eccn - 2.0).abs() < 1e-12);
        assert_eq!(d.decomposition.b.superdiag(), &[0.0]);
        // ρ_{o,i} = λ_i²/σ².
        assert!((d.post_snr[0] - 4.0).abs() < 1e-12);
        assert!((d.post_snr[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cbd_diagonal_input_stays_diagonal() {
        let h = ComplexMatrix::from_diag(3, 3, &[3.0, 2.0, 1.0]);
        let noise = NoiseModel::from_sigma2(1.0).unwrap();
        let d = design_cbd(&h, &noise).unwrap();
        assert_eq!(d.decomposition.b.diag(), &[3.0, 2.0, 1.0]);
        assert!((d.eccn - 3.0).abs() < 1e-12);
    }

    #[test]
    fn gp_cbd_two_by_two_high_snr_equalizes() {
        // λ = (2, 1) at σ² = 1, M = 4: one pair, equal diagonals √2,
        // fill 1, ECCN 1.
        let h = ComplexMatrix::from_diag(2, 2, &[2.0, 1.0]);
        let noise = NoiseModel::from_sigma2(1.0).unwrap();
        let c = build_constellation(4).unwrap();
        let d = design_gp_cbd(&h, &noise, &c).unwrap();
        let rt2 = 2f64.sqrt();
        assert!((d.decomposition.b.diag()[0] - rt2).abs() < 1e-12);
        assert!((d.decomposition.b.diag()[1] - rt2).abs() < 1e-12);
        assert!((d.decomposition.b.superdiag()[0] - 1.0).abs() < 1e-12);
        assert!((d.eccn - 1.0).abs() < 1e-12);
        assert!(d.decomposition.residual(&h) < 1e-12);
        assert_eq!(d.mu_per_pair.len(), 1);
        assert!((d.mu_per_pair[0] - 16.0).abs() < 1e-12);
    }

    #[test]
    fn gp_cbd_no_pairs_equals_svd_design() {
        // ρ = −20 dB with M = 256: no pair qualifies, so the two designs
        // coincide entrywise.
        let h = draw(&ChannelModel::Rayleigh { n_r: 8, n_t: 8 }, 11).unwrap().h;
        let noise = NoiseModel::from_snr_db(-20.0);
        let c = build_constellation(256).unwrap();
        let gp = design_gp_cbd(&h, &noise, &c).unwrap();
        let sv = design_svd_mmse(&h, &noise).unwrap();
        assert!(gp.plan.as_ref().unwrap().pairs().is_empty());
        for (a, b) in gp.decomposition.b.diag().iter().zip(sv.decomposition.b.diag()) {
            assert!((a - b).abs() <= 1e-12);
        }
        for (a, b) in gp.decomposition.b.superdiag().iter().zip(sv.decomposition.b.superdiag())
        {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn gp_cbd_reconstructs_and_preserves_pair_products() {
        let noise = NoiseModel::from_snr_db(30.0);
        let c = build_constellation(16).unwrap();
        for seed in 0..20 {
            let h = draw(&ChannelModel::Rayleigh { n_r: 8, n_t: 8 }, seed).unwrap().h;
            let d = design_gp_cbd(&h, &noise, &c).unwrap();
            assert!(
                d.decomposition.residual(&h) < 1e-10,
                "residual {}",
                d.decomposition.residual(&h)
            );
            let f = svd(&h).unwrap();
            let plan = d.plan.as_ref().unwrap();
            let diag = d.decomposition.b.diag();
            for (t, &(i, j)) in plan.pairs().iter().enumerate() {
                let prod = diag[2 * t] * diag[2 * t + 1];
                let expect = f.sigma[i] * f.sigma[j];
                assert!((prod - expect).abs() <= 1e-10 * expect, "pair {t}");
            }
        }
    }

    #[test]
    fn gp_cbd_eccn_no_worse_than_svd_at_high_snr() {
        let noise = NoiseModel::from_snr_db(30.0);
        let c = build_constellation(16).unwrap();
        for seed in 40..60 {
            let h = draw(&ChannelModel::Rayleigh { n_r: 8, n_t: 8 }, seed).unwrap().h;
            let gp = design_gp_cbd(&h, &noise, &c).unwrap();
            let sv = design_svd_mmse(&h, &noise).unwrap();
            assert!(gp.eccn <= sv.eccn + 1e-9, "seed {seed}: {} vs {}", gp.eccn, sv.eccn);
        }
    }

    #[test]
    fn power_budget_preserved_for_all_policies() {
        let h = draw(&ChannelModel::Rayleigh { n_r: 4, n_t: 4 }, 5).unwrap().h;
        let noise = NoiseModel::from_snr_db(10.0);
        let c = build_constellation(16).unwrap();
        for policy in
            [PowerPolicy::Uniform, PowerPolicy::WaterFilling, PowerPolicy::MercuryWaterFilling]
        {
            let mut d = design_gp_cbd(&h, &noise, &c).unwrap();
            d.set_power(policy, &c, &noise).unwrap();
            let f = d.precoder();
            let trace: f64 = (0..f.cols()).map(|j| f.col_norm_sq(j)).sum();
            assert!((trace - 4.0).abs() <= 1e-6, "{policy}: Tr(FᴴF) = {trace}");
        }
    }

    #[test]
    fn gmd_has_no_designer() {
        let h = ComplexMatrix::identity(2);
        let noise = NoiseModel::from_sigma2(1.0).unwrap();
        let c = build_constellation(4).unwrap();
        assert!(design(Scheme::Gmd, &h, &noise, &c, DEFAULT_NU).is_err());
    }
}
