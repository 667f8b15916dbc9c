//! Closed-form lower bound on the achievable rate.
//!
//! `R_L = Σ_i Σ_k (1 − log2(1 + e^{−d²_min·‖b_i‖²/σ²}))` over the squared
//! column norms of the equivalent channel (diagonal plus the superdiagonal
//! entry above each column). The bound is derived for the asymptotic SNR
//! regimes; mid-SNR behavior is reported, not asserted, by the experiments.

use crate::detect::Constellation;
use crate::linalg::BidiagonalReal;
use crate::schemes::NoiseModel;

/// Evaluates the bound for a bidiagonal equivalent channel (apply any power
/// allocation to `b` first via `scale_columns`).
pub fn rate_lower_bound(b: &BidiagonalReal, c: &Constellation, noise: &NoiseModel) -> f64 {
    rate_lower_bound_from_col_norms(
        &(0..b.n()).map(|j| b.col_norm_sq(j)).collect::<Vec<_>>(),
        c,
        noise,
    )
}

/// The same bound from explicit squared column norms.
pub fn rate_lower_bound_from_col_norms(
    col_norms_sq: &[f64],
    c: &Constellation,
    noise: &NoiseModel,
) -> f64 {
    let q_m = c.bits_per_symbol() as f64;
    col_norms_sq
        .iter()
        .map(|&n2| {
            let u = c.d2_min() * n2 / noise.sigma2();
            q_m * (1.0 - log1p_exp(-u) / std::f64::consts::LN_2)
        })
        .sum()
}

fn log1p_exp(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_worked_value() {
        // 1×1, h = 1, M = 4, σ² = 1: R_L = 2·(1 − log2(1+e⁻²)) ≈ 1.63374.
        let c = crate::detect::build_constellation(4).unwrap();
        let noise = NoiseModel::from_sigma2(1.0).unwrap();
        let b = BidiagonalReal::new(vec![1.0], vec![]).unwrap();
        let r = rate_lower_bound(&b, &c, &noise);
        let direct = 2.0 * (1.0 - (1.0 + (-2.0f64).exp()).log2());
        assert!((r - direct).abs() < 1e-12);
        assert!((r - 1.63374).abs() < 1e-5, "{r}");
    }

    #[test]
    fn vanishing_snr_bound_vanishes() {
        let c = crate::detect::build_constellation(16).unwrap();
        let noise = NoiseModel::from_sigma2(1e12).unwrap();
        let b = BidiagonalReal::from_diag(vec![1.0, 2.0]);
        let r = rate_lower_bound(&b, &c, &noise);
        assert!(r >= 0.0 && r < 1e-9, "{r}");
    }

    #[test]
    fn noiseless_bound_hits_alphabet_ceiling() {
        let c = crate::detect::build_constellation(64).unwrap();
        let noise = NoiseModel::from_sigma2(1e-12).unwrap();
        let b = BidiagonalReal::from_diag(vec![1.0, 1.0, 1.0]);
        let r = rate_lower_bound(&b, &c, &noise);
        assert!((r - 18.0).abs() < 1e-9, "{r}");
    }

    #[test]
    fn superdiagonal_contributes_to_column_norms() {
        let c = crate::detect::build_constellation(4).unwrap();
        let noise = NoiseModel::from_sigma2(1.0).unwrap();
        let dense = BidiagonalReal::new(vec![1.0, 1.0], vec![0.5]).unwrap();
        let diag = BidiagonalReal::from_diag(vec![1.0, 1.0]);
        assert!(rate_lower_bound(&dense, &c, &noise) > rate_lower_bound(&diag, &c, &noise));
    }
}
