//! The rate-gap function and the optimal 2×2 diagonal split.

use crate::detect::Constellation;
use crate::schemes::NoiseModel;

/// Gap to the saturation rate for a rotated pair:
/// `g(x) = log2(1+e^{-x}) + log2(1+e^{-μ/x})`, where `x` is the normalized
/// post-processing SNR of the stronger stream.
pub fn rate_gap(x: f64, mu: f64) -> f64 {
    debug_assert!(x > 0.0 && mu > 0.0);
    (log1p_exp(-x) + log1p_exp(-mu / x)) / std::f64::consts::LN_2
}

/// `ln(1 + e^t)` without overflow for large `|t|`.
fn log1p_exp(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

/// Optimal diagonal entries `(B₁₁, B₂₂)` for a paired 2×2 subchannel, plus
/// the pair's conditioning product μ.
///
/// For `μ ≥ nu` the gap is minimized by equal entries `√(λ_hi·λ_lo)`. Below
/// the threshold the minimizer is found numerically: a 1025-point geometric
/// grid over the feasible `x ∈ [√μ, d²λ_hi²/σ²]` refined by golden-section
/// around the best bracket. The product `B₁₁·B₂₂ = λ_hi·λ_lo` always holds.
pub fn optimal_pair_diagonals(
    lambda_hi: f64,
    lambda_lo: f64,
    noise: &NoiseModel,
    c: &Constellation,
    nu: f64,
) -> (f64, f64, f64) {
    assert!(
        lambda_hi >= lambda_lo && lambda_lo > 0.0,
        "pair gains must be positive and ordered"
    );
    let scale = c.d2_min() / noise.sigma2();
    let gamma_hi = scale * lambda_hi * lambda_hi;
    let gamma_lo = scale * lambda_lo * lambda_lo;
    let mu = gamma_hi * gamma_lo;
    let geo = (lambda_hi * lambda_lo).sqrt();
    if lambda_hi == lambda_lo {
        return (lambda_hi, lambda_lo, mu);
    }
    if mu >= nu {
        return (geo, lambda_hi * lambda_lo / geo, mu);
    }

    let x_star = minimize_gap(mu, mu.sqrt(), gamma_hi);
    let b11 = (x_star / scale).sqrt().clamp(geo, lambda_hi);
    (b11, lambda_hi * lambda_lo / b11, mu)
}

/// Grid-plus-golden-section minimization of [`rate_gap`] over `[lo, hi]`.
fn minimize_gap(mu: f64, lo: f64, hi: f64) -> f64 {
    debug_assert!(hi >= lo && lo > 0.0);
    if hi <= lo {
        return lo;
    }
    const GRID: usize = 1025;
    let ratio = (hi / lo).ln();
    let mut best_idx = 0;
    let mut best_val = f64::INFINITY;
    let grid_x = |i: usize| lo * (ratio * i as f64 / (GRID - 1) as f64).exp();
    for i in 0..GRID {
        let v = rate_gap(grid_x(i), mu);
        if v < best_val {
            best_val = v;
            best_idx = i;
        }
    }
    let mut a = grid_x(best_idx.saturating_sub(1));
    let mut b = grid_x((best_idx + 1).min(GRID - 1));
    // Golden-section refinement to |Δx| ≤ 1e−9 of the span.
    let tol = 1e-9 * (hi - lo);
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = rate_gap(x1, mu);
    let mut f2 = rate_gap(x2, mu);
    while (b - a) > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = rate_gap(x1, mu);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = rate_gap(x2, mu);
        }
    }
    let mid = 0.5 * (a + b);
    // Keep whichever of {refined point, endpoints} wins, so boundary minima
    // are honored exactly.
    let candidates = [(mid.clamp(lo, hi), rate_gap(mid.clamp(lo, hi), mu)), (lo, rate_gap(lo, mu)), (hi, rate_gap(hi, mu))];
    candidates
        .iter()
        .cloned()
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .map(|(x, _)| x)
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::build_constellation;

    #[test]
    fn gap_values_match_direct_arithmetic() {
        // g(4; 16) = 2·log2(1+e⁻⁴); symmetric form at x = √μ.
        let direct = 2.0 * (1.0 + (-4.0f64).exp()).log2();
        assert!((rate_gap(4.0, 16.0) - direct).abs() < 1e-12);
        assert!((rate_gap(4.0, 16.0) - 0.05237).abs() < 5e-5);
        let g8 = (1.0 + (-8.0f64).exp()).log2() + (1.0 + (-2.0f64).exp()).log2();
        assert!((rate_gap(8.0, 16.0) - g8).abs() < 1e-12);
        assert!(rate_gap(8.0, 16.0) > rate_gap(4.0, 16.0));
    }

    #[test]
    fn gap_limit_as_weak_stream_dies() {
        // x → ∞ with fixed μ: the weak stream contributes log2(2) = 1.
        let g = rate_gap(1e6, 16.0);
        assert!((g - 1.0).abs() < 1e-4, "g {g}");
    }

    #[test]
    fn well_conditioned_pair_gets_equal_entries() {
        // λ=(2,1), σ²=1, M=4: μ = 16 ≥ 1.7 → b11 = b22 = √2.
        let c = build_constellation(4).unwrap();
        let noise = NoiseModel::from_sigma2(1.0).unwrap();
        let (b11, b22, mu) = optimal_pair_diagonals(2.0, 1.0, &noise, &c, 1.7);
        assert!((mu - 16.0).abs() < 1e-12);
        assert!((b11 - 2f64.sqrt()).abs() < 1e-12);
        assert!((b22 - 2f64.sqrt()).abs() < 1e-12);
        // Grid check: √μ is the gap minimizer over the feasible region.
        let scale = c.d2_min() / noise.sigma2();
        let x_opt = scale * b11 * b11;
        let g_opt = rate_gap(x_opt, mu);
        for i in 0..1000 {
            let x = mu.sqrt() + (scale * 4.0 - mu.sqrt()) * i as f64 / 999.0;
            assert!(g_opt <= rate_gap(x, mu) + 1e-12);
        }
    }

    #[test]
    fn equal_pair_is_fixed() {
        let c = build_constellation(16).unwrap();
        let noise = NoiseModel::from_sigma2(5.0).unwrap();
        let (b11, b22, _) = optimal_pair_diagonals(1.3, 1.3, &noise, &c, 1.7);
        assert_eq!(b11, 1.3);
        assert_eq!(b22, 1.3);
    }

    #[test]
    fn low_mu_narrow_region_prefers_no_rotation() {
        // μ = 1 with γ_hi = 2: the gap decreases toward the upper boundary,
        // so the split stays at (λ_hi, λ_lo).
        // Pick d²/σ² = 1: λ_hi² = 2, λ_lo² = 0.5.
        let c = build_constellation(4).unwrap();
        let noise = NoiseModel::from_sigma2(c.d2_min()).unwrap();
        let lambda_hi = 2f64.sqrt();
        let lambda_lo = 0.5f64.sqrt();
        let (b11, b22, mu) = optimal_pair_diagonals(lambda_hi, lambda_lo, &noise, &c, 1.7);
        assert!((mu - 1.0).abs() < 1e-12);
        assert!((b11 - lambda_hi).abs() < 1e-9, "b11 {b11} vs {lambda_hi}");
        assert!((b22 - lambda_lo).abs() < 1e-9);
        // Independent grid confirms g decreasing toward x = 2 on [1, 2].
        for i in 1..100 {
            let x = 1.0 + i as f64 / 100.0;
            assert!(rate_gap(x, 1.0) <= rate_gap(x - 0.01, 1.0) + 1e-12);
        }
    }

    #[test]
    fn product_always_preserved() {
        let c = build_constellation(64).unwrap();
        for &(hi, lo, snr) in
            &[(3.0, 0.2, 10.0), (1.0, 0.9, -5.0), (5.0, 0.01, 25.0), (2.0, 1.0, 0.0)]
        {
            let noise = NoiseModel::from_snr_db(snr);
            let (b11, b22, _) = optimal_pair_diagonals(hi, lo, &noise, &c, 1.7);
            assert!((b11 * b22 - hi * lo).abs() < 1e-10 * hi * lo);
            assert!(b11 >= (hi * lo).sqrt() - 1e-12 && b11 <= hi + 1e-12);
        }
    }
}
