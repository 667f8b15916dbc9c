//! Constellations and soft demodulation.
//!
//! Exact BCJR and max-log demodulators over real bidiagonal equivalent
//! channels, per-subchannel AWGN demapping for diagonal schemes, and
//! brute-force LLR references for testing.

mod awgn;
mod bruteforce;
mod constellation;
mod trellis;

pub use awgn::awgn_demapper;
pub use bruteforce::{bruteforce_llr, bruteforce_maxlog_llr};
pub use constellation::{build_constellation, Constellation};
pub use trellis::{
    bcjr_bidiagonal, bcjr_bidiagonal_with_stats, maxlog_llr, maxlog_llr_with_stats, LlrVector,
    TrellisSpec, TrellisStats, LLR_CLAMP,
};

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::Rng;
    use rand_distr::StandardNormal;

    use crate::linalg::BidiagonalReal;
    use crate::rng::{stream, StreamKind};

    fn random_bidiagonal(n: usize, seed: u64) -> (BidiagonalReal, Vec<Complex64>) {
        let mut rng = stream(seed, StreamKind::Generic, 0);
        let diag: Vec<f64> = (0..n).map(|_| rng.random_range(0.2..2.0)).collect();
        let superdiag: Vec<f64> = (0..n - 1).map(|_| rng.random_range(-1.0..1.0)).collect();
        let b = BidiagonalReal::new(diag, superdiag).unwrap();
        let y: Vec<Complex64> = (0..n)
            .map(|_| {
                Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample(StandardNormal))
            })
            .collect();
        (b, y)
    }

    #[test]
    fn scalar_qpsk_closed_form() {
        let c = build_constellation(4).unwrap();
        let b = BidiagonalReal::new(vec![0.8], vec![]).unwrap();
        let y = [Complex64::new(0.33, -0.2)];
        let s2 = 0.7;
        let l = bcjr_bidiagonal(&b, &y, s2, &c);
        let expect = 2.0 * 2f64.sqrt() * 0.8 * 0.33 / s2;
        assert!((l.values[0] - expect).abs() < 1e-12);
        let expect_q = 2.0 * 2f64.sqrt() * 0.8 * (-0.2) / s2;
        assert!((l.values[1] - expect_q).abs() < 1e-12);
    }

    #[test]
    fn diagonal_chain_equals_awgn_demapper() {
        let c = build_constellation(16).unwrap();
        let diag = vec![1.3, 0.4, 2.0];
        let b = BidiagonalReal::from_diag(diag.clone());
        let y = [
            Complex64::new(0.5, -1.0),
            Complex64::new(-0.2, 0.9),
            Complex64::new(1.5, 0.1),
        ];
        let l = bcjr_bidiagonal(&b, &y, 0.5, &c);
        for (i, &g) in diag.iter().enumerate() {
            let per = awgn_demapper(g, y[i], 0.5, &c);
            for (k, &exp) in per.iter().enumerate() {
                let got = l.values[i * 4 + k];
                assert!((got - exp).abs() < 1e-10, "sym {i} bit {k}: {got} vs {exp}");
            }
        }
    }

    #[test]
    fn bcjr_matches_bruteforce() {
        let mut worst = 0.0f64;
        for seed in 0..30 {
            let n = 2 + (seed as usize % 3);
            let m = if seed % 2 == 0 { 4 } else { 16 };
            let c = build_constellation(m).unwrap();
            let (b, y) = random_bidiagonal(n, seed);
            let s2 = 0.3 + 0.1 * (seed % 5) as f64;
            let exact = bcjr_bidiagonal(&b, &y, s2, &c);
            let brute = bruteforce_llr(&b.expand(n), &y, s2, &c).unwrap();
            for (a, e) in exact.values.iter().zip(&brute.values) {
                worst = worst.max((a - e).abs());
            }
        }
        assert!(worst < 1e-8, "worst deviation {worst}");
    }

    #[test]
    fn maxlog_equals_bruteforce_exactly() {
        for seed in 100..130 {
            let n = 2 + (seed as usize % 2);
            let c = build_constellation(16).unwrap();
            let (b, y) = random_bidiagonal(n, seed);
            let s2 = 0.4;
            let ml = maxlog_llr(&b, &y, s2, &c);
            let brute = bruteforce_maxlog_llr(&b, &y, s2, &c).unwrap();
            assert_eq!(ml.values, brute.values);
        }
    }

    #[test]
    fn scalar_maxlog_equals_exact_for_qpsk() {
        // Binary PAM per dimension: one hypothesis per bit value, so the
        // log-sum has a single term and max-log is exact.
        let c = build_constellation(4).unwrap();
        let b = BidiagonalReal::new(vec![1.0], vec![]).unwrap();
        for seed in 0..20 {
            let mut rng = stream(seed, StreamKind::Generic, 1);
            let y = [Complex64::new(
                rng.sample::<f64, _>(StandardNormal),
                rng.sample(StandardNormal),
            )];
            let exact = bcjr_bidiagonal(&b, &y, 1.0, &c);
            let ml = maxlog_llr(&b, &y, 1.0, &c);
            for (a, e) in ml.values.iter().zip(&exact.values) {
                assert!((a - e).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn block_boundaries_match_unblocked_chain() {
        let c = build_constellation(16).unwrap();
        let diag = vec![1.0, 0.8, 1.4, 0.6];
        let superdiag = vec![0.5, 0.0, -0.3];
        let blocked =
            BidiagonalReal::with_boundaries(diag.clone(), superdiag.clone(), Some(vec![1]))
                .unwrap();
        let dense = BidiagonalReal::new(diag, superdiag).unwrap();
        let y = [
            Complex64::new(0.4, 0.2),
            Complex64::new(-0.9, 1.1),
            Complex64::new(0.3, -0.6),
            Complex64::new(1.2, 0.5),
        ];
        let a = bcjr_bidiagonal(&blocked, &y, 0.6, &c);
        let b = bcjr_bidiagonal(&dense, &y, 0.6, &c);
        for (x, z) in a.values.iter().zip(&b.values) {
            assert!((x - z).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_observation_symmetric_llr() {
        let c = build_constellation(4).unwrap();
        let b = BidiagonalReal::new(vec![1.0], vec![]).unwrap();
        let l = bruteforce_llr(&b.expand(1), &[Complex64::ZERO], 1.0, &c).unwrap();
        assert!(l.values.iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn enumeration_guard_trips() {
        let c = build_constellation(256).unwrap();
        let b = BidiagonalReal::from_diag(vec![1.0; 4]);
        let y = vec![Complex64::ZERO; 4];
        assert!(bruteforce_llr(&b.expand(4), &y, 1.0, &c).is_err());
    }

    #[test]
    fn llr_consistency_calibration() {
        // E[c | L in bin] ≈ 1/(1+e^{-L}) for proper APPs, checked with
        // binomial 3σ slack at 10 dB.
        let c = build_constellation(16).unwrap();
        let s2: f64 = 0.1;
        let mut bins = vec![(0.0f64, 0.0f64, 0.0f64); 24]; // (ones, count, predicted)
        let q_m = c.bits_per_symbol();
        for trial in 0..3000u64 {
            let mut rng = stream(7, StreamKind::Generic, trial);
            let (b, _) = random_bidiagonal(3, trial);
            let bits: Vec<bool> = (0..3 * q_m).map(|_| rng.random::<bool>()).collect();
            let syms = c.map_bits(&bits).unwrap();
            let noise_scale = (s2 / 2.0).sqrt();
            let bs = b.expand(3).mul_vec(&syms);
            let y: Vec<Complex64> = bs
                .iter()
                .map(|z| {
                    z + Complex64::new(
                        noise_scale * rng.sample::<f64, _>(StandardNormal),
                        noise_scale * rng.sample::<f64, _>(StandardNormal),
                    )
                })
                .collect();
            let l = bcjr_bidiagonal(&b, &y, s2, &c);
            for (k, &bit) in bits.iter().enumerate() {
                let lv = l.values[k];
                let bin = (((lv + 6.0) / 0.5).floor() as isize).clamp(0, 23) as usize;
                bins[bin].0 += bit as u64 as f64;
                bins[bin].1 += 1.0;
                bins[bin].2 += 1.0 / (1.0 + (-lv).exp());
            }
        }
        for (sum_one, count, sum_pred) in bins {
            if count < 100.0 {
                continue;
            }
            let p_emp = sum_one / count;
            let p_pred = sum_pred / count;
            let sigma = (p_pred * (1.0 - p_pred) / count).sqrt().max(1e-6);
            assert!(
                (p_emp - p_pred).abs() <= 3.0 * sigma + 0.02,
                "bin calibration off: {p_emp} vs {p_pred} (n={count})"
            );
        }
    }

    #[test]
    fn complexity_counts_scale_with_block_structure() {
        let c4 = build_constellation(4).unwrap();
        let c16 = build_constellation(16).unwrap();
        let y = vec![Complex64::new(0.1, -0.1); 8];

        // Paired blocks: per-block work is Θ(M) and independent of depth.
        let paired = BidiagonalReal::with_boundaries(
            vec![1.0; 8],
            vec![0.5, 0.0, 0.5, 0.0, 0.5, 0.0, 0.5],
            Some(vec![1, 3, 5]),
        )
        .unwrap();
        let (_, s4) = bcjr_bidiagonal_with_stats(&paired, &y, 1.0, &c4);
        let (_, s16) = bcjr_bidiagonal_with_stats(&paired, &y, 1.0, &c16);
        assert_eq!(s4.max_block_branch_metrics, 4 + 2);
        assert_eq!(s16.max_block_branch_metrics, 16 + 4);

        // Dense chain: totals grow with depth; each connecting layer costs
        // (√M)² = M metric evaluations.
        let dense = BidiagonalReal::new(vec![1.0; 8], vec![0.5; 7]).unwrap();
        let (_, dense_stats) = bcjr_bidiagonal_with_stats(&dense, &y, 1.0, &c16);
        assert_eq!(dense_stats.branch_metrics, 2 * (7 * 16 + 4));
    }
}
