//! Exact per-subchannel AWGN soft demapping for diagonal equivalent
//! channels.
//!
//! With no inter-stream interference each stream is a scalar channel
//! `y = g·s + z`, so the LLRs are plain per-dimension log-sums over the
//! PAM hypotheses. Diagonal schemes use this exact demapper rather than an
//! MMSE-filtered approximation, so the scaling loss such filters introduce
//! is deliberately absent here.

use num_complex::Complex64;

use crate::detect::constellation::Constellation;
use crate::detect::trellis::clamp_llr;

/// LLRs of the `Q_m` bits of one received symbol on a scalar channel with
/// real gain `gain` and complex noise power `sigma2_z`; in-phase bits first.
pub fn awgn_demapper(gain: f64, y: Complex64, sigma2_z: f64, c: &Constellation) -> Vec<f64> {
    assert!(sigma2_z > 0.0, "noise power must be positive");
    let half = c.bits_per_dim();
    let pam = c.pam();
    let mut out = Vec::with_capacity(c.bits_per_symbol());
    for obs in [y.re, y.im] {
        // Log-weights per PAM hypothesis; per-dimension noise variance is
        // σ²_z/2 so the Gaussian exponent is r²/σ²_z.
        let weights: Vec<f64> = pam
            .iter()
            .map(|&x| {
                let r = obs - gain * x;
                -(r * r) / sigma2_z
            })
            .collect();
        for k in 0..half {
            let mut acc = [f64::NEG_INFINITY; 2];
            for (j, &w) in weights.iter().enumerate() {
                let slot = c.level_bit(j, k) as usize;
                acc[slot] = log_sum_exp(acc[slot], w);
            }
            out.push(clamp_llr(acc[1] - acc[0]));
        }
    }
    out
}

fn log_sum_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (-(hi - lo)).exp().ln_1p()
}
