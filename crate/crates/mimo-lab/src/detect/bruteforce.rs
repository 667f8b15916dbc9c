//! Exhaustive-enumeration LLR references.
//!
//! These exist to check the trellis demodulators, not to be fast: the exact
//! APP oracle sums over every symbol vector of the full alphabet, and the
//! min-distance oracle enumerates per-dimension PAM vectors. Both share the
//! trellis' residual expressions so comparisons are meaningful at float
//! precision.

use num_complex::Complex64;

use crate::detect::constellation::Constellation;
use crate::detect::trellis::{clamp_llr, pair_residual_sq, term_residual_sq, LlrVector};
use crate::error::{Error, Result};
use crate::linalg::{BidiagonalReal, ComplexMatrix};

/// Guard on the exact-APP enumeration size `M^{N_s}`.
const MAX_ENUMERATION: f64 = (1u64 << 20) as f64;

/// Exact a-posteriori bit LLRs by log-sum enumeration over all `M^{N_s}`
/// symbol vectors of `y = B·s + z`, for an arbitrary complex matrix `B`.
pub fn bruteforce_llr(
    b_full: &ComplexMatrix,
    y: &[Complex64],
    sigma2_z: f64,
    c: &Constellation,
) -> Result<LlrVector> {
    let n_s = b_full.cols();
    if y.len() != b_full.rows() {
        return Err(Error::Dimension(format!(
            "observation length {} does not match {} receive rows",
            y.len(),
            b_full.rows()
        )));
    }
    let m = c.order() as f64;
    if m.powi(n_s as i32) > MAX_ENUMERATION {
        return Err(Error::Domain(format!(
            "enumeration {}^{n_s} exceeds the oracle guard",
            c.order()
        )));
    }

    let q_m = c.bits_per_symbol();
    let half = c.bits_per_dim();
    let side = c.pam().len();
    let total_bits = n_s * q_m;
    let mut acc = vec![[f64::NEG_INFINITY; 2]; total_bits];

    // Odometer over per-symbol point indices; a point index encodes
    // (I level, Q level).
    let points_per_symbol = side * side;
    let mut idx = vec![0usize; n_s];
    let mut s = vec![Complex64::ZERO; n_s];
    loop {
        for (k, &pi) in idx.iter().enumerate() {
            s[k] = Complex64::new(c.pam()[pi / side], c.pam()[pi % side]);
        }
        let bs = b_full.mul_vec(&s);
        let dist: f64 = y.iter().zip(&bs).map(|(yi, bi)| (yi - bi).norm_sqr()).sum();
        let w = -dist / sigma2_z;
        for (k, &pi) in idx.iter().enumerate() {
            let (i_level, q_level) = (pi / side, pi % side);
            for bit in 0..half {
                let slot = c.level_bit(i_level, bit) as usize;
                let cell = &mut acc[k * q_m + bit][slot];
                *cell = log_sum_exp(*cell, w);
                let slot = c.level_bit(q_level, bit) as usize;
                let cell = &mut acc[k * q_m + half + bit][slot];
                *cell = log_sum_exp(*cell, w);
            }
        }
        // Advance the odometer.
        let mut k = 0;
        loop {
            if k == n_s {
                let values =
                    acc.iter().map(|pair| clamp_llr(pair[1] - pair[0])).collect();
                return Ok(LlrVector { values, bits_per_symbol: q_m });
            }
            idx[k] += 1;
            if idx[k] < points_per_symbol {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Min-distance enumeration of the log-max LLR definition, evaluated per
/// real dimension and per independent block with the canonical layer-order
/// summation, so it matches the min-sum trellis exactly.
pub fn bruteforce_maxlog_llr(
    b: &BidiagonalReal,
    y: &[Complex64],
    sigma2_z: f64,
    c: &Constellation,
) -> Result<LlrVector> {
    let n = b.n();
    if y.len() != n {
        return Err(Error::Dimension("observation length mismatch".into()));
    }
    let side = c.pam().len() as f64;
    let q_m = c.bits_per_symbol();
    let half = c.bits_per_dim();
    let mut values = vec![0.0; n * q_m];

    for dim in 0..2 {
        let obs: Vec<f64> = y.iter().map(|z| if dim == 0 { z.re } else { z.im }).collect();
        for block in b.blocks() {
            let len = block.len();
            if side.powi(len as i32) > MAX_ENUMERATION {
                return Err(Error::Domain("block enumeration exceeds the oracle guard".into()));
            }
            let states = c.pam().len();
            let mut mins = vec![[f64::INFINITY; 2]; len * half];
            let mut idx = vec![0usize; len];
            'outer: loop {
                let mut dist = 0.0;
                for (j, i) in (block.start..block.end - 1).enumerate() {
                    dist += pair_residual_sq(
                        obs[i],
                        b.diag()[i],
                        c.pam()[idx[j]],
                        b.superdiag()[i],
                        c.pam()[idx[j + 1]],
                    );
                }
                let last = block.end - 1;
                dist += term_residual_sq(obs[last], b.diag()[last], c.pam()[idx[len - 1]]);
                for (j, &level) in idx.iter().enumerate() {
                    for k in 0..half {
                        let slot = c.level_bit(level, k) as usize;
                        let cell = &mut mins[j * half + k][slot];
                        if dist < *cell {
                            *cell = dist;
                        }
                    }
                }
                let mut k = 0;
                loop {
                    if k == len {
                        break 'outer;
                    }
                    idx[k] += 1;
                    if idx[k] < states {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
            }
            for (j, sym) in block.clone().enumerate() {
                for k in 0..half {
                    let pair = mins[j * half + k];
                    values[sym * q_m + dim * half + k] = clamp_llr((pair[0] - pair[1]) / sigma2_z);
                }
            }
        }
    }
    Ok(LlrVector { values, bits_per_symbol: q_m })
}

fn log_sum_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (-(hi - lo)).exp().ln_1p()
}
