//! Power allocation policies over effective subchannel gains.

use crate::detect::Constellation;
use crate::error::{Error, Result};
use crate::quad::gauss_hermite;
use crate::schemes::NoiseModel;

/// Per-stream power multipliers `φ` with their generating policy.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation {
    phi: Vec<f64>,
    policy: PowerPolicy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PowerPolicy {
    Uniform,
    WaterFilling,
    MercuryWaterFilling,
}

impl PowerPolicy {
    pub fn key(&self) -> &'static str {
        match self {
            PowerPolicy::Uniform => "uniform",
            PowerPolicy::WaterFilling => "wf",
            PowerPolicy::MercuryWaterFilling => "mwf",
        }
    }
}

impl std::str::FromStr for PowerPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(PowerPolicy::Uniform),
            "wf" => Ok(PowerPolicy::WaterFilling),
            "mwf" => Ok(PowerPolicy::MercuryWaterFilling),
            other => Err(Error::Config(format!("unknown power policy `{other}`"))),
        }
    }
}

impl std::fmt::Display for PowerPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.key())
    }
}

impl PowerAllocation {
    /// `φ_i = 1` for every stream.
    pub fn uniform(n: usize) -> Self {
        Self { phi: vec![1.0; n], policy: PowerPolicy::Uniform }
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn policy(&self) -> PowerPolicy {
        self.policy
    }

    pub fn total(&self) -> f64 {
        self.phi.iter().sum()
    }

    /// Per-stream amplitude multipliers `√φ_i`.
    pub fn sqrt_phi(&self) -> Vec<f64> {
        self.phi.iter().map(|p| p.sqrt()).collect()
    }
}

/// Classic water-filling: `φ_i = max(0, w − σ²/g_i²)` with the water level
/// solved by bisection so `Σφ_i = total` within `1e-9`.
pub fn waterfilling(gains: &[f64], noise: &NoiseModel, total: f64) -> Result<PowerAllocation> {
    if gains.is_empty() || gains.iter().any(|&g| g <= 0.0 || !g.is_finite()) {
        return Err(Error::Domain("water-filling needs positive gains".into()));
    }
    if total <= 0.0 {
        return Err(Error::Domain("total power must be positive".into()));
    }
    let s2 = noise.sigma2();
    let inv: Vec<f64> = gains.iter().map(|g| s2 / (g * g)).collect();
    let allocated = |w: f64| -> f64 { inv.iter().map(|&v| (w - v).max(0.0)).sum() };
    let mut lo = 0.0f64;
    let mut hi = inv.iter().cloned().fold(0.0, f64::max) + total;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if allocated(mid) < total {
            lo = mid;
        } else {
            hi = mid;
        }
        if (allocated(0.5 * (lo + hi)) - total).abs() <= 1e-12 * total {
            break;
        }
    }
    let w = 0.5 * (lo + hi);
    let phi: Vec<f64> = inv.iter().map(|&v| (w - v).max(0.0)).collect();
    Ok(PowerAllocation { phi, policy: PowerPolicy::WaterFilling })
}

/// Mercury/water-filling for finite-alphabet inputs.
///
/// The per-stream power satisfies the MMSE fixed point
/// `mmse(φ_i·g_i²/σ²) = min(1, η·σ²/g_i²)` with the water parameter `η`
/// bisected until `Σφ_i = total`. The per-symbol MMSE of the square-QAM
/// input is evaluated by 63-node Gauss–Hermite quadrature on a cached
/// monotone table. Streams driven past the numerically resolvable MMSE
/// range are saturated; leftover power is then spread uniformly, which is
/// also the correct high-SNR limit.
pub fn mercury_waterfilling(
    gains: &[f64],
    noise: &NoiseModel,
    c: &Constellation,
    total: f64,
) -> Result<PowerAllocation> {
    if gains.is_empty() || gains.iter().any(|&g| g <= 0.0 || !g.is_finite()) {
        return Err(Error::Domain("mercury water-filling needs positive gains".into()));
    }
    if total <= 0.0 {
        return Err(Error::Domain("total power must be positive".into()));
    }
    let table = MmseTable::build(c)?;
    let s2 = noise.sigma2();
    let n = gains.len();

    let sum_phi = |eta: f64| -> f64 {
        gains
            .iter()
            .map(|&g| {
                let target = (eta * s2 / (g * g)).min(1.0);
                table.inverse(target) * s2 / (g * g)
            })
            .sum()
    };

    // Large η shuts every stream off; shrink until the budget is covered or
    // the MMSE range saturates.
    let mut hi = gains.iter().map(|&g| g * g / s2).fold(0.0, f64::max).max(1.0);
    let mut lo = hi;
    let mut saturated = true;
    for _ in 0..2000 {
        if sum_phi(lo) >= total {
            saturated = false;
            break;
        }
        lo /= 2.0;
        if lo < 1e-290 {
            break;
        }
    }

    let mut phi: Vec<f64>;
    if saturated {
        // Deep saturation: every stream past the resolvable MMSE decay.
        // The fixed point no longer discriminates; split the residual
        // evenly.
        phi = gains
            .iter()
            .map(|&g| {
                let target = (lo * s2 / (g * g)).min(1.0);
                table.inverse(target) * s2 / (g * g)
            })
            .collect();
        let residual = (total - phi.iter().sum::<f64>()).max(0.0) / n as f64;
        for p in phi.iter_mut() {
            *p += residual;
        }
    } else {
        for _ in 0..200 {
            let mid = (lo * hi).sqrt();
            if sum_phi(mid) >= total {
                lo = mid;
            } else {
                hi = mid;
            }
            if (sum_phi((lo * hi).sqrt()) - total).abs() <= 1e-9 * total {
                break;
            }
        }
        let eta = (lo * hi).sqrt();
        phi = gains
            .iter()
            .map(|&g| {
                let target = (eta * s2 / (g * g)).min(1.0);
                table.inverse(target) * s2 / (g * g)
            })
            .collect();
    }
    // Snap the residual bisection slack onto the budget.
    let sum: f64 = phi.iter().sum();
    if sum > 0.0 {
        let fix = (total - sum) / n as f64;
        for p in phi.iter_mut() {
            *p = (*p + fix).max(0.0);
        }
    }
    Ok(PowerAllocation { phi, policy: PowerPolicy::MercuryWaterFilling })
}

/// Monotone table of the square-QAM MMSE as a function of SNR.
struct MmseTable {
    ln_gamma: Vec<f64>,
    mmse: Vec<f64>,
}

impl MmseTable {
    fn build(c: &Constellation) -> Result<Self> {
        const POINTS: usize = 256;
        let (nodes, weights) = gauss_hermite(63);
        let lo = 1e-8f64.ln();
        let hi = 1e8f64.ln();
        let mut ln_gamma = Vec::with_capacity(POINTS);
        let mut mmse = Vec::with_capacity(POINTS);
        for i in 0..POINTS {
            let lg = lo + (hi - lo) * i as f64 / (POINTS - 1) as f64;
            let v = qam_mmse(c, lg.exp(), &nodes, &weights);
            if !v.is_finite() {
                return Err(Error::NonConvergence { op: "mercury mmse quadrature", iterations: i });
            }
            ln_gamma.push(lg);
            mmse.push(v);
        }
        // Quadrature noise can leave microscopic non-monotonicity; enforce.
        for i in 1..POINTS {
            if mmse[i] > mmse[i - 1] {
                mmse[i] = mmse[i - 1];
            }
        }
        Ok(Self { ln_gamma, mmse })
    }

    /// SNR at which the MMSE reaches `target`; 0 when the input is already
    /// noisier than that, the table end when past the resolvable decay.
    fn inverse(&self, target: f64) -> f64 {
        if target >= self.mmse[0] || target >= 1.0 {
            return 0.0;
        }
        let last = self.mmse.len() - 1;
        if target <= self.mmse[last] {
            return self.ln_gamma[last].exp();
        }
        let mut lo = 0;
        let mut hi = last;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.mmse[mid] > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // Log-log interpolation within the bracket.
        let (m0, m1) = (self.mmse[lo].max(1e-300), self.mmse[hi].max(1e-300));
        let t = ((target.ln() - m0.ln()) / (m1.ln() - m0.ln())).clamp(0.0, 1.0);
        (self.ln_gamma[lo] + t * (self.ln_gamma[hi] - self.ln_gamma[lo])).exp()
    }
}

/// Unit-energy square-QAM MMSE at SNR `gamma`, summing the two independent
/// PAM dimensions (each of energy 1/2, per-dimension noise variance 1/2).
fn qam_mmse(c: &Constellation, gamma: f64, nodes: &[f64], weights: &[f64]) -> f64 {
    let pam = c.pam();
    let root = gamma.sqrt();
    let inv_sqrt_pi = 1.0 / std::f64::consts::PI.sqrt();
    let mut acc = 0.0;
    for &p in pam {
        for (&x, &w) in nodes.iter().zip(weights) {
            // Noise sample with variance 1/2: GH scale √(2·½) = 1.
            let y = root * p + x;
            let mut best = f64::INFINITY;
            for &q in pam {
                let r = y - root * q;
                best = best.min(r * r);
            }
            // Posterior mean and second moment with max-shifted weights.
            let mut norm = 0.0;
            let mut mean = 0.0;
            let mut second = 0.0;
            for &q in pam {
                let r = y - root * q;
                let wgt = (best - r * r).exp();
                norm += wgt;
                mean += q * wgt;
                second += q * q * wgt;
            }
            mean /= norm;
            second /= norm;
            acc += w * (second - mean * mean).max(0.0);
        }
    }
    2.0 * inv_sqrt_pi * acc / pam.len() as f64
}
