//! Channel-matrix ensembles and matrix file I/O.
//!
//! Two generative models: i.i.d. Rayleigh (`CN(0,1)` entries) and a
//! Kronecker-correlated variant `H = R_rx^{1/2} W R_tx^{1/2}` with
//! exponential correlation profiles, which drives the channel toward
//! ill-conditioning the way highly correlated arrays do. A third variant
//! replays a matrix from a file.

mod io;

pub use io::{load_matrix, save_matrix};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::eigen::sqrt_spd;
use crate::linalg::ComplexMatrix;
use crate::rng::{stream, StreamKind};

/// How to produce channel realizations.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelModel {
    /// Entries i.i.d. `CN(0,1)`.
    Rayleigh { n_r: usize, n_t: usize },
    /// `H = R_rx^{1/2} W R_tx^{1/2}` with `R[i][j] = rho^|i-j|`.
    KroneckerCorrelated { n_r: usize, n_t: usize, rho_rx: f64, rho_tx: f64 },
    /// Replay a fixed matrix from the CSV matrix format.
    FromFile { path: std::path::PathBuf },
}

impl ChannelModel {
    /// Exponential-Kronecker preset with `rho = 0.95` on both sides,
    /// standing in for highly correlated array geometries.
    pub fn kron095(n_r: usize, n_t: usize) -> Self {
        ChannelModel::KroneckerCorrelated { n_r, n_t, rho_rx: 0.95, rho_tx: 0.95 }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ChannelModel::Rayleigh { n_r, n_t } => {
                if *n_r == 0 || *n_t == 0 {
                    return Err(Error::Config("antenna counts must be at least 1".into()));
                }
            }
            ChannelModel::KroneckerCorrelated { n_r, n_t, rho_rx, rho_tx } => {
                if *n_r == 0 || *n_t == 0 {
                    return Err(Error::Config("antenna counts must be at least 1".into()));
                }
                for rho in [rho_rx, rho_tx] {
                    if !(0.0..1.0).contains(rho) {
                        return Err(Error::Config(format!(
                            "correlation coefficient {rho} must lie in [0, 1)"
                        )));
                    }
                }
            }
            ChannelModel::FromFile { .. } => {}
        }
        Ok(())
    }
}

/// One channel draw together with its provenance.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    pub h: ComplexMatrix,
    pub seed: u64,
    pub model: ChannelModel,
}

/// Draws a realization; the same `(model, seed)` always produces the same
/// matrix, independent of threading.
pub fn draw(model: &ChannelModel, seed: u64) -> Result<ChannelRealization> {
    model.validate()?;
    let h = match model {
        ChannelModel::Rayleigh { n_r, n_t } => gaussian_matrix(*n_r, *n_t, seed),
        ChannelModel::KroneckerCorrelated { n_r, n_t, rho_rx, rho_tx } => {
            let w = gaussian_matrix(*n_r, *n_t, seed);
            if *rho_rx == 0.0 && *rho_tx == 0.0 {
                w
            } else {
                let r_rx = correlation_sqrt(*n_r, *rho_rx)?;
                let r_tx = correlation_sqrt(*n_t, *rho_tx)?;
                r_rx.mul(&w).mul(&r_tx)
            }
        }
        ChannelModel::FromFile { path } => load_matrix(path)?,
    };
    Ok(ChannelRealization { h, seed, model: model.clone() })
}

/// i.i.d. `CN(0,1)` matrix: real and imaginary parts `N(0, 1/2)`.
fn gaussian_matrix(n_r: usize, n_t: usize, seed: u64) -> ComplexMatrix {
    let mut rng = stream(seed, StreamKind::Channel, 0);
    let mut m = ComplexMatrix::zeros(n_r, n_t);
    let s = 0.5f64.sqrt();
    for r in 0..n_r {
        for c in 0..n_t {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            m[(r, c)] = Complex64::new(re * s, im * s);
        }
    }
    m
}

/// Real symmetric square root of the exponential correlation matrix
/// `R[i][j] = rho^|i-j|`.
fn correlation_sqrt(n: usize, rho: f64) -> Result<ComplexMatrix> {
    let mut r = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            r[i * n + j] = rho.powi((i as i32 - j as i32).abs());
        }
    }
    let s = sqrt_spd(&r, n)?;
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = Complex64::new(s[i * n + j], 0.0);
        }
    }
    Ok(out)
}
