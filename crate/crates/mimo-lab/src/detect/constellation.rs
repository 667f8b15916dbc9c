//! Square Gray-mapped M-QAM constellations.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Square M-QAM built as two independent Gray-mapped `√M`-PAM dimensions.
///
/// The PAM set is `√(3/(2(M−1)))·{−√M+1, −√M+3, …, √M−1}`, which gives unit
/// average symbol energy. Bit layout within a symbol is fixed: the in-phase
/// label's bits first (MSB first), then the quadrature label's bits.
/// Label-to-level mapping is binary-reflected Gray over the ascending PAM
/// levels, so bit 0 of an M=4 symbol low means the negative level.
#[derive(Debug, Clone)]
pub struct Constellation {
    order: usize,
    bits_per_symbol: usize,
    pam: Vec<f64>,
    /// `level_of_label[g]` = index into `pam` for Gray label `g`.
    level_of_label: Vec<usize>,
    /// `label_of_level[j]` = Gray label of `pam[j]`.
    label_of_level: Vec<u32>,
    d2_min: f64,
}

/// Builds the constellation for order `m`.
///
/// The transceiver paths use `m ∈ {4, 16, 64, 256}`; any power of four is
/// accepted so oracles can probe asymptotically large alphabets.
pub fn build_constellation(m: usize) -> Result<Constellation> {
    Constellation::new(m)
}

impl Constellation {
    pub fn new(m: usize) -> Result<Self> {
        let mut probe = m;
        while probe > 1 && probe % 4 == 0 {
            probe /= 4;
        }
        if m < 4 || probe != 1 {
            return Err(Error::Config(format!(
                "modulation order {m} is not a square QAM power of four"
            )));
        }
        let side = (m as f64).sqrt().round() as usize;
        let scale = (3.0 / (2.0 * (m as f64 - 1.0))).sqrt();
        let pam: Vec<f64> =
            (0..side).map(|j| scale * (2.0 * j as f64 - (side as f64 - 1.0))).collect();
        let mut level_of_label = vec![0usize; side];
        let mut label_of_level = vec![0u32; side];
        for (j, slot) in label_of_level.iter_mut().enumerate() {
            let gray = (j ^ (j >> 1)) as u32;
            *slot = gray;
            level_of_label[gray as usize] = j;
        }
        Ok(Self {
            order: m,
            bits_per_symbol: m.ilog2() as usize,
            pam,
            level_of_label,
            label_of_level,
            d2_min: 6.0 / (m as f64 - 1.0),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Bits per QAM symbol, `Q_m = log2 M`.
    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    /// Bits per real dimension, `Q_m / 2`.
    pub fn bits_per_dim(&self) -> usize {
        self.bits_per_symbol / 2
    }

    /// The `√M`-PAM levels in ascending order.
    pub fn pam(&self) -> &[f64] {
        &self.pam
    }

    /// Minimum squared Euclidean distance, `6/(M−1)`.
    pub fn d2_min(&self) -> f64 {
        self.d2_min
    }

    /// PAM level for a Gray label.
    pub fn level_for_label(&self, label: u32) -> f64 {
        self.pam[self.level_of_label[label as usize]]
    }

    /// Gray label of PAM level index `j`.
    pub fn label_of_level(&self, j: usize) -> u32 {
        self.label_of_level[j]
    }

    /// Whether bit `k` (MSB first) of the label at PAM index `j` is set.
    pub fn level_bit(&self, j: usize, k: usize) -> bool {
        let shift = self.bits_per_dim() - 1 - k;
        (self.label_of_level[j] >> shift) & 1 == 1
    }

    /// Maps a bit slice (length divisible by `Q_m`) to QAM symbols.
    pub fn map_bits(&self, bits: &[bool]) -> Result<Vec<Complex64>> {
        let q = self.bits_per_symbol;
        if bits.len() % q != 0 {
            return Err(Error::Domain(format!(
                "bit count {} not divisible by Q_m = {q}",
                bits.len()
            )));
        }
        let half = self.bits_per_dim();
        let symbols = bits
            .chunks(q)
            .map(|chunk| {
                let re = self.level_for_label(pack_label(&chunk[..half]));
                let im = self.level_for_label(pack_label(&chunk[half..]));
                Complex64::new(re, im)
            })
            .collect();
        Ok(symbols)
    }

    /// Nearest-point hard demapping, the inverse of [`Self::map_bits`].
    pub fn demap_hard(&self, symbols: &[Complex64]) -> Vec<bool> {
        let half = self.bits_per_dim();
        let mut bits = Vec::with_capacity(symbols.len() * self.bits_per_symbol);
        for s in symbols {
            for part in [s.re, s.im] {
                let j = self.nearest_level(part);
                let label = self.label_of_level[j];
                for k in 0..half {
                    bits.push((label >> (half - 1 - k)) & 1 == 1);
                }
            }
        }
        bits
    }

    fn nearest_level(&self, x: f64) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (j, &p) in self.pam.iter().enumerate() {
            let d = (x - p).abs();
            if d < best_d {
                best_d = d;
                best = j;
            }
        }
        best
    }
}

fn pack_label(bits: &[bool]) -> u32 {
    bits.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32)
}
