//! Householder bidiagonalization `H = Q B Pᴴ` with real `B`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::matrix::ComplexMatrix;

/// Which transceiver construction produced a decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Svd,
    Cbd,
    Gmd,
    GpCbd,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Svd, Scheme::Cbd, Scheme::Gmd, Scheme::GpCbd];

    /// Name used in configs and CSV output.
    pub fn key(&self) -> &'static str {
        match self {
            Scheme::Svd => "svd",
            Scheme::Cbd => "cbd",
            Scheme::Gmd => "gmd",
            Scheme::GpCbd => "gpcbd",
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.key())
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "svd" => Ok(Scheme::Svd),
            "cbd" => Ok(Scheme::Cbd),
            "gmd" => Ok(Scheme::Gmd),
            "gpcbd" => Ok(Scheme::GpCbd),
            other => Err(Error::Config(format!("unknown scheme name `{other}`"))),
        }
    }
}

/// Real upper bidiagonal matrix, stored as diagonal plus superdiagonal.
///
/// `block_boundaries`, when present, lists the superdiagonal indices that
/// are structurally zero: index `i` in the list means streams `0..=i` and
/// `i+1..` never interfere, so the trellis factorizes there. A fully
/// diagonal matrix lists every index.
#[derive(Debug, Clone, PartialEq)]
pub struct BidiagonalReal {
    diag: Vec<f64>,
    superdiag: Vec<f64>,
    block_boundaries: Option<Vec<usize>>,
}

impl BidiagonalReal {
    pub fn new(diag: Vec<f64>, superdiag: Vec<f64>) -> Result<Self> {
        Self::with_boundaries(diag, superdiag, None)
    }

    pub fn with_boundaries(
        diag: Vec<f64>,
        superdiag: Vec<f64>,
        block_boundaries: Option<Vec<usize>>,
    ) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Dimension("bidiagonal matrix must be non-empty".into()));
        }
        if superdiag.len() + 1 != diag.len() {
            return Err(Error::Dimension(format!(
                "superdiagonal length {} does not match size {}",
                superdiag.len(),
                diag.len()
            )));
        }
        if !diag.iter().chain(superdiag.iter()).all(|x| x.is_finite()) {
            return Err(Error::Domain("bidiagonal entries must be finite".into()));
        }
        if let Some(bounds) = &block_boundaries {
            for &i in bounds {
                if i >= superdiag.len() {
                    return Err(Error::Dimension(format!("block boundary {i} out of range")));
                }
                if superdiag[i] != 0.0 {
                    return Err(Error::Domain(format!(
                        "block boundary {i} requires an exactly zero superdiagonal entry"
                    )));
                }
            }
        }
        Ok(Self { diag, superdiag, block_boundaries })
    }

    /// Diagonal matrix (all superdiagonal entries structurally zero).
    pub fn from_diag(diag: Vec<f64>) -> Self {
        let n = diag.len();
        let boundaries = (0..n.saturating_sub(1)).collect();
        Self { diag, superdiag: vec![0.0; n.saturating_sub(1)], block_boundaries: Some(boundaries) }
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn superdiag(&self) -> &[f64] {
        &self.superdiag
    }

    pub fn block_boundaries(&self) -> Option<&[usize]> {
        self.block_boundaries.as_deref()
    }

    /// Column ranges of the independent blocks. Without declared boundaries
    /// the whole matrix is one block.
    pub fn blocks(&self) -> Vec<std::ops::Range<usize>> {
        let n = self.n();
        match &self.block_boundaries {
            None => vec![0..n],
            Some(bounds) => {
                let mut sorted = bounds.clone();
                sorted.sort_unstable();
                sorted.dedup();
                let mut out = Vec::with_capacity(sorted.len() + 1);
                let mut start = 0;
                for &b in &sorted {
                    out.push(start..b + 1);
                    start = b + 1;
                }
                out.push(start..n);
                out
            }
        }
    }

    /// Squared norm of column `j`: diagonal plus the superdiagonal entry
    /// sitting above it.
    pub fn col_norm_sq(&self, j: usize) -> f64 {
        let mut s = self.diag[j] * self.diag[j];
        if j > 0 {
            s += self.superdiag[j - 1] * self.superdiag[j - 1];
        }
        s
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.diag
            .iter()
            .chain(self.superdiag.iter())
            .map(|x| x * x)
            .sum::<f64>()
            .sqrt()
    }

    /// Dense `rows×n` embedding with the bidiagonal block on top and zero
    /// rows below (`rows ≥ n`).
    pub fn expand(&self, rows: usize) -> ComplexMatrix {
        let n = self.n();
        assert!(rows >= n, "expand needs at least n rows");
        let mut m = ComplexMatrix::zeros(rows, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(self.diag[i], 0.0);
            if i + 1 < n {
                m[(i, i + 1)] = Complex64::new(self.superdiag[i], 0.0);
            }
        }
        m
    }

    /// `B·s` without materializing the dense matrix.
    pub fn mul_symbols(&self, s: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(s.len(), self.n());
        (0..self.n())
            .map(|i| {
                let mut y = s[i] * self.diag[i];
                if i + 1 < self.n() {
                    y += s[i + 1] * self.superdiag[i];
                }
                y
            })
            .collect()
    }

    /// Right-multiplication by `diag(scale)`, the per-stream amplitude form
    /// of a power allocation.
    pub fn scale_columns(&self, scale: &[f64]) -> BidiagonalReal {
        assert_eq!(scale.len(), self.n());
        let diag = self.diag.iter().zip(scale).map(|(d, s)| d * s).collect();
        let superdiag =
            self.superdiag.iter().zip(&scale[1..]).map(|(e, s)| e * s).collect();
        BidiagonalReal { diag, superdiag, block_boundaries: self.block_boundaries.clone() }
    }
}

/// A `H = Q B Pᴴ` factorization with real upper bidiagonal `B`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// Unitary post-processor basis, `N_r×N_r`.
    pub q: ComplexMatrix,
    pub b: BidiagonalReal,
    /// Precoder basis with orthonormal columns, `N_t×N_s`.
    pub p: ComplexMatrix,
    pub scheme: Scheme,
}

impl Decomposition {
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.q.mul(&self.b.expand(self.q.rows())).mul(&self.p.hermitian())
    }

    /// Relative Frobenius reconstruction residual against the source.
    pub fn residual(&self, h: &ComplexMatrix) -> f64 {
        h.relative_residual(&self.reconstruct())
    }
}

/// Bidiagonalizes `H` by alternating left/right Householder reflections,
/// absorbing signs and phases into `Q` and `P` so that `B` is real with
/// non-negative entries.
pub fn householder_bidiagonalize(h: &ComplexMatrix) -> Result<Decomposition> {
    if !h.is_finite() {
        return Err(Error::Domain("bidiagonalization input must be finite".into()));
    }
    let (n_r, n_t) = (h.rows(), h.cols());
    let n = n_r.min(n_t);

    let mut a = h.clone();
    let mut q = ComplexMatrix::identity(n_r);
    let mut p = ComplexMatrix::identity(n_t);

    let scale = h.frobenius_norm();
    if scale == 0.0 {
        let b = BidiagonalReal::new(vec![0.0; n], vec![0.0; n.saturating_sub(1)])?;
        return Ok(Decomposition { q, b, p: p.take_cols(n), scheme: Scheme::Cbd });
    }
    let dead = 1e-14 * scale;
    let trailing_dead = |a: &ComplexMatrix, k: usize| -> bool {
        ((k + 1)..a.rows()).all(|r| ((k + 1)..a.cols()).all(|c| a[(r, c)].norm() <= dead))
    };

    if n_r >= n_t {
        for k in 0..n {
            reflect_column(&mut a, &mut q, k, k);
            // When the trailing block is exhausted (rank collapse), fold the
            // entire remaining row into the diagonal instead of leaving a
            // dangling superdiagonal entry. Only legal when no superdiagonal
            // sits above column k.
            let collapse =
                trailing_dead(&a, k) && (k == 0 || a[(k - 1, k)].norm() <= dead);
            if collapse && k + 1 < n_t {
                reflect_row(&mut a, &mut p, k, k);
            } else if k + 2 < n_t {
                reflect_row(&mut a, &mut p, k, k + 1);
            }
        }
    } else {
        // Wide case: build a lower bidiagonal within the first n columns,
        // then exchange-flip it into upper bidiagonal form.
        for k in 0..n {
            reflect_row(&mut a, &mut p, k, k);
            let collapse =
                trailing_dead(&a, k) && (k == 0 || a[(k, k - 1)].norm() <= dead);
            if collapse && k + 1 < n_r {
                reflect_column(&mut a, &mut q, k, k);
            } else if k + 2 < n_r {
                reflect_column(&mut a, &mut q, k + 1, k);
            }
        }
    }

    let (mut d, mut e): (Vec<Complex64>, Vec<Complex64>) = if n_r >= n_t {
        (
            (0..n).map(|i| a[(i, i)]).collect(),
            (0..n - 1).map(|i| a[(i, i + 1)]).collect(),
        )
    } else {
        // Flip J·B_low·J: reversing row and column order turns the
        // subdiagonal into a superdiagonal.
        for c in 0..n / 2 {
            q.swap_cols(c, n - 1 - c);
            p.swap_cols(c, n - 1 - c);
        }
        (
            (0..n).map(|i| a[(n - 1 - i, n - 1 - i)]).collect(),
            (0..n - 1).map(|i| a[(n - 1 - i, n - 2 - i)]).collect(),
        )
    };

    // Diagonal phase scalings make B real and non-negative; the conjugate
    // phases land on the columns of Q and P.
    let phase = |z: Complex64| if z.norm() == 0.0 { Complex64::ONE } else { z / z.norm() };
    let mut beta = Complex64::ONE;
    for k in 0..n {
        let alpha = (phase(d[k] * beta)).conj();
        d[k] = Complex64::new((d[k] * beta * alpha).re, 0.0);
        q.scale_col(k, alpha.conj());
        p.scale_col(k, beta);
        if k + 1 < n {
            let next = (phase(alpha * e[k])).conj();
            e[k] = Complex64::new((alpha * e[k] * next).re, 0.0);
            beta = next;
        }
    }

    let b = BidiagonalReal::new(d.iter().map(|z| z.re).collect(), e.iter().map(|z| z.re).collect())?;
    let p_econ = p.take_cols(n);
    Ok(Decomposition { q, b, p: p_econ, scheme: Scheme::Cbd })
}

/// Householder vector sending `x` to `α·e₁` with `|α| = ‖x‖`.
fn householder_vector(x: &[Complex64]) -> Option<(Vec<Complex64>, Complex64)> {
    let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return None;
    }
    let tail_sq: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
    if tail_sq == 0.0 {
        return None; // Already collapsed; residual phase handled later.
    }
    let x0 = x[0];
    let alpha = if x0.norm() == 0.0 {
        Complex64::new(-norm, 0.0)
    } else {
        -(x0 / x0.norm()) * norm
    };
    let mut v = x.to_vec();
    v[0] -= alpha;
    let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= vnorm;
    }
    Some((v, alpha))
}

/// Zeroes `a[(row+1.., col)]` with a left reflector, accumulating into `q`.
fn reflect_column(a: &mut ComplexMatrix, q: &mut ComplexMatrix, row: usize, col: usize) {
    let x: Vec<Complex64> = (row..a.rows()).map(|r| a[(r, col)]).collect();
    let Some((w, alpha)) = householder_vector(&x) else { return };
    // A[row.., :] -= 2 w (wᴴ A[row.., :])
    for c in 0..a.cols() {
        let dot: Complex64 = w.iter().enumerate().map(|(i, wi)| wi.conj() * a[(row + i, c)]).sum();
        for (i, wi) in w.iter().enumerate() {
            a[(row + i, c)] -= 2.0 * wi * dot;
        }
    }
    a[(row, col)] = alpha;
    for r in (row + 1)..a.rows() {
        a[(r, col)] = Complex64::ZERO;
    }
    // Q ← Q·R with R = I − 2wwᴴ embedded at rows `row..`.
    for r in 0..q.rows() {
        let dot: Complex64 = w.iter().enumerate().map(|(i, wi)| q[(r, row + i)] * wi).sum();
        for (i, wi) in w.iter().enumerate() {
            q[(r, row + i)] -= 2.0 * dot * wi.conj();
        }
    }
}

/// Zeroes `a[(row, col+1..)]` with a right reflector, accumulating into `p`.
fn reflect_row(a: &mut ComplexMatrix, p: &mut ComplexMatrix, row: usize, col: usize) {
    let x: Vec<Complex64> = (col..a.cols()).map(|c| a[(row, c)].conj()).collect();
    let Some((w, alpha)) = householder_vector(&x) else { return };
    // A[:, col..] ← A[:, col..](I − 2wwᴴ)
    for r in 0..a.rows() {
        let dot: Complex64 = w.iter().enumerate().map(|(i, wi)| a[(r, col + i)] * wi).sum();
        for (i, wi) in w.iter().enumerate() {
            a[(r, col + i)] -= 2.0 * dot * wi.conj();
        }
    }
    a[(row, col)] = alpha.conj();
    for c in (col + 1)..a.cols() {
        a[(row, c)] = Complex64::ZERO;
    }
    for r in 0..p.rows() {
        let dot: Complex64 = w.iter().enumerate().map(|(i, wi)| p[(r, col + i)] * wi).sum();
        for (i, wi) in w.iter().enumerate() {
            p[(r, col + i)] -= 2.0 * dot * wi.conj();
        }
    }
}
