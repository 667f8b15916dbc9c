//! Dense complex matrices, row-major.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex-valued matrix with row-major storage.
///
/// Row-major ordering is part of the serialization contract used by the
/// channel file format (`rows,cols` header followed by one `re,im` line per
/// entry).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("matrix must be non-empty, got {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "entry count {} does not match {rows}x{cols}",
                data.len()
            )));
        }
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Domain("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex64::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    /// Builds a real diagonal matrix of the given shape.
    pub fn from_diag(rows: usize, cols: usize, diag: &[f64]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, &d) in diag.iter().enumerate().take(rows.min(cols)) {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row-major entry slice.
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn hermitian(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == Complex64::ZERO {
                    continue;
                }
                for c in 0..other.cols {
                    out[(r, c)] += a * other[(k, c)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matvec dimension mismatch");
        let mut out = vec![Complex64::ZERO; self.rows];
        for r in 0..self.rows {
            let mut acc = Complex64::ZERO;
            for c in 0..self.cols {
                acc += self[(r, c)] * v[c];
            }
            out[r] = acc;
        }
        out
    }

    /// `Aᴴ v` without materializing the adjoint.
    pub fn hermitian_mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.rows, v.len(), "matvec dimension mismatch");
        let mut out = vec![Complex64::ZERO; self.cols];
        for r in 0..self.rows {
            let x = v[r];
            for c in 0..self.cols {
                out[c] += self[(r, c)].conj() * x;
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn col(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn set_col(&mut self, c: usize, v: &[Complex64]) {
        assert_eq!(v.len(), self.rows);
        for r in 0..self.rows {
            self[(r, c)] = v[r];
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn scale_col(&mut self, c: usize, s: Complex64) {
        for r in 0..self.rows {
            self[(r, c)] *= s;
        }
    }

    pub fn col_norm_sq(&self, c: usize) -> f64 {
        (0..self.rows).map(|r| self[(r, c)].norm_sqr()).sum()
    }

    /// Hermitian inner product of two columns, `aᴴ b`.
    pub fn col_dot(&self, a: usize, b: usize) -> Complex64 {
        (0..self.rows).map(|r| self[(r, a)].conj() * self[(r, b)]).sum()
    }

    /// Replaces columns `(p, q)` with `[col_p, col_q] · g` for a real 2×2 `g`.
    pub fn mix_cols(&mut self, p: usize, q: usize, g: [[f64; 2]; 2]) {
        for r in 0..self.rows {
            let cp = self[(r, p)];
            let cq = self[(r, q)];
            self[(r, p)] = cp * g[0][0] + cq * g[1][0];
            self[(r, q)] = cp * g[0][1] + cq * g[1][1];
        }
    }

    /// Replaces rows `(p, q)` with `g · [row_p; row_q]` for a real 2×2 `g`.
    pub fn mix_rows(&mut self, p: usize, q: usize, g: [[f64; 2]; 2]) {
        for c in 0..self.cols {
            let rp = self[(p, c)];
            let rq = self[(q, c)];
            self[(p, c)] = rp * g[0][0] + rq * g[0][1];
            self[(q, c)] = rp * g[1][0] + rq * g[1][1];
        }
    }

    /// Returns the submatrix made of the first `n` columns.
    pub fn take_cols(&self, n: usize) -> Self {
        assert!(n <= self.cols);
        let mut out = Self::zeros(self.rows, n);
        for r in 0..self.rows {
            for c in 0..n {
                out[(r, c)] = self[(r, c)];
            }
        }
        out
    }

    /// Largest deviation of `Aᴴ A` from the identity, as a Frobenius norm.
    ///
    /// Zero for matrices with orthonormal columns.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut acc = 0.0;
        for a in 0..self.cols {
            for b in 0..self.cols {
                let d = self.col_dot(a, b) - if a == b { Complex64::ONE } else { Complex64::ZERO };
                acc += d.norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Relative reconstruction residual `‖self − other‖_F / ‖self‖_F`.
    pub fn relative_residual(&self, other: &Self) -> f64 {
        let denom = self.frobenius_norm();
        if denom == 0.0 {
            return other.frobenius_norm();
        }
        self.sub(other).frobenius_norm() / denom
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}
