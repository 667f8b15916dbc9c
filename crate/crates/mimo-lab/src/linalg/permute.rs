//! Subchannel reordering by paired permutation matrices.

use crate::error::{Error, Result};
use crate::linalg::matrix::ComplexMatrix;
use crate::linalg::svd::SvdFactors;

/// Reorders the SVD factors so that `order[i]` becomes subchannel `i`.
///
/// `order` must be a permutation of `0..N_s` (typically pair-adjacent: hi
/// then lo for each pair, singletons last). Both `U` (its first `N_s`
/// columns) and `V` are reordered consistently, so `U Λ Vᴴ` is preserved
/// exactly.
pub fn assemble_permuted(
    f: &SvdFactors,
    order: &[usize],
) -> Result<(ComplexMatrix, Vec<f64>, ComplexMatrix)> {
    let n = f.sigma.len();
    if order.len() != n {
        return Err(Error::Domain(format!(
            "permutation length {} does not match {} subchannels",
            order.len(),
            n
        )));
    }
    let mut seen = vec![false; n];
    for &i in order {
        if i >= n || seen[i] {
            return Err(Error::Domain(format!("malformed permutation: index {i} duplicated or out of range")));
        }
        seen[i] = true;
    }

    let mut u = f.u.clone();
    let mut v = ComplexMatrix::zeros(f.v.rows(), n);
    let mut sigma = Vec::with_capacity(n);
    for (new_i, &old_i) in order.iter().enumerate() {
        u.set_col(new_i, &f.u.col(old_i));
        v.set_col(new_i, &f.v.col(old_i));
        sigma.push(f.sigma[old_i]);
    }
    Ok((u, sigma, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::svd::svd;

    #[test]
    fn identity_permutation_is_noop() {
        let h = ComplexMatrix::from_diag(3, 3, &[3.0, 2.0, 1.0]);
        let f = svd(&h).unwrap();
        let (u, sigma, v) = assemble_permuted(&f, &[0, 1, 2]).unwrap();
        assert_eq!(sigma, f.sigma);
        assert!(u.relative_residual(&f.u) < 1e-15);
        assert!(v.relative_residual(&f.v) < 1e-15);
    }

    #[test]
    fn malformed_plans_rejected() {
        let h = ComplexMatrix::from_diag(2, 2, &[2.0, 1.0]);
        let f = svd(&h).unwrap();
        assert!(assemble_permuted(&f, &[0, 0]).is_err());
        assert!(assemble_permuted(&f, &[0, 2]).is_err());
        assert!(assemble_permuted(&f, &[0]).is_err());
    }
}
