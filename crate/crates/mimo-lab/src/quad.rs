//! Gauss–Hermite quadrature nodes and weights.
//!
//! Used for per-dimension MMSE integrals (mercury water-filling) and the
//! exact small-system mutual information oracle. Nodes are computed by
//! Newton iteration on the orthonormal Hermite recurrence, which stays
//! bounded for the orders used here.

/// Nodes `x_i` and weights `w_i` for `∫ e^{-x²} f(x) dx ≈ Σ w_i f(x_i)`.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be positive");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;

    let mut z = 0.0f64;
    for i in 0..m {
        // Initial guesses per standard practice (largest root first).
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[0],
            3 => 1.91 * z - 0.91 * nodes[1],
            _ => 2.0 * z - nodes[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..200 {
            // Orthonormal Hermite functions: p1 = π^{-1/4}, recurrence
            // p_{j+1} = x·√(2/(j+1))·p_j − √(j/(j+1))·p_{j-1}.
            let mut p1 = std::f64::consts::PI.powf(-0.25);
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        weights[i] = 2.0 / (pp * pp);
        weights[n - 1 - i] = weights[i];
    }
    if n % 2 == 1 {
        nodes[m - 1] = 0.0;
    }
    (nodes, weights)
}

/// Expectation `E[f(W)]` for `W ~ N(0, variance)` using the given nodes.
pub fn gaussian_expectation(
    nodes: &[f64],
    weights: &[f64],
    variance: f64,
    mut f: impl FnMut(f64) -> f64,
) -> f64 {
    let scale = (2.0 * variance).sqrt();
    let inv_sqrt_pi = 1.0 / std::f64::consts::PI.sqrt();
    nodes
        .iter()
        .zip(weights)
        .map(|(&x, &w)| w * f(scale * x))
        .sum::<f64>()
        * inv_sqrt_pi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_matches_known_values() {
        // n = 2: nodes ±1/√2, weights √π/2.
        let (x, w) = gauss_hermite(2);
        assert!((x[0] - (0.5f64).sqrt()).abs() < 1e-12);
        assert!((w[0] - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn integrates_polynomials_exactly() {
        // ∫ e^{-x²} x² dx = √π/2; ∫ e^{-x²} x⁴ dx = 3√π/4.
        let (x, w) = gauss_hermite(63);
        let m2: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi * xi).sum();
        let m4: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(4)).sum();
        let sp = std::f64::consts::PI.sqrt();
        assert!((m2 - sp / 2.0).abs() < 1e-10, "m2 {m2}");
        assert!((m4 - 3.0 * sp / 4.0).abs() < 1e-9, "m4 {m4}");
    }

    #[test]
    fn gaussian_moments() {
        let (x, w) = gauss_hermite(63);
        let var = 2.5;
        let m2 = gaussian_expectation(&x, &w, var, |t| t * t);
        assert!((m2 - var).abs() < 1e-9);
        let total = gaussian_expectation(&x, &w, var, |_| 1.0);
        assert!((total - 1.0).abs() < 1e-12);
    }
}
