//! Gauss–Jacobi rules via the Golub–Welsch eigenvalue method.

use nalgebra::{DMatrix, SymmetricEigen};
use statrs::function::gamma::gamma;

/// Nodes and weights for `∫_{-1}^{1} (1-x)^α (1+x)^β f(x) dx`.
#[derive(Clone, Debug)]
pub struct GaussJacobi {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussJacobi {
    /// `n`-point rule, exact for polynomials of degree `2n - 1`.
    pub fn new(n: usize, alpha: f64, beta: f64) -> Self {
        assert!(n > 0, "quadrature needs at least one node");
        assert!(alpha > -1.0 && beta > -1.0, "Jacobi exponents must exceed -1");
        let ab = alpha + beta;
        let mut jm = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            let k = i as f64;
            let denom = (2.0 * k + ab) * (2.0 * k + ab + 2.0);
            jm[(i, i)] = if i == 0 {
                (beta - alpha) / (ab + 2.0)
            } else {
                (beta * beta - alpha * alpha) / denom
            };
            if i + 1 < n {
                let m = k + 1.0;
                let s = 2.0 * m + ab;
                let num = 4.0 * m * (m + alpha) * (m + beta) * (m + ab);
                let den = s * s * (s + 1.0) * (s - 1.0);
                let off = (num / den).sqrt();
                jm[(i, i + 1)] = off;
                jm[(i + 1, i)] = off;
            }
        }
        let mu0 = 2f64.powf(ab + 1.0) * gamma(alpha + 1.0) * gamma(beta + 1.0) / gamma(ab + 2.0);
        let eig = SymmetricEigen::new(jm);
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|j| {
                let v0 = eig.eigenvectors[(0, j)];
                (eig.eigenvalues[j], mu0 * v0 * v0)
            })
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        Self {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        }
    }

    pub fn legendre(n: usize) -> Self {
        Self::new(n, 0.0, 0.0)
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Plain Gauss–Legendre integral over `[a, b]`.
    pub fn integrate_interval(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self.integrate(|u| f(mid + half * u))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn beta_fn(a: f64, b: f64) -> f64 {
        gamma(a) * gamma(b) / gamma(a + b)
    }

    #[test]
    fn legendre_moments() {
        let q = GaussJacobi::legendre(6);
        for k in 0..12 {
            let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            let got = q.integrate(|x| x.powi(k));
            assert!((got - exact).abs() < 1e-14, "k={k}: {got} vs {exact}");
        }
    }

    #[test]
    fn jacobi_moments_against_beta_function() {
        // ∫ (1-x)^a (1+x)^b (1+x)^k dx = 2^{a+b+k+1} B(a+1, b+k+1)
        for &(a, b) in &[(1.0, -0.5), (1.0, 0.0), (2.0, 0.5), (0.0, -0.5)] {
            let q = GaussJacobi::new(8, a, b);
            for k in 0..16 {
                let kf = k as f64;
                let exact = 2f64.powf(a + b + kf + 1.0) * beta_fn(a + 1.0, b + kf + 1.0);
                let got = q.integrate(|x| (1.0 + x).powi(k));
                assert!(((got - exact) / exact).abs() < 1e-12, "a={a} b={b} k={k} rel={:e}", (got - exact) / exact);
            }
        }
    }

    #[test]
    fn weights_positive_nodes_inside() {
        let q = GaussJacobi::new(40, 1.0, 0.5);
        assert!(q.weights.iter().all(|&w| w > 0.0));
        assert!(q.nodes.iter().all(|&x| x > -1.0 && x < 1.0));
    }
}
