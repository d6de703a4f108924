use crate::error::{Error, Result};
use crate::linops::{GaussJacobi, Polynomial};
use std::f64::consts::PI;

/// Identifies a ball grid; sampled functions carry it so that inner products
/// refuse mismatched data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct GridId {
    pub dim: usize,
    pub sigma: u32,
    pub degree: u32,
}

/// Product quadrature on the unit ball for `∫_{B_1} f ρ^σ dz`.
///
/// Radially, `t = |z|² = (1+u)/2` turns the weight into the Jacobi weight
/// `(1−u)^σ (1+u)^{(N−2)/2}`; the angular rule is the pair `±1` (N = 1), an
/// even trapezoid rule (N = 2), or Gauss–Legendre in `cos θ` times a
/// trapezoid rule in `φ` (N = 3). The rule is exact for `f` polynomial of
/// total degree `≤ degree`.
#[derive(Clone, Debug)]
pub struct WeightedGrid {
    id: GridId,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
    rho_values: Vec<f64>,
}

/// Rule on `S^{N−1}` exact for polynomials of degree `≤ degree` (N ≤ 3).
pub(crate) fn sphere_rule(dim: usize, degree: u32) -> Result<Vec<(Vec<f64>, f64)>> {
    Ok(match dim {
        1 => vec![(vec![-1.0], 1.0), (vec![1.0], 1.0)],
        2 => {
            let m = (degree as usize + 2).next_multiple_of(2);
            (0..m)
                .map(|j| {
                    let phi = 2.0 * PI * j as f64 / m as f64;
                    (vec![phi.cos(), phi.sin()], 2.0 * PI / m as f64)
                })
                .collect()
        }
        3 => {
            let gl = GaussJacobi::legendre(degree as usize / 2 + 1);
            let m = (degree as usize + 2).next_multiple_of(2);
            let mut out = Vec::with_capacity(gl.nodes.len() * m);
            for (&c, &wc) in gl.nodes.iter().zip(&gl.weights) {
                let s = (1.0 - c * c).sqrt();
                for j in 0..m {
                    let phi = 2.0 * PI * j as f64 / m as f64;
                    out.push((vec![s * phi.cos(), s * phi.sin(), c], wc * 2.0 * PI / m as f64));
                }
            }
            out
        }
        d => return Err(Error::Unsupported(format!("ball quadrature for N = {d}"))),
    })
}

pub(crate) fn rho(z: &[f64]) -> f64 {
    0.5 * (1.0 - z.iter().map(|x| x * x).sum::<f64>())
}

impl WeightedGrid {
    /// Grid exact for `∫ p ρ^σ dz` with `deg p ≤ degree`.
    pub fn new(dim: usize, sigma: u32, degree: u32) -> Result<Self> {
        let angular = sphere_rule(dim, degree)?;
        // odd parts vanish under the symmetric angular rules, so the radial
        // integrand has degree ≤ degree/2 in t
        let n_radial = (degree as usize / 2) / 2 + 1;
        let beta = (dim as f64 - 2.0) / 2.0;
        let radial = GaussJacobi::new(n_radial, sigma as f64, beta);
        let scale = 2f64.powf(-2.0 * sigma as f64 - beta - 2.0);
        let mut nodes = Vec::with_capacity(n_radial * angular.len());
        let mut weights = Vec::with_capacity(nodes.capacity());
        for (&u, &wu) in radial.nodes.iter().zip(&radial.weights) {
            let r = (0.5 * (1.0 + u)).sqrt();
            for (dir, wa) in &angular {
                nodes.push(dir.iter().map(|d| r * d).collect::<Vec<_>>());
                weights.push(scale * wu * wa);
            }
        }
        let rho_values = nodes.iter().map(|z| rho(z)).collect();
        Ok(Self {
            id: GridId { dim, sigma, degree },
            nodes,
            weights,
            rho_values,
        })
    }

    /// Grid for `ρ`-weighted products of degree `≤ degree` whose `ρ²`-weighted
    /// variants (the gradient part of the H inner product) are also exact.
    pub fn for_products(dim: usize, degree: u32) -> Result<Self> {
        Self::new(dim, 1, degree + 2)
    }

    pub fn id(&self) -> GridId {
        self.id
    }

    pub fn dim(&self) -> usize {
        self.id.dim
    }

    pub fn sigma(&self) -> u32 {
        self.id.sigma
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn rho_values(&self) -> &[f64] {
        &self.rho_values
    }

    /// Weights of the base exponent `σ`.
    pub fn base_weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weights for `∫ f ρ^s dz`, `s ≥ σ` (base weights times `ρ^{s−σ}`).
    pub fn weights(&self, s: u32) -> Result<Vec<f64>> {
        if s < self.id.sigma {
            return Err(Error::GridMismatch(format!(
                "grid with base weight ρ^{} cannot integrate against ρ^{s}",
                self.id.sigma
            )));
        }
        let e = (s - self.id.sigma) as i32;
        Ok(self
            .weights
            .iter()
            .zip(&self.rho_values)
            .map(|(w, r)| w * r.powi(e))
            .collect())
    }

    /// `∫ f ρ^s dz` for values sampled at the nodes.
    pub fn integrate(&self, values: &[f64], s: u32) -> Result<f64> {
        if values.len() != self.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                self.len()
            )));
        }
        Ok(self.weights(s)?.iter().zip(values).map(|(w, v)| w * v).sum())
    }

    /// Samples a polynomial together with its exact gradient.
    pub fn sample(&self, p: &Polynomial) -> SampledFunction {
        assert_eq!(p.nvars(), self.dim(), "polynomial dimension does not match grid");
        let grad = p.gradient();
        SampledFunction {
            grid: self.id,
            values: self.nodes.iter().map(|z| p.eval(z)).collect(),
            gradients: Some(
                self.nodes
                    .iter()
                    .map(|z| grad.iter().map(|g| g.eval(z)).collect())
                    .collect(),
            ),
        }
    }

    /// Samples a function given pointwise (no gradient information).
    pub fn sample_fn(&self, f: impl Fn(&[f64]) -> f64) -> SampledFunction {
        SampledFunction {
            grid: self.id,
            values: self.nodes.iter().map(|z| f(z)).collect(),
            gradients: None,
        }
    }
}

/// Values (and optionally gradients) of a function at the nodes of a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    pub grid: GridId,
    pub values: Vec<f64>,
    pub gradients: Option<Vec<Vec<f64>>>,
}

fn check(f: &SampledFunction, grid: &WeightedGrid) -> Result<()> {
    if f.grid != grid.id() || f.values.len() != grid.len() {
        return Err(Error::GridMismatch(format!(
            "function sampled on {:?}, integrating on {:?}",
            f.grid,
            grid.id()
        )));
    }
    Ok(())
}

/// `⟨f, g⟩_ρ = ∫ f g ρ dz`.
pub fn inner_rho(f: &SampledFunction, g: &SampledFunction, grid: &WeightedGrid) -> Result<f64> {
    check(f, grid)?;
    check(g, grid)?;
    let prod: Vec<f64> = f.values.iter().zip(&g.values).map(|(a, b)| a * b).collect();
    grid.integrate(&prod, 1)
}

/// `⟨f, g⟩_H = ⟨f, g⟩_ρ + ∫ ρ² ∇f·∇g dz`.
pub fn inner_h(f: &SampledFunction, g: &SampledFunction, grid: &WeightedGrid) -> Result<f64> {
    let base = inner_rho(f, g, grid)?;
    let (Some(gf), Some(gg)) = (&f.gradients, &g.gradients) else {
        return Err(Error::Invalid("H inner product needs sampled gradients".into()));
    };
    let dots: Vec<f64> = gf
        .iter()
        .zip(gg)
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x * y).sum())
        .collect();
    Ok(base + grid.integrate(&dots, 2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::gamma::gamma;

    fn ball_volume(n: usize) -> f64 {
        PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0 + 1.0)
    }

    #[test]
    fn reproduces_integral_of_rho() {
        // ∫_B ρ = |B| / (N+2)
        for dim in 1..=3 {
            let g = WeightedGrid::new(dim, 1, 4).unwrap();
            let one = vec![1.0; g.len()];
            let exact = ball_volume(dim) / (dim as f64 + 2.0);
            let got = g.integrate(&one, 1).unwrap();
            assert!(((got - exact) / exact).abs() < 1e-12, "N={dim}: {got} vs {exact}");
            assert!(g.base_weights().iter().all(|&w| w > 0.0));
            assert!(g.nodes().iter().all(|z| z.iter().map(|x| x * x).sum::<f64>() <= 1.0));
        }
    }

    #[test]
    fn exact_for_monomials_up_to_degree() {
        // ∫_{B_2} x⁴ y² ρ² dz via polar coordinates: ∫r^7 (1−r²)²/4 dr · ∫cos⁴ sin² dφ
        let g = WeightedGrid::new(2, 2, 6).unwrap();
        let vals: Vec<f64> = g.nodes().iter().map(|z| z[0].powi(4) * z[1].powi(2)).collect();
        let radial = 0.25 * (1.0 / 8.0 - 2.0 / 10.0 + 1.0 / 12.0);
        let angular = PI / 8.0;
        let got = g.integrate(&vals, 2).unwrap();
        assert!((got - radial * angular).abs() < 1e-15);
    }

    #[test]
    fn mismatched_grids_rejected() {
        let a = WeightedGrid::new(2, 1, 4).unwrap();
        let b = WeightedGrid::new(2, 1, 6).unwrap();
        let f = a.sample_fn(|_| 1.0);
        let g = b.sample_fn(|_| 1.0);
        assert!(matches!(inner_rho(&f, &g, &a), Err(Error::GridMismatch(_))));
        assert!(a.weights(0).is_err());
    }
}
