use super::harmonics::{harmonic_count, solid_harmonic};
use super::{lambda_of, mu_of, Rational};
use crate::error::{Error, Result};
use crate::linops::{GaussJacobi, Polynomial};
use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

/// `(l, n, k)`: angular degree, harmonic index, radial index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModeIndex {
    pub l: u32,
    pub n: u32,
    pub k: u32,
}

/// One eigenfunction `ψ_{l,n,k}` of `L` in the hypergeometric normalization
/// (radial factor equal to 1 at the origin).
#[derive(Clone, Debug, PartialEq)]
pub struct Eigenmode {
    pub dim: usize,
    pub l: u32,
    pub n: u32,
    pub k: u32,
    pub lambda: Rational,
    pub mu: Rational,
    /// `c_j` in `₂F₁(−k, b; c; t) = Σ_{j ≤ k} c_j t^j`.
    pub radial_coeffs: Vec<Ratio<i128>>,
}

/// Coefficients of the terminating series `₂F₁(−k, 1+l+N/2+k; l+N/2; t)`.
fn hypergeometric_coeffs(l: u32, k: u32, dim: usize) -> Vec<Ratio<i128>> {
    let half_n = Ratio::new(dim as i128, 2);
    let a = Ratio::from_integer(-(k as i128));
    let b = Ratio::from_integer(1 + l as i128 + k as i128) + half_n;
    let c = Ratio::from_integer(l as i128) + half_n;
    let mut out = Vec::with_capacity(k as usize + 1);
    let mut cur = Ratio::from_integer(1i128);
    out.push(cur);
    for j in 0..k as i128 {
        let jr = Ratio::from_integer(j);
        cur = cur * (a + jr) * (b + jr) / ((c + jr) * Ratio::from_integer(j + 1));
        out.push(cur);
    }
    out
}

/// `∫_{S^{N−1}} |Y_{l,n}|² dS` for the harmonics of [`solid_harmonic`].
fn angular_norm_squared(dim: usize, l: u32) -> f64 {
    let sphere = 2.0 * PI.powf(dim as f64 / 2.0) / gamma(dim as f64 / 2.0);
    match dim {
        1 => 2.0,
        2 if l == 0 => 2.0 * PI,
        2 => PI,
        3 => 1.0,
        _ if l == 0 => sphere,
        d => sphere / d as f64,
    }
}

impl Eigenmode {
    pub fn new(dim: usize, l: u32, n: u32, k: u32) -> Result<Self> {
        let lambda = lambda_of(l, k, dim)?;
        let mu = mu_of(l, k, dim)?;
        let count = super::multiplicity(l, dim)?;
        if n == 0 || n as u64 > count {
            return Err(Error::Domain(format!(
                "harmonic index n = {n} outside 1..={count} for N = {dim}, l = {l}"
            )));
        }
        Ok(Self {
            dim,
            l,
            n,
            k,
            lambda,
            mu,
            radial_coeffs: hypergeometric_coeffs(l, k, dim),
        })
    }

    pub fn index(&self) -> ModeIndex {
        ModeIndex {
            l: self.l,
            n: self.n,
            k: self.k,
        }
    }

    pub fn lambda_f64(&self) -> f64 {
        self.lambda.to_f64().unwrap()
    }

    pub fn mu_f64(&self) -> f64 {
        self.mu.to_f64().unwrap()
    }

    /// Polynomial degree `l + 2k` of the eigenfunction.
    pub fn degree(&self) -> u32 {
        self.l + 2 * self.k
    }

    /// Radial factor as a polynomial in `t = |x|²`, coefficients as `f64`.
    pub fn radial_coeffs_f64(&self) -> Vec<f64> {
        self.radial_coeffs.iter().map(|c| c.to_f64().unwrap()).collect()
    }

    /// The full eigenfunction as a polynomial in `N` variables.
    ///
    /// Fails with [`Error::Unsupported`] where no angular basis is available
    /// (`N ≥ 4`, `l ≥ 2`).
    pub fn polynomial(&self) -> Result<Polynomial> {
        harmonic_count(self.dim, self.l).ok_or_else(|| {
            Error::Unsupported(format!("angular evaluation for N = {}, l = {}", self.dim, self.l))
        })?;
        let y = solid_harmonic(self.dim, self.l, self.n)?;
        let r2 = Polynomial::radius_squared(self.dim);
        let mut radial = Polynomial::zero(self.dim);
        let mut t_pow = Polynomial::constant(self.dim, 1.0);
        for c in self.radial_coeffs_f64() {
            radial = radial + t_pow.scale(c);
            t_pow = &t_pow * &r2;
        }
        Ok(&radial * &y)
    }

    /// `‖ψ‖_ρ = (∫_{B_1} ψ² ρ dz)^{1/2}` by an exact radial Gauss–Jacobi rule.
    pub fn rho_norm(&self) -> f64 {
        // ∫ R(r²)² r^{2l} ρ r^{N−1} dr = 2^{−β−4} ∫_{−1}^{1} R² (1−u)(1+u)^β du,
        // t = r² = (1+u)/2, β = l + N/2 − 1
        let beta = self.l as f64 + self.dim as f64 / 2.0 - 1.0;
        let rule = GaussJacobi::new(self.k as usize + 1, 1.0, beta);
        let coeffs = self.radial_coeffs_f64();
        let radial = rule.integrate(|u| {
            let t = 0.5 * (1.0 + u);
            let r = coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c);
            r * r
        });
        let radial = radial * 2f64.powf(-beta - 4.0);
        (radial * angular_norm_squared(self.dim, self.l)).sqrt()
    }

    /// The eigenfunction rescaled to unit `ρ`-norm.
    pub fn unit_polynomial(&self) -> Result<Polynomial> {
        Ok(self.polynomial()?.scale(1.0 / self.rho_norm()))
    }
}

/// Values of `ψ` at the given points (each of length `N`).
pub fn eval_eigenfunction(mode: &Eigenmode, points: &[Vec<f64>]) -> Result<Vec<f64>> {
    let p = mode.polynomial()?;
    points
        .iter()
        .map(|x| {
            if x.len() != mode.dim {
                return Err(Error::Domain(format!(
                    "point of dimension {} for a mode in N = {}",
                    x.len(),
                    mode.dim
                )));
            }
            Ok(p.eval(x))
        })
        .collect()
}
