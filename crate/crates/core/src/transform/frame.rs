use super::field::DropletField;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

/// `|S^{N−1}|`.
pub fn sphere_area(dim: usize) -> f64 {
    2.0 * PI.powf(dim as f64 / 2.0) / gamma(dim as f64 / 2.0)
}

/// `|B_1(0)|` in `R^N`.
pub fn ball_volume(dim: usize) -> f64 {
    sphere_area(dim) / dim as f64
}

/// `γ = 2(N+2)`.
pub fn gamma_of(dim: usize) -> f64 {
    2.0 * (dim as f64 + 2.0)
}

/// `α_N = 1/(8(N+4)(N+2))`.
pub fn alpha_of(dim: usize) -> f64 {
    1.0 / (8.0 * (dim as f64 + 4.0) * (dim as f64 + 2.0))
}

/// `∫_{B_1} (1 − |w|²)² dw = |S^{N−1}| · 8/(N(N+2)(N+4))`.
pub fn profile_integral(dim: usize) -> f64 {
    let n = dim as f64;
    sphere_area(dim) * 8.0 / (n * (n + 2.0) * (n + 4.0))
}

/// `v_*(x) = ¼(1 − |x|²)₊²`.
pub fn v_star(x: &[f64]) -> f64 {
    let s = 1.0 - x.iter().map(|a| a * a).sum::<f64>();
    if s > 0.0 {
        0.25 * s * s
    } else {
        0.0
    }
}

/// `V_*(x) = ½(1 − |x|²)`, the signed extension of `√v_*`.
pub fn big_v_star(x: &[f64]) -> f64 {
    0.5 * (1.0 - x.iter().map(|a| a * a).sum::<f64>())
}

/// `∫ v_* dx = 2|B_1|/((N+2)(N+4))`.
pub fn stationary_mass(dim: usize) -> f64 {
    let n = dim as f64;
    2.0 * ball_volume(dim) / ((n + 2.0) * (n + 4.0))
}

/// `σ_M` with `∫ u_*(τ, y) dy = M`: `M = α_N σ_M^{(N+4)/2} ∫_{B_1}(1−|w|²)² dw`.
pub fn sigma_from_mass(mass: f64, dim: usize) -> Result<f64> {
    if !(mass > 0.0) {
        return Err(Error::Domain(format!("mass must be positive, got {mass}")));
    }
    Ok((mass / (alpha_of(dim) * profile_integral(dim))).powf(2.0 / (dim as f64 + 4.0)))
}

/// Constants of the self-similar rescaling for a given mass.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfSimilarFrame {
    pub dim: usize,
    pub mass: f64,
    pub gamma: f64,
    pub sigma_m: f64,
    pub alpha_n: f64,
}

impl SelfSimilarFrame {
    pub fn new(dim: usize, mass: f64) -> Result<Self> {
        Ok(Self {
            dim,
            mass,
            gamma: gamma_of(dim),
            sigma_m: sigma_from_mass(mass, dim)?,
            alpha_n: alpha_of(dim),
        })
    }

    /// `τ = e^{(N+4)γt}`.
    pub fn tau_of(&self, t: f64) -> f64 {
        ((self.dim as f64 + 4.0) * self.gamma * t).exp()
    }

    /// `t = ln τ / ((N+4)γ)`.
    pub fn t_of(&self, tau: f64) -> Result<f64> {
        if !(tau > 0.0) {
            return Err(Error::Domain(format!("τ must be positive, got {tau}")));
        }
        Ok(tau.ln() / ((self.dim as f64 + 4.0) * self.gamma))
    }

    /// Smyth–Hill profile `u_*(τ, y) = τ^{−N/(N+4)} α_N (σ_M − |y|² τ^{−2/(N+4)})₊²`.
    pub fn smyth_hill(&self, tau: f64, y: &[f64]) -> f64 {
        let n = self.dim as f64;
        let s = self.sigma_m - y.iter().map(|a| a * a).sum::<f64>() * tau.powf(-2.0 / (n + 4.0));
        if s > 0.0 {
            tau.powf(-n / (n + 4.0)) * self.alpha_n * s * s
        } else {
            0.0
        }
    }

    /// Factor `x/y = σ_M^{−1/2} τ^{−1/(N+4)}`.
    fn length_factor(&self, tau: f64) -> f64 {
        1.0 / (self.sigma_m.sqrt() * tau.powf(1.0 / (self.dim as f64 + 4.0)))
    }

    /// Factor `v/u = (N+4)γ σ_M^{−2} τ^{N/(N+4)}`.
    fn height_factor(&self, tau: f64) -> f64 {
        let n = self.dim as f64;
        (n + 4.0) * self.gamma / (self.sigma_m * self.sigma_m) * tau.powf(n / (n + 4.0))
    }

    /// Physical film `u(τ, ·)` (with `time = τ`) to confined variables.
    pub fn physical_to_confined(&self, u: &DropletField) -> Result<DropletField> {
        let tau = u.time;
        if !(tau > 0.0) {
            return Err(Error::Domain(format!("τ must be positive, got {tau}")));
        }
        self.check_dim(u)?;
        let lf = self.length_factor(tau);
        let hf = self.height_factor(tau);
        Ok(rescale(u, lf, hf, self.t_of(tau)?))
    }

    /// Confined `v(t, ·)` back to the physical film; the result carries `τ` as its time.
    pub fn confined_to_physical(&self, v: &DropletField) -> Result<DropletField> {
        self.check_dim(v)?;
        let tau = self.tau_of(v.time);
        let lf = self.length_factor(tau);
        let hf = self.height_factor(tau);
        Ok(rescale(v, 1.0 / lf, 1.0 / hf, tau))
    }

    fn check_dim(&self, f: &DropletField) -> Result<()> {
        if f.dim != self.dim {
            return Err(Error::Invalid(format!(
                "field in N = {} for a frame in N = {}",
                f.dim, self.dim
            )));
        }
        Ok(())
    }
}

fn rescale(f: &DropletField, length: f64, height: f64, time: f64) -> DropletField {
    let jac = length.powi(f.dim as i32);
    DropletField {
        dim: f.dim,
        geometry: f.geometry,
        coords: f.coords.iter().map(|c| c.iter().map(|a| a * length).collect()).collect(),
        values: f.values.iter().map(|v| v * height).collect(),
        weights: f.weights.iter().map(|w| w * jac).collect(),
        time,
    }
}

/// `v_*(x − e^{−γt} b)`, the exact translating solution.
pub fn translating_solution(x: &[f64], t: f64, b: &[f64]) -> f64 {
    let decay = (-gamma_of(x.len()) * t).exp();
    let shifted: Vec<f64> = x.iter().zip(b).map(|(a, c)| a - decay * c).collect();
    v_star(&shifted)
}

/// Dilation factor `Λ(t) = (1 + τ₀ e^{−μ_{0,1} t})^{1/(N+4)}` of a delayed
/// Smyth–Hill solution, `μ_{0,1} = (N+4)γ`.
pub fn dilation_factor(dim: usize, tau0: f64, t: f64) -> f64 {
    let n = dim as f64;
    (1.0 + tau0 * (-(n + 4.0) * gamma_of(dim) * t).exp()).powf(1.0 / (n + 4.0))
}

/// `Λ^{−N} v_*(x/Λ)`, the exact dilating solution.
pub fn dilating_solution(x: &[f64], t: f64, tau0: f64) -> f64 {
    let lam = dilation_factor(x.len(), tau0, t);
    let scaled: Vec<f64> = x.iter().map(|a| a / lam).collect();
    lam.powi(-(x.len() as i32)) * v_star(&scaled)
}

/// `τ₀` producing the initial dilation `Λ(0) = lam`.
pub fn tau0_for_dilation(dim: usize, lam: f64) -> f64 {
    lam.powf(dim as f64 + 4.0) - 1.0
}
