use super::field::{DropletField, Geometry, PerturbationField};
use super::frame::{big_v_star, stationary_mass};
use super::vonmises::SqrtProfile;
use crate::error::{Error, Result};
use crate::spectrum::{Eigenmode, WeightedGrid};
use serde::{Deserialize, Serialize};

/// `⟨ψ, w⟩_ρ` on the perturbation's ball grid.
pub fn mode_amplitude_w(w: &PerturbationField, mode: &Eigenmode) -> Result<f64> {
    check_dim(w.dim(), mode)?;
    let psi = mode.polynomial()?;
    let prod: Vec<f64> = w
        .grid
        .nodes()
        .iter()
        .zip(&w.values)
        .map(|(z, a)| psi.eval(z) * a)
        .collect();
    w.grid.integrate(&prod, 1)
}

/// `∫ v_* ψ dx = ∫_{B_1} ρ² ψ dz`, exact.
pub fn stationary_moment(mode: &Eigenmode) -> Result<f64> {
    let psi = mode.polynomial()?;
    let grid = WeightedGrid::new(mode.dim, 2, psi.degree())?;
    let vals: Vec<f64> = grid.nodes().iter().map(|z| psi.eval(z)).collect();
    grid.integrate(&vals, 2)
}

/// `∫ (v − v_*) ψ dx` with the droplet's own quadrature weights.
pub fn mode_amplitude_v(v: &DropletField, mode: &Eigenmode) -> Result<f64> {
    check_dim(v.dim, mode)?;
    if v.geometry == Geometry::Radial && mode.l > 0 {
        // nonradial harmonics integrate to zero over every sphere
        return Ok(0.0);
    }
    let psi = mode.polynomial()?;
    let moment: f64 = (0..v.len())
        .map(|i| v.weights[i] * v.values[i] * psi.eval(&v.point(i)))
        .sum();
    Ok(moment - stationary_moment(mode)?)
}

fn check_dim(dim: usize, mode: &Eigenmode) -> Result<()> {
    if dim != mode.dim {
        return Err(Error::Invalid(format!(
            "field in N = {dim} but mode in N = {}",
            mode.dim
        )));
    }
    Ok(())
}

/// Closeness measures of a droplet to the stationary profile.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// `∫ v − ∫ v_*`.
    pub mass_defect: f64,
    /// `∫ x v dx`.
    pub center_of_mass: Vec<f64>,
    /// `‖√v − V_*‖_{W^{1,∞}(supp v)}` (maximum of value and gradient deviation).
    pub lipschitz_closeness: f64,
    /// `‖∇v + 2x√v‖_∞`.
    pub slope_defect: f64,
}

pub fn diagnostics(v: &DropletField) -> Result<Diagnostics> {
    if v.geometry == Geometry::Scattered {
        return Err(Error::Unsupported("diagnostics of scattered samples".into()));
    }
    let profile = SqrtProfile::new(v)?;
    let (xs, vals) = v.line_profile()?;
    let mut lipschitz: f64 = 0.0;
    let mut slope: f64 = 0.0;
    for (&x, &val) in xs.iter().zip(&vals) {
        let (s, ds) = profile.eval(x);
        if val > 0.0 {
            let dev = (s - big_v_star(&[x])).abs().max((ds + x).abs());
            lipschitz = lipschitz.max(dev);
        }
        // ∇v + 2x√v = 2√v (∇√v + x)
        slope = slope.max((2.0 * s * (ds + x)).abs());
    }
    Ok(Diagnostics {
        mass_defect: v.mass() - stationary_mass(v.dim),
        center_of_mass: v.center_of_mass(),
        lipschitz_closeness: lipschitz,
        slope_defect: slope,
    })
}
