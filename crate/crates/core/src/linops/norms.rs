//! Norms of perturbations `w` on the unit ball.
//!
//! * `l2_rho = ‖w‖_ρ = (∫ w² ρ)^{1/2}`,
//! * `h_norm = (‖w‖_ρ² + ‖√ρ ∇w‖_ρ²)^{1/2}`, i.e. the H inner product,
//! * the W-norm `‖w‖_∞ + ‖∇w‖_∞ + ‖ρ∇²w‖_∞ + ‖ρ²∇³w‖_∞` (Frobenius norms of
//!   the derivative tensors), suprema taken on a 3× refined sample set,
//! * the unweighted variant `(‖w‖² + ‖ρ∇w‖²)^{1/2}` and `‖ρ w‖` used by the
//!   Hardy-type comparison.

use super::{CubicSpline, GaussJacobi, Polynomial};
use crate::error::{Error, Result};
use crate::spectrum::WeightedGrid;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub l2_rho: f64,
    pub h_norm: f64,
    pub sup: f64,
    pub grad_sup: f64,
    pub rho_hessian_sup: f64,
    pub rho2_third_sup: f64,
    pub w_norm: f64,
    /// `‖w‖_{L²}` without weight.
    pub l2: f64,
    /// `‖ρ w‖_{L²}`.
    pub rho_l2: f64,
    /// `‖ρ ∇w‖_{L²}`.
    pub rho_grad_l2: f64,
    /// `(‖w‖² + ‖ρ∇w‖²)^{1/2}`.
    pub h_unweighted: f64,
}

impl NormReport {
    fn finish(mut self) -> Self {
        self.w_norm = self.sup + self.grad_sup + self.rho_hessian_sup + self.rho2_third_sup;
        self.h_unweighted = (self.l2 * self.l2 + self.rho_grad_l2 * self.rho_grad_l2).sqrt();
        self
    }
}

/// Points filling the closed ball, about three times as dense per direction
/// as the quadrature rule of the given degree.
pub fn sup_points(dim: usize, degree: u32) -> Result<Vec<Vec<f64>>> {
    let nr = 3 * (degree as usize / 2 + 2);
    let radii: Vec<f64> = (0..=nr).map(|j| j as f64 / nr as f64).collect();
    Ok(match dim {
        1 => radii
            .iter()
            .flat_map(|&r| [vec![-r], vec![r]])
            .collect(),
        2 => {
            let m = 3 * (degree as usize + 2);
            let mut out = vec![vec![0.0, 0.0]];
            for &r in &radii[1..] {
                for j in 0..m {
                    let phi = 2.0 * PI * j as f64 / m as f64;
                    out.push(vec![r * phi.cos(), r * phi.sin()]);
                }
            }
            out
        }
        3 => {
            let mt = 3 * (degree as usize / 2 + 2);
            let mp = 3 * (degree as usize + 2);
            let mut out = vec![vec![0.0; 3]];
            for &r in &radii[1..] {
                for i in 0..=mt {
                    let theta = PI * i as f64 / mt as f64;
                    let (s, c) = theta.sin_cos();
                    let count = if i == 0 || i == mt { 1 } else { mp };
                    for j in 0..count {
                        let phi = 2.0 * PI * j as f64 / mp as f64;
                        out.push(vec![r * s * phi.cos(), r * s * phi.sin(), r * c]);
                    }
                }
            }
            out
        }
        d => return Err(Error::Unsupported(format!("norm evaluation for N = {d}"))),
    })
}

fn frobenius(parts: &[Polynomial], z: &[f64]) -> f64 {
    parts.iter().map(|p| p.eval(z).powi(2)).sum::<f64>().sqrt()
}

/// All norms of a polynomial perturbation, with exact differentiation.
pub fn norms(w: &Polynomial) -> Result<NormReport> {
    let dim = w.nvars();
    let deg = w.degree();
    let grad = w.gradient();
    let hess: Vec<Polynomial> = grad.iter().flat_map(|g| g.gradient()).collect();
    let third: Vec<Polynomial> = hess.iter().flat_map(|h| h.gradient()).collect();

    let mut rep = NormReport::default();
    for z in sup_points(dim, deg)? {
        let rho = 0.5 * (1.0 - z.iter().map(|x| x * x).sum::<f64>());
        rep.sup = rep.sup.max(w.eval(&z).abs());
        rep.grad_sup = rep.grad_sup.max(frobenius(&grad, &z));
        rep.rho_hessian_sup = rep.rho_hessian_sup.max(rho * frobenius(&hess, &z));
        rep.rho2_third_sup = rep.rho2_third_sup.max(rho * rho * frobenius(&third, &z));
    }

    let weighted = WeightedGrid::for_products(dim, 2 * deg)?;
    let plain = WeightedGrid::new(dim, 0, 2 * deg + 4)?;
    let gsq = |z: &[f64]| grad.iter().map(|g| g.eval(z).powi(2)).sum::<f64>();
    let w2: Vec<f64> = weighted.nodes().iter().map(|z| w.eval(z).powi(2)).collect();
    let g2: Vec<f64> = weighted.nodes().iter().map(|z| gsq(z)).collect();
    let l2_rho_sq = weighted.integrate(&w2, 1)?;
    rep.l2_rho = l2_rho_sq.sqrt();
    rep.h_norm = (l2_rho_sq + weighted.integrate(&g2, 2)?).sqrt();

    let w2: Vec<f64> = plain.nodes().iter().map(|z| w.eval(z).powi(2)).collect();
    let g2: Vec<f64> = plain.nodes().iter().map(|z| gsq(z)).collect();
    rep.l2 = plain.integrate(&w2, 0)?.sqrt();
    rep.rho_l2 = plain.integrate(&w2, 2)?.sqrt();
    rep.rho_grad_l2 = plain.integrate(&g2, 2)?.sqrt();
    Ok(rep.finish())
}

/// Norms of a one-dimensional perturbation sampled at increasing nodes
/// covering `[−1, 1]`, differentiated through a cubic spline.
///
/// The spline is piecewise cubic, so the integrals are computed exactly per
/// knot interval.
pub fn norms_sampled(z: &[f64], w: &[f64]) -> Result<NormReport> {
    if z.len() < 4 || z.len() != w.len() {
        return Err(Error::Invalid(format!(
            "need at least four matching samples, got {} nodes and {} values",
            z.len(),
            w.len()
        )));
    }
    if z[0] > -1.0 + 1e-12 || z[z.len() - 1] < 1.0 - 1e-12 {
        return Err(Error::Invalid("samples must cover [-1, 1]".into()));
    }
    let spline = CubicSpline::with_estimated_ends(z.to_vec(), w.to_vec())?;
    let rule = GaussJacobi::legendre(6);
    let mut rep = NormReport::default();
    let (mut a_rho, mut a_h, mut a_l2, mut a_rl2, mut a_rg) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for pair in z.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        for (&u, &wt) in rule.nodes.iter().zip(&rule.weights) {
            let x = 0.5 * (a + b) + 0.5 * (b - a) * u;
            let q = wt * 0.5 * (b - a);
            let rho = 0.5 * (1.0 - x * x);
            let [v, d1, _, _] = spline.eval_all(x);
            a_rho += q * v * v * rho;
            a_h += q * d1 * d1 * rho * rho;
            a_l2 += q * v * v;
            a_rl2 += q * v * v * rho * rho;
            a_rg += q * d1 * d1 * rho * rho;
        }
        for j in 0..=3 {
            let x = a + (b - a) * j as f64 / 3.0;
            let rho = 0.5 * (1.0 - x * x);
            let [v, d1, d2, d3] = spline.eval_all(x);
            rep.sup = rep.sup.max(v.abs());
            rep.grad_sup = rep.grad_sup.max(d1.abs());
            rep.rho_hessian_sup = rep.rho_hessian_sup.max(rho * d2.abs());
            rep.rho2_third_sup = rep.rho2_third_sup.max(rho * rho * d3.abs());
        }
    }
    rep.l2_rho = a_rho.sqrt();
    rep.h_norm = (a_rho + a_h).sqrt();
    rep.l2 = a_l2.sqrt();
    rep.rho_l2 = a_rl2.sqrt();
    rep.rho_grad_l2 = a_rg.sqrt();
    Ok(rep.finish())
}
