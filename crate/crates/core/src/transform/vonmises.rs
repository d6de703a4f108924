//! The von Mises change of variables
//! `z = x / √(2√v(x) + |x|²)`, `1 + w(z) = √(2√v(x) + |x|²)`,
//! with inverse `x = (1 + w(z)) z`, `v(x) = ρ(z)² (1 + w(z))⁴`.
//!
//! `x` and `z` are always parallel, so inversion reduces to a scalar
//! problem along rays through the origin.

use super::field::{DropletField, Geometry, PerturbationField};
use crate::error::{Error, Result};
use crate::linops::CubicSpline;
use crate::spectrum::WeightedGrid;
use serde::{Deserialize, Serialize};

/// Settings of the fixed-point inversion `x ← (1−θ)x + θ z √(2√v(x) + |x|²)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InversionOptions {
    pub theta: f64,
    pub tol: f64,
    pub max_iter: usize,
    /// Upper bound on `‖w‖_∞ + ‖∇w‖_∞` of the result.
    pub smallness: f64,
}

impl Default for InversionOptions {
    fn default() -> Self {
        Self {
            theta: 0.5,
            tol: 1e-12,
            max_iter: 200,
            smallness: 0.1,
        }
    }
}

/// Cubic-spline model of `√v` along a line, zero outside the located support.
#[derive(Clone, Debug)]
pub struct SqrtProfile {
    spline: CubicSpline,
    left: f64,
    right: f64,
}

/// Root of the parabola through three points closest to `near`, if it lies
/// within `reach` of it.
fn parabola_root(xs: [f64; 3], ys: [f64; 3], near: f64, reach: f64) -> Option<f64> {
    // Newton form y = y0 + d1 (x − x0) + d2 (x − x0)(x − x1)
    let d1 = (ys[1] - ys[0]) / (xs[1] - xs[0]);
    let d12 = (ys[2] - ys[1]) / (xs[2] - xs[1]);
    let d2 = (d12 - d1) / (xs[2] - xs[0]);
    // a u² + b u + c in u = x − near
    let a = d2;
    let b = d1 + d2 * (2.0 * near - xs[0] - xs[1]);
    let c = ys[0] + d1 * (near - xs[0]) + d2 * (near - xs[0]) * (near - xs[1]);
    let roots: Vec<f64> = if a.abs() < 1e-300 {
        vec![-c / b]
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc < 0.0 {
            return None;
        }
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        vec![q / a, c / q]
    };
    roots
        .into_iter()
        .filter(|u| u.is_finite() && u.abs() <= reach)
        .min_by(|p, q| p.abs().total_cmp(&q.abs()))
        .map(|u| near + u)
}

/// Edge beyond `xs[0]` (away from `xs[1]`) by extrapolating the samples.
fn locate_edge(xs: [f64; 3], ys: [f64; 3], outer: Option<f64>) -> f64 {
    let step = (xs[1] - xs[0]).abs();
    let dir = (xs[0] - xs[1]).signum();
    let linear = xs[0] - ys[0] * (xs[1] - xs[0]) / (ys[1] - ys[0]);
    let mut edge = parabola_root(xs, ys, xs[0], 2.0 * step)
        .filter(|e| (e - xs[0]) * dir >= 0.0)
        .unwrap_or(linear);
    if !((edge - xs[0]) * dir >= 0.0) || !edge.is_finite() {
        edge = xs[0] + dir * 0.5 * step;
    }
    // never beyond the next sample known to be empty
    if let Some(o) = outer {
        if (edge - o) * dir > 0.0 {
            edge = o;
        }
    }
    edge
}

impl SqrtProfile {
    /// Builds the model from a line or radial droplet profile.
    pub fn new(v: &DropletField) -> Result<Self> {
        let (x, vals) = v.line_profile()?;
        let s: Vec<f64> = vals.iter().map(|&a| a.max(0.0).sqrt()).collect();
        let smax = s.iter().copied().fold(0.0, f64::max);
        if !(smax > 0.0) {
            return Err(Error::Invalid("droplet has empty support".into()));
        }
        // samples below the threshold count as dry
        let thresh = 1e-9 * smax;
        let a = s.iter().position(|&q| q > thresh).unwrap();
        let b = s.iter().rposition(|&q| q > thresh).unwrap();
        if b - a < 3 {
            return Err(Error::Invalid("support resolved by fewer than four samples".into()));
        }
        if s[a..=b].iter().any(|&q| q <= thresh) {
            return Err(Error::Invalid("support is not connected".into()));
        }
        let dry_left = a.checked_sub(1).map(|i| x[i]);
        let dry_right = x.get(b + 1).copied();
        // a partially filled contact-line cell lies well below the line through
        // its two inner neighbors; fit the edge from the resolved cells instead
        let (mut a, mut b) = (a, b);
        for _ in 0..2 {
            if b - a >= 5 && s[a] < 0.5 * (2.0 * s[a + 1] - s[a + 2]) {
                a += 1;
            }
            if b - a >= 5 && s[b] < 0.5 * (2.0 * s[b - 1] - s[b - 2]) {
                b -= 1;
            }
        }
        let left = locate_edge(
            [x[a], x[a + 1], x[a + 2]],
            [s[a], s[a + 1], s[a + 2]],
            dry_left,
        );
        let right = locate_edge(
            [x[b], x[b - 1], x[b - 2]],
            [s[b], s[b - 1], s[b - 2]],
            dry_right,
        );
        let mut kx = Vec::with_capacity(b - a + 3);
        let mut ky = Vec::with_capacity(b - a + 3);
        let gap = 1e-9 * (x[a + 1] - x[a]);
        if x[a] - left > gap {
            kx.push(left);
            ky.push(0.0);
        }
        kx.extend_from_slice(&x[a..=b]);
        ky.extend_from_slice(&s[a..=b]);
        if right - x[b] > gap {
            kx.push(right);
            ky.push(0.0);
        }
        let spline = CubicSpline::with_estimated_ends(kx, ky)?;
        Ok(Self { spline, left, right })
    }

    /// Located support `[left, right]`.
    pub fn support(&self) -> (f64, f64) {
        (self.left, self.right)
    }

    /// `(√v, d√v/dx)` at `x`, both zero outside the support and `√v` clamped at 0.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        if x <= self.left || x >= self.right {
            return (0.0, 0.0);
        }
        let [s, d, _, _] = self.spline.eval_all(x);
        if s <= 0.0 {
            (0.0, 0.0)
        } else {
            (s, d)
        }
    }

    /// The forward map `Φ(x) = x / √(2√v(x) + x²)` along the line.
    pub fn forward(&self, x: f64) -> f64 {
        let (s, _) = self.eval(x);
        x / (2.0 * s + x * x).sqrt()
    }
}

/// `w` on the ball grid from a line (N = 1) or radial (N ≥ 2) droplet.
pub fn v_to_w(v: &DropletField, grid: &WeightedGrid, opts: &InversionOptions) -> Result<PerturbationField> {
    if v.dim != grid.dim() {
        return Err(Error::Invalid(format!(
            "droplet in N = {} but ball grid in N = {}",
            v.dim,
            grid.dim()
        )));
    }
    if v.geometry == Geometry::Scattered {
        return Err(Error::Unsupported(
            "inversion from scattered samples (only line and radial profiles)".into(),
        ));
    }
    let profile = SqrtProfile::new(v)?;
    let mut values = Vec::with_capacity(grid.len());
    let mut gradients = Vec::with_capacity(grid.len());
    let mut preimages = Vec::with_capacity(grid.len());
    for z in grid.nodes() {
        let r = z.iter().map(|a| a * a).sum::<f64>().sqrt();
        // 1-D coordinate along the ray: signed for the line, |x| for radial data
        let sign = if v.geometry == Geometry::Line && z[0] < 0.0 { -1.0 } else { 1.0 };
        let along = |t: f64| {
            let (s, ds) = profile.eval(sign * t);
            (s, sign * ds)
        };
        let g_of = |t: f64| (2.0 * along(t).0 + t * t).sqrt();
        let mut t = r;
        let mut converged = false;
        for _ in 0..opts.max_iter {
            let next = (1.0 - opts.theta) * t + opts.theta * r * g_of(t);
            let delta = (next - t).abs();
            t = next;
            if delta < opts.tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence {
                z: z.clone(),
                iterations: opts.max_iter,
            });
        }
        let (s, ds) = along(t);
        let g = (2.0 * s + t * t).sqrt();
        let dg = (ds + t) / g;
        let dw = dg * g / (1.0 - r * dg);
        values.push(g - 1.0);
        gradients.push(if r > 0.0 {
            z.iter().map(|a| dw * a / r).collect()
        } else {
            vec![0.0; z.len()]
        });
        preimages.push(if r > 0.0 {
            z.iter().map(|a| t * a / r).collect()
        } else {
            vec![0.0; z.len()]
        });
    }
    let field = PerturbationField {
        grid: grid.clone(),
        values,
        gradients,
        preimages: Some(preimages),
    };
    let size = field.sup() + field.grad_sup();
    if !(size <= opts.smallness) {
        return Err(Error::TooFarFromSelfSimilar(format!(
            "‖w‖∞ + ‖∇w‖∞ = {size:.3e} exceeds the smallness threshold {}",
            opts.smallness
        )));
    }
    field.check_jacobian()?;
    Ok(field)
}

/// Pushes `w` forward: samples `v = ρ² (1 + w)⁴` at `x = (1 + w(z)) z`, with
/// weights `J/ρ` times the `ρ`-weighted ball weights so that `∫ · dx` is
/// computed with the accuracy of the ball rule.
pub fn w_to_v(w: &PerturbationField) -> Result<DropletField> {
    w.check_jacobian()?;
    let grid = &w.grid;
    let dim = grid.dim();
    let base = grid.weights(1)?;
    let jac = w.jacobian();
    let mut rows: Vec<(Vec<f64>, f64, f64)> = grid
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let s = 1.0 + w.values[i];
            let rho = grid.rho_values()[i];
            let x: Vec<f64> = z.iter().map(|a| s * a).collect();
            (x, rho * rho * s.powi(4), base[i] * jac[i] / rho)
        })
        .collect();
    let geometry = if dim == 1 { Geometry::Line } else { Geometry::Scattered };
    if dim == 1 {
        rows.sort_by(|a, b| a.0[0].total_cmp(&b.0[0]));
    }
    let (coords, rest): (Vec<_>, Vec<_>) = rows.into_iter().map(|(x, v, q)| (x, (v, q))).unzip();
    let (values, weights) = rest.into_iter().unzip();
    DropletField::new(dim, geometry, coords, values, weights, 0.0)
}

/// `v(x)` for a perturbation given as a function on the ball: solves
/// `|x| = r (1 + w(r x̂))` for `r` and returns `ρ(r x̂)² (1 + w(r x̂))⁴`
/// (zero outside the image of the ball).
pub fn w_to_v_at(w: impl Fn(&[f64]) -> f64, x: &[f64]) -> Result<f64> {
    let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm == 0.0 {
        let origin = vec![0.0; x.len()];
        return Ok(0.25 * (1.0 + w(&origin)).powi(4));
    }
    let dir: Vec<f64> = x.iter().map(|a| a / norm).collect();
    let at = |r: f64| -> Vec<f64> { dir.iter().map(|d| r * d).collect() };
    if norm >= 1.0 + w(&dir) {
        return Ok(0.0);
    }
    let mut r = norm;
    for _ in 0..200 {
        let next = norm / (1.0 + w(&at(r)));
        let delta = (next - r).abs();
        r = next;
        if delta < 1e-15 {
            let z = at(r);
            let rho = 0.5 * (1.0 - r * r);
            return Ok(rho * rho * (1.0 + w(&z)).powi(4));
        }
    }
    Err(Error::NoConvergence {
        z: x.to_vec(),
        iterations: 200,
    })
}

/// `(2/(N+4)) ∫ (1 + w)^{N+4} ρ dz`, the mass of the droplet belonging to `w`.
pub fn mass_from_perturbation(w: &PerturbationField) -> Result<f64> {
    let n = w.dim() as i32;
    let integrand: Vec<f64> = w.values.iter().map(|a| (1.0 + a).powi(n + 4)).collect();
    Ok(2.0 / (n as f64 + 4.0) * w.grid.integrate(&integrand, 1)?)
}
