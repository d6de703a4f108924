//! Conservative implicit finite-volume scheme for
//! `∂_t v + ∇·(v ∇Δv) − γ ∇·(x v) = 0` on a line or in radial symmetry.
//!
//! Cells of width `h` cover `[−X, X]` (line) or `[0, X]` (radial). With
//! face areas `A` (1, or `r^{N−1}`) and cell volumes `V` the discrete
//! Laplacian is `L_i = (A_{i+½} g_{i+½} − A_{i−½} g_{i−½}) / V_i`,
//! `g = (v_{i+1} − v_i)/h`, with no flux through the outer faces. The face
//! velocity is `U = (L_{i+1} − L_i)/h − γ x_{i+½}` and the flux is `F = m U`
//! with the mobility `m` reconstructed from the upwind side,
//! `m = v_up + ½ minmod(v_down − v_up, v_up − v_upup)`. The mobility vanishes
//! when the upwind cell is dry, so mass only leaves cells that contain it
//! while dry cells still wet from a wet neighbor; away from the contact line
//! the reconstruction is second order.
//! Each step is implicit Euler solved by Newton's method with the exact
//! (pentadiagonal) Jacobian.

use crate::error::{Error, Result};
use crate::linops::BandMatrix;
use crate::transform::{gamma_of, shell_volume, sphere_area};

/// Cell layout and metric factors of one discretization.
#[derive(Clone, Debug)]
pub struct Mesh {
    pub dim: usize,
    pub h: f64,
    /// Cell centers (`x` on the line, `r` in radial symmetry).
    pub centers: Vec<f64>,
    /// Interior faces `f` between cells `f` and `f + 1`.
    pub faces: Vec<f64>,
    pub areas: Vec<f64>,
    pub volumes: Vec<f64>,
    gamma: f64,
}

impl Mesh {
    pub fn new(dim: usize, h: f64, half_width: f64) -> Result<Self> {
        if !(h > 0.0) || !(half_width > 1.0) {
            return Err(Error::Invalid(format!(
                "need h > 0 and a half width beyond the unit ball (h = {h}, X = {half_width})"
            )));
        }
        let radial = dim >= 2;
        let length = if radial { half_width } else { 2.0 * half_width };
        let n = (length / h).round() as usize;
        if (n as f64 * h - length).abs() > 1e-9 * length {
            return Err(Error::Invalid(format!("h = {h} does not divide the domain length {length}")));
        }
        let left = if radial { 0.0 } else { -half_width };
        let centers: Vec<f64> = (0..n).map(|i| left + (i as f64 + 0.5) * h).collect();
        let faces: Vec<f64> = (1..n).map(|i| left + i as f64 * h).collect();
        let (areas, volumes) = if radial {
            (
                faces.iter().map(|r| r.powi(dim as i32 - 1)).collect(),
                centers
                    .iter()
                    .map(|r| shell_volume(dim, r - 0.5 * h, r + 0.5 * h) / sphere_area(dim))
                    .collect(),
            )
        } else {
            (vec![1.0; n - 1], vec![h; n])
        };
        Ok(Self {
            dim,
            h,
            centers,
            faces,
            areas,
            volumes,
            gamma: gamma_of(dim),
        })
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Weights of `∫ · dx` (cell volumes, times `|S^{N−1}|` in radial symmetry).
    pub fn quadrature_weights(&self) -> Vec<f64> {
        let factor = if self.dim >= 2 { sphere_area(self.dim) } else { 1.0 };
        self.volumes.iter().map(|v| v * factor).collect()
    }

    /// `dL_i/dv_{i+d}` for `d ∈ {−1, 0, 1}`.
    fn laplacian_stencil(&self, i: usize) -> [f64; 3] {
        let n = self.len();
        let h = self.h;
        let left = if i > 0 { self.areas[i - 1] } else { 0.0 };
        let right = if i + 1 < n { self.areas[i] } else { 0.0 };
        let s = 1.0 / (h * self.volumes[i]);
        [left * s, -(left + right) * s, right * s]
    }

    fn laplacian(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let [a, b, c] = self.laplacian_stencil(i);
                let lo = if i > 0 { a * v[i - 1] } else { 0.0 };
                let hi = if i + 1 < n { c * v[i + 1] } else { 0.0 };
                lo + b * v[i] + hi
            })
            .collect()
    }

    /// Face velocities `U_f`.
    pub fn velocities(&self, v: &[f64]) -> Vec<f64> {
        let lap = self.laplacian(v);
        self.faces
            .iter()
            .enumerate()
            .map(|(f, &x)| (lap[f + 1] - lap[f]) / self.h - self.gamma * x)
            .collect()
    }

    /// The semi-discrete right-hand side `dv/dt = −(A_{i+½} F_{i+½} − A_{i−½} F_{i−½}) / V_i`.
    pub fn rate(&self, v: &[f64]) -> Vec<f64> {
        let u = self.velocities(v);
        let mut out = vec![0.0; v.len()];
        for (f, &uf) in u.iter().enumerate() {
            let flux = self.areas[f] * mobility(v, f, uf).0 * uf;
            out[f] -= flux / self.volumes[f];
            out[f + 1] += flux / self.volumes[f + 1];
        }
        out
    }

    /// `R(v) = V (v − v_old) + Δt (A_{i+½} F_{i+½} − A_{i−½} F_{i−½})`.
    fn residual(&self, v: &[f64], old: &[f64], dt: f64, u: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut r: Vec<f64> = (0..n).map(|i| self.volumes[i] * (v[i] - old[i])).collect();
        for (f, &uf) in u.iter().enumerate() {
            let (m, _) = mobility(v, f, uf);
            let flux = dt * self.areas[f] * m * uf;
            r[f] += flux;
            r[f + 1] -= flux;
        }
        r
    }

    fn jacobian(&self, v: &[f64], dt: f64, u: &[f64]) -> BandMatrix {
        let n = self.len();
        let mut jac = BandMatrix::zeros(n, 2, 2);
        for i in 0..n {
            jac.add(i, i, self.volumes[i]);
        }
        let h = self.h;
        for (f, &uf) in u.iter().enumerate() {
            let (m, dm) = mobility(v, f, uf);
            let scale = dt * self.areas[f];
            // dU_f/dv_j from (L_{f+1} − L_f)/h
            let mut du = [(0usize, 0.0f64); 4];
            let mut count = 0;
            let mut push = |j: usize, d: f64| {
                if let Some(slot) = du[..count].iter_mut().find(|s| s.0 == j) {
                    slot.1 += d;
                } else {
                    du[count] = (j, d);
                    count += 1;
                }
            };
            for (cell, sign) in [(f + 1, 1.0), (f, -1.0)] {
                let st = self.laplacian_stencil(cell);
                for (k, d) in st.iter().enumerate() {
                    let j = cell as isize + k as isize - 1;
                    if j >= 0 && (j as usize) < n && *d != 0.0 {
                        push(j as usize, sign * d / h);
                    }
                }
            }
            for &(j, d) in &du[..count] {
                let dflux = scale * m * d;
                jac.add(f, j, dflux);
                jac.add(f + 1, j, -dflux);
            }
            for &(j, d) in dm.iter().filter(|e| e.1 != 0.0) {
                jac.add(f, j, scale * uf * d);
                jac.add(f + 1, j, -scale * uf * d);
            }
        }
        jac
    }

    /// One implicit Euler step; returns the new state and the Newton count.
    pub fn step(&self, old: &[f64], dt: f64, opts: &NewtonOptions) -> Result<(Vec<f64>, usize)> {
        let mut v = old.to_vec();
        for it in 1..=opts.max_iter {
            let u = self.velocities(&v);
            let r = self.residual(&v, old, dt, &u);
            let d = self.jacobian(&v, dt, &u).solve(r)?;
            let mut dmax: f64 = 0.0;
            for (a, b) in v.iter_mut().zip(&d) {
                *a -= b;
                dmax = dmax.max(b.abs());
            }
            if !dmax.is_finite() {
                break;
            }
            let vmax = v.iter().fold(0.0f64, |m, a| m.max(a.abs()));
            if dmax < opts.abs_tol + opts.rel_tol * vmax {
                let floor = -opts.negative_tol * vmax;
                for a in v.iter_mut() {
                    if *a < 0.0 {
                        if *a < floor {
                            return Err(Error::PositivityLost(*a));
                        }
                        *a = 0.0;
                    }
                }
                return Ok((v, it));
            }
        }
        Err(Error::NewtonDivergence { t: f64::NAN, dt })
    }
}

fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

/// Face mobility and its partial derivatives `(cell, ∂m/∂v_cell)`.
fn mobility(v: &[f64], f: usize, u: f64) -> (f64, [(usize, f64); 3]) {
    let n = v.len();
    let (up, down, upup) = if u > 0.0 {
        (f, f + 1, f.checked_sub(1))
    } else {
        (f + 1, f, Some(f + 2).filter(|&j| j < n))
    };
    let Some(uu) = upup else {
        return (v[up], [(up, 1.0), (down, 0.0), (up, 0.0)]);
    };
    let a = v[down] - v[up];
    let b = v[up] - v[uu];
    let s = minmod(a, b);
    let m = v[up] + 0.5 * s;
    // ∂s/∂a = 1 or ∂s/∂b = 1 on the active branch
    let d = if s == 0.0 {
        [(up, 1.0), (down, 0.0), (uu, 0.0)]
    } else if s == a {
        [(up, 0.5), (down, 0.5), (uu, 0.0)]
    } else {
        [(up, 1.5), (down, 0.0), (uu, -0.5)]
    };
    (m, d)
}

/// Stopping rule and roundoff handling of the Newton iteration.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NewtonOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
    /// Negative values above `−negative_tol · max v` are roundoff and set to 0.
    pub negative_tol: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-11,
            max_iter: 30,
            negative_tol: 1e-10,
        }
    }
}
