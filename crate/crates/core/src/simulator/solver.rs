use super::scheme::{Mesh, NewtonOptions};
use crate::error::{Error, Result};
use crate::transform::{DropletField, Geometry};
use serde::{Deserialize, Serialize};

/// Discretization and time-stepping parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub dim: usize,
    pub h: f64,
    /// Nominal time step; halved on Newton failure and regrown afterwards.
    pub dt: f64,
    pub dt_min: f64,
    pub half_width: f64,
    pub newton: NewtonOptions,
}

impl SolverConfig {
    pub fn new(dim: usize, h: f64, dt: f64) -> Self {
        Self {
            dim,
            h,
            dt,
            dt_min: dt * 1e-4,
            half_width: 1.5,
            newton: NewtonOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        if !(self.dt > 0.0) || !(self.dt_min > 0.0) || self.dt_min > self.dt {
            return Err(Error::Invalid(format!("need 0 < dt_min <= dt, got {} and {}", self.dt_min, self.dt)));
        }
        Mesh::new(self.dim, self.h, self.half_width).map(|_| ())
    }

    pub fn mesh(&self) -> Result<Mesh> {
        self.validate()?;
        Mesh::new(self.dim, self.h, self.half_width)
    }

    pub fn geometry(&self) -> Geometry {
        if self.dim == 1 {
            Geometry::Line
        } else {
            Geometry::Radial
        }
    }

    /// Cell averages are replaced by point values of `f` at the cell centers.
    pub fn sample(&self, time: f64, f: impl Fn(&[f64]) -> f64) -> Result<DropletField> {
        let mesh = self.mesh()?;
        DropletField::from_function(self.dim, self.geometry(), self.half_width, mesh.len(), time, f)
    }
}

/// Per-step conserved quantities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub time: f64,
    pub dt: f64,
    pub mass: f64,
    /// `∫ x v dx` for N = 1, zero for radial profiles.
    pub center_of_mass: f64,
    pub newton_iterations: usize,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub snapshots: Vec<DropletField>,
    pub steps: Vec<StepRecord>,
}

impl Trajectory {
    /// Largest relative deviation of the per-step mass from the initial mass.
    pub fn mass_drift(&self) -> f64 {
        let Some(first) = self.steps.first() else { return 0.0 };
        self.steps
            .iter()
            .map(|s| ((s.mass - first.mass) / first.mass).abs())
            .fold(0.0, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.snapshots.iter().map(|s| s.min_value()).fold(f64::INFINITY, f64::min)
    }
}

fn check_layout(v: &DropletField, mesh: &Mesh, config: &SolverConfig) -> Result<()> {
    if v.dim != config.dim || v.geometry != config.geometry() || v.len() != mesh.len() {
        return Err(Error::GridMismatch(format!(
            "field (N={}, {:?}, {} cells) does not match the solver mesh (N={}, {:?}, {} cells)",
            v.dim,
            v.geometry,
            v.len(),
            config.dim,
            config.geometry(),
            mesh.len()
        )));
    }
    let off = v
        .coords
        .iter()
        .zip(&mesh.centers)
        .map(|(c, x)| (c[0] - x).abs())
        .fold(0.0, f64::max);
    if off > 1e-9 * config.half_width {
        return Err(Error::GridMismatch("field samples are not at the cell centers".into()));
    }
    Ok(())
}

fn field_on(mesh: &Mesh, config: &SolverConfig, values: Vec<f64>, time: f64) -> Result<DropletField> {
    DropletField::new(
        config.dim,
        config.geometry(),
        mesh.centers.iter().map(|&x| vec![x]).collect(),
        values,
        mesh.quadrature_weights(),
        time,
    )
}

fn record(mesh: &Mesh, values: &[f64], time: f64, dt: f64, newton_iterations: usize) -> StepRecord {
    let w = mesh.quadrature_weights();
    let mass = values.iter().zip(&w).map(|(a, b)| a * b).sum();
    let center_of_mass = if mesh.dim == 1 {
        values.iter().zip(&w).zip(&mesh.centers).map(|((a, b), x)| a * b * x).sum()
    } else {
        0.0
    };
    StepRecord {
        time,
        dt,
        mass,
        center_of_mass,
        newton_iterations,
    }
}

/// One implicit Euler step of size `dt`.
pub fn step_confined(v: &DropletField, dt: f64, config: &SolverConfig) -> Result<DropletField> {
    let mesh = config.mesh()?;
    check_layout(v, &mesh, config)?;
    let (values, _) = mesh.step(&v.values, dt, &config.newton).map_err(|e| match e {
        Error::NewtonDivergence { dt, .. } => Error::NewtonDivergence { t: v.time, dt },
        other => other,
    })?;
    field_on(&mesh, config, values, v.time + dt)
}

/// Integrates from `v0.time` to `t_end`, hitting every output time exactly.
/// `observe` sees every accepted state (including the initial one).
pub fn evolve_observed(
    v0: &DropletField,
    t_end: f64,
    output_times: &[f64],
    config: &SolverConfig,
    mut observe: impl FnMut(&StepRecord, &[f64], &Mesh) -> Result<()>,
) -> Result<Trajectory> {
    let mesh = config.mesh()?;
    check_layout(v0, &mesh, config)?;
    if !(t_end >= v0.time) {
        return Err(Error::Invalid(format!("end time {t_end} precedes the start time {}", v0.time)));
    }
    let mut outputs: Vec<f64> = output_times.iter().copied().filter(|&t| t >= v0.time && t <= t_end).collect();
    outputs.sort_by(f64::total_cmp);
    outputs.dedup();

    let mut traj = Trajectory {
        times: Vec::new(),
        snapshots: Vec::new(),
        steps: Vec::new(),
    };
    let mut values = v0.values.clone();
    let mut t = v0.time;
    let first = record(&mesh, &values, t, 0.0, 0);
    observe(&first, &values, &mesh)?;
    traj.steps.push(first);
    let mut next_out = 0;
    while next_out < outputs.len() && outputs[next_out] <= t {
        traj.times.push(t);
        traj.snapshots.push(field_on(&mesh, config, values.clone(), t)?);
        next_out += 1;
    }

    let eps = 1e-12 * (1.0 + t_end.abs());
    let mut dt = config.dt;
    while t < t_end - eps {
        let target = outputs.get(next_out).copied().unwrap_or(t_end);
        let mut step_dt = dt.min(target - t);
        // avoid a sliver step right before an output time
        if target - t - step_dt < 1e-3 * step_dt {
            step_dt = target - t;
        }
        match mesh.step(&values, step_dt, &config.newton) {
            Ok((next, iters)) => {
                values = next;
                t = if (target - t - step_dt).abs() <= eps { target } else { t + step_dt };
                let rec = record(&mesh, &values, t, step_dt, iters);
                observe(&rec, &values, &mesh)?;
                traj.steps.push(rec);
                while next_out < outputs.len() && outputs[next_out] <= t + eps {
                    traj.times.push(t);
                    traj.snapshots.push(field_on(&mesh, config, values.clone(), t)?);
                    next_out += 1;
                }
                dt = (2.0 * dt).min(config.dt);
            }
            Err(Error::NewtonDivergence { .. }) | Err(Error::PositivityLost(_)) if step_dt > config.dt_min => {
                dt = 0.5 * step_dt;
            }
            Err(Error::NewtonDivergence { .. }) => return Err(Error::NewtonDivergence { t, dt: step_dt }),
            Err(e) => return Err(e),
        }
    }
    Ok(traj)
}

pub fn evolve(v0: &DropletField, t_end: f64, output_times: &[f64], config: &SolverConfig) -> Result<Trajectory> {
    evolve_observed(v0, t_end, output_times, config, |_, _, _| Ok(()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::v_star;

    #[test]
    fn stationary_start_stays_put() {
        let config = SolverConfig::new(1, 1.0 / 64.0, 1e-3);
        let v0 = config.sample(0.0, v_star).unwrap();
        let traj = evolve(&v0, 0.05, &[0.05], &config).unwrap();
        let last = traj.snapshots.last().unwrap();
        let diff = last.values.iter().zip(&v0.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(diff < 5e-3, "drift {diff}");
        assert!(traj.mass_drift() < 1e-12);
        assert_eq!(traj.times, vec![0.05]);
    }

    #[test]
    fn output_times_are_hit_exactly() {
        let config = SolverConfig::new(2, 1.0 / 32.0, 4e-3);
        let v0 = config.sample(0.0, v_star).unwrap();
        let traj = evolve(&v0, 0.03, &[0.0, 0.01, 0.025, 0.03], &config).unwrap();
        assert_eq!(traj.times, vec![0.0, 0.01, 0.025, 0.03]);
        assert!(traj.snapshots.iter().all(|s| s.min_value() >= 0.0));
    }

    #[test]
    fn mismatched_field_is_rejected() {
        let config = SolverConfig::new(1, 1.0 / 32.0, 1e-3);
        let other = SolverConfig::new(1, 1.0 / 16.0, 1e-3);
        let v0 = other.sample(0.0, v_star).unwrap();
        assert!(matches!(step_confined(&v0, 1e-3, &config), Err(Error::GridMismatch(_))));
    }
}
