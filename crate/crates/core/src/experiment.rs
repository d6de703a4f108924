//! Rate experiments: evolve a droplet, project the trajectory onto an
//! observable, fit the decay exponent and compare with an exact eigenvalue.

use crate::error::{Error, Result};
use crate::simulator::{evolve, measure_rate, RateFit, RateWindow, SolverConfig, Trajectory, NOISE_FLOOR};
use crate::spectrum::{mu_integer, Eigenmode, WeightedGrid};
use crate::transform::{
    dilating_solution, mode_amplitude_w, tau0_for_dilation, translating_solution, v_star, v_to_w, w_to_v_at,
    DropletField, InversionOptions, PerturbationField,
};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

pub const EXPERIMENT_SCHEMA: &str = "thinfilm.experiment/1";
pub const REPORT_SCHEMA: &str = "thinfilm.rate-report/1";

/// Initial droplet of an experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InitialCondition {
    Stationary,
    /// `v_*(x − b)` (only the first component is used for radial runs).
    Shift { b: Vec<f64> },
    /// `λ^{−N} v_*(x/λ)`, mass preserving.
    Dilate { lambda: f64 },
    /// The droplet of `w = amplitude · ψ_{l,n,k}`.
    Mode { l: u32, n: u32, k: u32, amplitude: f64 },
    /// Field CSV written by the `io` module.
    File { path: PathBuf },
}

impl InitialCondition {
    pub fn sample(&self, config: &SolverConfig) -> Result<DropletField> {
        match self {
            InitialCondition::Stationary => config.sample(0.0, v_star),
            InitialCondition::Shift { b } => {
                let b = b.clone();
                config.sample(0.0, move |x| translating_solution(x, 0.0, &b[..x.len().min(b.len())]))
            }
            InitialCondition::Dilate { lambda } => {
                let tau0 = tau0_for_dilation(config.dim, *lambda);
                config.sample(0.0, |x| dilating_solution(x, 0.0, tau0))
            }
            InitialCondition::Mode { l, n, k, amplitude } => {
                let psi = Eigenmode::new(config.dim, *l, *n, *k)?.polynomial()?;
                let amp = *amplitude;
                let mut field = config.sample(0.0, |_| 0.0)?;
                for i in 0..field.len() {
                    field.values[i] = w_to_v_at(|z| amp * psi.eval(z), &field.point(i))?;
                }
                DropletField::new(field.dim, field.geometry, field.coords, field.values, field.weights, 0.0)
            }
            InitialCondition::File { path } => {
                let v = crate::io::read_field(path)?;
                let expect = config.sample(0.0, |_| 0.0)?;
                if v.len() != expect.len()
                    || v.coords.iter().zip(&expect.coords).any(|(a, b)| (a[0] - b[0]).abs() > 1e-9)
                {
                    return Err(Error::GridMismatch(format!(
                        "{} is not sampled on the solver mesh",
                        path.display()
                    )));
                }
                Ok(v)
            }
        }
    }
}

impl std::str::FromStr for InitialCondition {
    type Err = Error;

    /// `stationary`, `shift:b[,b2..]`, `dilate:λ`, `file:path`, `mode:l,n,k:amp`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("cannot parse initial condition {s:?}"));
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        let (head, rest) = s.split_once(':').unwrap_or((s, ""));
        match head {
            "stationary" => Ok(InitialCondition::Stationary),
            "shift" => Ok(InitialCondition::Shift {
                b: rest.split(',').map(num).collect::<Result<_>>()?,
            }),
            "dilate" => Ok(InitialCondition::Dilate { lambda: num(rest)? }),
            "file" if !rest.is_empty() => Ok(InitialCondition::File { path: rest.into() }),
            "mode" => {
                let (idx, amp) = rest.split_once(':').ok_or_else(bad)?;
                let idx: Vec<u32> = idx
                    .split(',')
                    .map(|t| t.trim().parse().map_err(|_| bad()))
                    .collect::<Result<_>>()?;
                let [l, n, k] = idx[..] else { return Err(bad()) };
                Ok(InitialCondition::Mode {
                    l,
                    n,
                    k,
                    amplitude: num(amp)?,
                })
            }
            _ => Err(bad()),
        }
    }
}

/// The decaying quantity whose exponent is fitted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Observable {
    /// First component of `∫ x v dx`.
    CenterOfMass,
    /// `⟨ψ_{l,n,k}, w − w_ref⟩_ρ`.
    ModeAmplitude { l: u32, n: u32, k: u32 },
    /// `‖w − w_ref‖_ρ`.
    RhoNorm,
}

/// Reference perturbation subtracted from `w(t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    /// `w_ref = 0`, the continuum equilibrium.
    Zero,
    /// `w_ref` of the discrete equilibrium reached from the sampled `v_*`;
    /// the initial droplet is rescaled to the same discrete mass.
    DiscreteEquilibrium,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub schema: String,
    pub name: String,
    pub dim: usize,
    pub init: InitialCondition,
    /// Symmetry group of the initial data, informational only.
    #[serde(default)]
    pub group: Option<String>,
    /// `(l, k)` of the eigenvalue the fitted exponent is compared with.
    pub target: (u32, u32),
    pub observable: Observable,
    pub reference: Reference,
    pub solver: SolverConfig,
    pub t_end: f64,
    /// Spacing of the observable samples.
    pub sample_every: f64,
    pub window: RateWindow,
    /// Degree of the ball quadrature for `w`.
    pub quadrature_degree: u32,
    pub inversion: InversionOptions,
    /// Pass if `|κ/μ − 1| ≤ rel_tolerance` and `r² ≥ min_r_squared`.
    pub rel_tolerance: f64,
    pub min_r_squared: f64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.schema != EXPERIMENT_SCHEMA {
            return Err(Error::Invalid(format!(
                "unknown experiment schema {:?} (expected {EXPERIMENT_SCHEMA})",
                self.schema
            )));
        }
        if self.solver.dim != self.dim {
            return Err(Error::Invalid("solver dimension differs from the experiment dimension".into()));
        }
        if !(self.t_end > 0.0) || !(self.sample_every > 0.0) {
            return Err(Error::Invalid("need t_end > 0 and sample_every > 0".into()));
        }
        mu_integer(self.target.0, self.target.1, self.dim)?;
        self.solver.validate()
    }

    pub fn target_mu(&self) -> Result<i64> {
        mu_integer(self.target.0, self.target.1, self.dim)
    }

    fn sample_times(&self) -> Vec<f64> {
        let n = (self.t_end / self.sample_every).round() as usize;
        (0..=n).map(|i| (i as f64 * self.sample_every).min(self.t_end)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetRate {
    pub l: u32,
    pub k: u32,
    pub mu: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: String,
    pub name: String,
    pub dim: usize,
    pub target: TargetRate,
    pub observable: Observable,
    pub reference: Reference,
    pub window: RateWindow,
    pub fit: Option<RateFit>,
    pub relative_error: Option<f64>,
    pub rel_tolerance: f64,
    pub min_r_squared: f64,
    /// Every sample lay below the window (or noise floor): nothing decays.
    pub trivial: bool,
    pub pass: bool,
    pub mass_drift: f64,
    pub min_value: f64,
    pub series: Vec<(f64, f64)>,
    pub notes: Vec<String>,
}

/// Evolves the spec's initial condition and records the observable.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    let mu = spec.target_mu()?;
    let config = &spec.solver;
    let mut notes = Vec::new();
    let mut v0 = spec.init.sample(config)?;
    let grid = WeightedGrid::new(spec.dim, 1, spec.quadrature_degree)?;

    let reference = match spec.reference {
        Reference::Zero => None,
        Reference::DiscreteEquilibrium => {
            let (w_ref, mass) = discrete_equilibrium(spec, &grid)?;
            let scale = mass / v0.mass();
            v0.values.iter_mut().for_each(|a| *a *= scale);
            notes.push(format!("initial mass rescaled by {:.3e} to the discrete equilibrium", scale - 1.0));
            Some(w_ref)
        }
    };

    let times = spec.sample_times();
    let traj = evolve(&v0, spec.t_end, &times, config)?;
    let series = observe(spec, &traj, &grid, reference.as_ref())?;

    let (lo, _) = window_floor(spec.window);
    let trivial = series.iter().all(|(_, a)| a.abs() < lo.max(NOISE_FLOOR));
    let (fit, relative_error, pass) = if trivial {
        notes.push("observable never exceeds the window floor; trivially passing".into());
        (None, None, true)
    } else {
        match measure_rate(&series, spec.window) {
            Ok(fit) => {
                let rel = (fit.exponent / mu as f64 - 1.0).abs();
                let pass = rel <= spec.rel_tolerance && fit.r_squared >= spec.min_r_squared;
                (Some(fit), Some(rel), pass)
            }
            Err(Error::InsufficientSamples(n)) => {
                notes.push(format!("only {n} samples inside the fit window"));
                (None, None, false)
            }
            Err(e) => return Err(e),
        }
    };
    let report = ExperimentReport {
        schema: REPORT_SCHEMA.into(),
        name: spec.name.clone(),
        dim: spec.dim,
        target: TargetRate {
            l: spec.target.0,
            k: spec.target.1,
            mu,
        },
        observable: spec.observable.clone(),
        reference: spec.reference,
        window: spec.window,
        fit,
        relative_error,
        rel_tolerance: spec.rel_tolerance,
        min_r_squared: spec.min_r_squared,
        trivial,
        pass,
        mass_drift: traj.mass_drift(),
        min_value: traj.min_value(),
        series,
        notes,
    };
    if let Some(dir) = &spec.output_dir {
        crate::io::write_trajectory(dir, &traj)?;
        std::fs::write(dir.join("report.json"), report_json(&report)?)?;
    }
    Ok(report)
}

/// Pretty JSON with a trailing newline; byte-identical for identical reports.
pub fn report_json(report: &ExperimentReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

fn window_floor(window: RateWindow) -> (f64, f64) {
    match window {
        RateWindow::Amplitude { lo, hi } => (lo, hi),
        _ => (NOISE_FLOOR, f64::INFINITY),
    }
}

/// `w` of the state reached from the sampled `v_*` once it has settled, and
/// its discrete mass.
fn discrete_equilibrium(spec: &ExperimentSpec, grid: &WeightedGrid) -> Result<(PerturbationField, f64)> {
    let config = &spec.solver;
    let v = config.sample(0.0, v_star)?;
    let mass = v.mass();
    let settle = 2.0;
    let traj = evolve(&v, settle, &[settle], config)?;
    let w = v_to_w(&traj.snapshots[0], grid, &spec.inversion)?;
    Ok((w, mass))
}

fn observe(
    spec: &ExperimentSpec,
    traj: &Trajectory,
    grid: &WeightedGrid,
    reference: Option<&PerturbationField>,
) -> Result<Vec<(f64, f64)>> {
    if spec.observable == Observable::CenterOfMass {
        if spec.dim != 1 {
            return Err(Error::Unsupported("center of mass of a radial profile vanishes identically".into()));
        }
        return Ok(traj.steps.iter().map(|s| (s.time, s.center_of_mass)).collect());
    }
    let mode = match spec.observable {
        Observable::ModeAmplitude { l, n, k } => Some(Eigenmode::new(spec.dim, l, n, k)?),
        _ => None,
    };
    let ref_amp = match (&mode, reference) {
        (Some(m), Some(r)) => mode_amplitude_w(r, m)?,
        _ => 0.0,
    };
    traj.times
        .iter()
        .zip(&traj.snapshots)
        .map(|(&t, v)| {
            let w = v_to_w(v, grid, &spec.inversion)?;
            let a = match &mode {
                Some(m) => mode_amplitude_w(&w, m)? - ref_amp,
                None => {
                    let d2: Vec<f64> = match reference {
                        Some(r) => w.values.iter().zip(&r.values).map(|(a, b)| (a - b).powi(2)).collect(),
                        None => w.values.iter().map(|a| a * a).collect(),
                    };
                    grid.integrate(&d2, 1)?.max(0.0).sqrt()
                }
            };
            Ok((t, a))
        })
        .collect()
}

/// Built-in experiment specs at a given resolution.
pub fn builtin(name: &str, h: f64) -> Result<ExperimentSpec> {
    let solver = SolverConfig::new(1, h, 8.0 * h * h);
    let base = |name: &str, init, target, observable, reference, t_end, window, tol| ExperimentSpec {
        schema: EXPERIMENT_SCHEMA.into(),
        name: name.into(),
        dim: 1,
        init,
        group: None,
        target,
        observable,
        reference,
        solver: solver.clone(),
        t_end,
        sample_every: 0.01,
        window,
        quadrature_degree: 40,
        inversion: InversionOptions::default(),
        rel_tolerance: tol,
        min_r_squared: 0.99,
        output_dir: None,
    };
    match name {
        "leading-order" => Ok(base(
            name,
            InitialCondition::Shift { b: vec![0.02] },
            (1, 0),
            Observable::ModeAmplitude { l: 1, n: 1, k: 0 },
            Reference::Zero,
            3.5,
            RateWindow::default(),
            0.05,
        )),
        "centered" => Ok(base(
            name,
            InitialCondition::Dilate { lambda: 1.02 },
            (0, 1),
            Observable::RhoNorm,
            Reference::DiscreteEquilibrium,
            0.8,
            RateWindow::default(),
            0.10,
        )),
        "stationary" => Ok(base(
            name,
            InitialCondition::Stationary,
            (1, 0),
            Observable::ModeAmplitude { l: 1, n: 1, k: 0 },
            Reference::Zero,
            0.5,
            RateWindow::default(),
            0.05,
        )),
        _ => Err(Error::Invalid(format!(
            "unknown built-in experiment {name:?} (leading-order, centered, stationary)"
        ))),
    }
}

pub const BUILTIN_EXPERIMENTS: [&str; 3] = ["leading-order", "centered", "stationary"];
