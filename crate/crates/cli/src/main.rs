use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use thinfilm::experiment::{builtin, report_json, run_experiment, ExperimentReport, ExperimentSpec, InitialCondition};
use thinfilm::io;
use thinfilm::linops::{norms, norms_sampled, CubicSpline};
use thinfilm::simulator::{evolve, measure_rate, RateWindow, SolverConfig};
use thinfilm::spectrum::{mu_integer, spectrum_table, Eigenmode, WeightedGrid};
use thinfilm::symmetry::{build_group, molien_harmonic, molien_polynomial, FiniteGroup, GroupName};
use thinfilm::transform::{
    diagnostics, mode_amplitude_v, mode_amplitude_w, v_to_w, w_to_v, InversionOptions, SelfSimilarFrame,
};

#[derive(Parser)]
#[command(name = "thinfilm", version, about = "Spectra, symmetry and rate experiments for the confined thin film equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    /// harmonic series h_E
    H,
    /// polynomial series p_E
    P,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    P2c,
    C2p,
    V2w,
    W2v,
    Diag,
    Amplitude,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues of L² + NL up to a bound, grouped by value
    Spectrum {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        mu_max: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Molien series of a finite group
    Molien {
        /// cyclic:n, dihedral:n, tetra, octa, icosa
        #[arg(long, conflicts_with = "group_file")]
        group: Option<String>,
        /// JSON file with `dim` and `elements` or `generators`
        #[arg(long)]
        group_file: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 12)]
        lmax: usize,
        #[arg(long, value_enum, default_value = "h")]
        variant: Variant,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Changes of variables on field files
    Transform {
        #[arg(long, value_enum)]
        op: Op,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// l,n,k for `amplitude`
        #[arg(long)]
        mode: Option<String>,
        /// Mass of the self-similar frame (defaults to the field's mass)
        #[arg(long)]
        mass: Option<f64>,
        /// Quadrature degree of the ball grid for `v2w`
        #[arg(long, default_value_t = 40)]
        degree: u32,
        #[arg(long, default_value_t = 0.1)]
        smallness: f64,
    },
    /// Evolve the confined equation and write a trajectory directory
    Simulate {
        /// stationary | shift:b | dilate:λ | file:path | mode:l,n,k:amp
        #[arg(long)]
        init: String,
        #[arg(long = "T")]
        t_end: f64,
        #[arg(long)]
        h: f64,
        /// Defaults to 8h²
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        /// Snapshot spacing (defaults to T/100)
        #[arg(long)]
        every: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit a decay exponent to a trajectory directory
    Rates {
        #[arg(long)]
        dir: PathBuf,
        /// com | rho-norm | mode:l,n,k
        #[arg(long, default_value = "mode:1,1,0")]
        observable: String,
        /// l,k of the eigenvalue the fit is compared with
        #[arg(long)]
        target: String,
        /// amp:lo,hi | time:t0,t1 | all
        #[arg(long, default_value = "amp:1e-9,1e-2")]
        window: String,
        #[arg(long, default_value_t = 40)]
        degree: u32,
    },
    /// W-norm components of an eigenfunction or of a perturbation file
    Norms {
        #[arg(long, conflicts_with = "input")]
        mode: Option<String>,
        #[arg(long)]
        dim: Option<usize>,
        /// Perturbation CSV written by `transform --op v2w` (N = 1)
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Run rate experiments; exit code 0 iff every report passes
    Experiment {
        /// Experiment spec files (JSON)
        #[arg(long = "spec")]
        specs: Vec<PathBuf>,
        /// Built-in experiments: leading-order, centered, stationary
        #[arg(long = "builtin")]
        builtins: Vec<String>,
        /// Overrides the grid spacing (built-ins default to 1/256)
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long = "T")]
        t_end: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn parse_list<T: std::str::FromStr>(s: &str, n: usize, what: &str) -> Result<Vec<T>> {
    let out: Vec<T> = s
        .split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| anyhow!("cannot parse {what} {s:?}")))
        .collect::<Result<_>>()?;
    if out.len() != n {
        bail!("{what} needs {n} comma separated values, got {s:?}");
    }
    Ok(out)
}

fn parse_window(s: &str) -> Result<RateWindow> {
    let (head, rest) = s.split_once(':').unwrap_or((s, ""));
    Ok(match head {
        "all" => RateWindow::All,
        "amp" => {
            let v = parse_list::<f64>(rest, 2, "amplitude window")?;
            RateWindow::Amplitude { lo: v[0], hi: v[1] }
        }
        "time" => {
            let v = parse_list::<f64>(rest, 2, "time window")?;
            RateWindow::Time { t0: v[0], t1: v[1] }
        }
        _ => bail!("unknown window {s:?} (amp:lo,hi | time:t0,t1 | all)"),
    })
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Spectrum { dim, mu_max, format } => {
            let table = spectrum_table(dim, mu_max)?;
            match format {
                Format::Json => print_json(&table)?,
                Format::Csv => {
                    println!("mu,multiplicity,l,n,k,lambda");
                    for e in &table.entries {
                        for m in &e.modes {
                            println!("{},{},{},{},{},{}", e.mu, e.multiplicity, m.l, m.n, m.k, m.lambda);
                        }
                    }
                }
            }
        }
        Command::Molien {
            group,
            group_file,
            dim,
            lmax,
            variant,
            format,
        } => {
            let g: FiniteGroup = match (group, group_file) {
                (_, Some(path)) => FiniteGroup::from_json_file(&path)?,
                (Some(name), None) => build_group(&name.parse::<GroupName>()?, dim)?,
                (None, None) => bail!("give --group or --group-file"),
            };
            let series = match variant {
                Variant::H => molien_harmonic(&g, lmax)?,
                Variant::P => molien_polynomial(&g, lmax)?,
            };
            match format {
                Format::Json => print_json(&serde_json::json!({
                    "group": g.name.to_string(),
                    "dim": g.dim,
                    "order": g.order(),
                    "series": series,
                }))?,
                Format::Csv => {
                    println!("l,dim");
                    for (l, c) in series.coeffs.iter().enumerate() {
                        println!("{l},{c}");
                    }
                }
            }
        }
        Command::Transform {
            op,
            input,
            out,
            mode,
            mass,
            degree,
            smallness,
        } => transform(op, &input, out.as_deref(), mode.as_deref(), mass, degree, smallness)?,
        Command::Simulate {
            init,
            t_end,
            h,
            dt,
            dim,
            every,
            out,
        } => {
            let mut config = SolverConfig::new(dim, h, dt.unwrap_or(8.0 * h * h));
            config.dt_min = config.dt * 1e-4;
            let init: InitialCondition = init.parse()?;
            let v0 = init.sample(&config)?;
            let every = every.unwrap_or(t_end / 100.0);
            let n = (t_end / every).round() as usize;
            let times: Vec<f64> = (0..=n).map(|i| (i as f64 * every).min(t_end)).collect();
            let traj = evolve(&v0, t_end, &times, &config)?;
            io::write_trajectory(&out, &traj)?;
            std::fs::write(out.join("config.json"), serde_json::to_string_pretty(&config)? + "\n")?;
            print_json(&serde_json::json!({
                "snapshots": traj.snapshots.len(),
                "steps": traj.steps.len() - 1,
                "mass_drift": traj.mass_drift(),
                "min_value": traj.min_value(),
            }))?;
        }
        Command::Rates {
            dir,
            observable,
            target,
            window,
            degree,
        } => {
            let lk = parse_list::<u32>(&target, 2, "target")?;
            let traj = io::read_trajectory(&dir)?;
            let first = traj.snapshots.first().ok_or_else(|| anyhow!("{} holds no snapshots", dir.display()))?;
            let dim = first.dim;
            let target_mu = mu_integer(lk[0], lk[1], dim)?;
            let series: Vec<(f64, f64)> = if observable == "com" {
                traj.steps.iter().map(|s| (s.time, s.center_of_mass)).collect()
            } else {
                let grid = WeightedGrid::new(dim, 1, degree)?;
                let opts = InversionOptions::default();
                let mode = match observable.strip_prefix("mode:") {
                    Some(idx) => {
                        let v = parse_list::<u32>(idx, 3, "mode")?;
                        Some(Eigenmode::new(dim, v[0], v[1], v[2])?)
                    }
                    None if observable == "rho-norm" => None,
                    None => bail!("unknown observable {observable:?} (com | rho-norm | mode:l,n,k)"),
                };
                traj.snapshots
                    .par_iter()
                    .map(|v| {
                        let w = v_to_w(v, &grid, &opts)?;
                        let a = match &mode {
                            Some(m) => mode_amplitude_w(&w, m)?,
                            None => {
                                let sq: Vec<f64> = w.values.iter().map(|a| a * a).collect();
                                grid.integrate(&sq, 1)?.sqrt()
                            }
                        };
                        Ok((v.time, a))
                    })
                    .collect::<Result<_>>()?
            };
            let win = parse_window(&window)?;
            let fit = measure_rate(&series, win)?;
            print_json(&serde_json::json!({
                "target_mu": target_mu,
                "fitted_exponent": fit.exponent,
                "r_squared": fit.r_squared,
                "window": win,
                "samples": fit.samples,
                "t_start": fit.t_start,
                "t_end": fit.t_end,
            }))?;
        }
        Command::Norms { mode, dim, input } => {
            let report = match (mode, input) {
                (Some(m), _) => {
                    let v = parse_list::<u32>(&m, 3, "mode")?;
                    let dim = dim.ok_or_else(|| anyhow!("--mode needs --dim"))?;
                    norms(&Eigenmode::new(dim, v[0], v[1], v[2])?.polynomial()?)?
                }
                (None, Some(path)) => {
                    let w = io::read_perturbation(&path)?;
                    if w.dim() != 1 {
                        bail!("sampled norms are implemented for N = 1 perturbations");
                    }
                    let mut pairs: Vec<(f64, f64)> =
                        w.grid.nodes().iter().zip(&w.values).map(|(z, a)| (z[0], *a)).collect();
                    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
                    let (mut z, mut vals): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
                    // ball nodes are interior; close the interval by spline extension
                    let spline = CubicSpline::with_estimated_ends(z.clone(), vals.clone())?;
                    z.insert(0, -1.0);
                    vals.insert(0, spline.eval(-1.0));
                    z.push(1.0);
                    vals.push(spline.eval(1.0));
                    norms_sampled(&z, &vals)?
                }
                (None, None) => bail!("give --mode (with --dim) or --input"),
            };
            print_json(&report)?;
        }
        Command::Experiment {
            specs,
            builtins,
            h,
            dt,
            t_end,
            out,
            jobs,
        } => return experiments(specs, builtins, h, dt, t_end, out, jobs),
    }
    Ok(true)
}

fn transform(
    op: Op,
    input: &Path,
    out: Option<&Path>,
    mode: Option<&str>,
    mass: Option<f64>,
    degree: u32,
    smallness: f64,
) -> Result<()> {
    let need_out = || out.ok_or_else(|| anyhow!("this operation writes a file; give --out"));
    match op {
        Op::P2c | Op::C2p => {
            let v = io::read_field(input)?;
            let frame = SelfSimilarFrame::new(v.dim, mass.unwrap_or_else(|| v.mass()))?;
            let res = match op {
                Op::P2c => frame.physical_to_confined(&v)?,
                _ => frame.confined_to_physical(&v)?,
            };
            io::write_field(need_out()?, &res)?;
        }
        Op::V2w => {
            let v = io::read_field(input)?;
            let grid = WeightedGrid::new(v.dim, 1, degree)?;
            let opts = InversionOptions {
                smallness,
                ..InversionOptions::default()
            };
            io::write_perturbation(need_out()?, &v_to_w(&v, &grid, &opts)?)?;
        }
        Op::W2v => {
            let w = io::read_perturbation(input)?;
            io::write_field(need_out()?, &w_to_v(&w)?)?;
        }
        Op::Diag => print_json(&diagnostics(&io::read_field(input)?)?)?,
        Op::Amplitude => {
            let m = mode.ok_or_else(|| anyhow!("--op amplitude needs --mode l,n,k"))?;
            let idx = parse_list::<u32>(m, 3, "mode")?;
            let v = io::read_field(input)?;
            let mode = Eigenmode::new(v.dim, idx[0], idx[1], idx[2])?;
            let grid = WeightedGrid::new(v.dim, 1, degree)?;
            let opts = InversionOptions {
                smallness,
                ..InversionOptions::default()
            };
            let w = v_to_w(&v, &grid, &opts).context("inverting the droplet")?;
            print_json(&serde_json::json!({
                "mode": mode.index(),
                "mu": mode.mu.to_integer(),
                "amplitude_w": mode_amplitude_w(&w, &mode)?,
                "amplitude_v": mode_amplitude_v(&v, &mode)?,
            }))?;
        }
    }
    Ok(())
}

fn experiments(
    specs: Vec<PathBuf>,
    builtins: Vec<String>,
    h: Option<f64>,
    dt: Option<f64>,
    t_end: Option<f64>,
    out: Option<PathBuf>,
    jobs: usize,
) -> Result<bool> {
    let mut all: Vec<ExperimentSpec> = Vec::new();
    for path in &specs {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        all.push(serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?);
    }
    for name in &builtins {
        all.push(builtin(name, 1.0 / 256.0)?);
    }
    if all.is_empty() {
        bail!("nothing to run; give --spec or --builtin");
    }
    for spec in &mut all {
        if let Some(h) = h {
            spec.solver.h = h;
            spec.solver.dt = 8.0 * h * h;
        }
        if let Some(dt) = dt {
            spec.solver.dt = dt;
        }
        spec.solver.dt_min = spec.solver.dt * 1e-4;
        if let Some(t) = t_end {
            spec.t_end = t;
        }
        if let Some(dir) = &out {
            spec.output_dir = Some(dir.join(&spec.name));
        }
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    let reports: Vec<Result<ExperimentReport>> =
        pool.install(|| all.par_iter().map(|s| run_experiment(s).map_err(Into::into)).collect());
    let mut ok = true;
    let mut done = Vec::new();
    for (spec, rep) in all.iter().zip(reports) {
        let rep = rep.with_context(|| format!("experiment {}", spec.name))?;
        ok &= rep.pass;
        done.push(rep);
    }
    if done.len() == 1 {
        print!("{}", report_json(&done[0])?);
    } else {
        println!("{}", serde_json::to_string_pretty(&done)?);
    }
    Ok(ok)
}
