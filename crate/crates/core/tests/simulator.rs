use thinfilm::simulator::{evolve, measure_rate, RateWindow, SolverConfig};
use thinfilm::transform::{translating_solution, v_star};

fn translating_error(h: f64, b: f64, t_end: f64) -> (f64, f64, f64) {
    let config = SolverConfig::new(1, h, 8.0 * h * h);
    let v0 = config.sample(0.0, |x| translating_solution(x, 0.0, &[b])).unwrap();
    let traj = evolve(&v0, t_end, &[t_end], &config).unwrap();
    let last = traj.snapshots.last().unwrap();
    let err = last
        .coords
        .iter()
        .zip(&last.values)
        .map(|(x, v)| (v - translating_solution(x, t_end, &[b])).abs())
        .fold(0.0, f64::max);
    (err, traj.mass_drift(), traj.min_value())
}

#[test]
fn translating_solution_convergence() {
    let hs = [1.0 / 128.0, 1.0 / 256.0, 1.0 / 512.0];
    let results: Vec<_> = hs.iter().map(|&h| translating_error(h, 0.05, 0.5)).collect();
    for (h, (e, drift, min)) in hs.iter().zip(&results) {
        eprintln!("h = {h:.5}: err {e:.3e} drift {drift:.1e} min {min:.1e}");
        assert!(*drift < 1e-8);
        assert!(*min >= 0.0);
    }
    let o1 = (results[0].0 / results[1].0).log2();
    let o2 = (results[1].0 / results[2].0).log2();
    eprintln!("orders {o1:.3} {o2:.3}");
    assert!(results[2].0 < 1e-3);
    assert!(o1.min(o2) >= 1.5);
}

#[test]
fn even_data_stays_even() {
    let config = SolverConfig::new(1, 1.0 / 64.0, 1e-3);
    let v0 = config.sample(0.0, |x| v_star(&[x[0] * 1.05]) * (1.0 + 0.2 * x[0] * x[0])).unwrap();
    let traj = evolve(&v0, 0.2, &[0.2], &config).unwrap();
    let v = &traj.snapshots[0].values;
    let n = v.len();
    let asym = (0..n).map(|i| (v[i] - v[n - 1 - i]).abs()).fold(0.0, f64::max);
    assert!(asym < 1e-14, "asymmetry {asym:e}");
}

#[test]
fn mass_is_conserved_over_many_steps() {
    let config = SolverConfig::new(1, 1.0 / 64.0, 1e-4);
    let v0 = config.sample(0.0, |x| v_star(&[(x[0] - 0.1) / 1.1])).unwrap();
    let traj = evolve(&v0, 0.1, &[], &config).unwrap();
    assert!(traj.steps.len() >= 1000);
    assert!(traj.mass_drift() < 1e-10, "{}", traj.mass_drift());
}

#[test]
fn center_of_mass_decays_at_gamma() {
    let config = SolverConfig::new(1, 1.0 / 128.0, 1e-3);
    let v0 = config.sample(0.0, |x| translating_solution(x, 0.0, &[0.05])).unwrap();
    let traj = evolve(&v0, 2.5, &[], &config).unwrap();
    let series: Vec<(f64, f64)> = traj.steps.iter().map(|s| (s.time, s.center_of_mass)).collect();
    let fit = measure_rate(&series, RateWindow::Amplitude { lo: 1e-8, hi: 1e-3 }).unwrap();
    assert!((fit.exponent / 6.0 - 1.0).abs() < 0.02, "{fit:?}");
}

#[test]
fn stationary_residual_lives_at_the_contact_line() {
    let mut l1 = Vec::new();
    for h in [1.0 / 64.0, 1.0 / 128.0, 1.0 / 256.0] {
        let config = SolverConfig::new(1, h, 1e-6);
        let mesh = config.mesh().unwrap();
        let v0 = config.sample(0.0, v_star).unwrap();
        let r = mesh.rate(&v0.values);
        for (x, r) in mesh.centers.iter().zip(&r) {
            if x.abs() < 1.0 - 2.0 * h {
                assert!(r.abs() < 1e-9, "x = {x}: {r:e}");
            }
        }
        l1.push(r.iter().map(|a| a.abs() * h).sum::<f64>());
    }
    for w in l1.windows(2) {
        assert!(((w[0] / w[1]).log2() - 1.0).abs() < 0.05);
    }
}

#[test]
fn stationary_start_deviates_at_second_order() {
    let devs: Vec<f64> = [1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0]
        .iter()
        .map(|&h| {
            let config = SolverConfig::new(1, h, 8.0 * h * h);
            let v0 = config.sample(0.0, v_star).unwrap();
            let traj = evolve(&v0, 0.2, &[0.2], &config).unwrap();
            let last = &traj.snapshots[0];
            last.coords
                .iter()
                .zip(&last.values)
                .map(|(x, v)| (v - v_star(x)).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    for w in devs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order > 1.8, "{devs:?}");
    }
}
