use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thinfilm::linops::{norms, Polynomial};
use thinfilm::simulator::{evolve_linear, measure_rate, RateWindow};
use thinfilm::spectrum::{lambda_of, mu_of, multiplicity, Eigenmode, ModeIndex, WeightedGrid};

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn mu_grows_with_both_indices(l in 0u32..12, k in 0u32..8, dim in 2usize..7) {
        let mu = mu_of(l, k, dim).unwrap();
        let lam = lambda_of(l, k, dim).unwrap();
        prop_assert_eq!(mu, lam * lam + lam * num_rational::Ratio::from_integer(dim as i64));
        prop_assert!(mu_of(l + 1, k, dim).unwrap() > mu);
        prop_assert!(mu_of(l, k + 1, dim).unwrap() > mu);
        prop_assert!(multiplicity(l, dim).unwrap() >= 1);
    }

    #[test]
    fn fitted_exponent_of_a_clean_exponential(kappa in 0.5f64..60.0, amp in 1e-3f64..1.0) {
        let t1 = 10.0 / kappa;
        let series: Vec<(f64, f64)> = (0..=200)
            .map(|i| {
                let t = t1 * i as f64 / 200.0;
                (t, amp * (-kappa * t).exp())
            })
            .collect();
        let fit = measure_rate(&series, RateWindow::All).unwrap();
        prop_assert!((fit.exponent / kappa - 1.0).abs() < 1e-9);
    }
}

/// `⟨ψ, w⟩_ρ / ‖ψ‖²_ρ` on an exact grid.
fn project(w: &Polynomial, mode: &Eigenmode, grid: &WeightedGrid) -> f64 {
    let psi = mode.polynomial().unwrap();
    let prod: Vec<f64> = grid.nodes().iter().map(|z| psi.eval(z) * w.eval(z)).collect();
    grid.integrate(&prod, 1).unwrap() / mode.rho_norm().powi(2)
}

#[test]
fn linear_evolution_commutes_with_projection() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for dim in [1usize, 2, 3] {
        let mut modes = Vec::new();
        for l in 0..=if dim == 1 { 1 } else { 3 } {
            for k in 0..=2 {
                let count = if dim == 1 { 1 } else if dim == 2 { if l == 0 { 1 } else { 2 } } else { 2 * l + 1 };
                for n in 1..=count {
                    modes.push(Eigenmode::new(dim, l, n, k).unwrap());
                }
            }
        }
        let coeffs: Vec<f64> = modes.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
        let grid = WeightedGrid::for_products(dim, 2 * 7).unwrap();
        let initial: Vec<(ModeIndex, f64)> = modes.iter().map(|m| m.index()).zip(coeffs.iter().copied()).collect();
        let t = 0.05;
        let traj = evolve_linear(dim, &initial, &[t]).unwrap();
        let mut w_t = Polynomial::zero(dim);
        for (m, c) in modes.iter().zip(&traj.coeffs[0]) {
            w_t = w_t + m.polynomial().unwrap().scale(*c);
        }
        for (j, m) in modes.iter().enumerate() {
            let projected_later = project(&w_t, m, &grid);
            let mut w0 = Polynomial::zero(dim);
            for (mm, c) in modes.iter().zip(&coeffs) {
                w0 = w0 + mm.polynomial().unwrap().scale(*c);
            }
            let evolved_projection = project(&w0, m, &grid) * (-m.mu_f64() * t).exp();
            assert!(
                (projected_later - evolved_projection).abs() < 1e-11,
                "N={dim} mode {j}: {projected_later} vs {evolved_projection}"
            );
            assert!((projected_later - traj.coeffs[0][j]).abs() < 1e-11);
        }
    }
}

fn random_polynomial(rng: &mut ChaCha8Rng, dim: usize, degree: u32) -> Polynomial {
    let mut p = Polynomial::zero(dim);
    let mut exps = vec![vec![]];
    for _ in 0..dim {
        exps = exps
            .into_iter()
            .flat_map(|e: Vec<u32>| (0..=degree).map(move |d| [e.clone(), vec![d]].concat()))
            .collect();
    }
    for e in exps.into_iter().filter(|e| e.iter().sum::<u32>() <= degree) {
        p.add_term(e, rng.gen_range(-1.0..1.0));
    }
    p
}

#[test]
fn hardy_constant_is_stable() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut ratios = Vec::new();
    for i in 0..200 {
        let dim = 1 + i % 2;
        let p = random_polynomial(&mut rng, dim, 6);
        let r = norms(&p).unwrap();
        let c = r.l2 / (r.rho_l2 + r.rho_grad_l2);
        assert!(c.is_finite() && c > 0.0);
        ratios.push(c);
    }
    let max = ratios.iter().copied().fold(0.0, f64::max);
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    eprintln!("Hardy ratio over 200 samples: min {min:.3}, max {max:.3}");
    assert!(max < 50.0 && max / min < 50.0);
}
