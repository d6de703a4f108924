use super::grid::{rho, WeightedGrid};
use crate::linops::Polynomial;

/// `L p = −ρΔp + 2 z·∇p`, exact on coefficients.
pub fn apply_l(p: &Polynomial) -> Polynomial {
    let rho = Polynomial::rho(p.nvars());
    p.radial_derivative().scale(2.0) - &rho * &p.laplacian()
}

/// `(L² + N L) p`.
pub fn apply_thin_film(p: &Polynomial) -> Polynomial {
    let lp = apply_l(p);
    apply_l(&lp) + lp.scale(p.nvars() as f64)
}

/// Pointwise `−ρΔw + 2z·∇w` from supplied derivative data.
pub fn apply_l_pointwise(z: &[f64], gradient: &[f64], laplacian: f64) -> f64 {
    let drift: f64 = z.iter().zip(gradient).map(|(a, b)| a * b).sum();
    -rho(z) * laplacian + 2.0 * drift
}

/// `L p` at the nodes of a grid.
pub fn apply_l_sampled(p: &Polynomial, grid: &WeightedGrid) -> Vec<f64> {
    let grad = p.gradient();
    let lap = p.laplacian();
    grid.nodes()
        .iter()
        .map(|z| {
            let g: Vec<f64> = grad.iter().map(|d| d.eval(z)).collect();
            apply_l_pointwise(z, &g, lap.eval(z))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_and_coordinates() {
        for dim in 1..=3 {
            assert!(apply_l(&Polynomial::constant(dim, 3.0)).is_zero());
            for i in 0..dim {
                let z = Polynomial::coordinate(dim, i);
                assert_eq!(apply_l(&z), z.scale(2.0));
            }
        }
    }

    #[test]
    fn first_radial_mode_eigenvalue() {
        for dim in 1..=4 {
            let n = dim as f64;
            let w = Polynomial::constant(dim, 1.0)
                - Polynomial::radius_squared(dim).scale((n + 4.0) / n);
            let diff = apply_l(&w) - w.scale(n + 4.0);
            assert!(diff.max_coeff() < 1e-13);
        }
    }

    #[test]
    fn sampled_matches_symbolic() {
        let grid = WeightedGrid::new(2, 1, 6).unwrap();
        let p = Polynomial::coordinate(2, 0).pow(3) + Polynomial::radius_squared(2);
        let lp = apply_l(&p);
        for (z, v) in grid.nodes().iter().zip(apply_l_sampled(&p, &grid)) {
            assert!((lp.eval(z) - v).abs() < 1e-13);
        }
    }
}
