use crate::error::Result;
use crate::spectrum::{mu_integer, ModeIndex};
use serde::{Deserialize, Serialize};

/// Coefficients `c_{l,n,k}(t) = c_{l,n,k}(0) e^{−μ_{l,k} t}` on a time grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearTrajectory {
    pub dim: usize,
    pub modes: Vec<ModeIndex>,
    pub mu: Vec<i64>,
    pub times: Vec<f64>,
    /// `coeffs[i][j]` is the coefficient of `modes[j]` at `times[i]`.
    pub coeffs: Vec<Vec<f64>>,
}

impl LinearTrajectory {
    pub fn series(&self, mode: ModeIndex) -> Option<Vec<(f64, f64)>> {
        let j = self.modes.iter().position(|m| *m == mode)?;
        Some(self.times.iter().zip(&self.coeffs).map(|(t, c)| (*t, c[j])).collect())
    }
}

/// Exact evolution of a finite eigenmode expansion under `∂_t w + (L² + NL) w = 0`.
pub fn evolve_linear(dim: usize, initial: &[(ModeIndex, f64)], times: &[f64]) -> Result<LinearTrajectory> {
    let mu = initial
        .iter()
        .map(|(m, _)| mu_integer(m.l, m.k, dim))
        .collect::<Result<Vec<_>>>()?;
    let coeffs = times
        .iter()
        .map(|&t| {
            initial
                .iter()
                .zip(&mu)
                .map(|((_, c), &m)| if m == 0 { *c } else { c * (-(m as f64) * t).exp() })
                .collect()
        })
        .collect();
    Ok(LinearTrajectory {
        dim,
        modes: initial.iter().map(|(m, _)| *m).collect(),
        mu,
        times: times.to_vec(),
        coeffs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn translation_mode_in_the_plane() {
        let m = ModeIndex { l: 1, n: 1, k: 0 };
        let traj = evolve_linear(2, &[(m, 0.3)], &[0.0, 1.0]).unwrap();
        let ratio = traj.coeffs[1][0] / traj.coeffs[0][0];
        assert!((ratio / (-8.0f64).exp() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn constant_mode_is_frozen() {
        let m = ModeIndex { l: 0, n: 1, k: 0 };
        let traj = evolve_linear(3, &[(m, 1.25)], &[0.0, 2.0, 10.0]).unwrap();
        assert!(traj.coeffs.iter().all(|c| c[0] == 1.25));
    }

    #[test]
    fn invalid_mode_is_an_error() {
        let m = ModeIndex { l: 2, n: 1, k: 0 };
        assert!(evolve_linear(1, &[(m, 1.0)], &[0.0]).is_err());
    }
}
