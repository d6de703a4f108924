//! Spectral data of the linearized thin-film operator on the unit ball.
//!
//! `L w = −ρΔw + 2z·∇w` with `ρ(z) = ½(1 − |z|²)` is self-adjoint for
//! `⟨f, g⟩ = ∫ f g ρ dz`. Its eigenvalues are
//! `λ_{l,k} = 2(l + 2k) + 2k(k + l + N/2 − 1)` and the thin-film
//! linearization `L² + N L` has `μ_{l,k} = λ² + Nλ` on the same
//! eigenfunctions `₂F₁(−k, 1+l+N/2+k; l+N/2; |x|²) |x|^l Y_{l,n}(x/|x|)`.

mod eigen;
pub(crate) mod grid;
pub mod harmonics;
mod operator;
mod table;

pub use eigen::{eval_eigenfunction, Eigenmode, ModeIndex};
pub use grid::{inner_h, inner_rho, GridId, SampledFunction, WeightedGrid};
pub use operator::{apply_l, apply_l_pointwise, apply_l_sampled, apply_thin_film};
pub use table::{spectrum_table, ModeEntry, SpectrumEntry, SpectrumTable};

use crate::error::{Error, Result};
use num_rational::Ratio;

/// Exact rational number used for eigenvalues.
pub type Rational = Ratio<i64>;

fn check_indices(l: u32, dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    if dim == 1 && l > 1 {
        return Err(Error::Domain(format!(
            "N = 1 only admits l in {{0, 1}} (spherical harmonics of S^0), got l = {l}"
        )));
    }
    Ok(())
}

/// `λ_{l,k}`, the eigenvalue of `L`.
pub fn lambda_of(l: u32, k: u32, dim: usize) -> Result<Rational> {
    check_indices(l, dim)?;
    let (l, k) = (l as i64, k as i64);
    let half_n = Rational::new(dim as i64, 2);
    let lambda = Rational::from_integer(2 * (l + 2 * k))
        + Rational::from_integer(2 * k) * (Rational::from_integer(k + l - 1) + half_n);
    // the N/2 contribution is always multiplied by 2k, so λ is an integer
    assert!(lambda.is_integer(), "λ must be an integer, got {lambda}");
    Ok(lambda)
}

/// `μ_{l,k} = λ² + Nλ`, the eigenvalue of `L² + N L`.
pub fn mu_of(l: u32, k: u32, dim: usize) -> Result<Rational> {
    let lambda = lambda_of(l, k, dim)?;
    Ok(lambda * lambda + lambda * Rational::from_integer(dim as i64))
}

/// Integer value of `μ_{l,k}`.
pub fn mu_integer(l: u32, k: u32, dim: usize) -> Result<i64> {
    let mu = mu_of(l, k, dim)?;
    assert!(mu.is_integer());
    Ok(mu.to_integer())
}

fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
    }
    acc
}

/// `N_l`, the dimension of the degree-`l` spherical harmonics on `S^{N−1}`:
/// `N_0 = 1`, `N_1 = N`, and `(N+l−3)!(N+2l−2) / (l!(N−2)!)` for `l ≥ 2`
/// (read as its limit `2` when `N = 2`).
pub fn multiplicity(l: u32, dim: usize) -> Result<u64> {
    check_indices(l, dim)?;
    Ok(match (l, dim) {
        (0, _) => 1,
        (1, n) => n as u64,
        (_, 2) => 2,
        (l, n) => {
            let (l, n) = (l as u64, n as u64);
            // (N+l−3)!/(l!(N−3)!) · (N+2l−2)/(N−2)
            let num = binomial(n + l - 3, l) * (n + 2 * l - 2) as u128;
            let den = (n - 2) as u128;
            assert_eq!(num % den, 0, "multiplicity formula must divide exactly");
            (num / den) as u64
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim_homogeneous(l: u64, n: u64) -> u128 {
        if l + n == 0 {
            return 1;
        }
        binomial(n + l - 1, n - 1)
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(lambda_of(0, 0, 2).unwrap(), Rational::from_integer(0));
        assert_eq!(lambda_of(1, 0, 3).unwrap(), Rational::from_integer(2));
        assert_eq!(mu_integer(1, 0, 3).unwrap(), 10);
        assert_eq!(lambda_of(0, 1, 1).unwrap(), Rational::from_integer(5));
        assert_eq!(mu_integer(0, 1, 1).unwrap(), 30);
        assert_eq!(lambda_of(2, 0, 2).unwrap(), Rational::from_integer(4));
        assert_eq!(mu_integer(2, 0, 2).unwrap(), 24);
        assert_eq!(mu_integer(1, 0, 1).unwrap(), 6);
        // λ_{1,1} = 10 = λ_{5,0} in two dimensions
        assert_eq!(lambda_of(1, 1, 2).unwrap(), Rational::from_integer(10));
        assert_eq!(mu_integer(1, 1, 2).unwrap(), 120);
        assert_eq!(mu_of(1, 1, 2).unwrap(), mu_of(5, 0, 2).unwrap());
        for n in 1..8 {
            assert_eq!(mu_integer(0, 0, n).unwrap(), 0);
        }
    }

    #[test]
    fn one_dimensional_domain_error() {
        assert!(matches!(lambda_of(2, 0, 1), Err(Error::Domain(_))));
        assert!(matches!(mu_of(3, 1, 1), Err(Error::Domain(_))));
        assert!(matches!(multiplicity(2, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn integrality_on_enumeration_grid() {
        for dim in 1..=8usize {
            for l in 0..=20u32 {
                if dim == 1 && l > 1 {
                    continue;
                }
                for k in 0..=(20 - l) / 2 {
                    assert!(lambda_of(l, k, dim).unwrap().is_integer());
                    assert!(mu_of(l, k, dim).unwrap().is_integer());
                }
            }
        }
    }

    #[test]
    fn multiplicity_examples_and_cross_check() {
        assert_eq!(multiplicity(0, 5).unwrap(), 1);
        assert_eq!(multiplicity(2, 3).unwrap(), 5);
        for l in 1..15 {
            assert_eq!(multiplicity(l, 2).unwrap(), 2);
        }
        // dim P_l − dim P_{l−2}
        for n in 3..9u64 {
            for l in 2..14u64 {
                let expect = dim_homogeneous(l, n) - dim_homogeneous(l - 2, n);
                assert_eq!(multiplicity(l as u32, n as usize).unwrap() as u128, expect);
            }
        }
    }

    #[test]
    fn two_dimensional_degeneracy_identity() {
        for l in 0..=10u32 {
            for k in 0..=5u32 {
                let partner = l * (k + 1) + k * (k + 2);
                assert_eq!(lambda_of(l, k, 2).unwrap(), lambda_of(partner, 0, 2).unwrap());
            }
        }
    }
}
