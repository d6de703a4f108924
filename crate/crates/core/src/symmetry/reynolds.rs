use super::group::FiniteGroup;
use crate::error::{Error, Result};
use crate::spectrum::grid::sphere_rule;
use crate::spectrum::harmonics::harmonic_basis;
use nalgebra::{DMatrix, SymmetricEigen};

const EIG_TOL: f64 = 1e-8;

/// Matrix of the Reynolds operator `f ↦ |E|⁻¹ Σ_g f∘g⁻¹` on degree-`l`
/// harmonics, in the basis of [`harmonic_basis`].
///
/// The basis is orthogonal on the sphere, so matrix entries are computed by
/// an exact spherical quadrature.
pub fn reynolds_matrix(group: &FiniteGroup, l: u32) -> Result<DMatrix<f64>> {
    let basis = harmonic_basis(group.dim, l)?;
    let rule = sphere_rule(group.dim, 2 * l)?;
    let d = basis.len();
    let values: Vec<Vec<f64>> = basis
        .iter()
        .map(|p| rule.iter().map(|(x, _)| p.eval(x)).collect())
        .collect();
    let norms: Vec<f64> = values
        .iter()
        .map(|v| v.iter().zip(&rule).map(|(a, (_, w))| w * a * a).sum())
        .collect();
    let mut r = DMatrix::<f64>::zeros(d, d);
    for g in &group.elements {
        // (f∘g⁻¹)(x) = f(gᵀ x)
        let gt = g.transpose();
        let moved: Vec<Vec<f64>> = rule
            .iter()
            .map(|(x, _)| (&gt * nalgebra::DVector::from_column_slice(x)).as_slice().to_vec())
            .collect();
        for j in 0..d {
            let fj: Vec<f64> = moved.iter().map(|y| basis[j].eval(y)).collect();
            for i in 0..d {
                let ip: f64 = rule
                    .iter()
                    .zip(&values[i])
                    .zip(&fj)
                    .map(|(((_, w), a), b)| w * a * b)
                    .sum();
                r[(i, j)] += ip / norms[i];
            }
        }
    }
    Ok(r / group.order() as f64)
}

/// `dim(H_l^E)` as the rank of the Reynolds projector.
pub fn invariant_dimension_bruteforce(group: &FiniteGroup, l: u32) -> Result<usize> {
    let r = reynolds_matrix(group, l)?;
    let sym = (&r + r.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut rank = 0;
    for &e in eig.eigenvalues.iter() {
        if e > 1.0 - EIG_TOL {
            rank += 1;
        } else if e > EIG_TOL {
            return Err(Error::RankPrecision(e));
        }
    }
    Ok(rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::{build_group, GroupName};

    #[test]
    fn small_cases() {
        let c2 = build_group(&GroupName::Cyclic(2), 2).unwrap();
        assert_eq!(invariant_dimension_bruteforce(&c2, 0).unwrap(), 1);
        assert_eq!(invariant_dimension_bruteforce(&c2, 2).unwrap(), 2);
        assert_eq!(invariant_dimension_bruteforce(&c2, 3).unwrap(), 0);
        let ico = build_group(&GroupName::Icosahedral, 3).unwrap();
        for l in 1..=5 {
            assert_eq!(invariant_dimension_bruteforce(&ico, l).unwrap(), 0);
        }
        assert_eq!(invariant_dimension_bruteforce(&ico, 6).unwrap(), 1);
    }
}
