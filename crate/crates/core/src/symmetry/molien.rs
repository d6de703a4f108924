use super::group::FiniteGroup;
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

const ROUNDING_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MolienVariant {
    /// `h_E(s) = Σ dim(H_l^E) s^l`, invariant harmonics.
    Harmonic,
    /// `p_E(s)`, invariant homogeneous polynomials.
    Polynomial,
}

/// Coefficients `coeffs[l]` of a Molien series for `l = 0..=l_max`.
///
/// `coeffs[0] = 1` is the mass mode; it is removed by the mass constraint
/// and never affects decay rates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MolienSeries {
    pub variant: MolienVariant,
    pub coeffs: Vec<u64>,
}

impl MolienSeries {
    pub fn l_max(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// `det(I − s g) = Σ_j (−1)^j e_j(g) s^j` with `e_j` the sums of principal minors.
fn characteristic_coeffs(g: &DMatrix<f64>) -> Vec<f64> {
    let n = g.nrows();
    let mut out = vec![1.0];
    for size in 1..=n {
        let mut e = 0.0;
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let sub = DMatrix::from_fn(size, size, |i, j| g[(idx[i], idx[j])]);
            e += sub.determinant();
        }
        out.push(if size % 2 == 1 { -e } else { e });
    }
    out
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite matrix entries")
}

/// Power series of `numerator / det(I − s g)` up to `s^{l_max}`, in exact
/// rational arithmetic on the floating-point minors.
fn element_series(g: &DMatrix<f64>, numerator: &[i64], l_max: usize) -> Vec<BigRational> {
    let q: Vec<BigRational> = characteristic_coeffs(g).into_iter().map(exact).collect();
    let mut inv: Vec<BigRational> = Vec::with_capacity(l_max + 1);
    for m in 0..=l_max {
        let mut acc = if m == 0 {
            BigRational::from_integer(BigInt::from(1))
        } else {
            BigRational::zero()
        };
        for j in 1..q.len().min(m + 1) {
            acc -= &q[j] * &inv[m - j];
        }
        inv.push(acc);
    }
    (0..=l_max)
        .map(|m| {
            let mut acc = BigRational::zero();
            for (j, &c) in numerator.iter().enumerate() {
                if c != 0 && j <= m {
                    acc += &inv[m - j] * BigRational::from_integer(BigInt::from(c));
                }
            }
            acc
        })
        .collect()
}

fn molien(group: &FiniteGroup, l_max: usize, variant: MolienVariant) -> Result<MolienSeries> {
    let numerator: &[i64] = match variant {
        MolienVariant::Harmonic => &[1, 0, -1],
        MolienVariant::Polynomial => &[1],
    };
    let mut total = vec![BigRational::zero(); l_max + 1];
    for g in &group.elements {
        for (t, s) in total.iter_mut().zip(element_series(g, numerator, l_max)) {
            *t += s;
        }
    }
    let order = BigRational::from_integer(BigInt::from(group.order()));
    let mut coeffs = Vec::with_capacity(l_max + 1);
    for (index, t) in total.into_iter().enumerate() {
        let value = (t / &order).to_f64().unwrap_or(f64::NAN);
        let rounded = value.round();
        let residual = (value - rounded).abs();
        if !(residual < ROUNDING_TOL) || rounded < 0.0 {
            return Err(Error::MolienResidual {
                index,
                value,
                residual,
            });
        }
        coeffs.push(rounded as u64);
    }
    Ok(MolienSeries { variant, coeffs })
}

/// `dim(H_l^E)` from Molien's formula `h_E(s) = |E|⁻¹ Σ_g (1 − s²)/det(I − s g)`.
pub fn molien_harmonic(group: &FiniteGroup, l_max: usize) -> Result<MolienSeries> {
    molien(group, l_max, MolienVariant::Harmonic)
}

/// Invariant homogeneous polynomials, `p_E(s) = |E|⁻¹ Σ_g 1/det(I − s g)`.
pub fn molien_polynomial(group: &FiniteGroup, l_max: usize) -> Result<MolienSeries> {
    molien(group, l_max, MolienVariant::Polynomial)
}
