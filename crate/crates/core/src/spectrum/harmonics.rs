//! Real harmonic polynomials `|x|^l Y_{l,n}(x/|x|)` for N = 1, 2, 3.
//!
//! Index convention for `n` (1-based):
//!
//! * N = 1: `n = 1`, `Y(±1) = (±1)^l`, i.e. the polynomial `x^l`, `l ∈ {0, 1}`.
//! * N = 2: `n = 1` is `Re (x + iy)^l = r^l cos(lφ)`, `n = 2` is
//!   `Im (x + iy)^l = r^l sin(lφ)` (only `n = 1` for `l = 0`).
//! * N = 3: real spherical harmonics orthonormal on the unit sphere;
//!   `n = 2m − 1` and `n = 2m` are the cosine and sine type of order
//!   `m = 1..=l`, and `n = 2l + 1` is the zonal (`m = 0`) harmonic. For
//!   `l = 1` this yields multiples of `x, y, z` in that order.
//! * N ≥ 4: only `l = 0` (the constant) and `l = 1` (`n ↦ x_n`).

use crate::error::{Error, Result};
use crate::linops::Polynomial;
use std::f64::consts::PI;

/// Number of harmonics of degree `l` in the supported dimensions.
pub(crate) fn harmonic_count(dim: usize, l: u32) -> Option<u32> {
    match dim {
        1 if l <= 1 => Some(1),
        1 => None,
        2 => Some(if l == 0 { 1 } else { 2 }),
        3 => Some(2 * l + 1),
        d if d >= 4 && l == 0 => Some(1),
        d if d >= 4 && l == 1 => Some(d as u32),
        _ => None,
    }
}

/// `(Re (x+iy)^m, Im (x+iy)^m)` as polynomials in `nvars ≥ 2` variables.
fn planar_power(nvars: usize, m: u32) -> (Polynomial, Polynomial) {
    let x = Polynomial::coordinate(nvars, 0);
    let y = Polynomial::coordinate(nvars, 1);
    let mut c = Polynomial::constant(nvars, 1.0);
    let mut s = Polynomial::zero(nvars);
    for _ in 0..m {
        let c_next = &x * &c - &y * &s;
        let s_next = &x * &s + &y * &c;
        c = c_next;
        s = s_next;
    }
    (c, s)
}

/// `Q_l^m(z, r²)` with `r^l P_l^m(z/r) = Q_l^m · (x²+y²)^{m/2}` (no Condon–Shortley phase).
fn legendre_factor(l: u32, m: u32) -> Polynomial {
    let z = Polynomial::coordinate(3, 2);
    let r2 = Polynomial::radius_squared(3);
    let double_fact: f64 = (1..=m).map(|j| (2 * j - 1) as f64).product();
    let q_mm = Polynomial::constant(3, double_fact);
    if l == m {
        return q_mm;
    }
    let mut prev = q_mm.clone();
    let mut cur = z.scale((2 * m + 1) as f64) * q_mm;
    for ll in (m + 2)..=l {
        let a = (2 * ll - 1) as f64;
        let b = (ll + m - 1) as f64;
        let next = (&z * &cur).scale(a) - (&r2 * &prev).scale(b);
        let next = next.scale(1.0 / (ll - m) as f64);
        prev = cur;
        cur = next;
    }
    cur
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|j| j as f64).product()
}

/// Homogeneous harmonic polynomial `|x|^l Y_{l,n}(x/|x|)`.
pub fn solid_harmonic(dim: usize, l: u32, n: u32) -> Result<Polynomial> {
    let count = harmonic_count(dim, l).ok_or_else(|| {
        if dim == 1 {
            Error::Domain(format!("N = 1 only admits l in {{0, 1}}, got l = {l}"))
        } else {
            Error::Unsupported(format!("angular evaluation for N = {dim}, l = {l}"))
        }
    })?;
    if n == 0 || n > count {
        return Err(Error::Domain(format!(
            "harmonic index n = {n} outside 1..={count} for N = {dim}, l = {l}"
        )));
    }
    Ok(match dim {
        1 => Polynomial::coordinate(1, 0).pow(l),
        2 => {
            let (c, s) = planar_power(2, l);
            if n == 1 {
                c
            } else {
                s
            }
        }
        3 => {
            let (m, kind) = if n == 2 * l + 1 { (0, 0) } else { ((n + 1) / 2, 2 - n % 2) };
            let mut norm = ((2 * l + 1) as f64 / (4.0 * PI) * factorial(l - m) / factorial(l + m)).sqrt();
            if m > 0 {
                norm *= 2f64.sqrt();
            }
            let (c, s) = planar_power(3, m);
            let angular = if kind == 2 { s } else { c };
            (legendre_factor(l, m) * angular).scale(norm)
        }
        d if l == 0 => Polynomial::constant(d, 1.0),
        d => Polynomial::coordinate(d, (n - 1) as usize),
    })
}

/// All harmonic polynomials of degree `l`, in `n` order.
pub fn harmonic_basis(dim: usize, l: u32) -> Result<Vec<Polynomial>> {
    let count = harmonic_count(dim, l)
        .ok_or_else(|| Error::Unsupported(format!("harmonic basis for N = {dim}, l = {l}")))?;
    (1..=count).map(|n| solid_harmonic(dim, l, n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonics_are_harmonic_and_homogeneous() {
        for dim in 2..=3 {
            for l in 0..=6 {
                for p in harmonic_basis(dim, l).unwrap() {
                    assert!(p.laplacian().max_coeff() < 1e-10 * p.max_coeff().max(1.0));
                    let euler = p.radial_derivative() - p.scale(l as f64);
                    assert!(euler.max_coeff() < 1e-12 * p.max_coeff().max(1.0));
                }
            }
        }
    }

    #[test]
    fn degree_one_is_coordinates() {
        let b = harmonic_basis(3, 1).unwrap();
        let c = (3.0 / (4.0 * PI)).sqrt();
        for (i, p) in b.iter().enumerate() {
            let e = Polynomial::coordinate(3, i).scale(c);
            assert!((p.clone() - e).max_coeff() < 1e-14);
        }
        let b2 = harmonic_basis(2, 1).unwrap();
        assert_eq!(b2[0], Polynomial::coordinate(2, 0));
        assert_eq!(b2[1], Polynomial::coordinate(2, 1));
    }

    #[test]
    fn unsupported_cases() {
        assert!(matches!(solid_harmonic(1, 2, 1), Err(Error::Domain(_))));
        assert!(matches!(solid_harmonic(4, 2, 1), Err(Error::Unsupported(_))));
        assert!(solid_harmonic(3, 2, 6).is_err());
    }
}
