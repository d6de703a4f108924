#![allow(dead_code)]

use thinfilm::symmetry::GroupName;

/// Power series of `num(s)/den(s)` with integer coefficients, `den[0] = 1`.
pub fn rational_series(num: &[i64], den: &[i64], l_max: usize) -> Vec<i64> {
    assert_eq!(den[0], 1);
    let mut out = vec![0i64; l_max + 1];
    for m in 0..=l_max {
        let mut acc = num.get(m).copied().unwrap_or(0);
        for j in 1..den.len().min(m + 1) {
            acc -= den[j] * out[m - j];
        }
        out[m] = acc;
    }
    out
}

pub fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `1 ± s^n` as a coefficient vector.
pub fn binomial_term(n: usize, sign: i64) -> Vec<i64> {
    let mut v = vec![0; n + 1];
    v[0] = 1;
    v[n] += sign;
    v
}

/// Closed-form harmonic Molien series of the built-in groups.
pub fn closed_form(name: &GroupName, dim: usize, l_max: usize) -> Vec<i64> {
    let (num, den) = match (name, dim) {
        (GroupName::Cyclic(n), 2) => (binomial_term(*n as usize, 1), binomial_term(*n as usize, -1)),
        (GroupName::Dihedral(n), 2) => (vec![1], binomial_term(*n as usize, -1)),
        (GroupName::Cyclic(n), 3) => (
            binomial_term(*n as usize, 1),
            poly_mul(&binomial_term(1, -1), &binomial_term(*n as usize, -1)),
        ),
        (GroupName::Dihedral(n), 3) => (
            binomial_term(*n as usize + 1, 1),
            poly_mul(&binomial_term(2, -1), &binomial_term(*n as usize, -1)),
        ),
        (GroupName::Tetrahedral, 3) => (binomial_term(6, 1), poly_mul(&binomial_term(3, -1), &binomial_term(4, -1))),
        (GroupName::Octahedral, 3) => (binomial_term(9, 1), poly_mul(&binomial_term(4, -1), &binomial_term(6, -1))),
        (GroupName::Icosahedral, 3) => (binomial_term(15, 1), poly_mul(&binomial_term(6, -1), &binomial_term(10, -1))),
        _ => panic!("no closed form for {name} in O({dim})"),
    };
    rational_series(&num, &den, l_max)
}

/// The built-in groups exercised by the tests.
pub fn builtin_groups() -> Vec<(GroupName, usize)> {
    let mut out = Vec::new();
    for n in 1..=6 {
        out.push((GroupName::Cyclic(n), 2));
        out.push((GroupName::Dihedral(n), 2));
        out.push((GroupName::Cyclic(n), 3));
        out.push((GroupName::Dihedral(n), 3));
    }
    out.push((GroupName::Tetrahedral, 3));
    out.push((GroupName::Octahedral, 3));
    out.push((GroupName::Icosahedral, 3));
    out
}
