//! Dense multivariate polynomials with `f64` coefficients.
//!
//! Eigenfunctions of the linearized operator are polynomials, so every
//! derivative needed by the operator and by the norms is taken exactly on the
//! coefficient level.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent vector of a monomial.
pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, f64>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: f64) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The coordinate function `x_i` (0-based).
    pub fn coordinate(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "coordinate index {i} out of range for {nvars} variables");
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, 1.0);
        p
    }

    /// `|x|² = Σ x_i²`.
    pub fn radius_squared(nvars: usize) -> Self {
        let mut p = Self::zero(nvars);
        for i in 0..nvars {
            let mut e = vec![0; nvars];
            e[i] = 2;
            p.add_term(e, 1.0);
        }
        p
    }

    /// The weight `ρ(z) = ½(1 − |z|²)`.
    pub fn rho(nvars: usize) -> Self {
        (Self::constant(nvars, 1.0) - Self::radius_squared(nvars)).scale(0.5)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, f64)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn add_term(&mut self, exponents: Monomial, coeff: f64) {
        debug_assert_eq!(exponents.len(), self.nvars);
        if coeff == 0.0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exponents) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == 0.0 {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `0` for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.nvars, 1.0);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            if m[i] > 0 {
                let mut e = m.clone();
                e[i] -= 1;
                out.add_term(e, c * m[i] as f64);
            }
        }
        out
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars).map(|i| self.derivative(i)).collect()
    }

    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero(self.nvars);
        for i in 0..self.nvars {
            out = out + self.derivative(i).derivative(i);
        }
        out
    }

    /// `z · ∇p` (Euler operator).
    pub fn radial_derivative(&self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let deg: u32 = m.iter().sum();
            out.add_term(m.clone(), c * deg as f64);
        }
        out
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.nvars);
        let deg = self.degree() as usize;
        // powers[i][k] = x_i^k
        let powers: Vec<Vec<f64>> = x
            .iter()
            .map(|&xi| {
                let mut p = Vec::with_capacity(deg + 1);
                let mut acc = 1.0;
                for _ in 0..=deg {
                    p.push(acc);
                    acc *= xi;
                }
                p
            })
            .collect();
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter()
                    .enumerate()
                    .fold(*c, |acc, (i, &e)| acc * powers[i][e as usize])
            })
            .sum()
    }

    /// `p(A x)` for a square matrix `A` given row-major.
    pub fn compose_linear(&self, a: &[f64]) -> Self {
        let n = self.nvars;
        assert_eq!(a.len(), n * n);
        let rows: Vec<Self> = (0..n)
            .map(|i| {
                let mut r = Self::zero(n);
                for j in 0..n {
                    let mut e = vec![0; n];
                    e[j] = 1;
                    r.add_term(e, a[i * n + j]);
                }
                r
            })
            .collect();
        let mut out = Self::zero(n);
        for (m, c) in &self.terms {
            let mut term = Self::constant(n, *c);
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    term = &term * &rows[i].pow(e);
                }
            }
            out = out + term;
        }
        out
    }

    /// Largest absolute coefficient.
    pub fn max_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |a, c| a.max(c.abs()))
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars);
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        self + rhs.scale(-1.0)
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let e: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_of_radius_squared() {
        let r2 = Polynomial::radius_squared(3);
        assert_eq!(r2.laplacian(), Polynomial::constant(3, 6.0));
        assert_eq!(r2.radial_derivative(), r2.scale(2.0));
        let g = r2.gradient();
        assert_eq!(g[1], Polynomial::coordinate(3, 1).scale(2.0));
    }

    #[test]
    fn eval_and_product() {
        let x = Polynomial::coordinate(2, 0);
        let y = Polynomial::coordinate(2, 1);
        let p = (x.clone() + y.clone()) * (x - y);
        assert!((p.eval(&[3.0, 2.0]) - 5.0).abs() < 1e-15);
        assert_eq!(p.degree(), 2);
    }

    #[test]
    fn cancellation_leaves_zero() {
        let x = Polynomial::coordinate(1, 0);
        let z = x.clone() - x;
        assert!(z.is_zero());
    }

    #[test]
    fn compose_with_rotation() {
        // x² + y² is rotation invariant
        let r2 = Polynomial::radius_squared(2);
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let rotated = r2.compose_linear(&[c, -s, s, c]);
        for (m, coeff) in rotated.terms() {
            let expect = if m == &vec![2, 0] || m == &vec![0, 2] { 1.0 } else { 0.0 };
            assert!((coeff - expect).abs() < 1e-14);
        }
    }
}
