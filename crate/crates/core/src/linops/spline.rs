//! Clamped cubic splines on nonuniform knots.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl CubicSpline {
    /// Spline with prescribed end slopes.
    pub fn clamped(x: Vec<f64>, y: Vec<f64>, slope_left: f64, slope_right: f64) -> Result<Self> {
        let n = x.len();
        if n < 2 || y.len() != n {
            return Err(Error::Invalid(format!(
                "spline needs matching knots and values, at least two (got {} and {})",
                n,
                y.len()
            )));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Invalid("spline knots must be strictly increasing".into()));
        }
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        diag[0] = 2.0 * h[0];
        sup[0] = h[0];
        rhs[0] = 6.0 * ((y[1] - y[0]) / h[0] - slope_left);
        for i in 1..n - 1 {
            sub[i] = h[i - 1];
            diag[i] = 2.0 * (h[i - 1] + h[i]);
            sup[i] = h[i];
            rhs[i] = 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]);
        }
        sub[n - 1] = h[n - 2];
        diag[n - 1] = 2.0 * h[n - 2];
        rhs[n - 1] = 6.0 * (slope_right - (y[n - 1] - y[n - 2]) / h[n - 2]);
        let m = thomas(&sub, &diag, &sup, rhs);
        Ok(Self { x, y, m })
    }

    /// Clamped spline whose end slopes come from the interpolating cubic
    /// through the four outermost knots at each end.
    pub fn with_estimated_ends(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 2 {
            return Err(Error::Invalid("spline needs at least two knots".into()));
        }
        let k = n.min(4);
        let left = lagrange_derivative(&x[..k], &y[..k], x[0]);
        let right = lagrange_derivative(&x[n - k..], &y[n - k..], x[n - 1]);
        Self::clamped(x, y, left, right)
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    fn interval(&self, t: f64) -> usize {
        let n = self.x.len();
        match self.x.binary_search_by(|p| p.total_cmp(&t)) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        }
    }

    /// Value and first three derivatives at `t` (cubic extension outside the knots).
    pub fn eval_all(&self, t: f64) -> [f64; 4] {
        let i = self.interval(t);
        let (x0, x1) = (self.x[i], self.x[i + 1]);
        let h = x1 - x0;
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let a = x1 - t;
        let b = t - x0;
        let c0 = y0 / h - m0 * h / 6.0;
        let c1 = y1 / h - m1 * h / 6.0;
        let v = m0 * a.powi(3) / (6.0 * h) + m1 * b.powi(3) / (6.0 * h) + c0 * a + c1 * b;
        let d1 = -m0 * a * a / (2.0 * h) + m1 * b * b / (2.0 * h) - c0 + c1;
        let d2 = m0 * a / h + m1 * b / h;
        let d3 = (m1 - m0) / h;
        [v, d1, d2, d3]
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval_all(t)[0]
    }

    pub fn derivative(&self, t: f64) -> f64 {
        self.eval_all(t)[1]
    }
}

/// Derivative at `t` of the polynomial interpolating `(xs, ys)`.
pub fn lagrange_derivative(xs: &[f64], ys: &[f64], t: f64) -> f64 {
    let n = xs.len();
    let mut total = 0.0;
    for j in 0..n {
        // d/dt ∏_{m≠j} (t - x_m)/(x_j - x_m)
        let mut denom = 1.0;
        for m in 0..n {
            if m != j {
                denom *= xs[j] - xs[m];
            }
        }
        let mut dsum = 0.0;
        for i in 0..n {
            if i == j {
                continue;
            }
            let mut prod = 1.0;
            for m in 0..n {
                if m != j && m != i {
                    prod *= t - xs[m];
                }
            }
            dsum += prod;
        }
        total += ys[j] * dsum / denom;
    }
    total
}

fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], mut rhs: Vec<f64>) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut beta = diag[0];
    c[0] = sup[0] / beta;
    rhs[0] /= beta;
    for i in 1..n {
        beta = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / beta;
        rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
    rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_cubics_exactly() {
        let f = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x - 0.25 * x.powi(3);
        let df = |x: f64| -2.0 + x - 0.75 * x * x;
        let xs = vec![-1.0, -0.7, -0.1, 0.05, 0.4, 1.2];
        let ys = xs.iter().map(|&x| f(x)).collect();
        let s = CubicSpline::clamped(xs, ys, df(-1.0), df(1.2)).unwrap();
        for i in 0..50 {
            let t = -1.0 + 2.2 * i as f64 / 49.0;
            let [v, d1, d2, d3] = s.eval_all(t);
            assert!((v - f(t)).abs() < 1e-13);
            assert!((d1 - df(t)).abs() < 1e-12);
            assert!((d2 - (1.0 - 1.5 * t)).abs() < 1e-11);
            assert!((d3 + 1.5).abs() < 1e-10);
        }
    }

    #[test]
    fn fourth_order_convergence_for_smooth_data() {
        let err = |n: usize| {
            let xs: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
            let ys = xs.iter().map(|x| (3.0 * x).sin()).collect();
            let s = CubicSpline::with_estimated_ends(xs, ys).unwrap();
            (0..1000)
                .map(|i| {
                    let t = i as f64 / 999.0;
                    (s.eval(t) - (3.0 * t).sin()).abs()
                })
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(20), err(40));
        assert!((e1 / e2).log2() > 3.5, "{e1} {e2}");
    }

    #[test]
    fn rejects_unsorted_knots() {
        assert!(CubicSpline::clamped(vec![0.0, 0.0, 1.0], vec![0.0; 3], 0.0, 0.0).is_err());
    }
}
