use crate::error::{Error, Result};
use crate::linops::fit_line;
use serde::{Deserialize, Serialize};

/// Samples with `|a| <` this are numerical noise and never enter a fit.
pub const NOISE_FLOOR: f64 = 1e-12;

/// Which samples of a decaying series enter the fit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RateWindow {
    All,
    /// Samples with `lo ≤ |a| ≤ hi`.
    Amplitude { lo: f64, hi: f64 },
    /// Samples with `t0 ≤ t ≤ t1`.
    Time { t0: f64, t1: f64 },
}

impl Default for RateWindow {
    fn default() -> Self {
        RateWindow::Amplitude { lo: 1e-9, hi: 1e-2 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    /// `κ` in `|a(t)| ≈ C e^{−κ t}`.
    pub exponent: f64,
    pub r_squared: f64,
    pub samples: usize,
    /// Time span actually used.
    pub t_start: f64,
    pub t_end: f64,
}

/// Least-squares slope of `log |a|` against `t` over a window.
pub fn measure_rate(series: &[(f64, f64)], window: RateWindow) -> Result<RateFit> {
    let (t, loga): (Vec<f64>, Vec<f64>) = series
        .iter()
        .filter(|(t, a)| {
            let a = a.abs();
            a.is_finite()
                && a >= NOISE_FLOOR
                && match window {
                    RateWindow::All => true,
                    RateWindow::Amplitude { lo, hi } => a >= lo && a <= hi,
                    RateWindow::Time { t0, t1 } => *t >= t0 && *t <= t1,
                }
        })
        .map(|(t, a)| (*t, a.abs().ln()))
        .unzip();
    if t.len() < 4 {
        return Err(Error::InsufficientSamples(t.len()));
    }
    let fit = fit_line(&t, &loga).ok_or(Error::InsufficientSamples(t.len()))?;
    Ok(RateFit {
        exponent: -fit.slope,
        r_squared: fit.r_squared,
        samples: t.len(),
        t_start: t.iter().copied().fold(f64::INFINITY, f64::min),
        t_end: t.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}
