//! Shared numerical kernels.

pub mod banded;
pub mod fit;
pub mod norms;
pub mod poly;
pub mod quadrature;
pub mod spline;

pub use banded::BandMatrix;
pub use fit::{fit_exponential_decay, fit_line, LineFit};
pub use norms::{norms, norms_sampled, NormReport};
pub use poly::Polynomial;
pub use quadrature::GaussJacobi;
pub use spline::CubicSpline;
