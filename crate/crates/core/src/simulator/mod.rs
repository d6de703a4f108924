//! Time integration of the confined equation, the exact linear semigroup in
//! the eigenbasis, and exponential rate fits.

mod linear;
mod rates;
mod scheme;
mod solver;

pub use linear::{evolve_linear, LinearTrajectory};
pub use rates::{measure_rate, RateFit, RateWindow, NOISE_FLOOR};
pub use scheme::{Mesh, NewtonOptions};
pub use solver::{evolve, evolve_observed, step_confined, SolverConfig, StepRecord, Trajectory};
