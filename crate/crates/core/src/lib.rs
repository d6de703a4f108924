//! Numerical toolkit for the large-time behavior of the thin film equation
//! with linear mobility near the self-similar Smyth–Hill droplet.
//!
//! The crate is split into
//!
//! * [`spectrum`]: exact eigenvalues and polynomial eigenfunctions of the
//!   linearized operator `L = -ρΔ + 2z·∇` and of `L² + N L` on the unit ball,
//!   ball quadrature and weighted inner products;
//! * [`symmetry`]: finite subgroups of O(2)/O(3), Molien series and the
//!   Reynolds-operator oracle, and mode (in)activity under symmetry;
//! * [`transform`]: self-similar rescaling and the von Mises change of
//!   variables between the confined droplet `v` and the perturbation `w`;
//! * [`simulator`]: an implicit, conservative, nonnegativity preserving solver
//!   for the confined equation plus the exact linear semigroup and rate fits;
//! * [`linops`]: shared kernels (polynomials, quadrature, splines, norms);
//! * [`experiment`]: reproducible rate experiments and their JSON reports.

pub mod error;
pub mod experiment;
pub mod io;
pub mod linops;
pub mod simulator;
pub mod spectrum;
pub mod symmetry;
pub mod transform;

pub use error::{Error, Result};
