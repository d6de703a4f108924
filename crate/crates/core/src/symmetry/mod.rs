//! Finite subgroups of O(2) and O(3), Molien series of their invariant
//! harmonics, a Reynolds-operator cross-check, and the resulting mode
//! (in)activity in the spectrum.

mod active;
mod group;
mod molien;
mod reynolds;

pub use active::{active_modes, active_modes_for_group, ActiveEntry, ActiveMode, ActiveModes, ModeConstraints};
pub use group::{build_group, FiniteGroup, GroupName};
pub use molien::{molien_harmonic, molien_polynomial, MolienSeries, MolienVariant};
pub use reynolds::{invariant_dimension_bruteforce, reynolds_matrix};
