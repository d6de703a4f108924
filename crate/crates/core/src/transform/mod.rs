//! Changes of variables: physical film `u(τ, y)` ↔ confined droplet `v(t, x)`
//! ↔ perturbation `w(t, z)` on the unit ball, and the functionals linking
//! droplets to eigenmode amplitudes.

mod amplitude;
mod field;
mod frame;
mod vonmises;

pub use amplitude::{diagnostics, mode_amplitude_v, mode_amplitude_w, stationary_moment, Diagnostics};
pub use field::{shell_volume, DropletField, Geometry, PerturbationField};
pub use frame::{
    alpha_of, ball_volume, big_v_star, dilating_solution, dilation_factor, gamma_of, profile_integral,
    sigma_from_mass, sphere_area, stationary_mass, tau0_for_dilation, translating_solution, v_star,
    SelfSimilarFrame,
};
pub use vonmises::{mass_from_perturbation, v_to_w, w_to_v, w_to_v_at, InversionOptions, SqrtProfile};
