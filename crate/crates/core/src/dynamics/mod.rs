//! Numerical dynamics of `T_N`, the slow map `F_N` and the natural extension.

mod entropy;
mod farey;
mod growth;
mod maps;
mod natext;
pub mod quad;

pub use entropy::{
    dilog_from_one, dilog_from_zero, entropy_formula, entropy_report, invariant_density, rokhlin_entropy,
    EntropyReport, QUAD_TOL,
};
pub use farey::{
    farey_digit_semantics_check, farey_invariance_check, farey_map_exact, farey_preimage, farey_step_digits,
    FareySemanticsReport,
};
pub use growth::{constant_digit_limit, growth_rate, levy_simulation, ln_big, GrowthReport, LevyEstimate};
pub use maps::{farey_step, gauss_step, natext_step, orbit, MapKind, OrbitSample};
pub use natext::{
    interval_mass, natext_invariance_check, pushforward_check, rectangle_mass, sample_invariant_x,
    sample_invariant_y, DensityCheck, NatExtReport, BURN_IN,
};
