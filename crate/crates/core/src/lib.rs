//! Symmetric quasi-free solutions of the semi-classical Einstein-Klein-Gordon
//! system on Einstein's static universe `R x S^3`.
//!
//! The modules build on each other in this order: [`params`] holds the
//! physical inputs, [`harmonic`] the sphere harmonics, [`series`] the
//! convergent mode sums, [`renorm`] the local curvature bookkeeping,
//! [`states`] the symmetric states and their observables, [`semiclassical`]
//! the solution set and [`thermo`] the entropy-minimising solution.

pub mod bessel;
pub mod error;
pub mod harmonic;
pub mod params;
pub mod renorm;
pub mod roots;
pub mod semiclassical;
pub mod series;
pub mod states;
pub mod thermo;

pub use error::{EsuError, Result};
pub use params::{coupling_c, mode_frequency, ricci_scalar, CurvatureData, ModelParams, RenormConstants};
pub use renorm::{effective_constants, hadamard_parametrix, renormalized_energy_pressure, EffectiveConstants};
pub use semiclassical::{
    classify, construct_two_mode, scale_transform, suggest_n_high, targets, verify_solution, Classification,
    QfClass, FullClass, SemiclassicalTargets,
};
pub use series::{ground_moments, x1, x2, SeriesValue};
pub use states::{
    energy_pressure_reg, energy_pressure_ren, kms_coefficient, moments, two_point, ModeCoefficients,
    SymmetricState,
};
pub use thermo::{
    constraint_sums, kms_temperature_solve, occupation_spectrum, solve_entropy_minimizer, von_neumann_entropy,
    BoseState, MinimizerResult, MinimizerState,
};
