//! Newtonian and Bessel potentials of radial sources, divergence probes and
//! the radial gradient check.

mod bessel_potential;
mod cells;
mod newton;
mod probes;
mod residual;

pub use bessel_potential::bessel_potential_radial;
pub use newton::{newton_potential_and_derivative, newton_potential_radial};
pub use probes::{
    convr_check, divergence_probe_nested, divergence_probe_rho, ConvrReport, DivergenceReport, DivergenceVerdict,
    CONVR_TAIL_SLOPE, MIN_GROWING_SHELLS, SHELL_COUNT,
};
pub use residual::representation_residual;
