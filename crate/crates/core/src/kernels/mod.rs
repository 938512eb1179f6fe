//! Modified Bessel functions and the radial fundamental solutions built on them.

mod bessel;
mod green;

pub(crate) use bessel::reduced_i_scaled;
pub use bessel::{bessel_i_scaled, bessel_k, bessel_k_scaled, BesselK, BesselOrder};
pub use green::{
    green_lambda, green_zero, kernel_mass, sphere_area, spherical_mean_green, verify_kernel_bounds, GreenParams,
    KernelBoundsReport, Normalization,
};
