//! Radial steady states of the Gierer–Meinhardt system on `R^N`.
//!
//! The crate evaluates the fundamental solutions of `-Δ + λ` and `-Δ`, the
//! barrier profiles `W_a = e^{-a√(1+r²)}` and `Z_a = (1+r²)^{-a/2}`, the
//! explicit sandwich constants for the two existence regimes, and builds the
//! steady states themselves by monotone iteration on truncated radial grids.

pub mod barriers;
pub mod catalog;
pub mod certificates;
pub mod error;
pub mod kernels;
pub mod potentials;
pub mod quadrature;
pub mod radial;
pub mod region;
pub mod solvers;

pub use error::{Error, Result};
