//! Fundamental solutions of `-Δ + λ` and `-Δ` in radial form.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use super::bessel::{bessel_k_scaled, BesselOrder};
use crate::error::{Error, Result};
use crate::quadrature::integrate;

/// Normalization of the Bessel-potential kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Normalization {
    /// `(-Δ + λ) G_λ = δ_0`, equivalently `∫ G_λ = 1/λ`.
    #[default]
    DeltaCalibrated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreenParams {
    pub dimension: u32,
    pub shift: f64,
    #[serde(default)]
    pub normalization: Normalization,
}

impl GreenParams {
    pub fn new(dimension: u32, shift: f64) -> Result<Self> {
        if dimension < 3 {
            return Err(Error::domain(format!("dimension must be >= 3, got {dimension}")));
        }
        if !(shift >= 0.0) || !shift.is_finite() {
            return Err(Error::domain(format!("shift must be finite and >= 0, got {shift}")));
        }
        Ok(Self {
            dimension,
            shift,
            normalization: Normalization::DeltaCalibrated,
        })
    }
}

/// Surface area of the unit sphere in `R^N`.
pub fn sphere_area(dimension: u32) -> f64 {
    let half = f64::from(dimension) / 2.0;
    2.0 * PI.powf(half) / gamma(half)
}

/// `G_λ(r) = (√λ/r)^{N/2-1} K_{N/2-1}(√λ r) / (2π)^{N/2}`.
///
/// Dispatches to [`green_zero`] when `λ = 0`.
pub fn green_lambda(params: GreenParams, r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain(format!("kernel radius must be > 0, got {r}")));
    }
    if params.shift < 0.0 {
        return Err(Error::domain("shift must be >= 0"));
    }
    if params.shift == 0.0 {
        return green_zero(params.dimension, r);
    }
    let n = f64::from(params.dimension);
    let order = BesselOrder::for_dimension(params.dimension)?;
    let k = params.shift.sqrt();
    let z = k * r;
    let scaled = bessel_k_scaled(order, z)?;
    // combine in logs so the prefactor cannot overflow for tiny r
    let log_value = order.value() * (k / r).ln() + scaled.ln() - z - 0.5 * n * (2.0 * PI).ln();
    let value = log_value.exp();
    Ok(if value < f64::MIN_POSITIVE { 0.0 } else { value })
}

/// `G_0(r) = Γ((N-2)/2) r^{2-N} / (4 π^{N/2})`.
pub fn green_zero(dimension: u32, r: f64) -> Result<f64> {
    if dimension < 3 {
        return Err(Error::domain(format!("dimension must be >= 3, got {dimension}")));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain(format!("kernel radius must be > 0, got {r}")));
    }
    let n = f64::from(dimension);
    Ok(gamma((n - 2.0) / 2.0) / (4.0 * PI.powf(n / 2.0)) * r.powf(2.0 - n))
}

/// `ω_N ∫_0^∞ s^{N-1} G_λ(s) ds`, which equals `1/λ` for a δ-calibrated kernel.
pub fn kernel_mass(params: GreenParams) -> Result<f64> {
    if params.shift <= 0.0 {
        return Err(Error::domain("kernel mass is infinite for shift 0"));
    }
    let k = params.shift.sqrt();
    let n = params.dimension as i32;
    let f = |s: f64| {
        if s <= 0.0 {
            0.0
        } else {
            s.powi(n - 1) * green_lambda(params, s).unwrap_or(0.0)
        }
    };
    // the integrand is O(s) near 0 and decays like e^{-k s}
    let upper = 60.0 / k;
    let pieces = [0.0, 0.1 / k, 1.0 / k, 5.0 / k, 20.0 / k, upper];
    let mut total = 0.0;
    for w in pieces.windows(2) {
        total += integrate(f, w[0], w[1], 1e-15, 1e-13)?.value;
    }
    Ok(sphere_area(params.dimension) * total)
}

/// Observed sandwich constants of `G_λ` against its model behaviour.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelBoundsReport {
    /// Far field (`r > 1`): ratio to `r^{-(N-1)/2} e^{-√λ r}`.
    pub c1: f64,
    /// Near field (`r < 1`): ratio to `r^{2-N}`.
    pub c2: f64,
    pub samples: Vec<(f64, f64)>,
}

/// Smallest `c ≥ 1` with every ratio in `[1/c, c]`, or `None` for an empty set.
fn sandwich_constant(ratios: &[f64]) -> Option<f64> {
    if ratios.is_empty() {
        return None;
    }
    let mut c: f64 = 1.0;
    for &x in ratios {
        c = c.max(x).max(1.0 / x);
    }
    Some(c)
}

/// Ratios of `G_λ` to its near- and far-field models on `r_grid`.
///
/// Points with `r < 1` feed `c2`, points with `r > 1` feed `c1`; when one side
/// has no sample the corresponding constant is reported as `1`.
pub fn verify_kernel_bounds(params: GreenParams, r_grid: &[f64]) -> Result<KernelBoundsReport> {
    if r_grid.is_empty() {
        return Err(Error::argument("kernel bound grid is empty"));
    }
    let n = f64::from(params.dimension);
    let k = params.shift.sqrt();
    let mut near = Vec::new();
    let mut far = Vec::new();
    let mut samples = Vec::with_capacity(r_grid.len());
    for &r in r_grid {
        let g = green_lambda(params, r)?;
        let ratio = if r < 1.0 {
            let ratio = g / r.powf(2.0 - n);
            near.push(ratio);
            ratio
        } else {
            // compare in logs, e^{-k r} underflows long before the ratio does
            let log_model = -0.5 * (n - 1.0) * r.ln() - k * r;
            let ratio = (g.ln() - log_model).exp();
            if g > 0.0 {
                far.push(ratio);
            }
            ratio
        };
        if !(ratio.is_finite() && ratio > 0.0) && g > 0.0 {
            return Err(Error::domain(format!("unbounded kernel ratio at r = {r}")));
        }
        samples.push((r, ratio));
    }
    let c1 = sandwich_constant(&far).unwrap_or(1.0);
    let c2 = sandwich_constant(&near).unwrap_or(1.0);
    if !(c1.is_finite() && c2.is_finite()) {
        return Err(Error::domain("kernel ratios are unbounded on the grid"));
    }
    Ok(KernelBoundsReport { c1, c2, samples })
}

/// Normalized spherical mean of `G_λ(|x - y|)` over `|y| = s` with `|x| = r`.
///
/// `S(r, s) = ∫_0^π G_λ(√(r²+s²-2rs cos θ)) sin^{N-2}θ dθ / ∫_0^π sin^{N-2}θ dθ`.
/// Computed by adaptive quadrature with a split near `θ = 0`, where the
/// integrand is singular when `r ≈ s`.
pub fn spherical_mean_green(params: GreenParams, r: f64, s: f64) -> Result<f64> {
    if r < 0.0 || s < 0.0 {
        return Err(Error::domain("radii must be >= 0"));
    }
    let n = params.dimension as i32;
    if r == 0.0 || s == 0.0 {
        return green_lambda(params, r.max(s));
    }
    let norm = {
        let half = f64::from(params.dimension) / 2.0;
        PI.sqrt() * gamma(half - 0.5) / gamma(half)
    };
    let f = |theta: f64| {
        // |x-y|² = (r-s)² + 4 r s sin²(θ/2), free of cancellation near θ = 0
        let d2 = (r - s).powi(2) + 4.0 * r * s * (0.5 * theta).sin().powi(2);
        let d = d2.sqrt();
        if d <= 0.0 {
            return 0.0;
        }
        green_lambda(params, d).unwrap_or(0.0) * theta.sin().powi(n - 2)
    };
    let gap = ((r - s).abs() / r.max(s)).max(1e-12);
    let mut breaks = vec![0.0];
    let mut t = gap.min(1.0);
    while t < 1.0 {
        breaks.push(t);
        t *= 4.0;
    }
    breaks.push(1.0);
    breaks.push(PI);
    let mut total = 0.0;
    for w in breaks.windows(2) {
        total += integrate(f, w[0], w[1], 0.0, 1e-11)?.value;
    }
    Ok(total / norm)
}
