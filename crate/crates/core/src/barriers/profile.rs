use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `W_a(r) = e^{-a√(1+r²)}`
    W,
    /// `Z_a(r) = (1+r²)^{-a/2}`
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarrierProfile {
    pub family: Family,
    pub rate: f64,
}

impl BarrierProfile {
    /// Rate `0` is allowed and gives the constant profile.
    pub fn new(family: Family, rate: f64) -> Result<Self> {
        if rate >= 0.0 && rate.is_finite() {
            Ok(Self { family, rate })
        } else {
            Err(Error::domain(format!(
                "barrier rate must be finite and >= 0, got {rate}"
            )))
        }
    }

    pub fn w(rate: f64) -> Result<Self> {
        Self::new(Family::W, rate)
    }

    pub fn z(rate: f64) -> Result<Self> {
        Self::new(Family::Z, rate)
    }
}

pub fn eval_barrier(profile: BarrierProfile, x_norm: f64) -> f64 {
    let a = profile.rate;
    let r2 = x_norm * x_norm;
    match profile.family {
        Family::W => (-a * (1.0 + r2).sqrt()).exp(),
        Family::Z => (-0.5 * a * r2.ln_1p()).exp(),
    }
}

/// Radial derivative of the profile.
pub fn barrier_derivative(profile: BarrierProfile, x_norm: f64) -> f64 {
    let a = profile.rate;
    let r2 = x_norm * x_norm;
    let value = eval_barrier(profile, x_norm);
    match profile.family {
        Family::W => -a * x_norm / (1.0 + r2).sqrt() * value,
        Family::Z => -a * x_norm / (1.0 + r2) * value,
    }
}

/// Closed form of `(-Δ + shift) profile` at radius `x_norm` in dimension `N`.
pub fn barrier_operator_value(profile: BarrierProfile, shift: f64, x_norm: f64, dimension: u32) -> f64 {
    barrier_operator_ratio(profile, shift, x_norm, dimension) * eval_barrier(profile, x_norm)
}

/// `(-Δ + shift) profile / profile`, finite even where the profile underflows.
pub fn barrier_operator_ratio(profile: BarrierProfile, shift: f64, x_norm: f64, dimension: u32) -> f64 {
    let a = profile.rate;
    let n = f64::from(dimension);
    let r2 = x_norm * x_norm;
    let t2 = 1.0 + r2;
    match profile.family {
        Family::W => {
            let t = t2.sqrt();
            shift - a * a + a * a / t2 + a / (t2 * t) + (n - 1.0) * a / t
        }
        Family::Z => shift + a * (n + (n - a - 2.0) * r2) / (t2 * t2),
    }
}

/// Lower and upper coefficients of the two-sided operator bound.
///
/// `W`: `(λ - a²) W_a ≤ (-Δ+λ)W_a ≤ (λ + N a) W_a`.
/// `Z`: `a(N-a-2) Z_{a+2} ≤ -ΔZ_a ≤ a N Z_{a+2}`.
pub fn sandwich_coefficients(profile: BarrierProfile, shift: f64, dimension: u32) -> (f64, f64) {
    let a = profile.rate;
    let n = f64::from(dimension);
    match profile.family {
        Family::W => (shift - a * a, shift + n * a),
        Family::Z => (a * (n - a - 2.0), a * n),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichCheck {
    pub holds: bool,
    /// Smallest `(coefficient - lower)`, in units of the bound's scale.
    pub lower_margin: f64,
    /// Smallest `(upper - coefficient)`, same units.
    pub upper_margin: f64,
    /// Radius where the lower margin is attained.
    pub lower_tightest_at: f64,
    /// Set when the lower coefficient is negative and the lower bound says nothing.
    pub vacuous_lower: bool,
}

/// Checks the two-sided operator bound at every grid radius.
///
/// The coefficient is `(-Δ+λ)W_a / W_a` for `W` and `-ΔZ_a / Z_{a+2}` for `Z`
/// (any shift is removed first). A relative slack of `1e-12` is allowed.
pub fn check_sandwich(profile: BarrierProfile, shift: f64, dimension: u32, r_grid: &[f64]) -> SandwichCheck {
    let (lo, hi) = sandwich_coefficients(profile, shift, dimension);
    let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    let slack = 1e-12 * scale;
    let mut lower_margin = f64::INFINITY;
    let mut upper_margin = f64::INFINITY;
    let mut tightest = 0.0;
    for &r in r_grid {
        let coefficient = match profile.family {
            Family::W => barrier_operator_value(profile, shift, r, dimension) / eval_barrier(profile, r),
            Family::Z => {
                // -ΔZ_a / Z_{a+2} = a(N + (N-a-2) r²)/(1+r²)
                let a = profile.rate;
                let n = f64::from(dimension);
                let r2 = r * r;
                a * (n + (n - a - 2.0) * r2) / (1.0 + r2)
            }
        };
        let lm = coefficient - lo;
        if lm < lower_margin {
            lower_margin = lm;
            tightest = r;
        }
        upper_margin = upper_margin.min(hi - coefficient);
    }
    SandwichCheck {
        holds: lower_margin >= -slack && upper_margin >= -slack,
        lower_margin: lower_margin / scale,
        upper_margin: upper_margin / scale,
        lower_tightest_at: tightest,
        vacuous_lower: lo < 0.0,
    }
}
