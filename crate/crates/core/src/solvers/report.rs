use serde::Serialize;

use super::fit::DecayFit;
use crate::barriers::{eval_barrier, BarrierProfile, Family};
use crate::radial::RadialField;

/// Slack allowed on sandwich ratios.
pub const SANDWICH_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolveStatus {
    Converged,
    MaxIterations,
    SandwichViolated,
}

/// One outer iterate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationState {
    pub ball_radius: f64,
    pub iterate_index: usize,
    /// Relative sup-norm change from the previous iterate.
    pub change: f64,
    /// `min_i (v^{k+1}_i - v^k_i)`; nonnegative for a monotone step.
    pub min_increment: f64,
    pub monotone_flag: bool,
}

/// Where a field sits inside `[lower, upper] · profile`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichMargin {
    pub field: String,
    pub profile: BarrierProfile,
    pub lower: f64,
    pub upper: f64,
    /// `min field / (lower · profile)`; at least 1 inside the sandwich.
    pub min_ratio: f64,
    /// `max field / (upper · profile)`; at most 1 inside the sandwich.
    pub max_ratio: f64,
    /// How far `lower · profile` falls short of being a discrete subsolution
    /// on the grid, as a relative amount (0 when not measured).
    pub lower_defect: f64,
    /// Same for `upper · profile` as a discrete supersolution.
    pub upper_defect: f64,
    pub respected: bool,
}

impl SandwichMargin {
    pub fn measure(name: &str, field: &RadialField, profile: BarrierProfile, lower: f64, upper: f64) -> Self {
        Self::measure_with_defects(name, field, profile, (lower, upper), (0.0, 0.0))
    }

    /// Margins where the barriers may be off by their discrete defects.
    ///
    /// By the discrete comparison principle the solution lies between the
    /// barriers once they are corrected by those defects, so the check allows
    /// them on top of [`SANDWICH_SLACK`].
    pub fn measure_with_defects(
        name: &str,
        field: &RadialField,
        profile: BarrierProfile,
        (lower, upper): (f64, f64),
        (lower_defect, upper_defect): (f64, f64),
    ) -> Self {
        let mut min_ratio = f64::INFINITY;
        let mut max_ratio: f64 = 0.0;
        for (&r, &v) in field.nodes().iter().zip(field.values()) {
            let b = eval_barrier(profile, r);
            if b <= 0.0 {
                continue;
            }
            min_ratio = min_ratio.min(v / (lower * b));
            max_ratio = max_ratio.max(v / (upper * b));
        }
        Self {
            field: name.into(),
            profile,
            lower,
            upper,
            min_ratio,
            max_ratio,
            lower_defect,
            upper_defect,
            respected: min_ratio >= 1.0 - lower_defect - SANDWICH_SLACK
                && max_ratio <= 1.0 + upper_defect + SANDWICH_SLACK,
        }
    }
}

/// Change between the solutions on a ball and on the doubled ball.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallGrowth {
    pub field: String,
    pub radius: f64,
    pub doubled_radius: f64,
    /// Sup over the nodes of the smaller ball.
    pub change: f64,
    /// Upper barrier at the smaller radius.
    pub bound: f64,
    pub stable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residuals {
    /// Activator equation; absent for scalar solves.
    pub u: Option<f64>,
    pub v: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldFit {
    pub field: String,
    #[serde(flatten)]
    pub fit: DecayFit,
}

/// Outcome of a scalar or coupled solve.
///
/// Residuals are sup norms of the discrete equations over `[0, R/2]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub ball_radius: f64,
    pub iterations: usize,
    pub residuals: Residuals,
    pub margins: Vec<SandwichMargin>,
    pub decay_fits: Vec<FieldFit>,
    pub ball_growth: Vec<BallGrowth>,
    pub history: Vec<IterationState>,
    #[serde(skip)]
    pub u: Option<RadialField>,
    #[serde(skip)]
    pub v: RadialField,
}

impl SolveReport {
    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }

    pub fn fit(&self, field: &str) -> Option<&DecayFit> {
        self.decay_fits.iter().find(|f| f.field == field).map(|f| &f.fit)
    }

    pub fn margin(&self, field: &str) -> Option<&SandwichMargin> {
        self.margins.iter().find(|m| m.field == field)
    }
}

/// Smallest radius where the profile has dropped to `1e-12` of its value at 0,
/// capped at `1e12`.
pub fn truncation_radius(profile: BarrierProfile) -> f64 {
    let drop = 1e12f64.ln();
    let a = profile.rate.max(1e-3);
    let r = match profile.family {
        Family::W => {
            let t = 1.0 + drop / a;
            (t * t - 1.0).sqrt()
        }
        Family::Z => ((2.0 * drop / a).exp() - 1.0).sqrt(),
    };
    r.min(1e12)
}

/// Default fit window for a solution computed with base radius `r0`.
pub fn fit_window(family: Family, r0: f64) -> (f64, f64) {
    match family {
        Family::W => (0.25 * r0, 0.75 * r0),
        Family::Z => (r0.powf(0.25).max(2.0), r0.sqrt().max(8.0)),
    }
}
