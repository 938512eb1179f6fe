use serde::{Deserialize, Serialize};

use super::fit::decay_fit;
use super::report::{
    fit_window, truncation_radius, BallGrowth, FieldFit, IterationState, Residuals, SandwichMargin, SolveReport,
    SolveStatus,
};
use crate::barriers::{eval_barrier, BarrierProfile, Family, TheoremTag};
use crate::error::{Error, Result};
use crate::radial::{RadialField, RadialGrid, RadialOperator};

/// First step and stretch of the geometric grids used by the solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridControl {
    pub h0: f64,
    pub stretch: f64,
}

impl GridControl {
    pub fn exponential() -> Self {
        Self {
            h0: 0.002,
            stretch: 1.002,
        }
    }

    pub fn algebraic() -> Self {
        Self {
            h0: 0.01,
            stretch: 1.01,
        }
    }

    pub fn for_family(family: Family) -> Self {
        match family {
            Family::W => Self::exponential(),
            Family::Z => Self::algebraic(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    /// Grid override; the regime default otherwise.
    pub grid: Option<GridControl>,
    /// Base truncation radius override.
    pub radius: Option<f64>,
    /// Stop when the relative sup change drops below this.
    pub tol: f64,
    /// Residual bound required for `Converged`.
    pub residual_tol: f64,
    pub max_iter: usize,
    /// Ball doublings tried before giving up on stability.
    pub max_doublings: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            grid: None,
            radius: None,
            tol: 1e-12,
            residual_tol: 1e-5,
            max_iter: 500,
            max_doublings: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScalarRegime {
    /// `ψ ≍ W_γ`, `μ > (γ/(s+1))²`.
    Exp { gamma: f64 },
    /// `ψ ≍ Z_γ`, `μ = 0`, `2 < γ < (N-2)s + N`.
    Alg { gamma: f64 },
}

impl ScalarRegime {
    fn family(self) -> Family {
        match self {
            ScalarRegime::Exp { .. } => Family::W,
            ScalarRegime::Alg { .. } => Family::Z,
        }
    }

    fn gamma(self) -> f64 {
        match self {
            ScalarRegime::Exp { gamma } | ScalarRegime::Alg { gamma } => gamma,
        }
    }
}

/// The weight `ψ` with constants `lower · B_γ ≤ ψ ≤ upper · B_γ`.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarWeight {
    /// `ψ = amplitude · B_γ` exactly.
    Envelope { amplitude: f64 },
    /// Tabulated `ψ`; the envelope constants are read off the grid.
    Tabulated(RadialField),
}

/// Sub- and super-solution constants of the scalar problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalarBarriers {
    pub profile: BarrierProfile,
    pub lower: f64,
    pub upper: f64,
}

/// `v̲ = c B_a`, `v̄ = C B_a` for `-Δv + μv = ψ v^{-s}`.
pub fn scalar_barriers(
    dimension: u32,
    shift: f64,
    s: f64,
    regime: ScalarRegime,
    psi_lower: f64,
    psi_upper: f64,
) -> Result<ScalarBarriers> {
    let n = f64::from(dimension);
    let gamma = regime.gamma();
    if !(s >= 0.0) {
        return Err(Error::argument(format!("s must be >= 0, got {s}")));
    }
    if !(psi_lower > 0.0 && psi_lower <= psi_upper && psi_upper.is_finite()) {
        return Err(Error::argument(format!(
            "weight constants must satisfy 0 < m <= M, got m = {psi_lower}, M = {psi_upper}"
        )));
    }
    let e = 1.0 / (s + 1.0);
    match regime {
        ScalarRegime::Exp { gamma } => {
            let a = gamma / (s + 1.0);
            if !(gamma > 0.0) {
                return Err(Error::argument(format!("gamma must be > 0, got {gamma}")));
            }
            if !(shift > a * a) {
                return Err(Error::regime(
                    TheoremTag::ScalarExponential.as_str(),
                    format!("mu = {shift} <= (gamma/(s+1))^2 = {}", a * a),
                ));
            }
            Ok(ScalarBarriers {
                profile: BarrierProfile {
                    family: Family::W,
                    rate: a,
                },
                lower: (psi_lower / (shift + n * a)).powf(e),
                upper: (psi_upper / (shift - a * a)).powf(e),
            })
        }
        ScalarRegime::Alg { .. } => {
            if shift != 0.0 {
                return Err(Error::argument(format!(
                    "algebraic scalar regime needs mu = 0, got {shift}"
                )));
            }
            if gamma <= 2.0 {
                return Err(Error::Nonexistence {
                    theorem: TheoremTag::ScalarSlowWeight.as_str().into(),
                    detail: format!("weight rate gamma = {gamma} <= 2"),
                });
            }
            let top = (n - 2.0) * s + n;
            if gamma >= top {
                return Err(Error::regime(
                    TheoremTag::ScalarAlgebraic.as_str(),
                    format!("gamma = {gamma} >= (N-2)s + N = {top}"),
                ));
            }
            let a = (gamma - 2.0) / (s + 1.0);
            Ok(ScalarBarriers {
                profile: BarrierProfile {
                    family: Family::Z,
                    rate: a,
                },
                lower: (psi_lower / (a * n)).powf(e),
                upper: (psi_upper / (a * (n - a - 2.0))).powf(e),
            })
        }
    }
}

/// Result of monotone Newton on one fixed grid.
pub(crate) struct ScalarRun {
    pub v: Vec<f64>,
    /// Factor applied to `sub` to make it a discrete subsolution.
    pub theta: f64,
    pub history: Vec<(f64, f64)>,
    pub converged: bool,
}

/// Newton's method for `-Δ_h v + μv = ψ v^{-s}` with `v(R) = boundary`.
///
/// The nonlinearity is concave in `v`, so Newton steps from a discrete
/// subsolution increase monotonically towards the minimal solution above it.
/// `sub` is scaled down just enough to be a discrete subsolution before the
/// first step.
#[allow(clippy::too_many_arguments)]
pub(crate) fn newton_scalar(
    op: &RadialOperator,
    shift: f64,
    s: f64,
    psi: &[f64],
    sub: &[f64],
    boundary: f64,
    tol: f64,
    max_iter: usize,
) -> Result<ScalarRun> {
    let n = op.len();
    let applied = op.apply(sub);
    let mut theta_pow = 1.0f64;
    for i in 0..n - 1 {
        let lhs = applied[i] + shift * sub[i];
        if lhs > 0.0 {
            theta_pow = theta_pow.min(psi[i] * sub[i].powf(-s) / lhs);
        }
    }
    let theta = theta_pow.powf(1.0 / (s + 1.0));
    let floor: Vec<f64> = sub.iter().map(|x| theta * x).collect();
    let mut v = floor.clone();
    v[n - 1] = boundary;

    let mut history = Vec::new();
    let mut converged = false;
    let mut extra = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    for _ in 0..max_iter {
        for i in 0..n - 1 {
            let vi = v[i].max(floor[i]);
            let t = psi[i] * vi.powf(-s);
            extra[i] = shift + if s > 0.0 { s * t / vi } else { 0.0 };
            rhs[i] = (1.0 + s) * t;
        }
        let next = op.solve_with_diagonal(&extra, &rhs, boundary)?;
        let scale = next.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let mut change = 0.0f64;
        let mut min_inc = f64::INFINITY;
        for i in 0..n {
            let d = next[i] - v[i];
            change = change.max(d.abs());
            min_inc = min_inc.min(d);
        }
        v = next;
        let rel = if scale > 0.0 { change / scale } else { change };
        history.push((rel, min_inc));
        if rel <= tol {
            converged = true;
            break;
        }
    }
    Ok(ScalarRun {
        v,
        theta,
        history,
        converged,
    })
}

/// Smallest `κ ≥ 1` such that `κ · sup` is a discrete supersolution.
pub(crate) fn super_factor(op: &RadialOperator, shift: f64, s: f64, psi: &[f64], sup: &[f64]) -> f64 {
    let applied = op.apply(sup);
    let mut worst = 1.0f64;
    for i in 0..sup.len() - 1 {
        let lhs = applied[i] + shift * sup[i];
        let rhs = psi[i] * sup[i].powf(-s);
        if rhs > 0.0 {
            if lhs <= 0.0 {
                return f64::INFINITY;
            }
            worst = worst.max(rhs / lhs);
        }
    }
    worst.powf(1.0 / (s + 1.0))
}

/// Sup of the discrete residual `|-Δ_h v + μv - ψ v^{-s}|` over `r ≤ R/2`.
pub(crate) fn scalar_residual(op: &RadialOperator, r: &[f64], shift: f64, s: f64, psi: &[f64], v: &[f64]) -> f64 {
    let half = 0.5 * r[r.len() - 1];
    let lap = op.apply(v);
    (0..r.len() - 1)
        .filter(|&i| r[i] <= half)
        .map(|i| (lap[i] + shift * v[i] - psi[i] * v[i].powf(-s)).abs())
        .fold(0.0, f64::max)
}

struct BallRun {
    grid: RadialGrid,
    psi: Vec<f64>,
    v: Vec<f64>,
    defects: (f64, f64),
}

fn weight_values(weight: &ScalarWeight, profile: BarrierProfile, grid: &RadialGrid) -> Vec<f64> {
    match weight {
        ScalarWeight::Envelope { amplitude } => grid
            .nodes()
            .iter()
            .map(|&r| amplitude * eval_barrier(profile, r))
            .collect(),
        ScalarWeight::Tabulated(field) => grid.nodes().iter().map(|&r| field.interpolate(r)).collect(),
    }
}

fn weight_constants(weight: &ScalarWeight, profile: BarrierProfile) -> Result<(f64, f64)> {
    match weight {
        ScalarWeight::Envelope { amplitude } => {
            if !(*amplitude > 0.0 && amplitude.is_finite()) {
                return Err(Error::argument(format!(
                    "weight amplitude must be > 0, got {amplitude}"
                )));
            }
            Ok((*amplitude, *amplitude))
        }
        ScalarWeight::Tabulated(field) => {
            let mut lo = f64::INFINITY;
            let mut hi: f64 = 0.0;
            for (&r, &v) in field.nodes().iter().zip(field.values()) {
                let b = eval_barrier(profile, r);
                if b > 0.0 {
                    lo = lo.min(v / b);
                    hi = hi.max(v / b);
                }
            }
            if !(lo > 0.0) {
                return Err(Error::domain("tabulated weight must be positive"));
            }
            Ok((lo, hi))
        }
    }
}

/// Monotone iteration for `-Δv + μv = ψ v^{-s}` on `R^N`.
///
/// Builds the explicit sub/super pair `c B_a ≤ v ≤ C B_a`, solves on a ball
/// whose radius is set by the decay of `B_a`, and doubles the ball until the
/// solution on the original ball moves by less than the upper barrier at its
/// edge.
pub fn solve_singular_scalar(
    dimension: u32,
    shift: f64,
    s: f64,
    weight: &ScalarWeight,
    regime: ScalarRegime,
    options: &SolverOptions,
) -> Result<SolveReport> {
    let gamma = regime.gamma();
    let weight_profile = BarrierProfile {
        family: regime.family(),
        rate: gamma.max(0.0),
    };
    let (m, big_m) = weight_constants(weight, weight_profile)?;
    let barriers = scalar_barriers(dimension, shift, s, regime, m, big_m)?;
    let profile = barriers.profile;
    let control = options.grid.unwrap_or(GridControl::for_family(profile.family));
    let r0 = options.radius.unwrap_or_else(|| truncation_radius(profile));

    let mut history = Vec::new();
    let mut iterations = 0;
    let mut all_converged = true;
    let mut solve_on = |radius: f64, history: &mut Vec<IterationState>| -> Result<BallRun> {
        let grid = RadialGrid::graded_covering(radius, control.h0, control.stretch)?;
        let op = RadialOperator::new(&grid, dimension)?;
        let psi = weight_values(weight, weight_profile, &grid);
        let sub: Vec<f64> = grid
            .nodes()
            .iter()
            .map(|&r| barriers.lower * eval_barrier(profile, r))
            .collect();
        let boundary = sub[sub.len() - 1];
        let run = newton_scalar(&op, shift, s, &psi, &sub, boundary, options.tol, options.max_iter)?;
        all_converged &= run.converged;
        for (k, (change, min_inc)) in run.history.iter().enumerate() {
            history.push(IterationState {
                ball_radius: grid.radius(),
                iterate_index: k + 1,
                change: *change,
                min_increment: *min_inc,
                monotone_flag: *min_inc >= -1e-12,
            });
        }
        iterations += run.history.len();
        let sup: Vec<f64> = grid
            .nodes()
            .iter()
            .map(|&r| barriers.upper * eval_barrier(profile, r))
            .collect();
        let kappa = super_factor(&op, shift, s, &psi, &sup);
        Ok(BallRun {
            grid,
            psi,
            v: run.v,
            defects: (1.0 - run.theta, kappa - 1.0),
        })
    };

    let BallRun {
        mut grid,
        mut psi,
        mut v,
        mut defects,
    } = solve_on(r0, &mut history)?;
    let mut growth = Vec::new();
    let mut radius = grid.radius();
    for _ in 0..options.max_doublings.max(1) {
        let BallRun {
            grid: g2,
            psi: psi2,
            v: v2,
            defects: d2,
        } = solve_on(2.0 * radius, &mut history)?;
        let count = grid.len();
        let change = (0..count).map(|i| (v2[i] - v[i]).abs()).fold(0.0, f64::max);
        let bound = barriers.upper * eval_barrier(profile, radius);
        let stable = change <= bound;
        growth.push(BallGrowth {
            field: "v".into(),
            radius,
            doubled_radius: g2.radius(),
            change,
            bound,
            stable,
        });
        grid = g2;
        psi = psi2;
        v = v2;
        defects = d2;
        radius = grid.radius();
        if stable {
            break;
        }
    }

    let op = RadialOperator::new(&grid, dimension)?;
    let residual = scalar_residual(&op, grid.nodes(), shift, s, &psi, &v);
    let field = RadialField::new(grid, v)?.with_decay_tag(Some(profile));
    let margin = SandwichMargin::measure_with_defects("v", &field, profile, (barriers.lower, barriers.upper), defects);
    let fit = decay_fit(&field, profile.family, fit_window(profile.family, r0))?;
    let stable = growth.last().is_some_and(|g| g.stable);
    let status = if !margin.respected {
        SolveStatus::SandwichViolated
    } else if all_converged && stable && residual <= options.residual_tol {
        SolveStatus::Converged
    } else {
        SolveStatus::MaxIterations
    };
    Ok(SolveReport {
        status,
        ball_radius: radius,
        iterations,
        residuals: Residuals { u: None, v: residual },
        margins: vec![margin],
        decay_fits: vec![FieldFit { field: "v".into(), fit }],
        ball_growth: growth,
        history,
        u: None,
        v: field,
    })
}
