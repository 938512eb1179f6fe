use super::fit::decay_fit;
use super::report::{
    fit_window, truncation_radius, BallGrowth, FieldFit, IterationState, Residuals, SandwichMargin, SolveReport,
    SolveStatus,
};
use super::scalar::{newton_scalar, scalar_residual, GridControl, SolverOptions};
use crate::barriers::{
    eval_barrier, BarrierProfile, ConstantsLedger, Exponents, Family, Problem, Regime, SourceKind, TheoremTag,
};
use crate::error::{Error, Result};
use crate::radial::{RadialField, RadialGrid, RadialOperator};

/// The invariant set `[M̲₁, M̄₁]·B_u × [M̲₂, M̄₂]·B_v` of the fixed-point map.
#[derive(Debug, Clone, Copy)]
struct Sandwich {
    bu: BarrierProfile,
    bv: BarrierProfile,
    u: (f64, f64),
    v: (f64, f64),
}

impl Sandwich {
    fn from_ledger(ledger: &ConstantsLedger) -> Self {
        let (bu, bv) = match ledger.regime {
            Regime::Exponential => (
                BarrierProfile {
                    family: Family::W,
                    rate: ledger.rate_u,
                },
                BarrierProfile {
                    family: Family::W,
                    rate: ledger.rate_v,
                },
            ),
            Regime::Algebraic => (
                BarrierProfile {
                    family: Family::Z,
                    rate: ledger.rate_u,
                },
                BarrierProfile {
                    family: Family::Z,
                    rate: ledger.rate_v,
                },
            ),
        };
        Self {
            bu,
            bv,
            u: (ledger.m1_lower, ledger.m1_upper),
            v: (ledger.m2_lower, ledger.m2_upper),
        }
    }
}

struct BallSolution {
    grid: RadialGrid,
    u: Vec<f64>,
    v: Vec<f64>,
    rho: Vec<f64>,
    converged: bool,
    violated: bool,
}

/// Picard iteration of `(u, v) ↦ (T u, T v)` on one ball.
///
/// `T u` solves `(-Δ+λ) U = u^p v^{-q} + ρ` and `T v` solves
/// `(-Δ+μ) V = u^m V^{-s}`, both with the lower barriers as boundary data.
/// Damping by one half switches on the first time the change grows.
fn iterate_on_ball(
    problem: &Problem,
    exps: &Exponents,
    sw: &Sandwich,
    grid: RadialGrid,
    options: &SolverOptions,
    history: &mut Vec<IterationState>,
) -> Result<BallSolution> {
    let Exponents { p, q, m, s } = *exps;
    let op = RadialOperator::new(&grid, problem.dimension)?;
    let r = grid.nodes();
    let n = r.len();
    let lower_u: Vec<f64> = r.iter().map(|&x| sw.u.0 * eval_barrier(sw.bu, x)).collect();
    let lower_v: Vec<f64> = r.iter().map(|&x| sw.v.0 * eval_barrier(sw.bv, x)).collect();
    let rho: Vec<f64> = r.iter().map(|&x| problem.rho.eval(x)).collect();
    let (bu, bv) = (lower_u[n - 1], lower_v[n - 1]);

    let mut u = lower_u.clone();
    let mut v = lower_v.clone();
    let mut damping = 1.0;
    let mut last_change = f64::INFINITY;
    let mut converged = false;
    let mut violated = false;
    let mut f = vec![0.0; n];
    let mut psi = vec![0.0; n];
    for k in 0..options.max_iter {
        for i in 0..n {
            let vi = v[i].max(lower_v[i]);
            f[i] = u[i].powf(p) / vi.powf(q) + rho[i];
            psi[i] = u[i].powf(m);
        }
        let tu = op.solve(problem.lambda, &f, bu)?;
        let run = newton_scalar(&op, problem.mu, s, &psi, &lower_v, bv, options.tol, options.max_iter)?;
        let tv = run.v;

        let su = tu.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let sv = tv.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let mut change = 0.0f64;
        for i in 0..n {
            change = change.max((tu[i] - u[i]).abs() / su).max((tv[i] - v[i]).abs() / sv);
        }
        if change > last_change && damping == 1.0 {
            damping = 0.5;
        }
        last_change = change;
        for i in 0..n {
            u[i] += damping * (tu[i] - u[i]);
            v[i] += damping * (tv[i] - v[i]);
        }
        let slack = super::report::SANDWICH_SLACK;
        let outside = (0..n).any(|i| {
            let (a, b) = (eval_barrier(sw.bu, r[i]), eval_barrier(sw.bv, r[i]));
            u[i] < sw.u.0 * a * (1.0 - slack)
                || u[i] > sw.u.1 * a * (1.0 + slack)
                || v[i] < sw.v.0 * b * (1.0 - slack)
                || v[i] > sw.v.1 * b * (1.0 + slack)
        });
        history.push(IterationState {
            ball_radius: grid.radius(),
            iterate_index: k + 1,
            change,
            min_increment: f64::NAN,
            monotone_flag: false,
        });
        if outside {
            violated = true;
            break;
        }
        if change <= options.tol.max(1e-13) {
            converged = true;
            break;
        }
    }
    Ok(BallSolution {
        grid,
        u,
        v,
        rho,
        converged,
        violated,
    })
}

fn coupled_residuals(problem: &Problem, exps: &Exponents, sol: &BallSolution) -> Result<(f64, f64)> {
    let Exponents { p, q, m, s } = *exps;
    let op = RadialOperator::new(&sol.grid, problem.dimension)?;
    let r = sol.grid.nodes();
    let half = 0.5 * sol.grid.radius();
    let lap = op.apply(&sol.u);
    let ru = (0..r.len() - 1)
        .filter(|&i| r[i] <= half)
        .map(|i| (lap[i] + problem.lambda * sol.u[i] - sol.u[i].powf(p) / sol.v[i].powf(q) - sol.rho[i]).abs())
        .fold(0.0, f64::max);
    let psi: Vec<f64> = sol.u.iter().map(|x| x.powf(m)).collect();
    let rv = scalar_residual(&op, r, problem.mu, s, &psi, &sol.v);
    Ok((ru, rv))
}

/// Fixed-point solve inside the ledger's sandwich. With `force`, an
/// infeasible ledger is used anyway; the iteration then usually reports
/// `SandwichViolated` or `MaxIterations`.
pub(crate) fn solve_coupled(
    problem: &Problem,
    exps: &Exponents,
    ledger: &ConstantsLedger,
    options: &SolverOptions,
    force: bool,
) -> Result<SolveReport> {
    if !ledger.feasible && !force {
        return Err(Error::Infeasible(ledger.violated.clone()));
    }
    if !(ledger.m1_lower > 0.0 && ledger.m2_lower > 0.0) {
        return Err(Error::Infeasible(ledger.violated.clone()));
    }
    let sw = Sandwich::from_ledger(ledger);
    let control = options.grid.unwrap_or(GridControl::for_family(sw.bu.family));
    let r0 = options
        .radius
        .unwrap_or_else(|| truncation_radius(sw.bu).max(truncation_radius(sw.bv)));

    let mut history = Vec::new();
    let ball = |radius: f64, history: &mut Vec<IterationState>| {
        let grid = RadialGrid::graded_covering(radius, control.h0, control.stretch)?;
        iterate_on_ball(problem, exps, &sw, grid, options, history)
    };
    let mut sol = ball(r0, &mut history)?;
    let mut growth = Vec::new();
    if !sol.violated {
        for _ in 0..options.max_doublings.max(1) {
            let radius = sol.grid.radius();
            let big = ball(2.0 * radius, &mut history)?;
            let count = sol.grid.len();
            let du = (0..count).map(|i| (big.u[i] - sol.u[i]).abs()).fold(0.0, f64::max);
            let dv = (0..count).map(|i| (big.v[i] - sol.v[i]).abs()).fold(0.0, f64::max);
            let bound_u = sw.u.1 * eval_barrier(sw.bu, radius);
            let bound_v = sw.v.1 * eval_barrier(sw.bv, radius);
            let stable = du <= bound_u && dv <= bound_v;
            for (name, change, bound) in [("u", du, bound_u), ("v", dv, bound_v)] {
                growth.push(BallGrowth {
                    field: name.into(),
                    radius,
                    doubled_radius: big.grid.radius(),
                    change,
                    bound,
                    stable: change <= bound,
                });
            }
            sol = big;
            if stable || sol.violated {
                break;
            }
        }
    }

    let (ru, rv) = coupled_residuals(problem, exps, &sol)?;
    let stable = growth.len() >= 2 && growth[growth.len() - 2..].iter().all(|g| g.stable);
    let grid = sol.grid.clone();
    let u = RadialField::new(grid.clone(), sol.u.clone())?.with_decay_tag(Some(sw.bu));
    let v = RadialField::new(grid, sol.v.clone())?.with_decay_tag(Some(sw.bv));
    let margins = vec![
        SandwichMargin::measure("u", &u, sw.bu, sw.u.0, sw.u.1),
        SandwichMargin::measure("v", &v, sw.bv, sw.v.0, sw.v.1),
    ];
    let window = fit_window(sw.bu.family, r0);
    let decay_fits = vec![
        FieldFit {
            field: "u".into(),
            fit: decay_fit(&u, sw.bu.family, window)?,
        },
        FieldFit {
            field: "v".into(),
            fit: decay_fit(&v, sw.bv.family, window)?,
        },
    ];
    let status = if sol.violated || margins.iter().any(|m| !m.respected) {
        SolveStatus::SandwichViolated
    } else if sol.converged && stable && ru <= options.residual_tol && rv <= options.residual_tol {
        SolveStatus::Converged
    } else {
        SolveStatus::MaxIterations
    };
    Ok(SolveReport {
        status,
        ball_radius: sol.grid.radius(),
        iterations: history.len(),
        residuals: Residuals { u: Some(ru), v: rv },
        margins,
        decay_fits,
        ball_growth: growth,
        history,
        u: Some(u),
        v,
    })
}

/// Coupled solve for `λ, μ > 0` with an exponential source envelope.
///
/// Starts from `(M̲₁ W_a, M̲₂ W_b)` and iterates until the relative change
/// stalls; `u` should decay at rate `a` and `v` at `b = am/(s+1)`.
pub fn solve_coupled_exp(
    problem: &Problem,
    exponents: &Exponents,
    ledger: &ConstantsLedger,
    options: &SolverOptions,
) -> Result<SolveReport> {
    let tag = TheoremTag::ExponentialExistence.as_str();
    if ledger.regime != Regime::Exponential {
        return Err(Error::regime(tag, "ledger is not an exponential-regime ledger"));
    }
    if !problem.is_shifted() {
        return Err(Error::regime(tag, "needs lambda, mu > 0"));
    }
    if problem.rho.kind != SourceKind::ExpEnvelope {
        return Err(Error::regime(tag, "needs an exponential source envelope"));
    }
    solve_coupled(problem, exponents, ledger, options, false)
}

/// Coupled solve for `λ = μ = 0` with an algebraic source envelope.
///
/// Barriers are `Z_{a-2}` for `u` and `Z_b` for `v`, `b = (m(a-2)-2)/(s+1)`.
pub fn solve_coupled_alg(
    problem: &Problem,
    exponents: &Exponents,
    ledger: &ConstantsLedger,
    options: &SolverOptions,
) -> Result<SolveReport> {
    let tag = TheoremTag::AlgebraicExistence.as_str();
    if ledger.regime != Regime::Algebraic {
        return Err(Error::regime(tag, "ledger is not an algebraic-regime ledger"));
    }
    if problem.is_shifted() {
        return Err(Error::regime(tag, "needs lambda = mu = 0"));
    }
    if problem.rho.kind != SourceKind::AlgEnvelope {
        return Err(Error::regime(tag, "needs an algebraic source envelope"));
    }
    solve_coupled(problem, exponents, ledger, options, false)
}
