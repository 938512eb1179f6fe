use serde::Serialize;

use crate::barriers::{Advisory, Exponents, Family, Problem, TheoremTag};
use crate::error::{Error, Result};
use crate::potentials::{convr_check, representation_residual, ConvrReport};
use crate::radial::{RadialField, RadialOperator};
use crate::solvers::{decay_fit, FieldFit, Residuals};

/// Evidence that a pair `(u, v)` solves the steady-state system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionCertificate {
    /// Sup of the differential residuals over nodes in `[0, R/2]`.
    pub residuals: Residuals,
    /// Relative gaps to the potentials of the right-hand sides; absent when
    /// a potential diverges.
    pub representation: Option<Residuals>,
    pub decay_fits: Vec<FieldFit>,
    /// Radial gradient check on `v`; absent when `R < 1`.
    pub convr: Option<ConvrReport>,
    /// Known nonexistence results the pair appears to run into. Advisory only.
    pub flags: Vec<Advisory>,
    pub notes: Vec<String>,
}

impl SolutionCertificate {
    pub fn max_residual(&self) -> f64 {
        self.residuals.u.unwrap_or(0.0).max(self.residuals.v)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual() <= tol
    }
}

/// Differential and integral residuals, decay fits and advisory flags.
///
/// A flag records that the pair would contradict a nonexistence result if it
/// were an exact solution. Numerics cannot tell an approximate solution of
/// an impossible problem from a discretization artifact, so flags never fail
/// the certificate.
pub fn verify_solution(
    problem: &Problem,
    exponents: &Exponents,
    u: &RadialField,
    v: &RadialField,
) -> Result<SolutionCertificate> {
    if u.nodes() != v.nodes() {
        return Err(Error::argument("u and v must live on the same grid"));
    }
    if u.min_value() <= 0.0 || v.min_value() <= 0.0 {
        return Err(Error::domain("verification needs u, v > 0 on the grid"));
    }
    let Exponents { p, q, m, s } = *exponents;
    let grid = u.grid();
    let r = grid.nodes();
    let op = RadialOperator::new(grid, problem.dimension)?;
    let (lu, lv) = (op.apply(u.values()), op.apply(v.values()));
    let half = 0.5 * grid.radius();
    let (mut ru, mut rv) = (0.0f64, 0.0f64);
    for i in (0..r.len() - 1).filter(|&i| r[i] <= half) {
        let (ui, vi) = (u.values()[i], v.values()[i]);
        ru = ru.max((lu[i] + problem.lambda * ui - ui.powf(p) / vi.powf(q) - problem.rho.eval(r[i])).abs());
        rv = rv.max((lv[i] + problem.mu * vi - ui.powf(m) / vi.powf(s)).abs());
    }
    let mut notes = Vec::new();
    let representation = match representation_residual(problem, exponents, u, v) {
        Ok((ru, rv)) => Some(Residuals { u: Some(ru), v: rv }),
        Err(e @ Error::Divergence { .. }) => {
            notes.push(format!("integral form unavailable: {e}"));
            None
        }
        Err(e) => return Err(e),
    };

    let family = if problem.is_shifted() { Family::W } else { Family::Z };
    let window = crate::solvers::fit_window(family, half);
    let fit_u = decay_fit(u, family, window)?;
    let fit_v = decay_fit(v, family, window)?;
    let convr = if grid.radius() >= 1.0 {
        Some(convr_check(v)?)
    } else {
        None
    };

    let mut flags = Vec::new();
    let n = problem.n();
    let window_open = n / (n - 2.0) < p && p < (n + 2.0) / (n - 2.0);
    if !problem.is_shifted() && problem.rho.is_zero() && window_open {
        if let Some(c) = convr.as_ref().filter(|c| c.holds) {
            flags.push(Advisory {
                tag: TheoremTag::GradientBoundContradiction,
                note: format!("r|v'|/v stays bounded (sup {:.4}) in the subcritical window", c.bound),
            });
        }
        let limit = ((n - 2.0) * s + n) / m;
        if fit_u.rate < limit {
            flags.push(Advisory {
                tag: TheoremTag::SlowDecayActivator,
                note: format!("fitted u rate {:.4} < ((N-2)s+N)/m = {limit:.4}", fit_u.rate),
            });
        }
    }

    Ok(SolutionCertificate {
        residuals: Residuals { u: Some(ru), v: rv },
        representation,
        decay_fits: vec![
            FieldFit {
                field: "u".into(),
                fit: fit_u,
            },
            FieldFit {
                field: "v".into(),
                fit: fit_v,
            },
        ],
        convr,
        flags,
        notes,
    })
}
