use super::coupled::solve_coupled;
use super::report::SolveReport;
use super::scalar::SolverOptions;
use crate::barriers::{classify, Exponents, Problem, VerdictStatus};
use crate::error::{Error, Result};

/// Classifies the point, then runs the matching coupled solver.
///
/// Nonexistence verdicts are refused with their tag. Points with an
/// infeasible ledger are refused unless `force` is set, in which case the
/// solver runs inside the (inconsistent) sandwich and reports what happens.
/// Points without any applicable construction are always refused.
pub fn solve_system(
    problem: &Problem,
    exponents: &Exponents,
    options: &SolverOptions,
    force: bool,
) -> Result<SolveReport> {
    let verdict = classify(problem, exponents);
    match verdict.status {
        VerdictStatus::Nonexistence => Err(Error::Nonexistence {
            theorem: verdict.tag_str().to_string(),
            detail: verdict.reason,
        }),
        VerdictStatus::ExistenceGuaranteed | VerdictStatus::Unknown => {
            let Some(ledger) = verdict.ledger else {
                return Err(Error::Regime {
                    theorem: "classification".into(),
                    detail: format!("no constructive result applies: {}", verdict.reason),
                });
            };
            if !ledger.feasible && !force {
                return Err(Error::Infeasible(ledger.violated));
            }
            solve_coupled(problem, exponents, &ledger, options, force)
        }
    }
}
