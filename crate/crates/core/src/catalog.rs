//! Worked examples shipped with the crate.
//!
//! Every system example carries a candidate pair: a computed solution, the
//! bubble profile, or plain barrier profiles for points where no solution
//! exists. The test suite checks that no candidate verifies as a solution
//! at a point classified as nonexistent.

use crate::barriers::{eval_barrier, BarrierProfile, Exponents, Problem, SourceModel};
use crate::certificates::ClosedFormSolution;
use crate::error::Result;
use crate::radial::{RadialField, RadialGrid};
use crate::solvers::{solve_system, ScalarRegime, SolverOptions};

#[derive(Debug, Clone, PartialEq)]
pub enum Candidate {
    /// Output of [`solve_system`]; absent when the solver refuses.
    Solve,
    /// `u = v = w` for the bubble with parameter `a` on a uniform grid.
    Bubble { a: f64, radius: f64, nodes: usize },
    /// `u = cu · Bu`, `v = cv · Bv` on a graded grid.
    Profiles {
        u: (f64, BarrierProfile),
        v: (f64, BarrierProfile),
        radius: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExampleKind {
    Scalar {
        dimension: u32,
        shift: f64,
        s: f64,
        amplitude: f64,
        regime: ScalarRegime,
    },
    System {
        problem: Problem,
        exponents: Exponents,
        candidate: Candidate,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShippedExample {
    pub name: &'static str,
    pub summary: &'static str,
    pub kind: ExampleKind,
}

fn system(
    name: &'static str,
    summary: &'static str,
    problem: Result<Problem>,
    exponents: Result<Exponents>,
    candidate: Candidate,
) -> Result<ShippedExample> {
    Ok(ShippedExample {
        name,
        summary,
        kind: ExampleKind::System {
            problem: problem?,
            exponents: exponents?,
            candidate,
        },
    })
}

fn bubble_example(name: &'static str, summary: &'static str, n: u32, p: f64, s: f64, a: f64) -> Result<ShippedExample> {
    let sol = ClosedFormSolution::aubin_talenti(n, p, s, a)?;
    system(
        name,
        summary,
        Problem::new(n, 0.0, 0.0, SourceModel::zero()),
        Ok(sol.induced_exponents),
        Candidate::Bubble {
            a,
            radius: 20.0,
            nodes: 50_001,
        },
    )
}

/// All shipped examples, in a fixed order.
pub fn shipped_examples() -> Result<Vec<ShippedExample>> {
    let exp_source = |beta: f64, amp: f64| SourceModel::exp_envelope(1.0, beta, 1.0)?.with_amplitude(amp);
    let alg_source =
        |alpha: f64, beta: f64, a: f64| SourceModel::alg_envelope(alpha, beta, a)?.with_amplitude(0.5 * (alpha + beta));
    let z = BarrierProfile::z;
    Ok(vec![
        ShippedExample {
            name: "scalar_exponential",
            summary: "singular scalar equation, N=3, mu=4, s=1, weight W_2",
            kind: ExampleKind::Scalar {
                dimension: 3,
                shift: 4.0,
                s: 1.0,
                amplitude: 1.0,
                regime: ScalarRegime::Exp { gamma: 2.0 },
            },
        },
        ShippedExample {
            name: "scalar_algebraic",
            summary: "singular scalar equation, N=5, mu=0, s=1, weight Z_4",
            kind: ExampleKind::Scalar {
                dimension: 5,
                shift: 0.0,
                s: 1.0,
                amplitude: 1.0,
                regime: ScalarRegime::Alg { gamma: 4.0 },
            },
        },
        system(
            "coupled_exponential",
            "N=3, (p,q,m,s)=(2,1,1,0), lambda=4096, mu=16, rho=1.5 W_1",
            Problem::new(3, 4096.0, 16.0, exp_source(2.0, 1.5)?),
            Exponents::new(2.0, 1.0, 1.0, 0.0),
            Candidate::Solve,
        )?,
        system(
            "coupled_exponential_large_source",
            "as coupled_exponential with rho=2.5 W_1",
            Problem::new(3, 4096.0, 16.0, exp_source(2.5, 2.5)?),
            Exponents::new(2.0, 1.0, 1.0, 0.0),
            Candidate::Solve,
        )?,
        system(
            "coupled_exponential_infeasible",
            "as coupled_exponential with lambda=mu=16; the constants are infeasible",
            Problem::new(3, 16.0, 16.0, exp_source(2.0, 1.5)?),
            Exponents::new(2.0, 1.0, 1.0, 0.0),
            Candidate::Solve,
        )?,
        system(
            "coupled_algebraic",
            "N=5, (p,q,m,s)=(5,2,2,1), lambda=mu=0, rho=0.0125 Z_4",
            Problem::new(5, 0.0, 0.0, alg_source(0.01, 0.015, 4.0)?),
            Exponents::new(5.0, 2.0, 2.0, 1.0),
            Candidate::Solve,
        )?,
        system(
            "slow_source",
            "as coupled_algebraic with source rate a=3; no solution",
            Problem::new(5, 0.0, 0.0, alg_source(0.01, 0.015, 3.0)?),
            Exponents::new(5.0, 2.0, 2.0, 1.0),
            Candidate::Profiles {
                u: (0.001, z(2.0)?),
                v: (4.472_135_954_999_58e-4, z(1.0)?),
                radius: 1e6,
            },
        )?,
        bubble_example("bubble_n3", "bubble pair, N=3, p=6, s=1, A=1", 3, 6.0, 1.0, 1.0)?,
        bubble_example(
            "bubble_n4",
            "bubble pair, N=4, p=4, s=2, A=2 sqrt 2",
            4,
            4.0,
            2.0,
            8f64.sqrt(),
        )?,
        bubble_example("bubble_n5", "bubble pair, N=5, p=3, s=0.5, A=1", 5, 3.0, 0.5, 1.0)?,
        system(
            "serrin_exponent",
            "N=3, p=2.5 <= N/(N-2), rho=0; bubble profile as candidate",
            Problem::new(3, 0.0, 0.0, SourceModel::zero()),
            Exponents::new(2.5, 1.0, 5.0, 1.0),
            Candidate::Bubble {
                a: 1.0,
                radius: 20.0,
                nodes: 50_001,
            },
        )?,
        system(
            "radial_subcritical",
            "N=3, p=4 < (N+2)/(N-2), rho=0; bubble profile as candidate",
            Problem::new(3, 0.0, 0.0, SourceModel::zero()),
            Exponents::new(4.0, 1.0, 6.0, 1.0),
            Candidate::Bubble {
                a: 1.0,
                radius: 20.0,
                nodes: 50_001,
            },
        )?,
    ])
}

pub fn find_example(name: &str) -> Result<ShippedExample> {
    shipped_examples()?
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| crate::Error::Argument(format!("unknown example {name:?}")))
}

/// Builds the candidate pair of a system example; `None` when the solver
/// refuses the point or the example is scalar.
pub fn candidate_pair(example: &ShippedExample) -> Result<Option<(RadialField, RadialField)>> {
    let ExampleKind::System {
        problem,
        exponents,
        candidate,
    } = &example.kind
    else {
        return Ok(None);
    };
    match candidate {
        Candidate::Solve => match solve_system(problem, exponents, &SolverOptions::default(), false) {
            Ok(rep) => Ok(rep.u.map(|u| (u, rep.v))),
            Err(_) => Ok(None),
        },
        Candidate::Bubble { a, radius, nodes } => {
            let grid = RadialGrid::uniform(*radius, *nodes)?;
            let n = problem.dimension;
            let w = RadialField::from_fn(&grid, |r| {
                crate::certificates::aubin_talenti(n, *a, r).unwrap_or(f64::NAN)
            })?
            .with_decay_tag(Some(BarrierProfile::z(f64::from(n) - 2.0)?));
            Ok(Some((w.clone(), w)))
        }
        Candidate::Profiles { u, v, radius } => {
            let grid = RadialGrid::graded_covering(*radius, 0.01, 1.01)?;
            let make = |(c, b): (f64, BarrierProfile)| {
                RadialField::from_fn(&grid, |r| c * eval_barrier(b, r)).map(|f| f.with_decay_tag(Some(b)))
            };
            Ok(Some((make(*u)?, make(*v)?)))
        }
    }
}
