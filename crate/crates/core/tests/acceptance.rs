//! Acceptance suite: one line per criterion with its runtime and budget.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use gm_steady::barriers::{
    alg_regime_ledger, barrier_operator_ratio, check_sandwich, classify, eval_barrier, exp_regime_ledger,
    sandwich_coefficients, BarrierProfile, Exponents, Family, Problem, SourceModel, TheoremTag, VerdictStatus,
};
use gm_steady::catalog::{candidate_pair, shipped_examples, ExampleKind};
use gm_steady::certificates::{verify_cor3, verify_solution};
use gm_steady::kernels::{green_lambda, kernel_mass, GreenParams};
use gm_steady::potentials::newton_potential_and_derivative;
use gm_steady::radial::{RadialField, RadialGrid};
use gm_steady::region::{sweep_region, Axis, Model, Parameter, PointSpec, RegionConfig};
use gm_steady::solvers::{solve_singular_scalar, solve_system, ScalarRegime, ScalarWeight, SolveStatus, SolverOptions};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn kernel_calibration() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 3..=5 {
        for lambda in [1.0, 4.0, 9.0] {
            let params = GreenParams::new(n, lambda).map_err(|e| e.to_string())?;
            let mass = kernel_mass(params).map_err(|e| e.to_string())?;
            let err = (mass - 1.0 / lambda).abs() * lambda;
            worst = worst.max(err);
            ensure(err <= 1e-8, || format!("N={n} lambda={lambda}: mass {mass}"))?;
        }
    }
    let mut closed: f64 = 0.0;
    for lambda in [1.0f64, 4.0, 9.0] {
        let params = GreenParams::new(3, lambda).map_err(|e| e.to_string())?;
        for i in 0..=2000 {
            let r = 0.01 * (2000.0f64).powf(f64::from(i) / 2000.0);
            let exact = (-lambda.sqrt() * r).exp() / (4.0 * PI * r);
            let g = green_lambda(params, r).map_err(|e| e.to_string())?;
            closed = closed.max(rel(g, exact));
        }
    }
    ensure(closed <= 1e-10, || format!("N=3 closed form off by {closed:e}"))?;
    Ok(format!(
        "max lambda*|mass-1/lambda| {worst:.1e}, N=3 closed form {closed:.1e}"
    ))
}

fn barrier_sandwiches() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2);
    let mut worst_zero: f64 = 0.0;
    for _ in 0..20 {
        let n: u32 = rng.random_range(3..=8);
        let lambda: f64 = rng.random_range(0.1..50.0);
        let w_rate: f64 = rng.random_range(0.05..lambda.sqrt());
        let z_rate: f64 = rng.random_range(0.05..f64::from(n) - 2.0);
        let grid: Vec<f64> = (0..10_000).map(|i| 1e-3 * f64::from(i) * f64::from(i) / 1e4).collect();
        for (profile, shift) in [
            (BarrierProfile::w(w_rate).map_err(|e| e.to_string())?, lambda),
            (BarrierProfile::z(z_rate).map_err(|e| e.to_string())?, 0.0),
        ] {
            let check = check_sandwich(profile, shift, n, &grid);
            ensure(check.holds, || format!("{profile:?} N={n} shift={shift}: {check:?}"))?;
            let (_, hi) = sandwich_coefficients(profile, shift, n);
            let at_zero = match profile.family {
                Family::W => barrier_operator_ratio(profile, shift, 0.0, n),
                Family::Z => {
                    let lap = barrier_operator_ratio(profile, 0.0, 0.0, n);
                    let z2 = BarrierProfile::z(profile.rate + 2.0).map_err(|e| e.to_string())?;
                    lap * eval_barrier(profile, 0.0) / eval_barrier(z2, 0.0)
                }
            };
            worst_zero = worst_zero.max(rel(at_zero, hi));
        }
    }
    ensure(worst_zero <= 1e-12, || {
        format!("upper bound at r=0 off by {worst_zero:e}")
    })?;
    Ok(format!(
        "40 profiles x 1e4 radii, upper equality at 0 to {worst_zero:.1e}"
    ))
}

fn ledger_identities() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    let (mut exp_ok, mut alg_ok, mut worst) = (0, 0, 0.0f64);
    let mut tries = 0;
    while exp_ok < 1000 {
        tries += 1;
        ensure(tries < 2_000_000, || {
            format!("only {exp_ok} feasible exponential inputs")
        })?;
        let n: u32 = rng.random_range(3..=6);
        let p: f64 = rng.random_range(1.2..4.0);
        let s: f64 = rng.random_range(0.0..2.0);
        let m: f64 = rng.random_range(0.3..3.0);
        let q: f64 = rng.random_range(0.1..1.0) * (p - 1.0) * (s + 1.0) / m;
        let a: f64 = rng.random_range(0.2..2.0);
        let lambda = 10f64.powf(rng.random_range(1.5..5.0));
        let mu = 10f64.powf(rng.random_range(1.0..3.0));
        let alpha: f64 = rng.random_range(0.1..2.0);
        let beta = alpha * rng.random_range(1.0..1.5);
        let e = Exponents::new(p, q, m, s).map_err(|e| e.to_string())?;
        let Ok(l) = exp_regime_ledger(e, n, lambda, mu, alpha, beta, a) else {
            continue;
        };
        if !l.feasible {
            continue;
        }
        exp_ok += 1;
        for (lhs, rhs) in [
            (2.0 * lambda * l.m1_lower, alpha),
            (2.0 * mu * l.m2_lower, l.m1_lower.powf(m) * l.m2_lower.powf(-s)),
            (0.25 * lambda * l.m1_upper, l.m1_upper.powf(p) * l.m2_lower.powf(-q)),
            (0.5 * mu * l.m2_upper, l.m1_upper.powf(m) * l.m2_upper.powf(-s)),
        ] {
            worst = worst.max(rel(lhs, rhs));
        }
    }
    tries = 0;
    while alg_ok < 1000 {
        tries += 1;
        ensure(tries < 2_000_000, || format!("only {alg_ok} feasible algebraic inputs"))?;
        let n: u32 = rng.random_range(4..=8);
        let nf = f64::from(n);
        let m: f64 = rng.random_range(1.0..4.0);
        let low = 2.0 * (1.0 + 1.0 / m);
        if low >= nf {
            continue;
        }
        let a: f64 = rng.random_range(low..nf);
        let p: f64 = rng.random_range(1.5..8.0);
        let s: f64 = rng.random_range(0.0..2.0);
        let q: f64 = rng.random_range(0.05..0.95) * (p - 1.0) * (s + 1.0) / m;
        let alpha = 10f64.powf(rng.random_range(-6.0..-1.0));
        let beta = alpha * rng.random_range(1.0..1.2);
        let e = Exponents::new(p, q, m, s).map_err(|e| e.to_string())?;
        let Ok(l) = alg_regime_ledger(e, n, alpha, beta, a) else {
            continue;
        };
        if !l.feasible {
            continue;
        }
        alg_ok += 1;
        let (big_a, big_b, big_c, big_d) = (l.aux["A"], l.aux["B"], l.aux["C"], l.aux["D"]);
        let sigma = l.aux["sigma"];
        let b = l.rate_v;
        for (lhs, rhs) in [
            (big_a * (a - 2.0) * nf, 1.0),
            (big_b.powf(s + 1.0) * b * nf, big_a.powf(m)),
            (2.0 * big_c.powf(p - 1.0), (a - 2.0) * (nf - a) * big_b.powf(q)),
            (big_d.powf(s + 1.0) * b * (nf - b - 2.0), big_c.powf(m)),
            (l.m1_lower, big_a * alpha),
            (l.m1_upper, big_c * alpha.powf(sigma)),
            (l.m2_lower, big_b * alpha.powf(m / (s + 1.0))),
            (l.m2_upper, big_d * alpha.powf(sigma * m / (s + 1.0))),
        ] {
            worst = worst.max(rel(lhs, rhs));
        }
    }
    let e = Exponents::new(2.0, 1.0, 1.0, 0.0).map_err(|e| e.to_string())?;
    let l = exp_regime_ledger(e, 3, 4096.0, 16.0, 1.0, 2.0, 1.0).map_err(|e| e.to_string())?;
    for (got, want) in [
        (l.m1_lower, 1.0 / 8192.0),
        (l.m1_upper, 1.0 / 256.0),
        (l.m2_lower, 1.0 / 262_144.0),
        (l.m2_upper, 1.0 / 2048.0),
    ] {
        worst = worst.max(rel(got, want));
    }
    let e = Exponents::new(5.0, 2.0, 2.0, 1.0).map_err(|e| e.to_string())?;
    let l = alg_regime_ledger(e, 5, 0.01, 0.015, 4.0).map_err(|e| e.to_string())?;
    let c = 0.002f64.powf(0.25);
    for (got, want) in [
        (l.m1_lower, 0.001),
        (l.m1_upper, 0.1 * c),
        (l.m2_lower, 0.01 * 0.002f64.sqrt()),
        (l.m2_upper, 0.1 * c / 2f64.sqrt()),
        (l.aux["epsilon"], c * c),
    ] {
        worst = worst.max(rel(got, want));
    }
    ensure(worst <= 1e-12, || format!("identity off by {worst:e}"))?;
    Ok(format!(
        "1000 + 1000 random ledgers and both worked examples, worst {worst:.1e}"
    ))
}

fn scalar_exponential() -> Outcome {
    let rep = solve_singular_scalar(
        3,
        4.0,
        1.0,
        &ScalarWeight::Envelope { amplitude: 1.0 },
        ScalarRegime::Exp { gamma: 2.0 },
        &SolverOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    ensure(rep.status == SolveStatus::Converged, || format!("{:?}", rep.status))?;
    ensure(rep.residuals.v <= 1e-8, || format!("residual {}", rep.residuals.v))?;
    ensure(rep.history.iter().all(|h| h.min_increment >= -1e-12), || {
        "non-monotone iterate".into()
    })?;
    let m = rep.margin("v").ok_or("no margin")?;
    ensure(
        (m.lower - 0.3780).abs() < 5e-5 && (m.upper - 0.5774).abs() < 5e-5,
        || format!("sandwich [{}, {}]", m.lower, m.upper),
    )?;
    ensure(m.min_ratio >= 1.0 - 1e-9 && m.max_ratio <= 1.0 + 1e-9, || {
        format!("{m:?}")
    })?;
    let rate = rep.fit("v").ok_or("no fit")?.rate;
    ensure((rate - 1.0).abs() <= 0.02, || format!("rate {rate}"))?;
    Ok(format!(
        "residual {:.1e}, ratios [{:.4}, {:.4}], rate {rate:.4}",
        rep.residuals.v, m.min_ratio, m.max_ratio
    ))
}

fn scalar_algebraic() -> Outcome {
    let rep = solve_singular_scalar(
        5,
        0.0,
        1.0,
        &ScalarWeight::Envelope { amplitude: 1.0 },
        ScalarRegime::Alg { gamma: 4.0 },
        &SolverOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    ensure(rep.status == SolveStatus::Converged, || format!("{:?}", rep.status))?;
    let m = rep.margin("v").ok_or("no margin")?;
    ensure(
        (m.lower - 0.2f64.sqrt()).abs() < 5e-5 && (m.upper - FRAC_1_SQRT_2).abs() < 5e-5,
        || format!("sandwich [{}, {}]", m.lower, m.upper),
    )?;
    ensure(m.respected, || format!("{m:?}"))?;
    let rate = rep.fit("v").ok_or("no fit")?.rate;
    ensure((rate - 1.0).abs() <= 0.03, || format!("rate {rate}"))?;
    Ok(format!(
        "ratios [{:.6}, {:.6}] with upper discrete defect {:.1e}, rate {rate:.4}",
        m.min_ratio, m.max_ratio, m.upper_defect
    ))
}

fn coupled(problem: &Problem, exponents: &Exponents) -> Result<gm_steady::solvers::SolveReport, String> {
    let rep = solve_system(problem, exponents, &SolverOptions::default(), false).map_err(|e| e.to_string())?;
    ensure(rep.status == SolveStatus::Converged, || format!("{:?}", rep.status))?;
    let (ru, rv) = (rep.residuals.u.unwrap_or(f64::INFINITY), rep.residuals.v);
    ensure(ru <= 1e-5 && rv <= 1e-5, || format!("residuals {ru:e} {rv:e}"))?;
    ensure(rep.margins.iter().all(|m| m.respected), || format!("{:?}", rep.margins))?;
    Ok(rep)
}

fn coupled_exponential() -> Outcome {
    let e = Exponents::new(2.0, 1.0, 1.0, 0.0).map_err(|e| e.to_string())?;
    let rho = SourceModel::exp_envelope(1.0, 2.0, 1.0)
        .and_then(|r| r.with_amplitude(1.5))
        .map_err(|e| e.to_string())?;
    let pb = Problem::new(3, 4096.0, 16.0, rho).map_err(|e| e.to_string())?;
    let rep = coupled(&pb, &e)?;
    let (ru, rv) = (rep.fit("u").ok_or("no fit")?.rate, rep.fit("v").ok_or("no fit")?.rate);
    let ratio = rv / ru;
    ensure((ratio - 1.0).abs() <= 0.02, || format!("rate ratio {ratio}"))?;
    Ok(format!(
        "residuals {:.1e}/{:.1e}, rates u {ru:.4} v {rv:.4}",
        rep.residuals.u.unwrap_or(0.0),
        rep.residuals.v
    ))
}

fn coupled_algebraic() -> Outcome {
    let e = Exponents::new(5.0, 2.0, 2.0, 1.0).map_err(|e| e.to_string())?;
    let rho = SourceModel::alg_envelope(0.01, 0.015, 4.0)
        .and_then(|r| r.with_amplitude(0.0125))
        .map_err(|e| e.to_string())?;
    let pb = Problem::new(5, 0.0, 0.0, rho).map_err(|e| e.to_string())?;
    let rep = coupled(&pb, &e)?;
    let (ru, rv) = (rep.fit("u").ok_or("no fit")?.rate, rep.fit("v").ok_or("no fit")?.rate);
    ensure((ru - 2.0).abs() <= 0.06 && (rv - 1.0).abs() <= 0.03, || {
        format!("rates {ru} {rv}")
    })?;
    Ok(format!(
        "residuals {:.1e}/{:.1e}, rates u {ru:.4} v {rv:.4}",
        rep.residuals.u.unwrap_or(0.0),
        rep.residuals.v
    ))
}

fn bubble_certificate() -> Outcome {
    let mut orders = Vec::new();
    for (n, p, s, a) in [(3, 6.0, 1.0, 1.0), (4, 4.0, 2.0, 8f64.sqrt()), (5, 3.0, 0.5, 1.0)] {
        let coarse = RadialGrid::uniform(20.0, 2001).map_err(|e| e.to_string())?;
        let fine = coarse.refined();
        let e1 = verify_cor3(n, p, s, a, &coarse)
            .map_err(|e| e.to_string())?
            .max_residual();
        let e2 = verify_cor3(n, p, s, a, &fine)
            .map_err(|e| e.to_string())?
            .max_residual();
        let order = (e1 / e2).log2();
        ensure((1.85..=2.15).contains(&order), || format!("N={n}: order {order}"))?;
        orders.push(format!("{order:.3}"));
    }
    Ok(format!("observed orders {}", orders.join(", ")))
}

fn threshold(config: &RegionConfig, tag: TheoremTag) -> Result<f64, String> {
    let table = sweep_region(config, None).map_err(|e| e.to_string())?;
    let t = table
        .transitions
        .iter()
        .find(|t| t.from_tag == Some(tag) && t.to_tag != Some(tag))
        .ok_or_else(|| format!("no transition out of {tag}"))?;
    let x = t.threshold.ok_or("unrefined transition")?;
    // every lattice point on the low side carries the nonexistence tag
    let k = table.parameters.len() - 1;
    for row in &table.rows {
        let below = row.values[k] < x;
        ensure(below == (row.tag == Some(tag)), || {
            format!("row {row:?} vs threshold {x}")
        })?;
    }
    Ok(x)
}

fn nonexistence_boundaries() -> Outcome {
    let axis = |parameter, start, stop| Axis {
        parameter,
        start,
        stop,
        count: 60,
    };
    let p = threshold(
        &RegionConfig {
            model: Model::System,
            base: PointSpec {
                dimension: 3,
                m: 5.0,
                ..PointSpec::default()
            },
            axes: vec![axis(Parameter::P, 1.1, 6.0)],
        },
        TheoremTag::SerrinExponent,
    )?;
    let a = threshold(
        &RegionConfig {
            model: Model::System,
            base: PointSpec {
                dimension: 5,
                p: 5.0,
                q: 2.0,
                m: 2.0,
                s: 1.0,
                source: gm_steady::barriers::SourceKind::AlgEnvelope,
                alpha: 0.01,
                beta: 0.015,
                ..PointSpec::default()
            },
            axes: vec![axis(Parameter::RateA, 2.0, 5.0)],
        },
        TheoremTag::SlowSourceDecay,
    )?;
    let g = threshold(
        &RegionConfig {
            model: Model::ScalarAlgebraic,
            base: PointSpec {
                dimension: 5,
                s: 1.0,
                ..PointSpec::default()
            },
            axes: vec![axis(Parameter::Gamma, 0.5, 6.0)],
        },
        TheoremTag::ScalarSlowWeight,
    )?;
    for (got, want, name) in [(p, 3.0, "p"), (a, 3.0, "a"), (g, 2.0, "gamma")] {
        ensure((got - want).abs() <= 1e-12, || format!("{name} threshold {got}"))?;
    }
    Ok(format!("p* = {p}, a* = {a}, gamma* = {g}"))
}

fn random_source(rng: &mut StdRng, grid: &RadialGrid) -> Result<RadialField, String> {
    let terms: usize = rng.random_range(1..=3);
    let mut parts = Vec::new();
    for _ in 0..terms {
        let amp: f64 = rng.random_range(0.1..5.0);
        let profile = if rng.random_bool(0.5) {
            BarrierProfile::w(rng.random_range(0.2..3.0))
        } else {
            BarrierProfile::z(rng.random_range(2.5..8.0))
        }
        .map_err(|e| e.to_string())?;
        let centre: f64 = rng.random_range(0.0..10.0);
        parts.push((amp, profile, centre));
    }
    let values = grid
        .nodes()
        .iter()
        .map(|&r| {
            parts
                .iter()
                .map(|&(c, b, x0)| c * eval_barrier(b, (r - x0).abs()))
                .sum()
        })
        .collect();
    RadialField::new(grid.clone(), values).map_err(|e| e.to_string())
}

fn radial_gradient() -> Outcome {
    let mut rng = StdRng::seed_from_u64(10);
    let grid = RadialGrid::graded_from_step(200.0, 0.01, 1.01).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let n: u32 = rng.random_range(3..=7);
        let g = random_source(&mut rng, &grid)?;
        let (v, dv) = newton_potential_and_derivative(n, &g).map_err(|e| e.to_string())?;
        let limit = f64::from(n) - 2.0;
        // the far field attains N-2 exactly; allow for rounding in r|v'|/v
        let ceiling = limit * (1.0 + 1e-14);
        for ((&r, &x), &d) in grid.nodes().iter().zip(v.values()).zip(&dv) {
            let ratio = r * d.abs() / x;
            worst = worst.max(ratio / limit);
            ensure(ratio <= ceiling, || {
                format!("source {k}, N={n}: r|v'|/v = {ratio} > {limit} at r={r}")
            })?;
        }
    }
    Ok(format!("50 sources, max (r|v'|/v)/(N-2) = {worst:.6}"))
}

fn cross_consistency() -> Outcome {
    let mut checked = 0;
    let mut passing = 0;
    for ex in shipped_examples().map_err(|e| e.to_string())? {
        let ExampleKind::System { problem, exponents, .. } = &ex.kind else {
            continue;
        };
        let verdict = classify(problem, exponents);
        let Some((u, v)) = candidate_pair(&ex).map_err(|e| e.to_string())? else {
            continue;
        };
        let cert = verify_solution(problem, exponents, &u, &v).map_err(|e| format!("{}: {e}", ex.name))?;
        checked += 1;
        if cert.passes(1e-6) {
            passing += 1;
        }
        ensure(
            !(cert.passes(1e-6) && verdict.status == VerdictStatus::Nonexistence),
            || format!("{} verifies but is classified {}", ex.name, verdict.tag_str()),
        )?;
    }
    ensure(passing >= 1, || "no shipped example verifies at all".into())?;
    Ok(format!(
        "{checked} candidates checked, {passing} verify, none at a nonexistence point"
    ))
}

type Criterion = (&'static str, u64, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("kernel calibration", 5, kernel_calibration),
        ("barrier sandwiches", 1, barrier_sandwiches),
        ("ledger identities", 1, ledger_identities),
        ("scalar solver, exponential weight", 10, scalar_exponential),
        ("scalar solver, algebraic weight", 10, scalar_algebraic),
        ("coupled exponential regime", 60, coupled_exponential),
        ("coupled algebraic regime", 60, coupled_algebraic),
        ("bubble certificate order", 10, bubble_certificate),
        ("nonexistence boundaries", 5, nonexistence_boundaries),
        ("radial gradient criterion", 10, radial_gradient),
        ("cross-consistency of shipped examples", 5, cross_consistency),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_budget = elapsed <= Duration::from_secs(*budget);
        let (status, detail) = match (&outcome, in_budget) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over the {budget} s budget")),
            (Err(d), _) => ("FAIL", d.clone()),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!(
            "{status} [{:>2}] {name} ({:.3} s, budget {budget} s): {detail}",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
