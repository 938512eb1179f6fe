use gm_steady::barriers::{alg_regime_ledger, exp_regime_ledger, Exponents, Problem, SourceModel};
use gm_steady::potentials::representation_residual;
use gm_steady::radial::RadialField;
use gm_steady::solvers::{
    solve_coupled_alg, solve_coupled_exp, solve_singular_scalar, GridControl, ScalarRegime, ScalarWeight, SolveReport,
    SolveStatus, SolverOptions,
};
use gm_steady::Error;

fn scalar(dim: u32, mu: f64, gamma_regime: ScalarRegime) -> SolveReport {
    solve_singular_scalar(
        dim,
        mu,
        1.0,
        &ScalarWeight::Envelope { amplitude: 1.0 },
        gamma_regime,
        &SolverOptions::default(),
    )
    .unwrap()
}

fn exp_example(beta: f64, amplitude: f64) -> (Problem, Exponents, SolveReport) {
    let e = Exponents::new(2.0, 1.0, 1.0, 0.0).unwrap();
    let rho = SourceModel::exp_envelope(1.0, beta, 1.0)
        .unwrap()
        .with_amplitude(amplitude)
        .unwrap();
    let pb = Problem::new(3, 4096.0, 16.0, rho).unwrap();
    let ledger = exp_regime_ledger(e, 3, 4096.0, 16.0, 1.0, beta, 1.0).unwrap();
    let rep = solve_coupled_exp(&pb, &e, &ledger, &SolverOptions::default()).unwrap();
    (pb, e, rep)
}

fn alg_example() -> (Problem, Exponents, SolveReport) {
    let e = Exponents::new(5.0, 2.0, 2.0, 1.0).unwrap();
    let rho = SourceModel::alg_envelope(0.01, 0.015, 4.0)
        .unwrap()
        .with_amplitude(0.0125)
        .unwrap();
    let pb = Problem::new(5, 0.0, 0.0, rho).unwrap();
    let ledger = alg_regime_ledger(e, 5, 0.01, 0.015, 4.0).unwrap();
    let rep = solve_coupled_alg(&pb, &e, &ledger, &SolverOptions::default()).unwrap();
    (pb, e, rep)
}

fn scaled(field: &RadialField, factor: f64) -> RadialField {
    field.map(|_, x| factor * x).unwrap().with_decay_tag(field.decay_tag())
}

#[test]
fn scalar_exponential_example() {
    let rep = scalar(3, 4.0, ScalarRegime::Exp { gamma: 2.0 });
    assert_eq!(rep.status, SolveStatus::Converged);
    assert!(rep.residuals.v <= 1e-8, "{:?}", rep.residuals);
    assert!(rep.history.iter().all(|h| h.monotone_flag && h.min_increment >= -1e-12));
    let m = rep.margin("v").unwrap();
    assert!((m.lower - (1.0f64 / 7.0).sqrt()).abs() < 1e-15);
    assert!((m.upper - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
    assert!(m.respected && m.min_ratio >= 1.0 - 1e-9 && m.max_ratio <= 1.0 + 1e-9);
    assert!((rep.fit("v").unwrap().rate - 1.0).abs() < 0.02);
}

#[test]
fn scalar_algebraic_example() {
    let rep = scalar(5, 0.0, ScalarRegime::Alg { gamma: 4.0 });
    assert_eq!(rep.status, SolveStatus::Converged);
    assert!(rep.history.iter().all(|h| h.monotone_flag));
    let m = rep.margin("v").unwrap();
    assert!((m.lower - 0.2f64.sqrt()).abs() < 1e-15);
    assert!((m.upper - 0.5f64.sqrt()).abs() < 1e-15);
    assert!(m.respected);
    // Excess over the upper barrier is bounded by its own discrete defect.
    assert!(m.upper_defect < 1e-4 && m.max_ratio <= 1.0 + m.upper_defect + 1e-9);
    assert!((rep.fit("v").unwrap().rate - 1.0).abs() < 0.03);
}

#[test]
fn scalar_refusals() {
    let w = ScalarWeight::Envelope { amplitude: 1.0 };
    let opts = SolverOptions::default();
    let err = solve_singular_scalar(3, 0.2, 1.0, &w, ScalarRegime::Exp { gamma: 2.0 }, &opts).unwrap_err();
    assert!(matches!(err, Error::Regime { .. }), "{err}");
    let err = solve_singular_scalar(5, 0.0, 1.0, &w, ScalarRegime::Alg { gamma: 2.0 }, &opts).unwrap_err();
    assert!(matches!(err, Error::Nonexistence { .. }), "{err}");
}

#[test]
fn coupled_exponential_example() {
    let (pb, e, rep) = exp_example(2.0, 1.5);
    assert_eq!(rep.status, SolveStatus::Converged);
    let r = &rep.residuals;
    assert!(r.u.unwrap() <= 1e-6 && r.v <= 1e-6, "{r:?}");
    let (mu, mv) = (rep.margin("u").unwrap(), rep.margin("v").unwrap());
    assert!(mu.respected && mv.respected);
    assert!((mu.lower - 1.0 / 8192.0).abs() < 1e-15 && (mu.upper - 1.0 / 256.0).abs() < 1e-15);
    assert!((mv.lower - 1.0 / 262_144.0).abs() < 1e-15 && (mv.upper - 1.0 / 2048.0).abs() < 1e-15);
    let ratio = rep.fit("v").unwrap().rate / rep.fit("u").unwrap().rate;
    assert!((ratio - 1.0).abs() < 0.02, "{ratio}");
    assert!(rep.ball_growth.iter().any(|g| g.stable));

    let (u, v) = (rep.u.as_ref().unwrap(), &rep.v);
    let (gu, gv) = representation_residual(&pb, &e, u, v).unwrap();
    assert!(gu <= 1e-5 && gv <= 1e-5, "{gu} {gv}");
    let (gu, _) = representation_residual(&pb, &e, &scaled(u, 1.1), v).unwrap();
    assert!(gu >= 1e-2, "{gu}");
}

#[test]
fn coupled_exponential_larger_source() {
    let (_, _, rep) = exp_example(2.5, 2.5);
    assert_eq!(rep.status, SolveStatus::Converged);
    assert!(rep.margins.iter().all(|m| m.respected));
}

#[test]
fn coupled_exponential_refusal() {
    let e = Exponents::new(2.0, 1.0, 1.0, 0.0).unwrap();
    let rho = SourceModel::exp_envelope(1.0, 2.0, 1.0).unwrap();
    let pb = Problem::new(3, 16.0, 16.0, rho).unwrap();
    let ledger = exp_regime_ledger(e, 3, 16.0, 16.0, 1.0, 2.0, 1.0).unwrap();
    let err = solve_coupled_exp(&pb, &e, &ledger, &SolverOptions::default()).unwrap_err();
    assert!(matches!(&err, Error::Infeasible(v) if !v.is_empty()), "{err}");
}

#[test]
fn coupled_algebraic_example() {
    let (pb, e, rep) = alg_example();
    assert_eq!(rep.status, SolveStatus::Converged);
    let r = &rep.residuals;
    assert!(r.u.unwrap() <= 1e-5 && r.v <= 1e-5, "{r:?}");
    let (mu, mv) = (rep.margin("u").unwrap(), rep.margin("v").unwrap());
    assert!(mu.respected && mv.respected);
    assert!((mu.lower - 0.001).abs() < 1e-15 && (mu.upper - 0.0211474).abs() < 1e-7);
    assert!((mv.lower - 4.47214e-4).abs() < 1e-9 && (mv.upper - 0.0149534).abs() < 1e-7);
    assert!((rep.fit("u").unwrap().rate - 2.0).abs() < 0.06);
    assert!((rep.fit("v").unwrap().rate - 1.0).abs() < 0.03);

    let (u, v) = (rep.u.as_ref().unwrap(), &rep.v);
    let (gu, gv) = representation_residual(&pb, &e, u, v).unwrap();
    assert!(gu <= 1e-3 && gv <= 1e-3, "{gu} {gv}");
    let (gu, _) = representation_residual(&pb, &e, &scaled(u, 1.1), v).unwrap();
    assert!(gu >= 1e-2, "{gu}");
}

#[test]
fn algebraic_representation_gap_is_second_order() {
    let e = Exponents::new(5.0, 2.0, 2.0, 1.0).unwrap();
    let rho = SourceModel::alg_envelope(0.01, 0.015, 4.0)
        .unwrap()
        .with_amplitude(0.0125)
        .unwrap();
    let pb = Problem::new(5, 0.0, 0.0, rho).unwrap();
    let ledger = alg_regime_ledger(e, 5, 0.01, 0.015, 4.0).unwrap();
    let gap = |k: f64| {
        let grid = Some(GridControl {
            h0: 0.01 * k,
            stretch: 1.0 + 0.01 * k,
        });
        let rep = solve_coupled_alg(
            &pb,
            &e,
            &ledger,
            &SolverOptions {
                grid,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(rep.status, SolveStatus::Converged);
        representation_residual(&pb, &e, rep.u.as_ref().unwrap(), &rep.v).unwrap()
    };
    let (coarse, fine) = (gap(0.5), gap(0.25));
    for ratio in [coarse.0 / fine.0, coarse.1 / fine.1] {
        assert!((3.5..=4.5).contains(&ratio), "{ratio}");
    }
    assert!(fine.0 <= 2e-5 && fine.1 <= 2e-5, "{fine:?}");
}

#[test]
fn coupled_algebraic_refusals() {
    let e = Exponents::new(5.0, 2.0, 2.0, 1.0).unwrap();
    // a = 3 sits on 2(1 + 1/m)
    match alg_regime_ledger(e, 5, 0.01, 0.015, 3.0) {
        Err(Error::Regime { .. }) | Err(Error::Nonexistence { .. }) => {}
        Ok(ledger) => {
            let rho = SourceModel::alg_envelope(0.01, 0.015, 3.0).unwrap();
            let pb = Problem::new(5, 0.0, 0.0, rho).unwrap();
            assert!(solve_coupled_alg(&pb, &e, &ledger, &SolverOptions::default()).is_err());
        }
        Err(other) => panic!("{other}"),
    }
    let ledger = alg_regime_ledger(e, 5, 0.05, 0.06, 4.0).unwrap();
    assert!(!ledger.feasible);
    let rho = SourceModel::alg_envelope(0.05, 0.06, 4.0).unwrap();
    let pb = Problem::new(5, 0.0, 0.0, rho).unwrap();
    let err = solve_coupled_alg(&pb, &e, &ledger, &SolverOptions::default()).unwrap_err();
    assert!(
        matches!(&err, Error::Infeasible(v) if v.iter().any(|s| s.contains("epsilon"))),
        "{err}"
    );
}
