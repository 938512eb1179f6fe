use serde::Serialize;

use super::ledger::{alg_regime_ledger, exp_regime_ledger, ConstantsLedger};
use super::model::{sigma_index, Exponents, Problem, SourceKind, TheoremTag};
use crate::potentials::{divergence_probe_nested, divergence_probe_rho, DivergenceVerdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerdictStatus {
    Nonexistence,
    ExistenceGuaranteed,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Advisory {
    pub tag: TheoremTag,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub tag: Option<TheoremTag>,
    pub reason: String,
    pub ledger: Option<ConstantsLedger>,
    pub advisories: Vec<Advisory>,
}

impl Verdict {
    fn nonexistence(tag: TheoremTag, reason: String) -> Self {
        Self {
            status: VerdictStatus::Nonexistence,
            tag: Some(tag),
            reason,
            ledger: None,
            advisories: Vec::new(),
        }
    }

    fn existence(tag: TheoremTag, reason: String, ledger: Option<ConstantsLedger>) -> Self {
        Self {
            status: VerdictStatus::ExistenceGuaranteed,
            tag: Some(tag),
            reason,
            ledger,
            advisories: Vec::new(),
        }
    }

    fn unknown(reason: String) -> Self {
        Self {
            status: VerdictStatus::Unknown,
            tag: None,
            reason,
            ledger: None,
            advisories: Vec::new(),
        }
    }

    /// Tag string, or an empty string for untagged verdicts.
    pub fn tag_str(&self) -> &'static str {
        self.tag.map_or("", TheoremTag::as_str)
    }
}

/// Strongest verdict available for a parameter point.
///
/// Nonexistence results are tried first, then the two constructive
/// existence regimes; anything else is `Unknown`, possibly with advisories.
pub fn classify(problem: &Problem, exponents: &Exponents) -> Verdict {
    let n = problem.n();
    let Exponents { p, q, m, s } = *exponents;
    let shifted = problem.is_shifted();
    let rho = &problem.rho;

    if shifted && p <= 1.0 {
        return Verdict::nonexistence(
            TheoremTag::SublinearActivator,
            format!("lambda, mu > 0 and p = {p} <= 1: no positive solution"),
        );
    }
    if !shifted {
        let serrin = n / (n - 2.0);
        let m_low = 2.0 / (n - 2.0);
        if p <= serrin || m <= m_low {
            return Verdict::nonexistence(
                TheoremTag::SerrinExponent,
                format!("lambda = mu = 0 with p = {p} <= N/(N-2) = {serrin} or m = {m} <= 2/(N-2) = {m_low}"),
            );
        }
        if rho.kind == SourceKind::AlgEnvelope {
            let threshold = 2.0 * (1.0 + 1.0 / m);
            if rho.rate_a <= threshold {
                return Verdict::nonexistence(
                    TheoremTag::SlowSourceDecay,
                    format!("algebraic source rate a = {} <= 2(1+1/m) = {threshold}", rho.rate_a),
                );
            }
        }
        let critical = (n + 2.0) / (n - 2.0);
        if rho.is_zero() && p < critical {
            return Verdict::nonexistence(
                TheoremTag::RadialSubcritical,
                format!("rho = 0 and p = {p} < (N+2)/(N-2) = {critical}: no positive radial solution"),
            );
        }
        if rho.kind == SourceKind::TabulatedRadial {
            let probe = divergence_probe_rho(problem.dimension, rho);
            if let DivergenceVerdict::Divergent { growth } = probe.verdict {
                return Verdict::nonexistence(
                    TheoremTag::DivergentSource,
                    format!("integral of rho |x|^(2-N) diverges ({growth})"),
                );
            }
            let nested = divergence_probe_nested(problem.dimension, rho, m);
            if let DivergenceVerdict::Divergent { growth } = nested.verdict {
                return Verdict::nonexistence(
                    TheoremTag::DivergentNestedSource,
                    format!("nested source potential integral diverges ({growth})"),
                );
            }
        }
    }

    let sigma = sigma_index(*exponents).ok();
    let mut verdict = if shifted && rho.kind == SourceKind::ExpEnvelope {
        match sigma {
            Some(sig) if sig <= 1.0 => match exp_regime_ledger(
                *exponents,
                problem.dimension,
                problem.lambda,
                problem.mu,
                rho.alpha,
                rho.beta,
                rho.rate_a,
            ) {
                Ok(ledger) if ledger.feasible => Verdict::existence(
                    TheoremTag::ExponentialExistence,
                    "exponential-regime sandwich constants are feasible".into(),
                    Some(ledger),
                ),
                Ok(ledger) => {
                    let mut v = Verdict::unknown(format!(
                        "exponential-regime ledger infeasible: {}",
                        ledger.violated.join(", ")
                    ));
                    v.ledger = Some(ledger);
                    v
                }
                Err(e) => Verdict::unknown(e.to_string()),
            },
            Some(sig) => Verdict::unknown(format!("sigma = {sig} > 1: no exponential-regime construction")),
            None => Verdict::unknown("sigma undefined".into()),
        }
    } else if !shifted && rho.kind == SourceKind::AlgEnvelope {
        match alg_regime_ledger(*exponents, problem.dimension, rho.alpha, rho.beta, rho.rate_a) {
            Ok(ledger) if ledger.feasible => Verdict::existence(
                TheoremTag::AlgebraicExistence,
                "algebraic-regime sandwich constants are feasible".into(),
                Some(ledger),
            ),
            Ok(ledger) => {
                let mut v = Verdict::unknown(format!(
                    "algebraic-regime ledger infeasible: {}",
                    ledger.violated.join(", ")
                ));
                v.ledger = Some(ledger);
                v
            }
            Err(e) => Verdict::unknown(e.to_string()),
        }
    } else {
        Verdict::unknown("no applicable result for this configuration".into())
    };

    if shifted {
        if let Some(sig) = sigma {
            let threshold = (m / (s + 1.0)).powi(2) * problem.lambda;
            if sig > 1.0 && problem.mu > threshold {
                verdict.advisories.push(Advisory {
                    tag: TheoremTag::StrongInhibitorDecay,
                    note: format!(
                        "sigma = {sig} > 1 and mu > (m/(s+1))^2 lambda = {threshold}: no solution with exponentially decaying u"
                    ),
                });
            }
        }
    } else if rho.is_zero() {
        let critical = (n + 2.0) / (n - 2.0);
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0);
        if p > critical && close(q, p - critical) && close(m, critical + s) {
            verdict.advisories.push(Advisory {
                tag: TheoremTag::BubbleSolution,
                note: "u = v = w (bubble profile) is an explicit positive radial solution".into(),
            });
        }
    }
    verdict
}

/// Verdict for `-Δv = ψ v^{-s}` on `R^N` with `ψ ≍ |x|^{-γ}`.
pub fn classify_scalar_algebraic(dimension: u32, s: f64, gamma: f64) -> Verdict {
    let n = f64::from(dimension);
    let upper = (n - 2.0) * s + n;
    if gamma > 0.0 && gamma <= 2.0 {
        Verdict::nonexistence(
            TheoremTag::ScalarSlowWeight,
            format!("weight rate gamma = {gamma} <= 2: no positive solution"),
        )
    } else if gamma > 2.0 && gamma < upper {
        Verdict::existence(
            TheoremTag::ScalarAlgebraic,
            format!("2 < gamma = {gamma} < (N-2)s + N = {upper}: unique positive solution"),
            None,
        )
    } else {
        Verdict::unknown(format!("gamma = {gamma} outside (0, (N-2)s + N)"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barriers::SourceModel;

    #[test]
    fn priority_examples() {
        let e = Exponents::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let pb = Problem::new(3, 1.0, 1.0, SourceModel::exp_envelope(1.0, 2.0, 1.0).unwrap()).unwrap();
        let v = classify(&pb, &e);
        assert_eq!(v.status, VerdictStatus::Nonexistence);
        assert_eq!(v.tag_str(), "Theorem 1.1(i)");

        let e = Exponents::new(3.0, 1.0, 5.0, 1.0).unwrap();
        let pb = Problem::new(3, 0.0, 0.0, SourceModel::alg_envelope(0.1, 0.2, 2.5).unwrap()).unwrap();
        assert_eq!(classify(&pb, &e).tag_str(), "Theorem 1.2(i)");

        let e = Exponents::new(5.0, 2.0, 2.0, 1.0).unwrap();
        let rho = SourceModel::alg_envelope(0.01, 0.015, 4.0).unwrap();
        let pb = Problem::new(5, 0.0, 0.0, rho).unwrap();
        let v = classify(&pb, &e);
        assert_eq!(v.status, VerdictStatus::ExistenceGuaranteed);
        assert_eq!(v.tag_str(), "Theorem 1.4(ii)");
        assert!(v.ledger.unwrap().feasible);

        let rho = SourceModel::alg_envelope(0.01, 0.015, 3.0).unwrap();
        let pb = Problem::new(5, 0.0, 0.0, rho).unwrap();
        assert_eq!(classify(&pb, &e).tag_str(), "Theorem 1.4(i)");
    }

    #[test]
    fn exponential_existence_and_refusal() {
        let e = Exponents::new(2.0, 1.0, 1.0, 0.0).unwrap();
        let rho = SourceModel::exp_envelope(1.0, 2.0, 1.0).unwrap();
        let pb = Problem::new(3, 4096.0, 16.0, rho.clone()).unwrap();
        assert_eq!(classify(&pb, &e).status, VerdictStatus::ExistenceGuaranteed);
        let pb = Problem::new(3, 16.0, 16.0, rho).unwrap();
        let v = classify(&pb, &e);
        assert_eq!(v.status, VerdictStatus::Unknown);
        assert!(!v.ledger.unwrap().feasible);
    }

    #[test]
    fn advisories() {
        let e = Exponents::new(2.0, 1.0, 2.0, 0.0).unwrap();
        let rho = SourceModel::exp_envelope(1.0, 2.0, 1.0).unwrap();
        let pb = Problem::new(3, 1.0, 10.0, rho).unwrap();
        let v = classify(&pb, &e);
        assert_eq!(v.status, VerdictStatus::Unknown);
        assert_eq!(v.advisories[0].tag, TheoremTag::StrongInhibitorDecay);

        // q = p - 5, m = 5 + s in N = 3
        let e = Exponents::new(6.0, 1.0, 6.0, 1.0).unwrap();
        let pb = Problem::new(3, 0.0, 0.0, SourceModel::zero()).unwrap();
        let v = classify(&pb, &e);
        assert_eq!(v.status, VerdictStatus::Unknown);
        assert_eq!(v.advisories[0].tag, TheoremTag::BubbleSolution);

        let e = Exponents::new(4.0, 1.0, 6.0, 1.0).unwrap();
        assert_eq!(classify(&pb, &e).tag_str(), "Corollary 1.3(ii)");
    }

    #[test]
    fn scalar_threshold() {
        assert_eq!(
            classify_scalar_algebraic(5, 1.0, 2.0).status,
            VerdictStatus::Nonexistence
        );
        assert_eq!(
            classify_scalar_algebraic(5, 1.0, 2.0 + 1e-12).status,
            VerdictStatus::ExistenceGuaranteed
        );
        assert_eq!(classify_scalar_algebraic(5, 1.0, 8.0).status, VerdictStatus::Unknown);
    }
}
