//! Explicit sandwich constants for the two existence regimes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::model::{sigma_index, Exponents, TheoremTag};
use crate::error::{Error, Result};

const TIE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `λ, μ > 0`, `W`-profile barriers.
    Exponential,
    /// `λ = μ = 0`, `Z`-profile barriers.
    Algebraic,
}

/// Constants of the invariant set `M̲₁ B_u ≤ u ≤ M̄₁ B_u`, `M̲₂ B_v ≤ v ≤ M̄₂ B_v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsLedger {
    pub regime: Regime,
    pub m1_lower: f64,
    pub m1_upper: f64,
    pub m2_lower: f64,
    pub m2_upper: f64,
    /// Barrier rate for `u`.
    pub rate_u: f64,
    /// Barrier rate for `v`.
    pub rate_v: f64,
    pub aux: BTreeMap<String, f64>,
    pub feasible: bool,
    pub violated: Vec<String>,
    pub notes: Vec<String>,
}

/// Collects named strict and non-strict inequalities.
struct Checks {
    violated: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Self {
            violated: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// `lhs > rhs`; near-ties count as violated.
    fn strict(&mut self, name: &str, lhs: f64, rhs: f64) {
        let scale = lhs.abs().max(rhs.abs());
        if !(lhs > rhs) {
            self.violated.push(name.to_string());
        } else if lhs - rhs <= TIE * scale {
            self.violated.push(name.to_string());
            self.notes
                .push(format!("{name}: boundary (tie within {TIE:e} relative)"));
        }
    }

    fn weak(&mut self, name: &str, lhs: f64, rhs: f64) {
        if !(lhs >= rhs) {
            self.violated.push(name.to_string());
        }
    }
}

pub const EXP_LAMBDA_THRESHOLD: &str = "lambda > max(2a^2, N^2)";
pub const EXP_MU_THRESHOLD: &str = "mu > max(2b^2, (am/(s+1))^2, N^2)";
pub const M1_ORDER: &str = "M1_upper > M1_lower";
pub const M2_ORDER: &str = "M2_upper > M2_lower";
pub const EXP_BETA_BUDGET: &str = "(lambda/4) M1_upper >= beta";
pub const ALG_ALPHA_SMALL: &str = "0 < alpha < epsilon";
pub const ALG_BETA_ABOVE_ALPHA: &str = "alpha < beta";
pub const ALG_BETA_BUDGET: &str = "beta < delta alpha^sigma";

fn check_source(alpha: f64, beta: f64, rate_a: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::argument(format!("alpha must be > 0, got {alpha}")));
    }
    if !(beta >= alpha && beta.is_finite()) {
        return Err(Error::argument(format!("beta must be >= alpha, got {beta}")));
    }
    if !(rate_a > 0.0 && rate_a.is_finite()) {
        return Err(Error::argument(format!("decay rate a must be > 0, got {rate_a}")));
    }
    Ok(())
}

/// Sandwich constants for `λ, μ > 0` and source `α W_a ≤ ρ ≤ β W_a`.
///
/// Solved from `2λM̲₁ = α`, `2μM̲₂ = M̲₁^m M̲₂^{-s}`, `(λ/4)M̄₁ = M̄₁^p M̲₂^{-q}` and
/// `(μ/2)M̄₂ = M̄₁^m M̄₂^{-s}` in that order. `c0` in `aux` is the constant for
/// which `(λ/4)M̄₁ ≥ β` reads `μ ≤ c0 λ^{p(s+1)/q - m}`.
#[allow(clippy::too_many_arguments)]
pub fn exp_regime_ledger(
    exponents: Exponents,
    dimension: u32,
    lambda: f64,
    mu: f64,
    alpha: f64,
    beta: f64,
    rate_a: f64,
) -> Result<ConstantsLedger> {
    let Exponents { p, q, m, s } = exponents;
    let tag = TheoremTag::ExponentialExistence.as_str();
    let sigma = sigma_index(exponents).map_err(|_| Error::regime(tag, format!("requires p > 1, got p = {p}")))?;
    if sigma > 1.0 {
        return Err(Error::regime(tag, format!("requires sigma <= 1, got sigma = {sigma}")));
    }
    check_source(alpha, beta, rate_a)?;
    if !(lambda > 0.0 && mu > 0.0 && lambda.is_finite() && mu.is_finite()) {
        return Err(Error::argument("lambda and mu must be finite and > 0"));
    }
    let n = f64::from(dimension);
    let a = rate_a;
    let b = a * m / (s + 1.0);

    let m1_lower = alpha / (2.0 * lambda);
    let m2_lower = (m1_lower.powf(m) / (2.0 * mu)).powf(1.0 / (s + 1.0));
    let m1_upper = (0.25 * lambda * m2_lower.powf(q)).powf(1.0 / (p - 1.0));
    let m2_upper = (2.0 * m1_upper.powf(m) / mu).powf(1.0 / (s + 1.0));

    let mut checks = Checks::new();
    checks.strict(EXP_LAMBDA_THRESHOLD, lambda, (2.0 * a * a).max(n * n));
    let am = a * m / (s + 1.0);
    checks.strict(EXP_MU_THRESHOLD, mu, (2.0 * b * b).max(am * am).max(n * n));
    checks.strict(M1_ORDER, m1_upper, m1_lower);
    checks.strict(M2_ORDER, m2_upper, m2_lower);
    checks.weak(EXP_BETA_BUDGET, 0.25 * lambda * m1_upper, beta);

    let k = 0.25 * (alpha.powf(m) / 2f64.powf(m + 1.0)).powf(q / (s + 1.0));
    let c0 = (k.powf(1.0 / (p - 1.0)) / (4.0 * beta)).powf(m / sigma);
    let exponent = p * (s + 1.0) / q - m;
    let mut aux = BTreeMap::new();
    aux.insert("sigma".into(), sigma);
    aux.insert("c0".into(), c0);
    aux.insert("lambda_exponent".into(), exponent);
    aux.insert("mu_budget".into(), c0 * lambda.powf(exponent));

    Ok(ConstantsLedger {
        regime: Regime::Exponential,
        m1_lower,
        m1_upper,
        m2_lower,
        m2_upper,
        rate_u: a,
        rate_v: b,
        aux,
        feasible: checks.violated.is_empty(),
        violated: checks.violated,
        notes: checks.notes,
    })
}

/// Sandwich constants for `λ = μ = 0` and source `α Z_a ≤ ρ ≤ β Z_a`.
///
/// `u` lives between multiples of `Z_{a-2}` and `v` between multiples of `Z_b`
/// with `b = (m(a-2) - 2)/(s+1)`.
pub fn alg_regime_ledger(
    exponents: Exponents,
    dimension: u32,
    alpha: f64,
    beta: f64,
    rate_a: f64,
) -> Result<ConstantsLedger> {
    let Exponents { p, q, m, s } = exponents;
    let tag = TheoremTag::AlgebraicExistence.as_str();
    check_source(alpha, beta, rate_a)?;
    let n = f64::from(dimension);
    let a = rate_a;
    let low_a = 2.0 * (1.0 + 1.0 / m);
    if !(a > low_a && a < n) {
        return Err(Error::regime(
            tag,
            format!("requires 2(1+1/m) < a < N, got a = {a}, 2(1+1/m) = {low_a}, N = {n}"),
        ));
    }
    let sigma = sigma_index(exponents).map_err(|_| Error::regime(tag, format!("requires p > 1, got p = {p}")))?;
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::regime(
            tag,
            format!("requires 0 < sigma < 1, got sigma = {sigma}"),
        ));
    }
    if !(m * (a - 2.0) < (n - 2.0) * s + n) {
        return Err(Error::regime(
            tag,
            format!(
                "requires m(a-2) < (N-2)s + N, got {} >= {}",
                m * (a - 2.0),
                (n - 2.0) * s + n
            ),
        ));
    }
    let lhs = 2.0 * p / (p - 1.0);
    let rhs = a + sigma * (low_a - a);
    if !(lhs <= rhs) {
        return Err(Error::regime(
            tag,
            format!("requires 2p/(p-1) <= a + sigma(2(1+1/m) - a), got {lhs} > {rhs}"),
        ));
    }

    let b = (m * (a - 2.0) - 2.0) / (s + 1.0);
    let big_a = 1.0 / ((a - 2.0) * n);
    let big_b = (big_a.powf(m) / (b * n)).powf(1.0 / (s + 1.0));
    let big_c = ((a - 2.0) * (n - a) * big_b.powf(q) / 2.0).powf(1.0 / (p - 1.0));
    let big_d = (big_c.powf(m) / (b * (n - b - 2.0))).powf(1.0 / (s + 1.0));
    let delta = (a - 2.0) * (n - a) / 2.0 * big_c;
    let epsilon = (big_c / big_a)
        .powf(1.0 / (1.0 - sigma))
        .min((big_d / big_b).powf((s + 1.0) / (m * (1.0 - sigma))))
        .min(delta.powf(1.0 / (1.0 - sigma)));

    let m1_lower = big_a * alpha;
    let m1_upper = big_c * alpha.powf(sigma);
    let m2_lower = big_b * alpha.powf(m / (s + 1.0));
    let m2_upper = big_d * alpha.powf(sigma * m / (s + 1.0));

    let mut checks = Checks::new();
    checks.strict(ALG_ALPHA_SMALL, epsilon, alpha);
    checks.strict(ALG_BETA_ABOVE_ALPHA, beta, alpha);
    checks.strict(ALG_BETA_BUDGET, delta * alpha.powf(sigma), beta);

    let mut aux = BTreeMap::new();
    aux.insert("A".into(), big_a);
    aux.insert("B".into(), big_b);
    aux.insert("C".into(), big_c);
    aux.insert("D".into(), big_d);
    aux.insert("delta".into(), delta);
    aux.insert("epsilon".into(), epsilon);
    aux.insert("sigma".into(), sigma);

    Ok(ConstantsLedger {
        regime: Regime::Algebraic,
        m1_lower,
        m1_upper,
        m2_lower,
        m2_upper,
        rate_u: a - 2.0,
        rate_v: b,
        aux,
        feasible: checks.violated.is_empty(),
        violated: checks.violated,
        notes: checks.notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn exponential_worked_example() {
        let e = Exponents::new(2.0, 1.0, 1.0, 0.0).unwrap();
        let l = exp_regime_ledger(e, 3, 4096.0, 16.0, 1.0, 2.0, 1.0).unwrap();
        assert!(l.feasible, "{:?}", l.violated);
        assert!(rel(l.m1_lower, 1.0 / 8192.0) < 1e-12);
        assert!(rel(l.m1_upper, 1.0 / 256.0) < 1e-12);
        assert!(rel(l.m2_lower, 1.0 / 262144.0) < 1e-12);
        assert!(rel(l.m2_upper, 1.0 / 2048.0) < 1e-12);
        assert_eq!(l.rate_v, 1.0);
        assert!(16.0 <= l.aux["mu_budget"] * (1.0 + 1e-12));
    }

    #[test]
    fn exponential_infeasible_cases() {
        let e = Exponents::new(2.0, 1.0, 1.0, 0.0).unwrap();
        let l = exp_regime_ledger(e, 3, 16.0, 16.0, 1.0, 2.0, 1.0).unwrap();
        assert!(!l.feasible);
        assert!(l.violated.iter().any(|v| v == M1_ORDER));
        let l = exp_regime_ledger(e, 3, 9.0, 16.0, 1.0, 2.0, 1.0).unwrap();
        assert!(l.violated.iter().any(|v| v == EXP_LAMBDA_THRESHOLD));
        let e = Exponents::new(2.0, 1.0, 2.0, 0.0).unwrap();
        assert!(matches!(
            exp_regime_ledger(e, 3, 4096.0, 16.0, 1.0, 2.0, 1.0),
            Err(Error::Regime { .. })
        ));
    }

    #[test]
    fn algebraic_worked_example() {
        let e = Exponents::new(5.0, 2.0, 2.0, 1.0).unwrap();
        let l = alg_regime_ledger(e, 5, 0.01, 0.015, 4.0).unwrap();
        let c = (1.0f64 / 500.0).powf(0.25);
        assert!(rel(l.aux["A"], 0.1) < 1e-12);
        assert!(rel(l.aux["B"], (1.0f64 / 500.0).sqrt()) < 1e-12);
        assert!(rel(l.aux["C"], c) < 1e-12);
        assert!(rel(l.aux["D"], c / 2f64.sqrt()) < 1e-12);
        assert!(rel(l.aux["delta"], c) < 1e-12);
        assert!(rel(l.aux["epsilon"], c * c) < 1e-12);
        assert!(l.feasible);
        assert!(rel(l.m1_lower, 0.001) < 1e-12);
        assert!(rel(l.m1_upper, c * 0.1) < 1e-12);
        assert!((l.m1_upper - 0.0211474).abs() < 1e-7);
        assert!((l.m2_lower - 4.47214e-4).abs() < 1e-9);
        assert!((l.m2_upper - 0.0149534).abs() < 1e-7);
        assert_eq!((l.rate_u, l.rate_v), (2.0, 1.0));

        let l = alg_regime_ledger(e, 5, 0.01, 0.05, 4.0).unwrap();
        assert_eq!(l.violated, vec![ALG_BETA_BUDGET.to_string()]);
        let l = alg_regime_ledger(e, 5, 0.05, 0.06, 4.0).unwrap();
        assert!(l.violated.iter().any(|v| v == ALG_ALPHA_SMALL));
        assert!(matches!(
            alg_regime_ledger(e, 5, 0.01, 0.015, 3.0),
            Err(Error::Regime { .. })
        ));
    }

    #[test]
    fn ties_are_infeasible() {
        let e = Exponents::new(5.0, 2.0, 2.0, 1.0).unwrap();
        let l = alg_regime_ledger(e, 5, 0.01, 0.015, 4.0).unwrap();
        let edge = l.aux["delta"] * 0.01f64.powf(0.5);
        let l = alg_regime_ledger(e, 5, 0.01, edge, 4.0).unwrap();
        assert!(!l.feasible);
        assert!(l.notes.iter().any(|n| n.contains("boundary")) || l.violated.contains(&ALG_BETA_BUDGET.to_string()));
    }
}
