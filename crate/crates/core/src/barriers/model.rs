use std::fmt;

use serde::{Deserialize, Serialize};

use super::profile::{eval_barrier, BarrierProfile, Family};
use crate::error::{Error, Result};
use crate::radial::RadialField;

/// Reaction exponents of `u^p/v^q` and `u^m/v^s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exponents {
    pub p: f64,
    pub q: f64,
    pub m: f64,
    pub s: f64,
}

impl Exponents {
    pub fn new(p: f64, q: f64, m: f64, s: f64) -> Result<Self> {
        for (name, x) in [("p", p), ("q", q), ("m", m)] {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::argument(format!("{name} must be finite and > 0, got {x}")));
            }
        }
        if !(s >= 0.0 && s.is_finite()) {
            return Err(Error::argument(format!("s must be finite and >= 0, got {s}")));
        }
        Ok(Self { p, q, m, s })
    }

    /// `σ = mq / ((p-1)(s+1))`, defined for `p > 1`.
    pub fn sigma(&self) -> Option<f64> {
        sigma_index(*self).ok()
    }
}

pub fn sigma_index(exponents: Exponents) -> Result<f64> {
    let Exponents { p, q, m, s } = exponents;
    if p <= 1.0 {
        return Err(Error::UndefinedIndex { p });
    }
    Ok(m * q / ((p - 1.0) * (s + 1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    Zero,
    ExpEnvelope,
    AlgEnvelope,
    TabulatedRadial,
}

/// Source term `ρ` with its envelope bounds.
///
/// Envelope sources are `amplitude · W_a` or `amplitude · Z_a` with
/// `α ≤ amplitude ≤ β`; the amplitude defaults to `(α+β)/2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceModel {
    pub kind: SourceKind,
    pub alpha: f64,
    pub beta: f64,
    pub rate_a: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<RadialField>,
}

impl SourceModel {
    pub fn zero() -> Self {
        Self {
            kind: SourceKind::Zero,
            alpha: 0.0,
            beta: 0.0,
            rate_a: 1.0,
            amplitude: None,
            profile: None,
        }
    }

    pub fn exp_envelope(alpha: f64, beta: f64, rate_a: f64) -> Result<Self> {
        Self::envelope(SourceKind::ExpEnvelope, alpha, beta, rate_a)
    }

    pub fn alg_envelope(alpha: f64, beta: f64, rate_a: f64) -> Result<Self> {
        Self::envelope(SourceKind::AlgEnvelope, alpha, beta, rate_a)
    }

    fn envelope(kind: SourceKind, alpha: f64, beta: f64, rate_a: f64) -> Result<Self> {
        let model = Self {
            kind,
            alpha,
            beta,
            rate_a,
            amplitude: None,
            profile: None,
        };
        model.validate()?;
        Ok(model)
    }

    /// Tabulated source; its decay tag (if any) extends it past the grid.
    pub fn tabulated(profile: RadialField) -> Result<Self> {
        if profile.min_value() < 0.0 {
            return Err(Error::domain("tabulated source must be nonnegative"));
        }
        let (lo, hi) = profile
            .values()
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        let rate_a = profile.decay_tag().map_or(1.0, |t| t.rate);
        Ok(Self {
            kind: SourceKind::TabulatedRadial,
            alpha: lo,
            beta: hi,
            rate_a,
            amplitude: None,
            profile: Some(profile),
        })
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Result<Self> {
        self.amplitude = Some(amplitude);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            SourceKind::Zero => {
                if self.alpha != 0.0 || self.beta != 0.0 {
                    return Err(Error::argument("zero source requires alpha = beta = 0"));
                }
            }
            SourceKind::ExpEnvelope | SourceKind::AlgEnvelope => {
                if !(self.alpha > 0.0 && self.alpha <= self.beta && self.beta.is_finite()) {
                    return Err(Error::argument(format!(
                        "envelope source requires 0 < alpha <= beta, got alpha = {}, beta = {}",
                        self.alpha, self.beta
                    )));
                }
                if !(self.rate_a > 0.0 && self.rate_a.is_finite()) {
                    return Err(Error::argument(format!(
                        "decay rate a must be > 0, got {}",
                        self.rate_a
                    )));
                }
                if let Some(c) = self.amplitude {
                    if !(c >= self.alpha && c <= self.beta) {
                        return Err(Error::argument(format!(
                            "amplitude {c} outside [alpha, beta] = [{}, {}]",
                            self.alpha, self.beta
                        )));
                    }
                }
            }
            SourceKind::TabulatedRadial => {
                if self.profile.is_none() {
                    return Err(Error::argument("tabulated source needs a profile"));
                }
            }
        }
        Ok(())
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude.unwrap_or(0.5 * (self.alpha + self.beta))
    }

    /// Barrier shape of an envelope source.
    pub fn envelope_profile(&self) -> Option<BarrierProfile> {
        match self.kind {
            SourceKind::ExpEnvelope => Some(BarrierProfile {
                family: Family::W,
                rate: self.rate_a,
            }),
            SourceKind::AlgEnvelope => Some(BarrierProfile {
                family: Family::Z,
                rate: self.rate_a,
            }),
            SourceKind::TabulatedRadial => self.profile.as_ref().and_then(|p| p.decay_tag()),
            SourceKind::Zero => None,
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        match self.kind {
            SourceKind::Zero => 0.0,
            SourceKind::ExpEnvelope | SourceKind::AlgEnvelope => {
                let profile = self.envelope_profile().expect("envelope kinds carry a profile");
                self.amplitude() * eval_barrier(profile, r)
            }
            SourceKind::TabulatedRadial => self.profile.as_ref().map_or(0.0, |p| p.interpolate(r)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self.kind {
            SourceKind::Zero => true,
            SourceKind::TabulatedRadial => self.profile.as_ref().is_none_or(|p| p.max_abs() == 0.0),
            _ => false,
        }
    }
}

/// Dimension, shifts and source of the steady-state problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Problem {
    pub dimension: u32,
    pub lambda: f64,
    pub mu: f64,
    pub rho: SourceModel,
}

impl Problem {
    pub fn new(dimension: u32, lambda: f64, mu: f64, rho: SourceModel) -> Result<Self> {
        if dimension < 3 {
            return Err(Error::argument(format!("dimension must be >= 3, got {dimension}")));
        }
        for (name, x) in [("lambda", lambda), ("mu", mu)] {
            if !(x >= 0.0 && x.is_finite()) {
                return Err(Error::argument(format!("{name} must be finite and >= 0, got {x}")));
            }
        }
        if (lambda == 0.0) != (mu == 0.0) {
            return Err(Error::argument("lambda and mu must be both zero or both positive"));
        }
        rho.validate()?;
        Ok(Self {
            dimension,
            lambda,
            mu,
            rho,
        })
    }

    pub fn is_shifted(&self) -> bool {
        self.lambda > 0.0
    }

    pub fn n(&self) -> f64 {
        f64::from(self.dimension)
    }
}

/// Result statements that verdicts, errors and reports refer to.
///
/// The display strings are stable identifiers consumed by downstream tools.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremTag {
    /// Shifted system, `p ≤ 1`: no positive solution.
    SublinearActivator,
    /// Shifted system, `σ > 1` and large `μ`: no exponentially decaying solution.
    StrongInhibitorDecay,
    /// Shifted system, exponential source, `p > 1 ≥ σ`: existence.
    ExponentialExistence,
    /// Unshifted system, `p ≤ N/(N-2)` or `m ≤ 2/(N-2)`.
    SerrinExponent,
    /// Unshifted system, `∫ ρ |x|^{2-N} = ∞`.
    DivergentSource,
    /// Unshifted system, nested source potential integral diverges.
    DivergentNestedSource,
    /// Unshifted system, `ρ ≡ 0`, subcritical `p` and the gradient bound on `v`.
    GradientBoundContradiction,
    /// Unshifted system, `ρ ≡ 0`, subcritical `p`, `u` with slow algebraic decay.
    SlowDecayActivator,
    /// Unshifted system, `ρ ≡ 0`, subcritical `p`, radial solutions.
    RadialSubcritical,
    /// Algebraic source decaying no faster than `|x|^{-2(1+1/m)}`.
    SlowSourceDecay,
    /// Algebraic source, small `α`, `β`: existence.
    AlgebraicExistence,
    /// Closed-form bubble solution for `ρ ≡ 0`.
    BubbleSolution,
    /// Singular scalar equation with shift and exponential weight.
    ScalarExponential,
    /// Singular scalar equation without shift, weight decaying no faster than `|x|^{-2}`.
    ScalarSlowWeight,
    /// Singular scalar equation without shift, algebraic weight.
    ScalarAlgebraic,
}

impl TheoremTag {
    pub fn as_str(self) -> &'static str {
        match self {
            TheoremTag::SublinearActivator => "Theorem 1.1(i)",
            TheoremTag::StrongInhibitorDecay => "Theorem 1.1(ii)",
            TheoremTag::ExponentialExistence => "Theorem 1.1(iii)",
            TheoremTag::SerrinExponent => "Theorem 1.2(i)",
            TheoremTag::DivergentSource => "Theorem 1.2(ii)",
            TheoremTag::DivergentNestedSource => "Theorem 1.2(iii)",
            TheoremTag::GradientBoundContradiction => "Theorem 1.2(iv)",
            TheoremTag::SlowDecayActivator => "Corollary 1.3(i)",
            TheoremTag::RadialSubcritical => "Corollary 1.3(ii)",
            TheoremTag::SlowSourceDecay => "Theorem 1.4(i)",
            TheoremTag::AlgebraicExistence => "Theorem 1.4(ii)",
            TheoremTag::BubbleSolution => "Corollary 1.7",
            TheoremTag::ScalarExponential => "Lemma 2.9",
            TheoremTag::ScalarSlowWeight => "Lemma 2.11(i)",
            TheoremTag::ScalarAlgebraic => "Lemma 2.11(ii)",
        }
    }
}

impl Serialize for TheoremTag {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_values() {
        let s = |p, q, m, s| sigma_index(Exponents::new(p, q, m, s).unwrap()).unwrap();
        assert_eq!(s(2.0, 1.0, 2.0, 0.0), 2.0);
        assert_eq!(s(2.0, 1.0, 1.0, 0.0), 1.0);
        assert_eq!(s(5.0, 2.0, 2.0, 1.0), 0.5);
        assert_eq!(
            sigma_index(Exponents::new(1.0, 1.0, 1.0, 1.0).unwrap()),
            Err(Error::UndefinedIndex { p: 1.0 })
        );
    }

    #[test]
    fn problem_validation() {
        let rho = SourceModel::exp_envelope(1.0, 2.0, 1.0).unwrap();
        assert!(Problem::new(3, 1.0, 0.0, rho.clone()).is_err());
        assert!(Problem::new(2, 1.0, 1.0, rho.clone()).is_err());
        assert!(Problem::new(3, 1.0, 1.0, rho).is_ok());
        assert!(SourceModel::alg_envelope(2.0, 1.0, 4.0).is_err());
        assert!(SourceModel::alg_envelope(0.0, 1.0, 4.0).is_err());
        let rho = SourceModel::exp_envelope(1.0, 2.0, 1.0).unwrap();
        assert_eq!(rho.amplitude(), 1.5);
        assert!(rho.clone().with_amplitude(2.5).is_err());
    }
}
