//! Classification sweeps over parameter lattices.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::barriers::{
    classify, classify_scalar_algebraic, Exponents, Problem, SourceKind, SourceModel, TheoremTag, Verdict,
    VerdictStatus,
};
use crate::error::{Error, Result};

/// Lattice points above this count are refused.
pub const MAX_LATTICE_POINTS: usize = 10_000_000;

/// Bisection steps used to pin a transition between two lattice neighbours.
const BISECTION_STEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameter {
    Dimension,
    Lambda,
    Mu,
    P,
    Q,
    M,
    S,
    Alpha,
    Beta,
    RateA,
    Gamma,
}

impl Parameter {
    pub const ALL: [Parameter; 11] = [
        Parameter::Dimension,
        Parameter::Lambda,
        Parameter::Mu,
        Parameter::P,
        Parameter::Q,
        Parameter::M,
        Parameter::S,
        Parameter::Alpha,
        Parameter::Beta,
        Parameter::RateA,
        Parameter::Gamma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Parameter::Dimension => "dimension",
            Parameter::Lambda => "lambda",
            Parameter::Mu => "mu",
            Parameter::P => "p",
            Parameter::Q => "q",
            Parameter::M => "m",
            Parameter::S => "s",
            Parameter::Alpha => "alpha",
            Parameter::Beta => "beta",
            Parameter::RateA => "rate_a",
            Parameter::Gamma => "gamma",
        }
    }
}

impl std::str::FromStr for Parameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Parameter::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::argument(format!("unknown parameter {s:?}")))
    }
}

/// `count` equally spaced values from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub parameter: Parameter,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    pub fn value(&self, i: usize) -> f64 {
        if self.count <= 1 {
            self.start
        } else {
            self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::argument(format!(
                "{} range must be finite",
                self.parameter.name()
            )));
        }
        if self.count == 0 || self.start > self.stop || (self.count > 1 && self.start == self.stop) {
            return Err(Error::argument(format!(
                "empty lattice: {} in [{}, {}] with {} points",
                self.parameter.name(),
                self.start,
                self.stop,
                self.count
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// The coupled system, classified by [`classify`].
    #[default]
    System,
    /// `-Δv = ψ v^{-s}` with `ψ ≍ |x|^{-γ}`, classified by [`classify_scalar_algebraic`].
    ScalarAlgebraic,
}

/// One parameter point; swept parameters overwrite these fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PointSpec {
    pub dimension: u32,
    pub lambda: f64,
    pub mu: f64,
    pub p: f64,
    pub q: f64,
    pub m: f64,
    pub s: f64,
    pub source: SourceKind,
    pub alpha: f64,
    pub beta: f64,
    pub rate_a: f64,
    pub gamma: f64,
}

impl Default for PointSpec {
    fn default() -> Self {
        Self {
            dimension: 3,
            lambda: 0.0,
            mu: 0.0,
            p: 2.0,
            q: 1.0,
            m: 1.0,
            s: 0.0,
            source: SourceKind::Zero,
            alpha: 1.0,
            beta: 2.0,
            rate_a: 1.0,
            gamma: 4.0,
        }
    }
}

impl PointSpec {
    pub fn set(&mut self, parameter: Parameter, value: f64) {
        match parameter {
            Parameter::Dimension => self.dimension = value.round().max(0.0) as u32,
            Parameter::Lambda => self.lambda = value,
            Parameter::Mu => self.mu = value,
            Parameter::P => self.p = value,
            Parameter::Q => self.q = value,
            Parameter::M => self.m = value,
            Parameter::S => self.s = value,
            Parameter::Alpha => self.alpha = value,
            Parameter::Beta => self.beta = value,
            Parameter::RateA => self.rate_a = value,
            Parameter::Gamma => self.gamma = value,
        }
    }

    pub fn exponents(&self) -> Result<Exponents> {
        Exponents::new(self.p, self.q, self.m, self.s)
    }

    pub fn source(&self) -> Result<SourceModel> {
        match self.source {
            SourceKind::Zero => Ok(SourceModel::zero()),
            SourceKind::ExpEnvelope => SourceModel::exp_envelope(self.alpha, self.beta, self.rate_a),
            SourceKind::AlgEnvelope => SourceModel::alg_envelope(self.alpha, self.beta, self.rate_a),
            SourceKind::TabulatedRadial => Err(Error::argument("region sweeps take envelope sources only")),
        }
    }

    pub fn problem(&self) -> Result<Problem> {
        Problem::new(self.dimension, self.lambda, self.mu, self.source()?)
    }

    pub fn classify(&self, model: Model) -> Result<Verdict> {
        match model {
            Model::System => Ok(classify(&self.problem()?, &self.exponents()?)),
            Model::ScalarAlgebraic => {
                if self.dimension < 3 {
                    return Err(Error::argument(format!(
                        "dimension must be >= 3, got {}",
                        self.dimension
                    )));
                }
                Ok(classify_scalar_algebraic(self.dimension, self.s, self.gamma))
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RegionConfig {
    pub model: Model,
    pub base: PointSpec,
    /// Lattice axes; the last one varies fastest.
    pub axes: Vec<Axis>,
}

impl RegionConfig {
    pub fn validate(&self) -> Result<usize> {
        if self.axes.is_empty() {
            return Err(Error::argument("empty lattice: no axes"));
        }
        let mut seen = Vec::new();
        let mut total: usize = 1;
        for axis in &self.axes {
            axis.validate()?;
            if seen.contains(&axis.parameter) {
                return Err(Error::argument(format!("{} swept twice", axis.parameter.name())));
            }
            seen.push(axis.parameter);
            total = total
                .checked_mul(axis.count)
                .filter(|&t| t <= MAX_LATTICE_POINTS)
                .ok_or_else(|| Error::argument(format!("lattice exceeds {MAX_LATTICE_POINTS} points")))?;
        }
        Ok(total)
    }

    /// Lattice coordinates of a flat index.
    fn coords(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.axes.len()];
        for (k, axis) in self.axes.iter().enumerate().rev() {
            out[k] = index % axis.count;
            index /= axis.count;
        }
        out
    }

    fn stride(&self, k: usize) -> usize {
        self.axes[k + 1..].iter().map(|a| a.count).product()
    }

    fn point(&self, coords: &[usize]) -> PointSpec {
        let mut spec = self.base;
        for (axis, &i) in self.axes.iter().zip(coords) {
            spec.set(axis.parameter, axis.value(i));
        }
        spec
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum PointStatus {
    Nonexistence,
    ExistenceGuaranteed,
    Unknown,
    /// The parameters do not describe a valid problem.
    Invalid,
}

impl PointStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PointStatus::Nonexistence => "Nonexistence",
            PointStatus::ExistenceGuaranteed => "ExistenceGuaranteed",
            PointStatus::Unknown => "Unknown",
            PointStatus::Invalid => "Invalid",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionRow {
    pub index: usize,
    /// Swept values in axis order.
    pub values: Vec<f64>,
    pub status: PointStatus,
    pub tag: Option<TheoremTag>,
    pub reason: String,
}

/// Verdict change between two lattice neighbours along one axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Transition {
    pub parameter: Parameter,
    pub lower_index: usize,
    pub upper_index: usize,
    pub from_status: PointStatus,
    pub from_tag: Option<TheoremTag>,
    pub to_status: PointStatus,
    pub to_tag: Option<TheoremTag>,
    /// Final bisection bracket; absent for the integer dimension axis.
    pub bracket: Option<(f64, f64)>,
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionTable {
    pub model: Model,
    pub parameters: Vec<Parameter>,
    pub rows: Vec<RegionRow>,
    /// Rows per status, keyed by the status name.
    pub counts: BTreeMap<String, usize>,
    /// Rows per theorem tag; untagged rows are not counted.
    pub tag_counts: BTreeMap<String, usize>,
    pub transitions: Vec<Transition>,
}

fn evaluate(model: Model, spec: &PointSpec) -> (PointStatus, Option<TheoremTag>, String) {
    match spec.classify(model) {
        Ok(v) => {
            let status = match v.status {
                VerdictStatus::Nonexistence => PointStatus::Nonexistence,
                VerdictStatus::ExistenceGuaranteed => PointStatus::ExistenceGuaranteed,
                VerdictStatus::Unknown => PointStatus::Unknown,
            };
            (status, v.tag, v.reason)
        }
        Err(e) => (PointStatus::Invalid, None, e.to_string()),
    }
}

/// Bisects between `lo` and `hi` (whose verdicts differ) along `parameter`.
fn bisect(model: Model, base: PointSpec, parameter: Parameter, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let key = |x: f64| {
        let mut spec = base;
        spec.set(parameter, x);
        let (status, tag, _) = evaluate(model, &spec);
        (status, tag)
    };
    let low_key = key(lo);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if key(mid) == low_key {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Classifies every lattice point, in lattice order, using at most
/// `threads` workers (all available cores when `None`).
pub fn sweep_region(config: &RegionConfig, threads: Option<usize>) -> Result<RegionTable> {
    let total = config.validate()?;
    let run = || -> Vec<RegionRow> {
        (0..total)
            .into_par_iter()
            .map(|index| {
                let coords = config.coords(index);
                let spec = config.point(&coords);
                let (status, tag, reason) = evaluate(config.model, &spec);
                RegionRow {
                    index,
                    values: config.axes.iter().zip(&coords).map(|(a, &i)| a.value(i)).collect(),
                    status,
                    tag,
                    reason,
                }
            })
            .collect()
    };
    let rows = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    };

    let mut counts = BTreeMap::new();
    let mut tag_counts = BTreeMap::new();
    for row in &rows {
        *counts.entry(row.status.as_str().to_string()).or_insert(0) += 1;
        if let Some(tag) = row.tag {
            *tag_counts.entry(tag.as_str().to_string()).or_insert(0) += 1;
        }
    }

    let mut transitions = Vec::new();
    for (k, axis) in config.axes.iter().enumerate() {
        let stride = config.stride(k);
        for row in &rows {
            let coords = config.coords(row.index);
            if coords[k] + 1 >= axis.count {
                continue;
            }
            let next = &rows[row.index + stride];
            if (row.status, row.tag) == (next.status, next.tag) {
                continue;
            }
            let (bracket, threshold) = if axis.parameter == Parameter::Dimension {
                (None, None)
            } else {
                let (lo, hi) = bisect(
                    config.model,
                    config.point(&coords),
                    axis.parameter,
                    axis.value(coords[k]),
                    axis.value(coords[k] + 1),
                );
                (Some((lo, hi)), Some(0.5 * (lo + hi)))
            };
            transitions.push(Transition {
                parameter: axis.parameter,
                lower_index: row.index,
                upper_index: next.index,
                from_status: row.status,
                from_tag: row.tag,
                to_status: next.status,
                to_tag: next.tag,
                bracket,
                threshold,
            });
        }
    }

    Ok(RegionTable {
        model: config.model,
        parameters: config.axes.iter().map(|a| a.parameter).collect(),
        rows,
        counts,
        tag_counts,
        transitions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axis(parameter: Parameter, start: f64, stop: f64, count: usize) -> Axis {
        Axis {
            parameter,
            start,
            stop,
            count,
        }
    }

    #[test]
    fn serrin_threshold() {
        let config = RegionConfig {
            model: Model::System,
            base: PointSpec {
                m: 5.0,
                ..PointSpec::default()
            },
            axes: vec![axis(Parameter::P, 1.1, 6.0, 50)],
        };
        let table = sweep_region(&config, Some(2)).unwrap();
        assert_eq!(table.rows.len(), 50);
        let t = table
            .transitions
            .iter()
            .find(|t| t.from_tag == Some(TheoremTag::SerrinExponent))
            .unwrap();
        assert!((t.threshold.unwrap() - 3.0).abs() < 1e-12, "{t:?}");
    }

    #[test]
    fn lattice_order_and_counts() {
        let config = RegionConfig {
            model: Model::ScalarAlgebraic,
            base: PointSpec {
                dimension: 5,
                s: 1.0,
                ..PointSpec::default()
            },
            axes: vec![axis(Parameter::S, 0.5, 1.0, 2), axis(Parameter::Gamma, 1.0, 9.0, 9)],
        };
        let table = sweep_region(&config, Some(3)).unwrap();
        assert!(table.rows.iter().enumerate().all(|(i, r)| r.index == i));
        assert_eq!(table.rows[9].values, vec![1.0, 1.0]);
        assert_eq!(table.counts.values().sum::<usize>(), 18);
        let gamma: Vec<f64> = table
            .transitions
            .iter()
            .filter(|t| t.from_status == PointStatus::Nonexistence)
            .map(|t| t.threshold.unwrap())
            .collect();
        assert_eq!(gamma.len(), 2);
        assert!(gamma.iter().all(|g| (g - 2.0).abs() < 1e-12));
    }

    #[test]
    fn empty_lattices() {
        let mut config = RegionConfig::default();
        assert!(sweep_region(&config, None).is_err());
        config.axes = vec![axis(Parameter::P, 3.0, 2.0, 5)];
        assert!(matches!(sweep_region(&config, None), Err(Error::Argument(_))));
        config.axes = vec![axis(Parameter::P, 2.0, 3.0, 0)];
        assert!(sweep_region(&config, None).is_err());
    }

    #[test]
    fn invalid_points_are_rows() {
        let config = RegionConfig {
            model: Model::System,
            base: PointSpec::default(),
            axes: vec![axis(Parameter::Mu, 0.0, 1.0, 2)],
        };
        let table = sweep_region(&config, Some(1)).unwrap();
        assert_eq!(table.rows[1].status, PointStatus::Invalid);
    }
}
