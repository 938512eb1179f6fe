//! Config schema for `solve` and `verify`, and the layering of example,
//! file and flags (later layers win).

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use gm_steady::barriers::{Exponents, Problem, SourceKind, SourceModel};
use gm_steady::catalog::{find_example, ExampleKind};
use gm_steady::solvers::{GridControl, ScalarRegime, SolverOptions};

use crate::error::{CliError, CliResult};
use crate::io::read_field;

/// Overlays `hi` on `lo`, field by field.
macro_rules! overlay {
    ($lo:expr, $hi:expr, $($f:ident),+) => {{
        let (lo, hi) = ($lo, $hi);
        Self { $($f: hi.$f.or(lo.$f)),+ }
    }};
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub dimension: Option<u32>,
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
}

impl ProblemSection {
    fn over(self, hi: Self) -> Self {
        overlay!(self, hi, dimension, lambda, mu)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SourceName {
    Zero,
    Exp,
    Alg,
    Tabulated,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSection {
    pub kind: Option<SourceName>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub rate_a: Option<f64>,
    pub amplitude: Option<f64>,
    /// Field dump holding a tabulated source.
    pub profile: Option<PathBuf>,
}

impl SourceSection {
    fn over(self, hi: Self) -> Self {
        overlay!(self, hi, kind, alpha, beta, rate_a, amplitude, profile)
    }

    fn from_model(rho: &SourceModel) -> Self {
        let kind = match rho.kind {
            SourceKind::Zero => SourceName::Zero,
            SourceKind::ExpEnvelope => SourceName::Exp,
            SourceKind::AlgEnvelope => SourceName::Alg,
            SourceKind::TabulatedRadial => SourceName::Tabulated,
        };
        Self {
            kind: Some(kind),
            alpha: Some(rho.alpha),
            beta: Some(rho.beta),
            rate_a: Some(rho.rate_a),
            amplitude: rho.amplitude,
            profile: None,
        }
    }

    fn build(&self) -> CliResult<SourceModel> {
        let need = |x: Option<f64>, key: &str| {
            x.ok_or_else(|| CliError::usage(format!("missing source.{key} (config key or --{key} flag)")))
        };
        let envelope = |f: fn(f64, f64, f64) -> gm_steady::Result<SourceModel>| -> CliResult<SourceModel> {
            let model = f(
                need(self.alpha, "alpha")?,
                need(self.beta, "beta")?,
                self.rate_a.unwrap_or(1.0),
            )?;
            Ok(match self.amplitude {
                Some(a) => model.with_amplitude(a)?,
                None => model,
            })
        };
        match self.kind.unwrap_or(SourceName::Zero) {
            SourceName::Zero => Ok(SourceModel::zero()),
            SourceName::Exp => envelope(SourceModel::exp_envelope),
            SourceName::Alg => envelope(SourceModel::alg_envelope),
            SourceName::Tabulated => {
                let path = self
                    .profile
                    .as_ref()
                    .ok_or_else(|| CliError::usage("a tabulated source needs source.profile"))?;
                Ok(SourceModel::tabulated(read_field(path)?)?)
            }
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentSection {
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub m: Option<f64>,
    pub s: Option<f64>,
}

impl ExponentSection {
    fn over(self, hi: Self) -> Self {
        overlay!(self, hi, p, q, m, s)
    }

    fn build(&self) -> CliResult<Exponents> {
        let need = |x: Option<f64>, key: &str| {
            x.ok_or_else(|| CliError::usage(format!("missing exponents.{key} (config key or --{key} flag)")))
        };
        Ok(Exponents::new(
            need(self.p, "p")?,
            need(self.q, "q")?,
            need(self.m, "m")?,
            self.s.unwrap_or(0.0),
        )?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum RegimeName {
    Exp,
    Alg,
}

/// The singular scalar equation `-Δv + μ v = ψ v^{-s}` with `ψ = amplitude · B_γ`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalarSection {
    pub dimension: Option<u32>,
    pub shift: Option<f64>,
    pub s: Option<f64>,
    pub amplitude: Option<f64>,
    pub regime: Option<RegimeName>,
    pub gamma: Option<f64>,
}

impl ScalarSection {
    fn over(self, hi: Self) -> Self {
        overlay!(self, hi, dimension, shift, s, amplitude, regime, gamma)
    }

    fn is_empty(&self) -> bool {
        self.dimension.is_none()
            && self.shift.is_none()
            && self.s.is_none()
            && self.amplitude.is_none()
            && self.regime.is_none()
            && self.gamma.is_none()
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub h0: Option<f64>,
    pub stretch: Option<f64>,
    pub radius: Option<f64>,
    pub tol: Option<f64>,
    pub residual_tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub max_doublings: Option<usize>,
}

impl SolverSection {
    fn over(self, hi: Self) -> Self {
        overlay!(
            self,
            hi,
            h0,
            stretch,
            radius,
            tol,
            residual_tol,
            max_iter,
            max_doublings
        )
    }

    fn build(&self) -> CliResult<SolverOptions> {
        let d = SolverOptions::default();
        let grid = match (self.h0, self.stretch) {
            (None, None) => None,
            (Some(h0), Some(stretch)) => Some(GridControl { h0, stretch }),
            _ => return Err(CliError::usage("solver.h0 and solver.stretch must be given together")),
        };
        Ok(SolverOptions {
            grid,
            radius: self.radius.or(d.radius),
            tol: self.tol.unwrap_or(d.tol),
            residual_tol: self.residual_tol.unwrap_or(d.residual_tol),
            max_iter: self.max_iter.unwrap_or(d.max_iter),
            max_doublings: self.max_doublings.unwrap_or(d.max_doublings),
        })
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub u: Option<PathBuf>,
    pub v: Option<PathBuf>,
}

impl OutputSection {
    fn over(self, hi: Self) -> Self {
        overlay!(self, hi, dir, report, u, v)
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub u: Option<PathBuf>,
    pub v: Option<PathBuf>,
    pub tol: Option<f64>,
}

impl VerifySection {
    fn over(self, hi: Self) -> Self {
        overlay!(self, hi, u, v, tol)
    }
}

/// Schema of a `solve` or `verify` config file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunFile {
    pub example: Option<String>,
    pub force: Option<bool>,
    #[serde(default)]
    pub problem: ProblemSection,
    #[serde(default)]
    pub source: SourceSection,
    #[serde(default)]
    pub exponents: ExponentSection,
    #[serde(default)]
    pub scalar: ScalarSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub verify: VerifySection,
}

impl RunFile {
    pub fn over(self, hi: Self) -> Self {
        Self {
            example: hi.example.or(self.example),
            force: hi.force.or(self.force),
            problem: self.problem.over(hi.problem),
            source: self.source.over(hi.source),
            exponents: self.exponents.over(hi.exponents),
            scalar: self.scalar.over(hi.scalar),
            solver: self.solver.over(hi.solver),
            output: self.output.over(hi.output),
            verify: self.verify.over(hi.verify),
        }
    }

    /// The layer a shipped example contributes.
    pub fn from_example(name: &str) -> CliResult<Self> {
        let ex = find_example(name).map_err(|e| CliError::usage(e.to_string()))?;
        let mut layer = Self {
            example: Some(name.to_string()),
            ..Self::default()
        };
        match ex.kind {
            ExampleKind::Scalar {
                dimension,
                shift,
                s,
                amplitude,
                regime,
            } => {
                let (regime, gamma) = match regime {
                    ScalarRegime::Exp { gamma } => (RegimeName::Exp, gamma),
                    ScalarRegime::Alg { gamma } => (RegimeName::Alg, gamma),
                };
                layer.scalar = ScalarSection {
                    dimension: Some(dimension),
                    shift: Some(shift),
                    s: Some(s),
                    amplitude: Some(amplitude),
                    regime: Some(regime),
                    gamma: Some(gamma),
                };
            }
            ExampleKind::System { problem, exponents, .. } => {
                layer.problem = ProblemSection {
                    dimension: Some(problem.dimension),
                    lambda: Some(problem.lambda),
                    mu: Some(problem.mu),
                };
                layer.source = SourceSection::from_model(&problem.rho);
                layer.exponents = ExponentSection {
                    p: Some(exponents.p),
                    q: Some(exponents.q),
                    m: Some(exponents.m),
                    s: Some(exponents.s),
                };
            }
        }
        Ok(layer)
    }

    /// Example, then file, then flags. The example may come from any layer.
    ///
    /// In scalar mode the shared flags `--dimension`, `--mu`, `--s` and
    /// `--amplitude` address the scalar problem.
    pub fn resolve(file: Self, mut flags: Self) -> CliResult<Self> {
        let name = flags.example.clone().or_else(|| file.example.clone());
        let base = match name {
            Some(n) => Self::from_example(&n)?,
            None => Self::default(),
        };
        let below = base.over(file);
        if !below.scalar.is_empty() || !flags.scalar.is_empty() {
            let sc = &mut flags.scalar;
            sc.dimension = sc.dimension.or(flags.problem.dimension.take());
            sc.shift = sc.shift.or(flags.problem.mu.take());
            sc.s = sc.s.or(flags.exponents.s.take());
            sc.amplitude = sc.amplitude.or(flags.source.amplitude.take());
        }
        Ok(below.over(flags))
    }

    pub fn solver_options(&self) -> CliResult<SolverOptions> {
        self.solver.build()
    }

    pub fn target(&self) -> CliResult<Target> {
        let system_given = self.problem.dimension.is_some()
            || self.problem.lambda.is_some()
            || self.problem.mu.is_some()
            || self.exponents.p.is_some();
        if !self.scalar.is_empty() {
            if system_given {
                return Err(CliError::usage(
                    "give either a [scalar] problem or a system problem, not both",
                ));
            }
            return self.scalar_target();
        }
        let problem = Problem::new(
            self.problem.dimension.unwrap_or(3),
            self.problem.lambda.unwrap_or(0.0),
            self.problem.mu.unwrap_or(0.0),
            self.source.build()?,
        )?;
        Ok(Target::System {
            problem,
            exponents: self.exponents.build()?,
        })
    }

    fn scalar_target(&self) -> CliResult<Target> {
        let sc = &self.scalar;
        let gamma = sc
            .gamma
            .ok_or_else(|| CliError::usage("missing scalar.gamma (config key or --gamma flag)"))?;
        let regime = match sc.regime.unwrap_or(RegimeName::Exp) {
            RegimeName::Exp => ScalarRegime::Exp { gamma },
            RegimeName::Alg => ScalarRegime::Alg { gamma },
        };
        Ok(Target::Scalar(ScalarTarget {
            dimension: sc.dimension.unwrap_or(3),
            shift: sc.shift.unwrap_or(0.0),
            s: sc.s.unwrap_or(0.0),
            amplitude: sc.amplitude.unwrap_or(1.0),
            regime,
        }))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalarTarget {
    pub dimension: u32,
    pub shift: f64,
    pub s: f64,
    pub amplitude: f64,
    pub regime: ScalarRegime,
}

#[derive(Debug, Clone)]
pub enum Target {
    System { problem: Problem, exponents: Exponents },
    Scalar(ScalarTarget),
}

/// Problem flags shared by `solve` and `verify`.
#[derive(Debug, Clone, Default, Args)]
pub struct ProblemArgs {
    /// Shipped example supplying the base parameters
    #[arg(long)]
    pub example: Option<String>,
    /// Space dimension N >= 3 [default: 3]
    #[arg(long)]
    pub dimension: Option<u32>,
    /// Activator shift λ [default: 0]
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Inhibitor shift μ [default: 0]
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub m: Option<f64>,
    /// Inhibitor self exponent [default: 0]
    #[arg(long)]
    pub s: Option<f64>,
    /// Source model [default: zero]
    #[arg(long, value_enum)]
    pub source: Option<SourceName>,
    /// Lower envelope constant of the source
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Upper envelope constant of the source
    #[arg(long)]
    pub beta: Option<f64>,
    /// Decay rate of the source envelope [default: 1]
    #[arg(long)]
    pub rate_a: Option<f64>,
    /// Source amplitude inside [alpha, beta] [default: (alpha+beta)/2]
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Field dump holding a tabulated source
    #[arg(long)]
    pub source_profile: Option<PathBuf>,
    /// Solve the singular scalar equation in this regime instead of the system
    #[arg(long, value_enum)]
    pub regime: Option<RegimeName>,
    /// Decay rate of the scalar weight
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Shift of the scalar equation [default: 0]
    #[arg(long)]
    pub shift: Option<f64>,
}

impl ProblemArgs {
    pub fn layer(&self) -> RunFile {
        RunFile {
            example: self.example.clone(),
            problem: ProblemSection {
                dimension: self.dimension,
                lambda: self.lambda,
                mu: self.mu,
            },
            source: SourceSection {
                kind: self.source,
                alpha: self.alpha,
                beta: self.beta,
                rate_a: self.rate_a,
                amplitude: self.amplitude,
                profile: self.source_profile.clone(),
            },
            exponents: ExponentSection {
                p: self.p,
                q: self.q,
                m: self.m,
                s: self.s,
            },
            scalar: ScalarSection {
                regime: self.regime,
                gamma: self.gamma,
                shift: self.shift,
                ..ScalarSection::default()
            },
            ..RunFile::default()
        }
    }
}
