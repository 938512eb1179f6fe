use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use gm_steady::barriers::{classify, classify_scalar_algebraic, Exponents, Family, Problem, Verdict};
use gm_steady::solvers::{
    solve_singular_scalar, solve_system, ScalarRegime, ScalarWeight, SolveReport, SolveStatus, SolverOptions,
};
use gm_steady::Error;

use crate::config::{ProblemArgs, RunFile, ScalarTarget, Target};
use crate::error::{exit_code_of, CliResult, EXIT_NONCONVERGENCE, EXIT_OK};
use crate::io::{envelope, in_dir, read_config, write_field, write_json};

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SolveArgs {
    /// TOML config; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Solve points whose ledger is infeasible anyway
    #[arg(long)]
    pub force: bool,
    /// Base truncation radius [default: from the barrier decay]
    #[arg(long)]
    pub radius: Option<f64>,
    /// Relative change that stops the iteration [default: 1e-12]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Residual bound required for convergence [default: 1e-5]
    #[arg(long)]
    pub residual_tol: Option<f64>,
    /// Iteration cap per ball [default: 500]
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Directory receiving report.json, u.txt and v.txt
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Report path, `-` for stdout [default: stdout, or out-dir/report.json]
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Activator dump path
    #[arg(long)]
    pub u_out: Option<PathBuf>,
    /// Inhibitor dump path
    #[arg(long)]
    pub v_out: Option<PathBuf>,
}

impl SolveArgs {
    fn layer(&self) -> RunFile {
        let mut layer = self.problem.layer();
        layer.force = self.force.then_some(true);
        layer.solver.radius = self.radius;
        layer.solver.tol = self.tol;
        layer.solver.residual_tol = self.residual_tol;
        layer.solver.max_iter = self.max_iter;
        layer.output.dir = self.out_dir.clone();
        layer.output.report = self.report.clone();
        layer.output.u = self.u_out.clone();
        layer.output.v = self.v_out.clone();
        layer
    }
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
enum Outcome {
    Converged,
    MaxIterations,
    SandwichViolated,
    Refused,
}

#[derive(Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
enum Input<'a> {
    System {
        problem: &'a Problem,
        exponents: &'a Exponents,
    },
    Scalar(&'a ScalarTarget),
}

#[derive(Serialize)]
struct Fields {
    u: Option<PathBuf>,
    v: Option<PathBuf>,
}

#[derive(Serialize)]
struct SolveBody<'a> {
    example: Option<&'a str>,
    input: Input<'a>,
    options: &'a SolverOptions,
    verdict: Option<Verdict>,
    outcome: Outcome,
    exit_code: i32,
    error: Option<String>,
    /// Violated ledger inequalities when the point was refused as infeasible.
    violated: Vec<String>,
    report: Option<&'a SolveReport>,
    fields: Fields,
}

pub fn run(args: &SolveArgs, stamp: bool) -> CliResult<i32> {
    let file: RunFile = read_config(args.config.as_deref())?;
    let run = RunFile::resolve(file, args.layer())?;
    let target = run.target()?;
    let options = run.solver_options()?;
    let force = run.force.unwrap_or(false);

    let (input, verdict, result) = match &target {
        Target::System { problem, exponents } => (
            Input::System { problem, exponents },
            Some(classify(problem, exponents)),
            solve_system(problem, exponents, &options, force),
        ),
        Target::Scalar(t) => {
            let verdict = match t.regime {
                ScalarRegime::Alg { gamma } => Some(classify_scalar_algebraic(t.dimension, t.s, gamma)),
                ScalarRegime::Exp { .. } => None,
            };
            let weight = ScalarWeight::Envelope { amplitude: t.amplitude };
            (
                Input::Scalar(t),
                verdict,
                solve_singular_scalar(t.dimension, t.shift, t.s, &weight, t.regime, &options),
            )
        }
    };

    let out = &run.output;
    let dir = out.dir.as_deref();
    let report_path = out.report.clone().or_else(|| in_dir(dir, "report.json"));
    let u_path = out.u.clone().or_else(|| in_dir(dir, "u.txt"));
    let v_path = out.v.clone().or_else(|| in_dir(dir, "v.txt"));

    let (outcome, code, error, violated, report) = match &result {
        Ok(rep) => {
            let (outcome, code) = match rep.status {
                SolveStatus::Converged => (Outcome::Converged, EXIT_OK),
                SolveStatus::MaxIterations => (Outcome::MaxIterations, EXIT_NONCONVERGENCE),
                SolveStatus::SandwichViolated => (Outcome::SandwichViolated, EXIT_NONCONVERGENCE),
            };
            (outcome, code, None, Vec::new(), Some(rep))
        }
        Err(e) => {
            let code = exit_code_of(e);
            if code != crate::error::EXIT_REFUSAL {
                return Err(e.clone().into());
            }
            let violated = match e {
                Error::Infeasible(v) => v.clone(),
                _ => Vec::new(),
            };
            (Outcome::Refused, code, Some(e.to_string()), violated, None)
        }
    };

    let mut fields = Fields { u: None, v: None };
    if let Some(rep) = report {
        if let (Some(path), Some(u)) = (&u_path, &rep.u) {
            write_field(path, u)?;
            fields.u = Some(path.clone());
        }
        if let Some(path) = &v_path {
            write_field(path, &rep.v)?;
            fields.v = Some(path.clone());
        }
        log_summary(rep);
    }
    if let Some(msg) = &error {
        eprintln!("refused: {msg}");
    }

    let body = SolveBody {
        example: run.example.as_deref(),
        input,
        options: &options,
        verdict,
        outcome,
        exit_code: code,
        error,
        violated,
        report,
        fields,
    };
    write_json(report_path.as_deref(), &envelope("solve", stamp, body))?;
    Ok(code)
}

fn log_summary(rep: &SolveReport) {
    eprintln!(
        "status {:?} after {} iterations on radius {}",
        rep.status, rep.iterations, rep.ball_radius
    );
    for m in &rep.margins {
        eprintln!(
            "margin {}: {} {}_{} <= {} <= {} {}_{}, ratios [{:.6}, {:.6}]{}",
            m.field,
            m.lower,
            family(m.profile.family),
            m.profile.rate,
            m.field,
            m.upper,
            family(m.profile.family),
            m.profile.rate,
            m.min_ratio,
            m.max_ratio,
            if m.respected { "" } else { " VIOLATED" }
        );
    }
}

fn family(f: Family) -> &'static str {
    match f {
        Family::W => "W",
        Family::Z => "Z",
    }
}
