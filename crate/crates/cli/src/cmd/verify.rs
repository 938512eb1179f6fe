use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use gm_steady::barriers::{classify, Verdict};
use gm_steady::certificates::{verify_cor3, verify_solution, BubbleCertificate, SolutionCertificate};
use gm_steady::radial::RadialGrid;

use crate::config::{ProblemArgs, RunFile, Target};
use crate::error::{CliError, CliResult, EXIT_NONCONVERGENCE, EXIT_OK};
use crate::io::{envelope, read_config, read_field, write_field, write_json};

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct VerifyArgs {
    /// TOML config; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Check the closed-form bubble pair for N, p, s instead of field files
    #[arg(long, num_args = 3, value_names = ["N", "P", "S"], conflicts_with_all = ["u", "v"])]
    pub cor3: Option<Vec<f64>>,
    /// Bubble scale A [default: 1]
    #[arg(long, requires = "cor3")]
    pub a: Option<f64>,
    /// Bubble grid radius [default: 20]
    #[arg(long, requires = "cor3")]
    pub radius: Option<f64>,
    /// Bubble grid nodes, uniform [default: 50001]
    #[arg(long, requires = "cor3")]
    pub nodes: Option<usize>,
    /// Activator dump
    #[arg(long)]
    pub u: Option<PathBuf>,
    /// Inhibitor dump
    #[arg(long)]
    pub v: Option<PathBuf>,
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Residual tolerance for a pass [default: 1e-5]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Report path [default: stdout]
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Write the bubble profile as a field dump
    #[arg(long, requires = "cor3")]
    pub dump: Option<PathBuf>,
}

pub const DEFAULT_TOL: f64 = 1e-5;

#[derive(Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
enum Certificate {
    Cor3 {
        dimension: u32,
        p: f64,
        s: f64,
        certificate: BubbleCertificate,
    },
    Fields {
        u: PathBuf,
        v: PathBuf,
        verdict: Verdict,
        certificate: SolutionCertificate,
    },
}

#[derive(Serialize)]
struct VerifyBody {
    tolerance: f64,
    max_residual: f64,
    passed: bool,
    #[serde(flatten)]
    certificate: Certificate,
}

pub fn run(args: &VerifyArgs, stamp: bool) -> CliResult<i32> {
    let file: RunFile = read_config(args.config.as_deref())?;
    let mut flags = args.problem.layer();
    flags.verify.u = args.u.clone();
    flags.verify.v = args.v.clone();
    flags.verify.tol = args.tol;
    let tol = args.tol.or(file.verify.tol).unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0) {
        return Err(CliError::usage(format!("tolerance must be > 0, got {tol}")));
    }

    let (max_residual, certificate) = match &args.cor3 {
        Some(triple) => {
            let [n, p, s] = triple[..] else {
                return Err(CliError::usage("--cor3 takes N P S"));
            };
            if !(n >= 3.0 && n.fract() == 0.0 && n <= f64::from(u32::MAX)) {
                return Err(CliError::usage(format!("--cor3: N must be an integer >= 3, got {n}")));
            }
            let dimension = n as u32;
            let grid = RadialGrid::uniform(args.radius.unwrap_or(20.0), args.nodes.unwrap_or(50_001))?;
            let cert = verify_cor3(dimension, p, s, args.a.unwrap_or(1.0), &grid)?;
            if let Some(path) = &args.dump {
                write_field(path, &cert.field)?;
            }
            (
                cert.max_residual(),
                Certificate::Cor3 {
                    dimension,
                    p,
                    s,
                    certificate: cert,
                },
            )
        }
        None => {
            let run = RunFile::resolve(file, flags)?;
            let (u_path, v_path) = match (&run.verify.u, &run.verify.v) {
                (Some(u), Some(v)) => (u.clone(), v.clone()),
                _ => {
                    return Err(CliError::usage(
                        "verify needs --cor3 N P S, or both --u and --v field files",
                    ))
                }
            };
            let Target::System { problem, exponents } = run.target()? else {
                return Err(CliError::usage("field verification applies to the coupled system only"));
            };
            let (u, v) = (read_field(&u_path)?, read_field(&v_path)?);
            let cert = verify_solution(&problem, &exponents, &u, &v)?;
            (
                cert.max_residual(),
                Certificate::Fields {
                    u: u_path,
                    v: v_path,
                    verdict: classify(&problem, &exponents),
                    certificate: cert,
                },
            )
        }
    };

    let passed = max_residual <= tol;
    eprintln!(
        "max residual {max_residual:.3e} {} tolerance {tol:e}",
        if passed { "within" } else { "exceeds" }
    );
    let body = VerifyBody {
        tolerance: tol,
        max_residual,
        passed,
        certificate,
    };
    write_json(args.report.as_deref(), &envelope("verify", stamp, body))?;
    Ok(if passed { EXIT_OK } else { EXIT_NONCONVERGENCE })
}
