use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args};
use serde::Serialize;

use gm_steady::barriers::{eval_barrier, BarrierProfile};
use gm_steady::catalog::{candidate_pair, find_example, ExampleKind};
use gm_steady::certificates::aubin_talenti;
use gm_steady::radial::{write_dump, RadialField, RadialGrid};
use gm_steady::solvers::{decay_fit, fit_window, DecayFit};

use crate::error::{CliError, CliResult, EXIT_OK};
use crate::io::{csv_error, csv_writer, envelope, in_dir, num, read_field, sink, write_field, write_json};

/// Inspects a field dump, or writes one from a profile, a bubble or a shipped example.
#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").args(["input", "profile", "bubble", "example"]).required(true)))]
pub struct DumpArgs {
    /// Field dump to read and summarize
    pub input: Option<PathBuf>,
    /// Barrier profile FAMILY:RATE, e.g. W:1 or Z:2
    #[arg(long, value_parser = parse_profile)]
    pub profile: Option<BarrierProfile>,
    /// Multiplier applied to the profile [default: 1]
    #[arg(long, requires = "profile")]
    pub scale: Option<f64>,
    /// Bubble profile in dimension N
    #[arg(long, value_name = "N")]
    pub bubble: Option<u32>,
    /// Bubble scale A [default: 1]
    #[arg(long, requires = "bubble")]
    pub a: Option<f64>,
    /// Candidate pair of a shipped example, written as u.txt and v.txt
    #[arg(long)]
    pub example: Option<String>,
    /// Uniform grid radius for profiles and bubbles [default: 20]
    #[arg(long)]
    pub radius: Option<f64>,
    /// Uniform grid nodes for profiles and bubbles [default: 2001]
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Output dump path [default: stdout]; a directory for --example [default: .]
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Convert the input dump to CSV with columns r,value
    #[arg(long, requires = "input")]
    pub csv: Option<PathBuf>,
    /// Summary report path for an input dump [default: stdout]
    #[arg(long, requires = "input")]
    pub report: Option<PathBuf>,
}

fn parse_profile(s: &str) -> Result<BarrierProfile, String> {
    let (family, rate) = s
        .split_once(':')
        .ok_or_else(|| format!("expected FAMILY:RATE, got {s:?}"))?;
    let rate: f64 = rate.trim().parse().map_err(|_| format!("not a number: {rate:?}"))?;
    match family.trim() {
        "W" | "w" => BarrierProfile::w(rate),
        "Z" | "z" => BarrierProfile::z(rate),
        other => return Err(format!("unknown family {other:?}; expected W or Z")),
    }
    .map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct DumpSummary {
    path: PathBuf,
    nodes: usize,
    radius: f64,
    max_step: f64,
    min: f64,
    max: f64,
    first: f64,
    last: f64,
    decay_tag: Option<BarrierProfile>,
    /// Fit of the tagged family over the default window for a base radius R/2.
    decay_fit: Option<DecayFit>,
}

fn summarize(path: &Path, f: &RadialField) -> DumpSummary {
    let decay_fit = f.decay_tag().and_then(|tag| {
        if f.min_value() <= 0.0 {
            return None;
        }
        let window = fit_window(tag.family, 0.5 * f.grid().radius());
        decay_fit(f, tag.family, window).ok()
    });
    DumpSummary {
        path: path.to_path_buf(),
        nodes: f.len(),
        radius: f.grid().radius(),
        max_step: f.grid().max_step(),
        min: f.min_value(),
        max: f.values().iter().copied().fold(f64::NEG_INFINITY, f64::max),
        first: f.values()[0],
        last: f.last(),
        decay_tag: f.decay_tag(),
        decay_fit,
    }
}

fn emit(field: &RadialField, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(p) if p != Path::new("-") => write_field(p, field),
        _ => {
            let mut w = sink(None)?;
            write_dump(field, &mut w)?;
            w.flush()?;
            Ok(())
        }
    }
}

pub fn run(args: &DumpArgs, stamp: bool) -> CliResult<i32> {
    let uniform = || RadialGrid::uniform(args.radius.unwrap_or(20.0), args.nodes.unwrap_or(2001));
    if let Some(path) = &args.input {
        let field = read_field(path)?;
        if let Some(csv) = &args.csv {
            let mut w = csv_writer(Some(csv))?;
            w.write_record(["r", "value"]).map_err(csv_error)?;
            for (r, v) in field.nodes().iter().zip(field.values()) {
                w.write_record([num(*r), num(*v)]).map_err(csv_error)?;
            }
            w.flush()?;
        }
        write_json(
            args.report.as_deref(),
            &envelope("dump", stamp, summarize(path, &field)),
        )?;
    } else if let Some(profile) = args.profile {
        let c = args.scale.unwrap_or(1.0);
        let field = RadialField::from_fn(&uniform()?, |r| c * eval_barrier(profile, r))?.with_decay_tag(Some(profile));
        emit(&field, args.out.as_deref())?;
    } else if let Some(n) = args.bubble {
        let a = args.a.unwrap_or(1.0);
        aubin_talenti(n, a, 0.0)?;
        let field = RadialField::from_fn(&uniform()?, |r| aubin_talenti(n, a, r).unwrap_or(f64::NAN))?
            .with_decay_tag(Some(BarrierProfile::z(f64::from(n) - 2.0)?));
        emit(&field, args.out.as_deref())?;
    } else if let Some(name) = &args.example {
        let ex = find_example(name).map_err(|e| CliError::usage(e.to_string()))?;
        if matches!(ex.kind, ExampleKind::Scalar { .. }) {
            return Err(CliError::usage(format!(
                "example {name} is scalar; run `solve --example {name}`"
            )));
        }
        let Some((u, v)) = candidate_pair(&ex)? else {
            return Err(CliError::Refusal(format!(
                "example {name}: the solver refuses this point"
            )));
        };
        let dir = args.out.clone().unwrap_or_else(|| PathBuf::from("."));
        for (file, field) in [("u.txt", &u), ("v.txt", &v)] {
            let path = in_dir(Some(&dir), file).expect("directory given");
            write_field(&path, field)?;
            eprintln!("wrote {}", path.display());
        }
    }
    Ok(EXIT_OK)
}
