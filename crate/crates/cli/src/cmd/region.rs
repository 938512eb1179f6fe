use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};

use gm_steady::barriers::SourceKind;
use gm_steady::region::{sweep_region, Axis, Model, Parameter, PointSpec, RegionConfig, Transition};

use crate::error::{CliError, CliResult, EXIT_OK};
use crate::io::{csv_error, csv_writer, envelope, num, read_config, thread_cap, write_json};

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct RegionArgs {
    /// TOML config: `model`, a `[base]` table and `[[axes]]` entries
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Classifier [default: system]
    #[arg(long, value_parser = parse_model)]
    pub model: Option<Model>,
    /// Fixed value for a base parameter, NAME=VALUE; repeatable
    #[arg(long = "set", value_name = "NAME=VALUE", value_parser = parse_set)]
    pub set: Vec<(Parameter, f64)>,
    /// Base source kind: zero, exp_envelope or alg_envelope [default: zero]
    #[arg(long, value_parser = parse_source)]
    pub source: Option<SourceKind>,
    /// Swept axis NAME:START:STOP:COUNT; repeatable, replaces the file's axes
    #[arg(long = "axis", value_name = "NAME:START:STOP:COUNT", value_parser = parse_axis)]
    pub axes: Vec<Axis>,
    /// Worker cap; GM_STEADY_THREADS also caps, the smaller wins
    #[arg(long)]
    pub threads: Option<usize>,
    /// Table path [default: stdout]
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// JSON report with counts and transitions
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegionFile {
    #[serde(default)]
    model: Model,
    #[serde(default)]
    base: PointSpec,
    #[serde(default)]
    axes: Vec<Axis>,
    threads: Option<usize>,
    csv: Option<PathBuf>,
    report: Option<PathBuf>,
}

fn parse_model(s: &str) -> Result<Model, String> {
    match s {
        "system" => Ok(Model::System),
        "scalar_algebraic" => Ok(Model::ScalarAlgebraic),
        _ => Err(format!("unknown model {s:?}; expected system or scalar_algebraic")),
    }
}

fn parse_source(s: &str) -> Result<SourceKind, String> {
    match s {
        "zero" => Ok(SourceKind::Zero),
        "exp_envelope" => Ok(SourceKind::ExpEnvelope),
        "alg_envelope" => Ok(SourceKind::AlgEnvelope),
        _ => Err(format!(
            "unknown source {s:?}; expected zero, exp_envelope or alg_envelope"
        )),
    }
}

fn parse_number(s: &str) -> Result<f64, String> {
    s.trim().parse().map_err(|_| format!("not a number: {s:?}"))
}

fn parse_set(s: &str) -> Result<(Parameter, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got {s:?}"))?;
    let p = name.trim().parse::<Parameter>().map_err(|e| e.to_string())?;
    Ok((p, parse_number(value)?))
}

fn parse_axis(s: &str) -> Result<Axis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [name, start, stop, count] = parts[..] else {
        return Err(format!("expected NAME:START:STOP:COUNT, got {s:?}"));
    };
    Ok(Axis {
        parameter: name.trim().parse().map_err(|e: gm_steady::Error| e.to_string())?,
        start: parse_number(start)?,
        stop: parse_number(stop)?,
        count: count
            .trim()
            .parse()
            .map_err(|_| format!("count must be a nonnegative integer, got {count:?}"))?,
    })
}

#[derive(Serialize)]
struct RegionBody<'a> {
    model: Model,
    base: &'a PointSpec,
    axes: &'a [Axis],
    points: usize,
    counts: &'a BTreeMap<String, usize>,
    tag_counts: &'a BTreeMap<String, usize>,
    transitions: &'a [Transition],
}

pub fn run(args: &RegionArgs, stamp: bool) -> CliResult<i32> {
    let file: RegionFile = read_config(args.config.as_deref())?;
    let mut base = file.base;
    if let Some(kind) = args.source {
        base.source = kind;
    }
    for &(p, v) in &args.set {
        base.set(p, v);
    }
    let config = RegionConfig {
        model: args.model.unwrap_or(file.model),
        base,
        axes: if args.axes.is_empty() {
            file.axes
        } else {
            args.axes.clone()
        },
    };
    if config.axes.is_empty() {
        return Err(CliError::usage("empty lattice: give at least one axis"));
    }
    let threads = thread_cap(args.threads.or(file.threads))?;
    let table = sweep_region(&config, threads)?;

    let mut w = csv_writer(args.csv.as_deref().or(file.csv.as_deref()))?;
    let mut header = vec!["index".to_string()];
    header.extend(table.parameters.iter().map(|p| p.name().to_string()));
    header.extend(["status", "tag", "reason"].map(String::from));
    w.write_record(&header).map_err(csv_error)?;
    for row in &table.rows {
        let mut rec = vec![row.index.to_string()];
        rec.extend(row.values.iter().map(|&x| num(x)));
        rec.push(row.status.as_str().to_string());
        rec.push(row.tag.map_or(String::new(), |t| t.as_str().to_string()));
        rec.push(row.reason.clone());
        w.write_record(&rec).map_err(csv_error)?;
    }
    w.flush()?;

    let summary: Vec<String> = table.counts.iter().map(|(k, v)| format!("{k} {v}")).collect();
    eprintln!("{} points: {}", table.rows.len(), summary.join(", "));
    for t in &table.transitions {
        if let Some(x) = t.threshold {
            eprintln!(
                "{} = {x}: {} -> {}",
                t.parameter.name(),
                t.from_tag.map_or(t.from_status.as_str(), |g| g.as_str()),
                t.to_tag.map_or(t.to_status.as_str(), |g| g.as_str())
            );
        }
    }

    if let Some(path) = args.report.as_deref().or(file.report.as_deref()) {
        let body = RegionBody {
            model: table.model,
            base: &config.base,
            axes: &config.axes,
            points: table.rows.len(),
            counts: &table.counts,
            tag_counts: &table.tag_counts,
            transitions: &table.transitions,
        };
        write_json(Some(path), &envelope("region", stamp, body))?;
    }
    Ok(EXIT_OK)
}
