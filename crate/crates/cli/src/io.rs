//! File plumbing shared by the subcommands.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::de::DeserializeOwned;
use serde::Serialize;

use gm_steady::radial::{read_dump, write_dump, RadialField};

use crate::error::{CliError, CliResult};

pub const THREADS_VAR: &str = "GM_STEADY_THREADS";

/// Parses a TOML config; unknown keys are errors.
pub fn read_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> CliResult<T> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

/// One JSON object per run. Keys keep declaration order; the timestamp is
/// the only field that varies between identical runs, and only when asked for.
#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub command: &'a str,
    pub version: &'a str,
    pub timestamp: Option<u64>,
    #[serde(flatten)]
    pub body: T,
}

pub fn envelope<T: Serialize>(command: &'static str, stamp: bool, body: T) -> Envelope<'static, T> {
    let timestamp = stamp.then(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()));
    Envelope {
        command,
        version: env!("CARGO_PKG_VERSION"),
        timestamp,
        body,
    }
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::usage(format!("{}: {e}", dir.display())))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

/// Writes to `path`, or to stdout when it is absent or `-`.
pub fn sink(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    match path {
        Some(p) if p != Path::new("-") => Ok(Box::new(create(p)?)),
        _ => Ok(Box::new(BufWriter::new(io::stdout()))),
    }
}

pub fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> CliResult<()> {
    let mut out = sink(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::usage(e.to_string()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

pub fn csv_writer(path: Option<&Path>) -> CliResult<csv::Writer<Box<dyn Write>>> {
    Ok(csv::WriterBuilder::new()
        .quote_style(csv::QuoteStyle::Necessary)
        .from_writer(sink(path)?))
}

pub fn csv_error(e: csv::Error) -> CliError {
    CliError::usage(format!("csv output: {e}"))
}

pub fn read_field(path: &Path) -> CliResult<RadialField> {
    let file = File::open(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    read_dump(BufReader::new(file)).map_err(|e| CliError::from(e).in_file(path))
}

pub fn write_field(path: &Path, field: &RadialField) -> CliResult<()> {
    let mut out = create(path)?;
    write_dump(field, &mut out)?;
    out.flush()?;
    Ok(())
}

/// Worker cap from `GM_STEADY_THREADS` combined with a flag; the smaller wins.
pub fn thread_cap(flag: Option<usize>) -> CliResult<Option<usize>> {
    let env = match std::env::var(THREADS_VAR) {
        Ok(v) if !v.trim().is_empty() => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Some(n),
            _ => {
                return Err(CliError::usage(format!(
                    "{THREADS_VAR} must be a positive integer, got {v:?}"
                )))
            }
        },
        _ => None,
    };
    if flag == Some(0) {
        return Err(CliError::usage("--threads must be positive"));
    }
    Ok(match (flag, env) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    })
}

/// Table cell for a float: plain decimals in the middle range, shortest
/// round-tripping scientific notation outside it.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

/// `dir/name` when a directory is given.
pub fn in_dir(dir: Option<&Path>, name: &str) -> Option<PathBuf> {
    dir.map(|d| d.join(name))
}
