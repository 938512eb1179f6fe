use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};

use gm_steady::kernels::{green_lambda, green_zero, kernel_mass, verify_kernel_bounds, GreenParams};

use crate::error::{CliError, CliResult, EXIT_OK};
use crate::io::{csv_error, csv_writer, envelope, num, read_config, write_json};

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct KernelArgs {
    /// TOML config with top-level keys matching the flags
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Space dimension N >= 3 [default: 3]
    #[arg(long)]
    pub dimension: Option<u32>,
    /// Shift λ >= 0 [default: 1]
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Smallest radius [default: 0.01]
    #[arg(long)]
    pub r_min: Option<f64>,
    /// Largest radius [default: 20]
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Number of log-spaced radii [default: 41]
    #[arg(long)]
    pub count: Option<usize>,
    /// Table path [default: stdout]
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// JSON report with the mass identity and the sandwich constants
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct KernelFile {
    dimension: Option<u32>,
    lambda: Option<f64>,
    r_min: Option<f64>,
    r_max: Option<f64>,
    count: Option<usize>,
    csv: Option<PathBuf>,
    report: Option<PathBuf>,
}

#[derive(Serialize)]
struct KernelBody {
    dimension: u32,
    lambda: f64,
    /// `ω_N ∫ s^{N-1} G_λ`; absent for λ = 0, where it is infinite.
    mass: Option<f64>,
    /// `|λ · mass - 1|`.
    mass_error: Option<f64>,
    /// Far-field constant; absent for λ = 0.
    c1: Option<f64>,
    /// Near-field constant.
    c2: Option<f64>,
    radii: usize,
}

fn log_radii(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

pub fn run(args: &KernelArgs, stamp: bool) -> CliResult<i32> {
    let file: KernelFile = read_config(args.config.as_deref())?;
    let dimension = args.dimension.or(file.dimension).unwrap_or(3);
    let lambda = args.lambda.or(file.lambda).unwrap_or(1.0);
    let r_min = args.r_min.or(file.r_min).unwrap_or(0.01);
    let r_max = args.r_max.or(file.r_max).unwrap_or(20.0);
    let count = args.count.or(file.count).unwrap_or(41);
    let csv_path = args.csv.clone().or(file.csv);
    let report_path = args.report.clone().or(file.report);

    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(CliError::usage(format!("lambda must be finite and >= 0, got {lambda}")));
    }
    if !(r_min > 0.0 && r_min <= r_max && r_max.is_finite()) || count == 0 || (count > 1 && r_min == r_max) {
        return Err(CliError::usage(format!(
            "radii need 0 < r_min < r_max and count >= 1, got [{r_min}, {r_max}] with {count}"
        )));
    }
    let params = GreenParams::new(dimension, lambda)?;
    let radii = log_radii(r_min, r_max, count);

    let mass = (lambda > 0.0).then(|| kernel_mass(params)).transpose()?;
    let mass_error = mass.map(|m| (lambda * m - 1.0).abs());
    let mass_cell = mass.map_or_else(|| "inf".to_string(), num);

    let mut w = csv_writer(csv_path.as_deref())?;
    w.write_record(["r", "green_lambda", "green_zero", "ratio", "mass"])
        .map_err(csv_error)?;
    for &r in &radii {
        let g = green_lambda(params, r)?;
        let g0 = green_zero(dimension, r)?;
        w.write_record([num(r), num(g), num(g0), num(g / g0), mass_cell.clone()])
            .map_err(csv_error)?;
    }
    w.flush()?;

    if let Some(path) = report_path {
        let bounds = (lambda > 0.0)
            .then(|| verify_kernel_bounds(params, &radii))
            .transpose()?;
        let body = KernelBody {
            dimension,
            lambda,
            mass,
            mass_error,
            c1: bounds.as_ref().map(|b| b.c1),
            c2: bounds.as_ref().map(|b| b.c2),
            radii: radii.len(),
        };
        write_json(Some(&path), &envelope("kernel", stamp, body))?;
    }
    Ok(EXIT_OK)
}
