use serde::Serialize;

use super::cells::sample_cell;
use super::newton::newton_potential_radial;
use crate::barriers::{BarrierProfile, Family, SourceKind, SourceModel};
use crate::error::{Error, Result};
use crate::kernels::sphere_area;
use crate::radial::{fd_weights, RadialField, RadialGrid};

/// Number of dyadic radii `1, 2, …, 2^15` at which partial sums are reported.
pub const SHELL_COUNT: usize = 16;
/// Consecutive non-decreasing shell contributions needed to call growth.
pub const MIN_GROWING_SHELLS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DivergenceVerdict {
    Convergent { value: f64 },
    Divergent { growth: String },
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceReport {
    pub verdict: DivergenceVerdict,
    /// `(R_k, ∫_{|x|<R_k} …)` at dyadic radii.
    pub shell_sums: Vec<(f64, f64)>,
}

fn dyadic_radii() -> Vec<f64> {
    (0..SHELL_COUNT).map(|k| 2f64.powi(k as i32)).collect()
}

/// `∫_a^b s · tag(s) ds` in closed form, finite for any `a ≤ b`.
fn first_moment_between(tag: BarrierProfile, a: f64, b: f64) -> f64 {
    let c = tag.rate;
    match tag.family {
        Family::Z => {
            let (ya, yb) = (1.0 + a * a, 1.0 + b * b);
            if (c - 2.0).abs() < 1e-14 {
                0.5 * (yb / ya).ln()
            } else {
                (yb.powf(1.0 - 0.5 * c) - ya.powf(1.0 - 0.5 * c)) / (2.0 - c)
            }
        }
        Family::W => {
            if c == 0.0 {
                return 0.5 * (b * b - a * a);
            }
            let f = |t: f64| {
                let big_t = (1.0 + t * t).sqrt();
                (-c * big_t).exp() * (big_t / c + 1.0 / (c * c))
            };
            f(a) - f(b)
        }
    }
}

fn tail_converges(tag: BarrierProfile) -> bool {
    match tag.family {
        Family::Z => tag.rate > 2.0,
        Family::W => tag.rate > 0.0,
    }
}

fn tail_growth(tag: BarrierProfile) -> String {
    match tag.family {
        Family::Z if (tag.rate - 2.0).abs() < 1e-14 => "logarithmic: integrand ~ r^-1".into(),
        Family::Z => format!("power law: partial sums ~ R^{}", 2.0 - tag.rate),
        Family::W => "quadratic: constant tail".into(),
    }
}

/// Cumulative `∫_0^{r_i} s g(s) ds` at every node.
fn cumulative_moment(field: &RadialField) -> Vec<f64> {
    let n = field.len();
    let mut out = vec![0.0; n];
    for i in 0..n - 1 {
        let c = sample_cell(field, i, 1);
        let cell: f64 = (0..c.points.len())
            .map(|k| c.weights[k] * c.values[k] * c.points[k])
            .sum();
        out[i + 1] = out[i] + cell;
    }
    out
}

/// `∫_0^t s g(s) ds` for a tabulated field, with the tag past `R`.
fn moment_to(field: &RadialField, cumulative: &[f64], t: f64) -> f64 {
    let r = field.nodes();
    let big_r = field.grid().radius();
    if t >= big_r {
        let tail = match (field.decay_tag(), field.tail_amplitude()) {
            (Some(tag), Some(amp)) if amp != 0.0 => amp * first_moment_between(tag, big_r, t),
            _ => 0.0,
        };
        return cumulative[cumulative.len() - 1] + tail;
    }
    let i = field.grid().locate(t);
    let c = sample_cell(field, i, 1);
    let (a, b) = (r[i], r[i + 1]);
    let scale = (t - a) / (b - a);
    let mut partial = 0.0;
    for k in 0..c.points.len() {
        // same Gauss rule mapped onto [r_i, t]
        let s = a + (c.points[k] - a) * scale;
        partial += c.weights[k] * scale * s * field.interpolate(s);
    }
    cumulative[i] + partial
}

/// Probe `∫ ρ(x) |x|^{2-N} dx = ω_N ∫_0^∞ s ρ(s) ds`.
///
/// Envelope sources get the exact exponent test. A tabulated source with a
/// decay tag is judged by its tag; without one, eight consecutive
/// non-decreasing dyadic shells inside the grid count as divergence.
pub fn divergence_probe_rho(dimension: u32, rho: &SourceModel) -> DivergenceReport {
    let w = sphere_area(dimension);
    let radii = dyadic_radii();
    match rho.kind {
        SourceKind::Zero => DivergenceReport {
            verdict: DivergenceVerdict::Convergent { value: 0.0 },
            shell_sums: radii.iter().map(|&r| (r, 0.0)).collect(),
        },
        SourceKind::ExpEnvelope | SourceKind::AlgEnvelope => {
            let tag = rho.envelope_profile().expect("envelope kinds carry a profile");
            let amp = rho.amplitude();
            let shell_sums = radii
                .iter()
                .map(|&r| (r, w * amp * first_moment_between(tag, 0.0, r)))
                .collect();
            let verdict = if tail_converges(tag) {
                DivergenceVerdict::Convergent {
                    value: w * amp * first_moment_between(tag, 0.0, f64::INFINITY),
                }
            } else {
                DivergenceVerdict::Divergent {
                    growth: tail_growth(tag),
                }
            };
            DivergenceReport { verdict, shell_sums }
        }
        SourceKind::TabulatedRadial => {
            let Some(field) = rho.profile.as_ref() else {
                return DivergenceReport {
                    verdict: DivergenceVerdict::Inconclusive,
                    shell_sums: Vec::new(),
                };
            };
            let cumulative = cumulative_moment(field);
            let shell_sums: Vec<(f64, f64)> = radii
                .iter()
                .map(|&r| (r, w * moment_to(field, &cumulative, r)))
                .collect();
            let grid_total = w * cumulative[cumulative.len() - 1];
            let live_tail = field.tail_amplitude().is_some_and(|a| a != 0.0);
            let verdict = match field.decay_tag() {
                Some(tag) if live_tail => {
                    if tail_converges(tag) {
                        let amp = field.tail_amplitude().unwrap_or(0.0);
                        let tail = amp * first_moment_between(tag, field.grid().radius(), f64::INFINITY);
                        DivergenceVerdict::Convergent {
                            value: grid_total + w * tail,
                        }
                    } else {
                        DivergenceVerdict::Divergent {
                            growth: tail_growth(tag),
                        }
                    }
                }
                _ => shell_heuristic(field.grid().radius(), &shell_sums, grid_total),
            };
            DivergenceReport { verdict, shell_sums }
        }
    }
}

fn shell_heuristic(radius: f64, shell_sums: &[(f64, f64)], grid_total: f64) -> DivergenceVerdict {
    // contributions of complete shells [2^{k-1}, 2^k] inside the grid
    let contributions: Vec<f64> = shell_sums
        .windows(2)
        .filter(|p| p[1].0 <= radius)
        .map(|p| p[1].1 - p[0].1)
        .collect();
    let mut run = 0;
    for pair in contributions.windows(2) {
        if pair[1] >= pair[0] && pair[1] > 0.0 {
            run += 1;
        } else {
            run = 0;
        }
    }
    let growing = run + 1;
    if contributions.len() >= MIN_GROWING_SHELLS && growing >= MIN_GROWING_SHELLS {
        DivergenceVerdict::Divergent {
            growth: format!("{growing} consecutive non-decreasing dyadic shells"),
        }
    } else if !contributions.is_empty() && growing == contributions.len() && contributions[0] > 0.0 {
        DivergenceVerdict::Inconclusive
    } else {
        DivergenceVerdict::Convergent { value: grid_total }
    }
}

/// Far-field decay exponent `d` of `∫ ρ(y) |x-y|^{2-N} dy ~ |x|^{-d}`, or
/// `None` when that inner integral is itself infinite.
fn inner_decay(dimension: u32, tag: Option<BarrierProfile>) -> Option<f64> {
    let n = f64::from(dimension);
    match tag {
        Some(t) if t.family == Family::Z => {
            if t.rate <= 2.0 {
                None
            } else {
                Some(t.rate.min(n) - 2.0)
            }
        }
        Some(t) if t.rate == 0.0 => None,
        _ => Some(n - 2.0),
    }
}

/// Probe `∫ |x|^{2-N} (∫ ρ(y) |x-y|^{2-N} dy)^m dx`.
///
/// The inner potential decays like `|x|^{-d}`; the outer integrand is then
/// `r^{1-md}`, so the integral diverges exactly when `md ≤ 2`. Shell sums
/// come from the Newtonian potential of `ρ` on a graded grid out to `2^15`.
pub fn divergence_probe_nested(dimension: u32, rho: &SourceModel, m: f64) -> DivergenceReport {
    let radii = dyadic_radii();
    if rho.is_zero() {
        return DivergenceReport {
            verdict: DivergenceVerdict::Convergent { value: 0.0 },
            shell_sums: radii.iter().map(|&r| (r, 0.0)).collect(),
        };
    }
    let tag = match rho.kind {
        SourceKind::TabulatedRadial => rho
            .profile
            .as_ref()
            .and_then(|p| p.decay_tag().filter(|_| p.tail_amplitude().is_some_and(|a| a != 0.0))),
        _ => rho.envelope_profile(),
    };
    let d = inner_decay(dimension, tag);
    let shells = nested_shell_sums(dimension, rho, m, d, &radii);
    let verdict = match d {
        None => DivergenceVerdict::Divergent {
            growth: "inner potential of rho is infinite".into(),
        },
        Some(d) if m * d <= 2.0 => DivergenceVerdict::Divergent {
            growth: if (m * d - 2.0).abs() < 1e-14 {
                "logarithmic: outer integrand ~ r^-1".into()
            } else {
                format!("power law: partial sums ~ R^{}", 2.0 - m * d)
            },
        },
        Some(_) => match &shells {
            Ok((sums, tail)) => DivergenceVerdict::Convergent {
                value: sums.last().map_or(0.0, |s| s.1) + tail.unwrap_or(0.0),
            },
            Err(_) => DivergenceVerdict::Inconclusive,
        },
    };
    DivergenceReport {
        verdict,
        shell_sums: shells.map(|(s, _)| s).unwrap_or_default(),
    }
}

/// Cumulative outer sums at the dyadic radii plus the closed-form tail past
/// the last one (when the exponent allows).
/// Partial sums `(radius, sum)` and the tail estimate, if any.
type ShellSums = (Vec<(f64, f64)>, Option<f64>);

fn nested_shell_sums(dimension: u32, rho: &SourceModel, m: f64, d: Option<f64>, radii: &[f64]) -> Result<ShellSums> {
    let w = sphere_area(dimension);
    let big_r = radii[radii.len() - 1];
    let grid = RadialGrid::graded_from_step(big_r, 0.01, 1.01)?;
    let source = RadialField::from_fn(&grid, |r| rho.eval(r))?;
    // divergent inner tails are cut at the grid edge so the sums stay finite
    let source = match d {
        Some(_) => source.with_decay_tag(rho.envelope_profile()),
        None => source,
    };
    let u = newton_potential_radial(dimension, &source)?;
    let scale = f64::from(dimension - 2) * w;
    let inner = u.map(|_, v| (scale * v).max(0.0).powf(m))?.with_decay_tag(None);
    let cumulative = cumulative_moment(&inner);
    let sums = radii
        .iter()
        .map(|&r| (r, w * moment_to(&inner, &cumulative, r)))
        .collect();
    let tail = d.filter(|&d| m * d > 2.0).map(|d| {
        let at_r = inner.last();
        w * at_r * big_r * big_r / (m * d - 2.0)
    });
    Ok((sums, tail))
}

/// Result of the radial gradient check `r |v'| / v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvrReport {
    /// `sup_{1 ≤ r ≤ R} r |v'(r)| / v(r)`.
    pub bound: f64,
    /// Bound finite and not growing along the tail `[√R, R]`.
    pub holds: bool,
}

/// Log-log slope above which the tail of `r|v'|/v` counts as growing.
pub const CONVR_TAIL_SLOPE: f64 = 0.1;

// differences of a constant field leave ~1e-13 of noise
const ROUNDOFF_FLOOR: f64 = 1e-10;

/// Supremum of `r |v'| / v` over `[1, R]`, with `v'` from five-point
/// finite differences on the grid.
pub fn convr_check(v: &RadialField) -> Result<ConvrReport> {
    if v.min_value() <= 0.0 {
        return Err(Error::domain("convr_check needs v > 0 on the grid"));
    }
    let big_r = v.grid().radius();
    if big_r < 1.0 {
        return Err(Error::argument(format!(
            "grid radius {big_r} < 1: window [1, R] is empty"
        )));
    }
    let r = v.nodes();
    let vals = v.values();
    let n = r.len();
    let mut bound = 0.0f64;
    let mut tail = Vec::new();
    let tail_start = big_r.sqrt();
    for i in 0..n {
        if r[i] < 1.0 {
            continue;
        }
        let lo = i.saturating_sub(2).min(n - 5);
        let w = fd_weights(r[i], &r[lo..lo + 5], 1);
        let dv: f64 = (0..5).map(|k| w[1][k] * vals[lo + k]).sum();
        let mut ratio = r[i] * dv.abs() / vals[i];
        if ratio < ROUNDOFF_FLOOR {
            ratio = 0.0;
        }
        bound = bound.max(ratio);
        if r[i] >= tail_start && ratio > 0.0 {
            tail.push((r[i].ln(), ratio.ln()));
        }
    }
    let slope = log_slope(&tail);
    Ok(ConvrReport {
        bound,
        holds: bound.is_finite() && slope <= CONVR_TAIL_SLOPE,
    })
}

fn log_slope(points: &[(f64, f64)]) -> f64 {
    if points.len() < 2 {
        return 0.0;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}
