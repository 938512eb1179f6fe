use crate::quadrature::{GL4_NODES, GL4_WEIGHTS};
use crate::radial::RadialField;

/// Gauss points and weights of one grid cell, with the field interpolated there.
pub(crate) struct CellSamples {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    pub values: Vec<f64>,
}

/// Samples the field inside cell `[r_i, r_{i+1}]` at `subcells × 4` Gauss points.
///
/// Values come from the cubic through the four nearest nodes, clipped to the
/// range of those nodes so a nonnegative field stays nonnegative.
pub(crate) fn sample_cell(field: &RadialField, i: usize, subcells: usize) -> CellSamples {
    let r = field.nodes();
    let g = field.values();
    let n = r.len();
    let j0 = i.saturating_sub(1).min(n.saturating_sub(4));
    let xs = &r[j0..j0 + 4];
    let ys = &g[j0..j0 + 4];
    let lo = ys.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (a, b) = (r[i], r[i + 1]);
    let width = (b - a) / subcells as f64;
    let mut out = CellSamples {
        points: Vec::with_capacity(4 * subcells),
        weights: Vec::with_capacity(4 * subcells),
        values: Vec::with_capacity(4 * subcells),
    };
    for k in 0..subcells {
        let left = a + k as f64 * width;
        let mid = left + 0.5 * width;
        for (x, w) in GL4_NODES.iter().zip(GL4_WEIGHTS) {
            let s = mid + 0.5 * width * x;
            out.points.push(s);
            out.weights.push(0.5 * width * w);
            out.values.push(lagrange(xs, ys, s).clamp(lo, hi));
        }
    }
    out
}

fn lagrange(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let mut sum = 0.0;
    for j in 0..xs.len() {
        let mut l = 1.0;
        for k in 0..xs.len() {
            if k != j {
                l *= (x - xs[k]) / (xs[j] - xs[k]);
            }
        }
        sum += l * ys[j];
    }
    sum
}
