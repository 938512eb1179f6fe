use serde::Serialize;

use crate::barriers::Family;
use crate::error::{Error, Result};
use crate::radial::RadialField;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    pub family: Family,
    pub window: (f64, f64),
    pub rate: f64,
    /// Root-mean-square deviation of `log field` from the fitted line.
    pub residual: f64,
}

/// Least-squares decay rate of a positive field over `[r_lo, r_hi]`.
///
/// Fits `log f ≈ c - rate · x` with `x = √(1+r²)` for `W` and
/// `x = log(1+r²)/2` for `Z`, using the grid nodes inside the window.
pub fn decay_fit(field: &RadialField, family: Family, window: (f64, f64)) -> Result<DecayFit> {
    let (lo, hi) = window;
    if !(lo < hi) || lo < 0.0 || hi > field.grid().radius() {
        return Err(Error::argument(format!(
            "fit window [{lo}, {hi}] must be increasing and inside [0, {}]",
            field.grid().radius()
        )));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&r, &v) in field.nodes().iter().zip(field.values()) {
        if r < lo || r > hi {
            continue;
        }
        if v <= 0.0 {
            return Err(Error::domain(format!(
                "decay fit needs positive values, got {v} at r = {r}"
            )));
        }
        xs.push(match family {
            Family::W => (1.0 + r * r).sqrt(),
            Family::Z => 0.5 * (r * r).ln_1p(),
        });
        ys.push(v.ln());
    }
    if xs.len() < 3 {
        return Err(Error::argument(format!(
            "fit window [{lo}, {hi}] holds fewer than 3 nodes"
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - my - slope * (x - mx)).powi(2))
        .sum();
    Ok(DecayFit {
        family,
        window,
        rate: -slope,
        residual: (rss / n).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barriers::{eval_barrier, BarrierProfile};
    use crate::radial::RadialGrid;

    #[test]
    fn own_generators() {
        let g = RadialGrid::graded_from_step(120.0, 0.01, 1.01).unwrap();
        let w2 = BarrierProfile::w(2.0).unwrap();
        let f = RadialField::from_fn(&g, |r| eval_barrier(w2, r)).unwrap();
        assert!((decay_fit(&f, Family::W, (5.0, 20.0)).unwrap().rate - 2.0).abs() < 1e-6);

        let z3 = BarrierProfile::z(3.0).unwrap();
        let f = RadialField::from_fn(&g, |r| eval_barrier(z3, r)).unwrap();
        assert!((decay_fit(&f, Family::Z, (10.0, 100.0)).unwrap().rate - 3.0).abs() < 1e-3);
    }

    #[test]
    fn slowest_mode_wins() {
        let g = RadialGrid::graded_from_step(50.0, 0.01, 1.01).unwrap();
        let (w1, w2) = (BarrierProfile::w(1.0).unwrap(), BarrierProfile::w(2.0).unwrap());
        let f = RadialField::from_fn(&g, |r| eval_barrier(w2, r) + 0.01 * eval_barrier(w1, r)).unwrap();
        let fit = decay_fit(&f, Family::W, (20.0, 40.0)).unwrap();
        assert!((fit.rate - 1.0).abs() < 1e-6, "{}", fit.rate);
    }

    #[test]
    fn errors() {
        let g = RadialGrid::uniform(10.0, 101).unwrap();
        let f = RadialField::from_fn(&g, |r| 5.0 - r).unwrap();
        assert!(matches!(decay_fit(&f, Family::Z, (1.0, 9.0)), Err(Error::Domain(_))));
        assert!(matches!(decay_fit(&f, Family::Z, (1.0, 20.0)), Err(Error::Argument(_))));
    }
}
