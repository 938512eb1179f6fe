use super::cells::sample_cell;
use crate::barriers::{BarrierProfile, Family, TheoremTag};
use crate::error::{Error, Result};
use crate::radial::RadialField;

/// `∫_R^∞ s · tag(s) ds` for a unit-amplitude tag.
pub(crate) fn first_moment_tail(tag: BarrierProfile, radius: f64) -> Result<f64> {
    let c = tag.rate;
    match tag.family {
        Family::Z => {
            if c <= 2.0 {
                return Err(Error::Divergence {
                    reference: TheoremTag::ScalarSlowWeight.as_str().into(),
                    detail: format!("source tail Z_{c} is not integrable against r (needs rate > 2)"),
                });
            }
            Ok((1.0 + radius * radius).powf(1.0 - 0.5 * c) / (c - 2.0))
        }
        Family::W => {
            if c <= 0.0 {
                return Err(Error::Divergence {
                    reference: TheoremTag::ScalarSlowWeight.as_str().into(),
                    detail: "constant source tail is not integrable".into(),
                });
            }
            let t = (1.0 + radius * radius).sqrt();
            Ok((-c * t).exp() * (t / c + 1.0 / (c * c)))
        }
    }
}

/// Newtonian potential and its radial derivative.
///
/// `u(r) = [r^{2-N} P(r) + Q(r)] / (N-2)` with `P = ∫_0^r s^{N-1} g`,
/// `Q = ∫_r^∞ s g`, and `u'(r) = -r^{1-N} P(r)`. The part of `Q` beyond the
/// grid comes from the source's decay tag in closed form; an untagged source
/// is taken to vanish past `R`.
pub fn newton_potential_and_derivative(dimension: u32, source: &RadialField) -> Result<(RadialField, Vec<f64>)> {
    if dimension < 3 {
        return Err(Error::domain("Newtonian potential needs N >= 3"));
    }
    let r = source.nodes();
    let n = r.len();
    let e = dimension as i32 - 1;
    let nm2 = f64::from(dimension - 2);

    let tail = match source.decay_tag() {
        Some(tag) => {
            let amp = source.tail_amplitude().unwrap_or(0.0);
            if amp == 0.0 {
                0.0
            } else {
                amp * first_moment_tail(tag, source.grid().radius())?
            }
        }
        None => 0.0,
    };

    let mut cell_p = vec![0.0; n - 1];
    let mut cell_q = vec![0.0; n - 1];
    for i in 0..n - 1 {
        let c = sample_cell(source, i, 1);
        for k in 0..c.points.len() {
            let s = c.points[k];
            let wg = c.weights[k] * c.values[k];
            cell_p[i] += wg * s.powi(e);
            cell_q[i] += wg * s;
        }
    }
    let mut p = vec![0.0; n];
    for i in 1..n {
        p[i] = p[i - 1] + cell_p[i - 1];
    }
    let mut q = vec![0.0; n];
    q[n - 1] = tail;
    for i in (0..n - 1).rev() {
        q[i] = q[i + 1] + cell_q[i];
    }
    let mut u = vec![0.0; n];
    let mut du = vec![0.0; n];
    for i in 0..n {
        if r[i] == 0.0 {
            u[i] = q[i] / nm2;
        } else {
            let near = p[i] / r[i].powi(e - 1);
            u[i] = (near + q[i]) / nm2;
            du[i] = -near / r[i];
        }
    }
    let out = RadialField::new(source.grid().clone(), u)?.with_decay_tag(newton_tag(dimension, source.decay_tag()));
    Ok((out, du))
}

/// `u` solving `-Δu = g`, `u → 0` at infinity.
pub fn newton_potential_radial(dimension: u32, source: &RadialField) -> Result<RadialField> {
    newton_potential_and_derivative(dimension, source).map(|(u, _)| u)
}

/// Far-field shape of the potential of a tagged source.
fn newton_tag(dimension: u32, tag: Option<BarrierProfile>) -> Option<BarrierProfile> {
    let nm2 = f64::from(dimension - 2);
    let rate = match tag {
        Some(BarrierProfile {
            family: Family::Z,
            rate,
        }) if rate < f64::from(dimension) => rate - 2.0,
        _ => nm2,
    };
    Some(BarrierProfile {
        family: Family::Z,
        rate: rate.max(0.0),
    })
}
