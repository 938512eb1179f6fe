use super::bessel_potential::bessel_potential_radial;
use super::newton::newton_potential_radial;
use crate::barriers::{BarrierProfile, Exponents, Family, Problem};
use crate::error::{Error, Result};
use crate::radial::RadialField;

/// Tag of `u^p v^{-q}` from the tags of `u` and `v`.
fn quotient_tag(u: Option<BarrierProfile>, v: Option<BarrierProfile>, p: f64, q: f64) -> Option<BarrierProfile> {
    let (u, v) = (u?, v?);
    if u.family != v.family {
        return None;
    }
    Some(BarrierProfile {
        family: u.family,
        rate: (p * u.rate - q * v.rate).max(0.0),
    })
}

/// Slower of two tags; `None` is treated as compact support.
fn slowest(a: Option<BarrierProfile>, b: Option<BarrierProfile>) -> Option<BarrierProfile> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => match (a.family, b.family) {
            (Family::Z, Family::W) => Some(a),
            (Family::W, Family::Z) => Some(b),
            _ => Some(if a.rate <= b.rate { a } else { b }),
        },
    }
}

fn potential(dimension: u32, shift: f64, source: &RadialField) -> Result<RadialField> {
    if shift > 0.0 {
        bessel_potential_radial(dimension, shift, source)
    } else {
        newton_potential_radial(dimension, source)
    }
}

fn relative_sup(field: &RadialField, potential: &RadialField) -> f64 {
    let scale = field.max_abs();
    let diff = field
        .values()
        .iter()
        .zip(potential.values())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

/// Relative sup-norm gaps `(‖u - P_λ[u^p/v^q + ρ]‖, ‖v - P_μ[u^m/v^s]‖)`,
/// each divided by the sup of the field itself.
///
/// `P_λ` is the Bessel potential for `λ > 0` and the Newtonian potential for
/// `λ = 0`. Both fields must share a grid; their decay tags fix the shape of
/// the right-hand sides beyond it.
pub fn representation_residual(
    problem: &Problem,
    exponents: &Exponents,
    u: &RadialField,
    v: &RadialField,
) -> Result<(f64, f64)> {
    if u.nodes() != v.nodes() {
        return Err(Error::argument("u and v must live on the same grid"));
    }
    if v.min_value() <= 0.0 {
        return Err(Error::domain("representation residual needs v > 0"));
    }
    if u.min_value() <= 0.0 {
        return Err(Error::domain("representation residual needs u > 0"));
    }
    let Exponents { p, q, m, s } = *exponents;
    let dim = problem.dimension;
    let rho = &problem.rho;

    let fu_vals = u
        .values()
        .iter()
        .zip(v.values())
        .zip(u.nodes())
        .map(|((&a, &b), &r)| a.powf(p) / b.powf(q) + rho.eval(r))
        .collect();
    let rho_tag = if rho.is_zero() { None } else { rho.envelope_profile() };
    let fu_tag = slowest(quotient_tag(u.decay_tag(), v.decay_tag(), p, q), rho_tag);
    let fu = RadialField::new(u.grid().clone(), fu_vals)?.with_decay_tag(fu_tag);

    let fv_vals = u
        .values()
        .iter()
        .zip(v.values())
        .map(|(&a, &b)| a.powf(m) / b.powf(s))
        .collect();
    let fv_tag = quotient_tag(u.decay_tag(), v.decay_tag(), m, s);
    let fv = RadialField::new(u.grid().clone(), fv_vals)?.with_decay_tag(fv_tag);

    let pu = potential(dim, problem.lambda, &fu)?;
    let pv = potential(dim, problem.mu, &fv)?;
    Ok((relative_sup(u, &pu), relative_sup(v, &pv)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barriers::SourceModel;
    use crate::radial::RadialGrid;

    #[test]
    fn tag_algebra() {
        let w = |r| BarrierProfile::w(r).ok();
        let z = |r| BarrierProfile::z(r).ok();
        assert_eq!(quotient_tag(w(1.0), w(1.0), 2.0, 1.0), w(1.0));
        assert_eq!(quotient_tag(z(2.0), z(1.0), 5.0, 2.0), z(8.0));
        assert_eq!(quotient_tag(z(2.0), w(1.0), 5.0, 2.0), None);
        assert_eq!(slowest(w(2.0), z(9.0)), z(9.0));
        assert_eq!(slowest(w(2.0), w(1.0)), w(1.0));
        assert_eq!(slowest(None, w(1.0)), w(1.0));
    }

    #[test]
    fn rejects_nonpositive_v() {
        let g = RadialGrid::uniform(2.0, 20).unwrap();
        let u = RadialField::from_fn(&g, |_| 1.0).unwrap();
        let v = RadialField::from_fn(&g, |r| 1.0 - r).unwrap();
        let pb = Problem::new(3, 1.0, 1.0, SourceModel::zero()).unwrap();
        let e = Exponents::new(2.0, 1.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            representation_residual(&pb, &e, &u, &v),
            Err(Error::Domain(_))
        ));
    }
}
