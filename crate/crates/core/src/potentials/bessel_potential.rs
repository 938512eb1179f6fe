use super::cells::sample_cell;
use crate::barriers::{BarrierProfile, Family};
use crate::error::{Error, Result};
use crate::kernels::{bessel_k_scaled, reduced_i_scaled, BesselOrder};
use crate::quadrature::integrate;
use crate::radial::RadialField;

/// Bessel potential `G_λ * g` of a radial source.
///
/// Uses the separable form of the spherically averaged kernel,
/// `ω_N S(r, s) = (r_< r_>)^{-ν} I_ν(k r_<) K_ν(k r_>)` with `k = √λ` and
/// `ν = N/2 - 1`, which turns the convolution into one forward and one
/// backward sweep over the grid. Both sweeps carry `e^{∓k r}` factors
/// explicitly so nothing overflows. Past `R` the source follows its decay tag.
pub fn bessel_potential_radial(dimension: u32, shift: f64, source: &RadialField) -> Result<RadialField> {
    if !(shift > 0.0) || !shift.is_finite() {
        return Err(Error::domain(format!(
            "Bessel potential needs shift > 0 (use the Newtonian potential for 0), got {shift}"
        )));
    }
    if dimension < 3 {
        return Err(Error::domain("Bessel potential needs N >= 3"));
    }
    let order = BesselOrder::for_dimension(dimension)?;
    let nu = order.value();
    let k = shift.sqrt();
    let half_n = f64::from(dimension) / 2.0;
    let e = dimension as i32 - 1;
    let r = source.nodes();
    let n = r.len();
    let big_r = source.grid().radius();

    let k_tilde = |s: f64| bessel_k_scaled(order, k * s).unwrap_or(0.0);
    let i_tilde = |s: f64| reduced_i_scaled(nu, k, s);

    // forward: F(r) = ∫_0^r s^{N-1} Ĩ(s) g(s) e^{-k(r-s)} ds
    // backward: B(r) = ∫_r^∞ s^{N/2} K̃(s) g(s) e^{-k(s-r)} ds
    let mut fwd = vec![0.0; n];
    let mut bwd = vec![0.0; n];
    let mut cell_fwd = vec![0.0; n - 1];
    let mut cell_bwd = vec![0.0; n - 1];
    for i in 0..n - 1 {
        let h = r[i + 1] - r[i];
        let subcells = ((k * h / 0.5).ceil() as usize).max(1);
        let c = sample_cell(source, i, subcells);
        for j in 0..c.points.len() {
            let s = c.points[j];
            let wg = c.weights[j] * c.values[j];
            if wg == 0.0 {
                continue;
            }
            cell_fwd[i] += wg * s.powi(e) * i_tilde(s) * (-k * (r[i + 1] - s)).exp();
            cell_bwd[i] += wg * s.powf(half_n) * k_tilde(s) * (-k * (s - r[i])).exp();
        }
    }
    for i in 1..n {
        fwd[i] = fwd[i - 1] * (-k * (r[i] - r[i - 1])).exp() + cell_fwd[i - 1];
    }
    bwd[n - 1] = tail_integral(source, big_r, k, half_n, &k_tilde)?;
    for i in (0..n - 1).rev() {
        bwd[i] = bwd[i + 1] * (-k * (r[i + 1] - r[i])).exp() + cell_bwd[i];
    }

    let mut u = vec![0.0; n];
    for i in 0..n {
        let inner = if r[i] == 0.0 {
            0.0
        } else {
            r[i].powf(-nu) * k_tilde(r[i]) * fwd[i]
        };
        u[i] = inner + i_tilde(r[i]) * bwd[i];
    }
    let tag = source.decay_tag().map(|t| match t.family {
        Family::W => BarrierProfile {
            family: Family::W,
            rate: t.rate.min(k),
        },
        Family::Z => t,
    });
    Ok(RadialField::new(source.grid().clone(), u)?.with_decay_tag(tag))
}

fn tail_integral<F: Fn(f64) -> f64>(source: &RadialField, big_r: f64, k: f64, half_n: f64, k_tilde: &F) -> Result<f64> {
    if source.decay_tag().is_none() || source.last() == 0.0 {
        return Ok(0.0);
    }
    let f = |s: f64| s.powf(half_n) * k_tilde(s) * source.interpolate(s) * (-k * (s - big_r)).exp();
    let step = 1.0 / k;
    let mut total = 0.0;
    let mut a = big_r;
    for _ in 0..45 {
        total += integrate(f, a, a + step, 0.0, 1e-12)?.value;
        a += step;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barriers::eval_barrier;
    use crate::kernels::{green_lambda, sphere_area, spherical_mean_green, GreenParams};
    use crate::radial::{apply_radial_laplacian, RadialGrid};

    #[test]
    fn constant_source() {
        let g = RadialGrid::uniform(5.0, 101).unwrap();
        let f = RadialField::from_fn(&g, |_| 1.0)
            .unwrap()
            .with_decay_tag(Some(BarrierProfile::w(0.0).unwrap()));
        let u = bessel_potential_radial(3, 1.0, &f).unwrap();
        for v in u.values() {
            assert!((v - 1.0).abs() < 1e-6, "{v}");
        }
        for dim in 4..=6 {
            let u = bessel_potential_radial(dim, 4.0, &f).unwrap();
            assert!(u.values().iter().all(|v| (v - 0.25).abs() < 1e-6));
        }
    }

    #[test]
    fn narrow_bump_approximates_kernel() {
        let width: f64 = 0.02;
        let p = GreenParams::new(3, 4.0).unwrap();
        let g = RadialGrid::graded_from_step(4.0, 5e-4, 1.01).unwrap();
        let norm = sphere_area(3) * (width.powi(3) * std::f64::consts::PI.sqrt() / 4.0);
        let f = RadialField::from_fn(&g, |r| (-(r / width).powi(2)).exp() / norm).unwrap();
        let u = bessel_potential_radial(3, 4.0, &f).unwrap();
        let want = green_lambda(p, 2.0).unwrap();
        assert!((u.interpolate(2.0) / want - 1.0).abs() < 2e-3);
    }

    #[test]
    fn agrees_with_angular_quadrature() {
        // direct evaluation with the spherical mean of the kernel
        for dim in [3u32, 4, 5] {
            let p = GreenParams::new(dim, 2.0).unwrap();
            let src = |s: f64| (-s * s).exp();
            let g = RadialGrid::uniform(6.0, 601).unwrap();
            let f = RadialField::from_fn(&g, src).unwrap();
            let u = bessel_potential_radial(dim, 2.0, &f).unwrap();
            for &r0 in &[0.0, 0.7, 2.0] {
                let w = sphere_area(dim);
                let integrand = |s: f64| {
                    if s == 0.0 {
                        return 0.0;
                    }
                    w * s.powi(dim as i32 - 1) * src(s) * spherical_mean_green(p, r0, s).unwrap()
                };
                let mut pts = vec![0.0, 6.0];
                if r0 > 0.0 {
                    pts.insert(1, r0);
                }
                let direct = crate::quadrature::integrate_with_breaks(integrand, &pts, 1e-12, 1e-9)
                    .unwrap()
                    .value;
                let got = u.interpolate(r0);
                assert!((got / direct - 1.0).abs() < 1e-5, "N={dim} r={r0}: {got} vs {direct}");
            }
        }
    }

    #[test]
    fn operator_returns_source() {
        let g = RadialGrid::uniform(10.0, 1001).unwrap();
        let tag = BarrierProfile::w(2.0).unwrap();
        let f = RadialField::from_fn(&g, |r| eval_barrier(tag, r))
            .unwrap()
            .with_decay_tag(Some(tag));
        let u = bessel_potential_radial(3, 9.0, &f).unwrap();
        let lap = apply_radial_laplacian(&u, 3).unwrap();
        for i in 0..g.len() - 1 {
            let back = lap.values()[i] + 9.0 * u.values()[i];
            assert!((back - f.values()[i]).abs() < 1e-4);
        }
    }

    #[test]
    fn rejects_zero_shift() {
        let g = RadialGrid::uniform(1.0, 16).unwrap();
        assert!(bessel_potential_radial(3, 0.0, &RadialField::zeros(&g)).is_err());
    }
}
