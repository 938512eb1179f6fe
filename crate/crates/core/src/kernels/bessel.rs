//! Modified Bessel functions of real order and positive real argument.
//!
//! `K_ν` is assembled from `K_μ, K_{μ+1}` with `|μ| ≤ 1/2` followed by upward
//! recurrence in the order. The pair is obtained from Temme's series for
//! `z ≤ 2`, Steed's continued fraction for `2 < z < 25` and the large-argument
//! expansion beyond. Half-integer orders use their finite closed forms.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

const EPS: f64 = 1.0e-16;
const MAX_TERMS: usize = 10_000;
const SERIES_LIMIT: f64 = 2.0;
const ASYMPTOTIC_LIMIT: f64 = 25.0;

/// Order `ν ≥ 0` of a modified Bessel function.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if nu.is_finite() && nu >= 0.0 {
            Ok(Self(nu))
        } else {
            Err(Error::domain(format!("Bessel order must be finite and >= 0, got {nu}")))
        }
    }

    /// The order `N/2 - 1` attached to the Bessel potential in dimension `N`.
    pub fn for_dimension(dimension: u32) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::domain("dimension must be at least 2"));
        }
        Self::new(f64::from(dimension) / 2.0 - 1.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    fn half_integer(self) -> Option<u32> {
        let twice = 2.0 * self.0;
        if twice.fract() == 0.0 && self.0.fract() == 0.5 && self.0 < 64.0 {
            Some(self.0.floor() as u32)
        } else {
            None
        }
    }
}

/// Value of `K_ν(z)`; `underflow` is set when `e^{-z}` leaves the normal range
/// and the value has been flushed to zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselK {
    pub value: f64,
    pub underflow: bool,
}

/// `K_ν(z)` for `z > 0`.
pub fn bessel_k(order: BesselOrder, z: f64) -> Result<BesselK> {
    let scaled = bessel_k_scaled(order, z)?;
    let value = scaled * (-z).exp();
    if value < f64::MIN_POSITIVE {
        Ok(BesselK {
            value: 0.0,
            underflow: true,
        })
    } else {
        Ok(BesselK {
            value,
            underflow: false,
        })
    }
}

/// `e^z K_ν(z)` for `z > 0`.
pub fn bessel_k_scaled(order: BesselOrder, z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain(format!("K_nu requires z > 0, got {z}")));
    }
    if let Some(n) = order.half_integer() {
        return Ok(half_integer_k_scaled(n, z));
    }
    Ok(k_pair_scaled(order.0, z).0)
}

/// `K_{n+1/2}(z) e^z = sqrt(pi/(2z)) * sum_k (n+k)! / (k! (n-k)! (2z)^k)`.
fn half_integer_k_scaled(n: u32, z: f64) -> f64 {
    let mut coeff = 1.0;
    let mut sum = 1.0;
    let inv = 1.0 / (2.0 * z);
    let mut power = 1.0;
    for k in 1..=n {
        let kf = f64::from(k);
        coeff *= (f64::from(n) + kf) * (f64::from(n) - kf + 1.0) / kf;
        power *= inv;
        sum += coeff * power;
    }
    (PI / (2.0 * z)).sqrt() * sum
}

/// Scaled pair `(e^z K_ν(z), e^z K_{ν+1}(z))`.
pub(crate) fn k_pair_scaled(nu: f64, z: f64) -> (f64, f64) {
    let nl = (nu + 0.5).floor();
    let mu = nu - nl;
    let (mut k_mu, mut k_next) = if z <= SERIES_LIMIT {
        let (a, b) = temme_series(mu, z);
        let scale = z.exp();
        (a * scale, b * scale)
    } else if z < ASYMPTOTIC_LIMIT {
        steed_cf2_scaled(mu, z)
    } else {
        (asymptotic_k_scaled(mu, z), asymptotic_k_scaled(mu + 1.0, z))
    };
    let two_over_z = 2.0 / z;
    for i in 1..=(nl as u32) {
        let next = (mu + f64::from(i)) * two_over_z * k_next + k_mu;
        k_mu = k_next;
        k_next = next;
    }
    (k_mu, k_next)
}

/// `1/Γ(1+μ)` and `1/Γ(1-μ)` folded into Temme's auxiliary functions.
///
/// Uses the Taylor series of `1/Γ(z)` so that `γ1` stays accurate as `μ → 0`.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    // 1/Γ(z) = Σ c_k z^k, k ≥ 1
    const C: [f64; 26] = [
        1.0,
        0.577_215_664_901_532_9,
        -0.655_878_071_520_253_8,
        -0.042_002_635_034_095_2,
        0.166_538_611_382_291_5,
        -0.042_197_734_555_544_3,
        -0.009_621_971_527_877_0,
        0.007_218_943_246_663_0,
        -0.001_165_167_591_859_1,
        -0.000_215_241_674_114_9,
        0.000_128_050_282_388_2,
        -0.000_020_134_854_780_7,
        -0.000_001_250_493_482_1,
        0.000_001_133_027_232_0,
        -0.000_000_205_633_841_7,
        0.000_000_006_116_095_0,
        0.000_000_005_002_007_5,
        -0.000_000_001_181_274_6,
        0.000_000_000_104_342_7,
        0.000_000_000_007_782_3,
        -0.000_000_000_003_696_8,
        0.000_000_000_000_510_0,
        -0.000_000_000_000_020_6,
        -0.000_000_000_000_005_4,
        0.000_000_000_000_001_4,
        0.000_000_000_000_000_1,
    ];
    let mu2 = mu * mu;
    // gam1 = -(c2 + c4 μ² + ...), gam2 = c1 + c3 μ² + ...
    let mut gam1 = 0.0;
    let mut gam2 = 0.0;
    let mut power = 1.0;
    for pair in C.chunks(2) {
        gam2 += pair[0] * power;
        if let Some(even) = pair.get(1) {
            gam1 -= even * power;
        }
        power *= mu2;
    }
    let inv_gamma_plus = gam2 - mu * gam1;
    let inv_gamma_minus = gam2 + mu * gam1;
    (gam1, gam2, inv_gamma_plus, inv_gamma_minus)
}

/// Temme's series for `(K_μ(z), K_{μ+1}(z))`, `|μ| ≤ 1/2`, `z ≤ 2`.
fn temme_series(mu: f64, z: f64) -> (f64, f64) {
    let half_z = 0.5 * z;
    let pimu = PI * mu;
    let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
    let d = -half_z.ln();
    let e = mu * d;
    let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
    let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let ee = e.exp();
    let mut p = 0.5 * ee / gampl;
    let mut q = 0.5 / (ee * gammi);
    let mut c = 1.0;
    let dd = half_z * half_z;
    let mut sum1 = p;
    let mu2 = mu * mu;
    for i in 1..MAX_TERMS {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - mu2);
        c *= dd / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        sum1 += c * (p - fi * ff);
        if del.abs() < sum.abs() * EPS {
            break;
        }
    }
    (sum, sum1 * 2.0 / z)
}

/// Steed's evaluation of Temme's continued fraction, scaled by `e^z`.
fn steed_cf2_scaled(mu: f64, z: f64) -> (f64, f64) {
    let mu2 = mu * mu;
    let mut b = 2.0 * (1.0 + z);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu2;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..MAX_TERMS {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    h *= a1;
    let k_mu = (PI / (2.0 * z)).sqrt() / s;
    let k_next = k_mu * (mu + z + 0.5 - h) / z;
    (k_mu, k_next)
}

/// Hankel expansion `e^z K_ν(z) ~ sqrt(pi/(2z)) Σ a_k(ν) / z^k`.
fn asymptotic_k_scaled(nu: f64, z: f64) -> f64 {
    let four_nu2 = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let kf = k as f64;
        let next = term * (four_nu2 - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0 * z);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < EPS * sum.abs() {
            break;
        }
    }
    (PI / (2.0 * z)).sqrt() * sum
}

/// `e^{-z} I_ν(z)` for `z ≥ 0`.
pub fn bessel_i_scaled(order: BesselOrder, z: f64) -> Result<f64> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::domain(format!("I_nu requires z >= 0, got {z}")));
    }
    Ok(reduced_i_scaled(order.0, 1.0, z) * z.powf(order.0))
}

/// `r^{-ν} I_ν(k r) e^{-k r}`, finite at `r = 0` where it equals `(k/2)^ν / Γ(ν+1)`.
pub(crate) fn reduced_i_scaled(nu: f64, k: f64, r: f64) -> f64 {
    let z = k * r;
    if z <= 30.0 {
        let quarter_z2 = 0.25 * z * z;
        let mut term = (nu * (0.5 * k).ln() - ln_gamma(nu + 1.0) - z).exp();
        let mut sum = term;
        for j in 1..MAX_TERMS {
            let fj = j as f64;
            term *= quarter_z2 / (fj * (fj + nu));
            sum += term;
            if term < EPS * sum {
                break;
            }
        }
        sum
    } else {
        let four_nu2 = 4.0 * nu * nu;
        let mut term = 1.0;
        let mut sum = 1.0;
        for j in 1..60 {
            let fj = j as f64;
            let next = -term * (four_nu2 - (2.0 * fj - 1.0).powi(2)) / (fj * 8.0 * z);
            if next.abs() > term.abs() {
                break;
            }
            term = next;
            sum += term;
            if term.abs() < EPS * sum.abs() {
                break;
            }
        }
        sum / (2.0 * PI * z).sqrt() * r.powf(-nu)
    }
}
