use serde::Serialize;

use crate::barriers::{Exponents, TheoremTag};
use crate::error::{Error, Result};
use crate::radial::{apply_radial_laplacian, RadialField, RadialGrid};
use crate::solvers::Residuals;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ClosedFormKind {
    /// `w(r) = [A √(N(N-2)) / (A² + r²)]^{(N-2)/2}`.
    AubinTalenti { a: f64 },
}

/// A closed-form solution of the system with `λ = μ = 0`, `ρ ≡ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormSolution {
    pub kind: ClosedFormKind,
    pub dimension: u32,
    pub induced_exponents: Exponents,
}

impl ClosedFormSolution {
    /// `u = v = w` with `q = p - (N+2)/(N-2)` and `m = (N+2)/(N-2) + s`.
    pub fn aubin_talenti(dimension: u32, p: f64, s: f64, a: f64) -> Result<Self> {
        check_bubble_args(dimension, a)?;
        let n = f64::from(dimension);
        let critical = (n + 2.0) / (n - 2.0);
        if !(p > critical) {
            return Err(Error::regime(
                TheoremTag::BubbleSolution.as_str(),
                format!("needs p > (N+2)/(N-2) = {critical}, got p = {p} (q would be <= 0)"),
            ));
        }
        if !(s >= 0.0 && s.is_finite()) {
            return Err(Error::argument(format!("s must be finite and >= 0, got {s}")));
        }
        Ok(Self {
            kind: ClosedFormKind::AubinTalenti { a },
            dimension,
            induced_exponents: Exponents::new(p, p - critical, critical + s, s)?,
        })
    }

    pub fn eval(&self, r: f64) -> f64 {
        let ClosedFormKind::AubinTalenti { a } = self.kind;
        bubble(self.dimension, a, r)
    }
}

fn check_bubble_args(dimension: u32, a: f64) -> Result<()> {
    if dimension < 3 {
        return Err(Error::argument(format!("dimension must be >= 3, got {dimension}")));
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::argument(format!("A must be finite and > 0, got {a}")));
    }
    Ok(())
}

fn bubble(dimension: u32, a: f64, r: f64) -> f64 {
    let n = f64::from(dimension);
    (a * (n * (n - 2.0)).sqrt() / (a * a + r * r)).powf(0.5 * (n - 2.0))
}

/// Bubble profile solving `-Δw = w^{(N+2)/(N-2)}` on `R^N`.
pub fn aubin_talenti(dimension: u32, a: f64, r: f64) -> Result<f64> {
    check_bubble_args(dimension, a)?;
    if !(r >= 0.0) {
        return Err(Error::domain(format!("radius must be >= 0, got {r}")));
    }
    Ok(bubble(dimension, a, r))
}

/// Discrete check that `u = v = w` solves the unshifted, source-free system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BubbleCertificate {
    pub solution: ClosedFormSolution,
    pub radius: f64,
    pub nodes: usize,
    pub max_step: f64,
    /// Sup over every node, the boundary included.
    pub residuals: Residuals,
    #[serde(skip)]
    pub field: RadialField,
}

impl BubbleCertificate {
    pub fn max_residual(&self) -> f64 {
        self.residuals.u.unwrap_or(0.0).max(self.residuals.v)
    }
}

/// Evaluates both equations with `u = v = w` on `grid`.
///
/// Both reduce to `-Δw = w^{(N+2)/(N-2)}`, so the residuals differ only by
/// roundoff; they shrink like `h²` under refinement.
pub fn verify_cor3(dimension: u32, p: f64, s: f64, a: f64, grid: &RadialGrid) -> Result<BubbleCertificate> {
    let solution = ClosedFormSolution::aubin_talenti(dimension, p, s, a)?;
    let Exponents { p, q, m, s } = solution.induced_exponents;
    let w = RadialField::from_fn(grid, |r| solution.eval(r))?;
    let lap = apply_radial_laplacian(&w, dimension)?;
    let (mut ru, mut rv) = (0.0f64, 0.0f64);
    for (&l, &x) in lap.values().iter().zip(w.values()) {
        ru = ru.max((l - x.powf(p) / x.powf(q)).abs());
        rv = rv.max((l - x.powf(m) / x.powf(s)).abs());
    }
    Ok(BubbleCertificate {
        solution,
        radius: grid.radius(),
        nodes: grid.len(),
        max_step: grid.max_step(),
        residuals: Residuals { u: Some(ru), v: rv },
        field: w,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        assert!((aubin_talenti(4, 8f64.sqrt(), 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((aubin_talenti(3, 1.0, 0.0).unwrap() - 3f64.sqrt().sqrt()).abs() < 1e-15);
        assert!(aubin_talenti(2, 1.0, 0.0).is_err());
        assert!(aubin_talenti(3, 0.0, 0.0).is_err());
    }

    #[test]
    fn induced_exponents() {
        let sol = ClosedFormSolution::aubin_talenti(3, 6.0, 1.0, 1.0).unwrap();
        assert_eq!(sol.induced_exponents, Exponents::new(6.0, 1.0, 6.0, 1.0).unwrap());
        let sol = ClosedFormSolution::aubin_talenti(4, 4.0, 2.0, 1.0).unwrap();
        assert_eq!(sol.induced_exponents, Exponents::new(4.0, 1.0, 5.0, 2.0).unwrap());
        assert!(matches!(
            ClosedFormSolution::aubin_talenti(5, 2.0, 0.5, 3.0),
            Err(Error::Regime { .. })
        ));
    }

    #[test]
    fn fine_grid_residual() {
        // Leading error near r = 0 for N = 3, A = 1 is 3.75 w(0) h².
        let predicted = |h: f64| 3.75 * 3f64.sqrt().sqrt() * h * h;
        let grid = RadialGrid::uniform(20.0, 20_001).unwrap();
        let e = verify_cor3(3, 6.0, 1.0, 1.0, &grid).unwrap().max_residual();
        assert!((e / predicted(1e-3) - 1.0).abs() < 0.2, "{e}");
        let grid = RadialGrid::uniform(20.0, 50_001).unwrap();
        let e = verify_cor3(3, 6.0, 1.0, 1.0, &grid).unwrap().max_residual();
        assert!(e <= 1e-6, "{e}");
    }

    #[test]
    fn second_order_under_halving() {
        for n in 3..=6 {
            let coarse = RadialGrid::uniform(10.0, 401).unwrap();
            let fine = coarse.refined();
            let e1 = verify_cor3(n, 10.0, 1.0, 1.0, &coarse).unwrap().max_residual();
            let e2 = verify_cor3(n, 10.0, 1.0, 1.0, &fine).unwrap().max_residual();
            let ratio = e1 / e2;
            assert!((3.4..=4.6).contains(&ratio), "N = {n}: ratio {ratio}");
        }
    }
}
