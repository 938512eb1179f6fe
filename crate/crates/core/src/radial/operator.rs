use super::field::RadialField;
use super::grid::RadialGrid;
use crate::error::{Error, Result};

/// Finite-volume discretization of the radial `-Δ` in dimension `N`.
///
/// Row `i` balances the fluxes `r^{N-1} u'` through the cell faces
/// `r_{i±1/2}` against the shell volume `(r_{i+1/2}^N - r_{i-1/2}^N)/N`.
/// The scheme reproduces `-Δ r² = -2N` exactly on any grid, is an M-matrix,
/// and at `r = 0` reduces to `-N u''(0)`. The last row is left to the caller
/// (Dirichlet data, or a one-sided stencil in [`apply_radial_laplacian`]).
#[derive(Debug, Clone)]
pub struct RadialOperator {
    dimension: u32,
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
}

impl RadialOperator {
    pub fn new(grid: &RadialGrid, dimension: u32) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::argument("dimension must be positive"));
        }
        grid.validate()?;
        let r = grid.nodes();
        let n = r.len();
        let nf = f64::from(dimension);
        let e = dimension as i32 - 1;
        let mut lower = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n];

        let a0 = 2.0 * nf / (r[1] * r[1]);
        diag[0] = a0;
        upper[0] = -a0;
        for i in 1..n - 1 {
            let h_minus = r[i] - r[i - 1];
            let h_plus = r[i + 1] - r[i];
            let p = 0.5 * (r[i] + r[i + 1]) / r[i];
            let q = 0.5 * (r[i - 1] + r[i]) / r[i];
            // (p^N - q^N)/(p - q) without cancellation
            let mut factor = 0.0;
            for k in 0..dimension as i32 {
                factor += p.powi(k) * q.powi(e - k);
            }
            let volume = 0.5 * (h_minus + h_plus) / r[i] * factor / nf;
            let a_plus = p.powi(e) / (h_plus * volume) / r[i];
            let a_minus = q.powi(e) / (h_minus * volume) / r[i];
            lower[i] = -a_minus;
            upper[i] = -a_plus;
            diag[i] = a_plus + a_minus;
        }
        Ok(Self {
            dimension,
            lower,
            diag,
            upper,
        })
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// `(-Δu)_i` for rows `0..n-1`; the entry for the last node is `NaN`.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut out = vec![f64::NAN; n];
        out[0] = self.diag[0] * u[0] + self.upper[0] * u[1];
        for i in 1..n - 1 {
            out[i] = self.lower[i] * u[i - 1] + self.diag[i] * u[i] + self.upper[i] * u[i + 1];
        }
        out
    }

    /// Solves `-Δu + d_i u = f` on rows `0..n-1` with `u_{n-1} = boundary`.
    pub fn solve_with_diagonal(&self, extra: &[f64], rhs: &[f64], boundary: f64) -> Result<Vec<f64>> {
        let n = self.len();
        if extra.len() < n - 1 || rhs.len() < n - 1 {
            return Err(Error::argument("diagonal or right-hand side too short"));
        }
        // Thomas elimination with the Dirichlet row folded into the rhs
        let m = n - 1;
        let mut c = vec![0.0; m];
        let mut d = vec![0.0; m];
        for i in 0..m {
            let b = self.diag[i] + extra[i];
            let a = self.lower[i];
            let mut f = rhs[i];
            if i == m - 1 {
                f -= self.upper[i] * boundary;
            }
            let denom = if i == 0 { b } else { b - a * c[i - 1] };
            if denom == 0.0 || !denom.is_finite() {
                return Err(Error::Internal(format!("singular tridiagonal system at row {i}")));
            }
            c[i] = if i + 1 < m { self.upper[i] / denom } else { 0.0 };
            d[i] = if i == 0 { f / denom } else { (f - a * d[i - 1]) / denom };
        }
        let mut u = vec![0.0; n];
        u[n - 1] = boundary;
        u[m - 1] = d[m - 1];
        for i in (0..m - 1).rev() {
            u[i] = d[i] - c[i] * u[i + 1];
        }
        Ok(u)
    }

    /// Solves `-Δu + λu = f` with `u(R) = boundary`.
    pub fn solve(&self, shift: f64, rhs: &[f64], boundary: f64) -> Result<Vec<f64>> {
        let extra = vec![shift; self.len()];
        self.solve_with_diagonal(&extra, rhs, boundary)
    }
}

/// Finite-difference weights for derivatives `0..=order` at `z` from nodes `x`.
pub(crate) fn fd_weights(z: f64, x: &[f64], order: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut c = vec![vec![0.0; n]; order + 1];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] *= c4 / c3;
        }
        c1 = c2;
    }
    c
}

/// Discrete `-Δu` of a radial field, including a one-sided stencil at `R`.
pub fn apply_radial_laplacian(field: &RadialField, dimension: u32) -> Result<RadialField> {
    let op = RadialOperator::new(field.grid(), dimension)?;
    let mut out = op.apply(field.values());
    let r = field.nodes();
    let n = r.len();
    let k = 4.min(n);
    let stencil = &r[n - k..];
    let w = fd_weights(r[n - 1], stencil, 2);
    let u = &field.values()[n - k..];
    let d1: f64 = w[1].iter().zip(u).map(|(a, b)| a * b).sum();
    let d2: f64 = w[2].iter().zip(u).map(|(a, b)| a * b).sum();
    out[n - 1] = -d2 - f64::from(dimension - 1) / r[n - 1] * d1;
    RadialField::new(field.grid().clone(), out)
}

/// Solves `-u'' - (N-1)/r u' + λu = f` on `[0, R]` with `u'(0) = 0`, `u(R) = boundary`.
pub fn solve_linear_radial(dimension: u32, shift: f64, rhs: &RadialField, boundary_value: f64) -> Result<RadialField> {
    if !(shift >= 0.0) || !shift.is_finite() {
        return Err(Error::argument(format!("shift must be finite and >= 0, got {shift}")));
    }
    if !boundary_value.is_finite() {
        return Err(Error::argument("boundary value must be finite"));
    }
    let op = RadialOperator::new(rhs.grid(), dimension)?;
    let u = op.solve(shift, rhs.values(), boundary_value)?;
    RadialField::new(rhs.grid().clone(), u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barriers::{barrier_operator_value, eval_barrier, BarrierProfile, Family};

    #[test]
    fn constants_are_harmonic_and_quadratics_exact() {
        for grid in [
            RadialGrid::uniform(2.0, 40).unwrap(),
            RadialGrid::graded(50.0, 200, 1.03).unwrap(),
        ] {
            for n in 3..=6 {
                let one = RadialField::from_fn(&grid, |_| 1.0).unwrap();
                let lap = apply_radial_laplacian(&one, n).unwrap();
                assert!(lap.max_abs() < 1e-9);
                let sq = RadialField::from_fn(&grid, |r| r * r).unwrap();
                let lap = apply_radial_laplacian(&sq, n).unwrap();
                for v in lap.values() {
                    assert!((v + 2.0 * f64::from(n)).abs() < 1e-9 * (1.0 + grid.radius()), "{v}");
                }
            }
        }
    }

    #[test]
    fn algebraic_profile_second_order() {
        let tag = BarrierProfile::new(Family::Z, 2.0).unwrap();
        let err = |n: usize| {
            let g = RadialGrid::uniform(10.0, n).unwrap();
            let f = RadialField::from_fn(&g, |r| eval_barrier(tag, r)).unwrap();
            let lap = apply_radial_laplacian(&f, 5).unwrap();
            g.nodes()
                .iter()
                .zip(lap.values())
                .map(|(&r, v)| (v - barrier_operator_value(tag, 0.0, r, 5)).abs())
                .fold(0.0, f64::max)
        };
        let e1 = err(201);
        let e2 = err(401);
        assert!(e1 < 0.1, "{e1}");
        let ratio = e1 / e2;
        assert!(ratio > 3.5 && ratio < 4.5, "{ratio}");
    }

    #[test]
    fn unit_ball_poisson() {
        let g = RadialGrid::uniform(1.0, 64).unwrap();
        let f = RadialField::from_fn(&g, |_| 1.0).unwrap();
        let u = solve_linear_radial(3, 0.0, &f, 0.0).unwrap();
        for (&r, v) in g.nodes().iter().zip(u.values()) {
            assert!((v - (1.0 - r * r) / 6.0).abs() < 1e-12);
        }
    }

    #[test]
    fn manufactured_gaussian_converges_quadratically() {
        let exact = |r: f64| (-r * r).exp();
        // -Δ e^{-r²} + e^{-r²} with N = 3
        let rhs = |r: f64| (6.0 - 4.0 * r * r + 1.0) * (-r * r).exp();
        let err = |n: usize| {
            let g = RadialGrid::uniform(6.0, n).unwrap();
            let f = RadialField::from_fn(&g, rhs).unwrap();
            let u = solve_linear_radial(3, 1.0, &f, exact(6.0)).unwrap();
            g.nodes()
                .iter()
                .zip(u.values())
                .map(|(&r, v)| (v - exact(r)).abs())
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(121), err(241));
        let ratio = e1 / e2;
        assert!(ratio > 3.5 && ratio < 4.5, "{ratio}");
    }

    #[test]
    fn zero_data_gives_zero() {
        let g = RadialGrid::graded(5.0, 50, 1.02).unwrap();
        let u = solve_linear_radial(4, 2.0, &RadialField::zeros(&g), 0.0).unwrap();
        assert_eq!(u.max_abs(), 0.0);
    }

    #[test]
    fn fornberg_weights_central() {
        let w = fd_weights(0.0, &[-1.0, 0.0, 1.0], 2);
        assert!((w[2][0] - 1.0).abs() < 1e-14 && (w[2][1] + 2.0).abs() < 1e-14);
        assert!((w[1][2] - 0.5).abs() < 1e-14);
    }
}
