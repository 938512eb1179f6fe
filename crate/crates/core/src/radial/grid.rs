use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fewest nodes a grid may carry.
pub const MIN_NODES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Spacing {
    Uniform,
    Graded {
        stretch: f64,
    },
    /// Nodes supplied directly, e.g. read back from a dump.
    Explicit,
}

/// Nodes `0 = r_0 < r_1 < ... < r_{n-1} = R`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    spacing: Spacing,
}

impl RadialGrid {
    pub fn uniform(radius: f64, n: usize) -> Result<Self> {
        check_radius(radius)?;
        check_count(n)?;
        let h = radius / (n - 1) as f64;
        let mut nodes: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
        nodes[n - 1] = radius;
        Ok(Self {
            nodes,
            spacing: Spacing::Uniform,
        })
    }

    /// `n` nodes with geometric steps `h_i = h_0 g^i`, scaled to end exactly at `radius`.
    pub fn graded(radius: f64, n: usize, stretch: f64) -> Result<Self> {
        check_radius(radius)?;
        check_count(n)?;
        check_stretch(stretch)?;
        let cells = (n - 1) as i32;
        let total = if stretch == 1.0 {
            f64::from(cells)
        } else {
            (stretch.powi(cells) - 1.0) / (stretch - 1.0)
        };
        let h0 = radius / total;
        Ok(Self::from_steps(
            radius,
            h0,
            stretch,
            n - 1,
            Spacing::Graded { stretch },
        ))
    }

    /// Geometric grid with first step `h0`; the node count is whatever reaches `radius`.
    pub fn graded_from_step(radius: f64, h0: f64, stretch: f64) -> Result<Self> {
        check_radius(radius)?;
        check_stretch(stretch)?;
        if !(h0 > 0.0 && h0 < radius) {
            return Err(Error::argument(format!("first step {h0} must lie in (0, R)")));
        }
        let cells = if stretch == 1.0 {
            (radius / h0).ceil()
        } else {
            ((radius * (stretch - 1.0) / h0).ln_1p() / stretch.ln()).ceil()
        };
        let cells = (cells as usize).max(MIN_NODES - 1);
        Self::graded(radius, cells + 1, stretch)
    }

    /// Geometric grid `r_i = h0 (g^i - 1)/(g - 1)` up to the first node at or
    /// beyond `radius`. Grids with the same `h0` and `g` are prefixes of one
    /// another, so a field on a small ball can be compared node by node with
    /// one on a larger ball.
    pub fn graded_covering(radius: f64, h0: f64, stretch: f64) -> Result<Self> {
        check_radius(radius)?;
        check_stretch(stretch)?;
        if !(h0 > 0.0 && h0.is_finite()) {
            return Err(Error::argument(format!("first step must be > 0, got {h0}")));
        }
        let mut nodes = vec![0.0];
        let mut i = 1;
        loop {
            let r = if stretch == 1.0 {
                h0 * i as f64
            } else {
                h0 * (stretch.powi(i) - 1.0) / (stretch - 1.0)
            };
            nodes.push(r);
            i += 1;
            if r >= radius && nodes.len() >= MIN_NODES {
                break;
            }
        }
        Ok(Self {
            nodes,
            spacing: Spacing::Graded { stretch },
        })
    }

    fn from_steps(radius: f64, h0: f64, stretch: f64, cells: usize, spacing: Spacing) -> Self {
        let mut nodes = Vec::with_capacity(cells + 1);
        nodes.push(0.0);
        let mut h = h0;
        let mut r = 0.0;
        for _ in 0..cells {
            r += h;
            nodes.push(r);
            h *= stretch;
        }
        nodes[cells] = radius;
        Self { nodes, spacing }
    }

    /// Grid from explicit nodes.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        check_count(nodes.len())?;
        if nodes[0] != 0.0 {
            return Err(Error::argument("first node must be r = 0"));
        }
        check_monotone(&nodes)?;
        Ok(Self {
            nodes,
            spacing: Spacing::Explicit,
        })
    }

    /// Halves every cell by inserting midpoints.
    pub fn refined(&self) -> Self {
        let mut nodes = Vec::with_capacity(2 * self.nodes.len() - 1);
        for w in self.nodes.windows(2) {
            nodes.push(w[0]);
            nodes.push(0.5 * (w[0] + w[1]));
        }
        nodes.push(self.radius());
        let spacing = match self.spacing {
            Spacing::Graded { .. } => Spacing::Explicit,
            other => other,
        };
        Self { nodes, spacing }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn radius(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    /// Largest cell width.
    pub fn max_step(&self) -> f64 {
        self.nodes.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    /// Index of the last node with `r_i <= r`.
    pub fn locate(&self, r: f64) -> usize {
        match self.nodes.binary_search_by(|x| x.total_cmp(&r)) {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) => i - 1,
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.nodes.len() < 3 {
            return Err(Error::argument("grid needs at least 3 nodes"));
        }
        check_monotone(&self.nodes)
    }
}

fn check_radius(radius: f64) -> Result<()> {
    if radius > 0.0 && radius.is_finite() {
        Ok(())
    } else {
        Err(Error::argument(format!(
            "truncation radius must be finite and > 0, got {radius}"
        )))
    }
}

fn check_count(n: usize) -> Result<()> {
    if n >= MIN_NODES {
        Ok(())
    } else {
        Err(Error::argument(format!(
            "grid needs at least {MIN_NODES} nodes, got {n}"
        )))
    }
}

fn check_stretch(stretch: f64) -> Result<()> {
    if stretch >= 1.0 && stretch.is_finite() {
        Ok(())
    } else {
        Err(Error::argument(format!("stretch factor must be >= 1, got {stretch}")))
    }
}

fn check_monotone(nodes: &[f64]) -> Result<()> {
    for (i, w) in nodes.windows(2).enumerate() {
        if !(w[1] > w[0]) || !w[1].is_finite() {
            return Err(Error::argument(format!(
                "grid nodes not strictly increasing at index {}",
                i + 1
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covering_grids_nest() {
        let small = RadialGrid::graded_covering(10.0, 0.01, 1.01).unwrap();
        let big = RadialGrid::graded_covering(20.0, 0.01, 1.01).unwrap();
        assert!(small.radius() >= 10.0);
        assert_eq!(&big.nodes()[..small.len()], small.nodes());
    }

    #[test]
    fn uniform_endpoints() {
        let g = RadialGrid::uniform(3.0, 31).unwrap();
        assert_eq!(g.nodes()[0], 0.0);
        assert_eq!(g.radius(), 3.0);
        assert!((g.nodes()[10] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn graded_hits_radius() {
        let g = RadialGrid::graded(100.0, 400, 1.01).unwrap();
        assert_eq!(g.radius(), 100.0);
        let h: Vec<f64> = g.nodes().windows(2).map(|w| w[1] - w[0]).collect();
        for w in h.windows(2).take(390) {
            assert!((w[1] / w[0] - 1.01).abs() < 1e-9);
        }
        let g = RadialGrid::graded_from_step(50.0, 0.01, 1.01).unwrap();
        assert!((g.nodes()[1] - 0.01).abs() < 2e-3);
        assert_eq!(g.radius(), 50.0);
    }

    #[test]
    fn refinement_keeps_nodes() {
        let g = RadialGrid::graded(10.0, 20, 1.05).unwrap();
        let f = g.refined();
        assert_eq!(f.len(), 39);
        for (i, r) in g.nodes().iter().enumerate() {
            assert_eq!(f.nodes()[2 * i], *r);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RadialGrid::uniform(1.0, 4).is_err());
        assert!(RadialGrid::uniform(-1.0, 40).is_err());
        assert!(RadialGrid::graded(1.0, 40, 0.9).is_err());
        let mut nodes: Vec<f64> = (0..20).map(f64::from).collect();
        nodes.swap(4, 5);
        assert!(RadialGrid::from_nodes(nodes).is_err());
    }

    #[test]
    fn locate_brackets() {
        let g = RadialGrid::uniform(15.0, 16).unwrap();
        assert_eq!(g.locate(0.0), 0);
        assert_eq!(g.locate(3.5), 3);
        assert_eq!(g.locate(15.0), 15);
        assert_eq!(g.locate(99.0), 15);
    }
}
