use serde::{Deserialize, Serialize};

use super::grid::RadialGrid;
use crate::barriers::{eval_barrier, BarrierProfile};
use crate::error::{Error, Result};

/// Values of a radial function on a grid, with an optional far-field model.
///
/// The decay tag fixes the shape used beyond the truncation radius; its
/// amplitude is matched to the value at `R`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialField {
    grid: RadialGrid,
    values: Vec<f64>,
    decay_tag: Option<BarrierProfile>,
}

impl RadialField {
    pub fn new(grid: RadialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::argument(format!(
                "field has {} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::domain(format!("non-finite field value at node {i}")));
        }
        Ok(Self {
            grid,
            values,
            decay_tag: None,
        })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(grid: &RadialGrid, f: F) -> Result<Self> {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        Self::new(grid.clone(), values)
    }

    pub fn zeros(grid: &RadialGrid) -> Self {
        Self {
            grid: grid.clone(),
            values: vec![0.0; grid.len()],
            decay_tag: None,
        }
    }

    pub fn with_decay_tag(mut self, tag: Option<BarrierProfile>) -> Self {
        self.decay_tag = tag;
        self
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn nodes(&self) -> &[f64] {
        self.grid.nodes()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn decay_tag(&self) -> Option<BarrierProfile> {
        self.decay_tag
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// `value(R) / tag(R)`, or `None` without a tag.
    pub fn tail_amplitude(&self) -> Option<f64> {
        let tag = self.decay_tag?;
        let at_r = eval_barrier(tag, self.grid.radius());
        if at_r > 0.0 {
            Some(self.last() / at_r)
        } else {
            Some(0.0)
        }
    }

    /// Piecewise-linear interpolation inside the grid, decay tag beyond it.
    ///
    /// Without a tag the field is taken to vanish past `R`.
    pub fn interpolate(&self, r: f64) -> f64 {
        let nodes = self.grid.nodes();
        let big_r = self.grid.radius();
        if r >= big_r {
            if r == big_r {
                return self.last();
            }
            return match self.decay_tag {
                Some(tag) => self.tail_amplitude().unwrap_or(0.0) * eval_barrier(tag, r),
                None => 0.0,
            };
        }
        let i = self.grid.locate(r.max(0.0));
        let t = (r - nodes[i]) / (nodes[i + 1] - nodes[i]);
        self.values[i] + t * (self.values[i + 1] - self.values[i])
    }

    /// Pointwise map keeping grid and tag.
    pub fn map<F: Fn(f64, f64) -> f64>(&self, f: F) -> Result<Self> {
        let values = self
            .grid
            .nodes()
            .iter()
            .zip(&self.values)
            .map(|(&r, &v)| f(r, v))
            .collect();
        Ok(Self::new(self.grid.clone(), values)?.with_decay_tag(self.decay_tag))
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Restriction to the first `count` nodes.
    pub fn truncated(&self, count: usize) -> Result<Self> {
        let grid = RadialGrid::from_nodes(self.grid.nodes()[..count].to_vec())?;
        Ok(Self::new(grid, self.values[..count].to_vec())?.with_decay_tag(self.decay_tag))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barriers::Family;

    #[test]
    fn interpolation_and_tail() {
        let g = RadialGrid::uniform(10.0, 21).unwrap();
        let tag = BarrierProfile::new(Family::Z, 2.0).unwrap();
        let f = RadialField::from_fn(&g, |r| 3.0 * eval_barrier(tag, r))
            .unwrap()
            .with_decay_tag(Some(tag));
        assert!((f.interpolate(20.0) - 3.0 * eval_barrier(tag, 20.0)).abs() < 1e-14);
        assert!((f.tail_amplitude().unwrap() - 3.0).abs() < 1e-14);
        let mid = f.interpolate(0.25);
        assert!(mid < f.values()[0] && mid > f.values()[1]);
        let bare = f.clone().with_decay_tag(None);
        assert_eq!(bare.interpolate(11.0), 0.0);
    }

    #[test]
    fn rejects_mismatch_and_nan() {
        let g = RadialGrid::uniform(1.0, 16).unwrap();
        assert!(RadialField::new(g.clone(), vec![0.0; 3]).is_err());
        let mut v = vec![0.0; 16];
        v[3] = f64::NAN;
        assert!(RadialField::new(g, v).is_err());
    }
}
