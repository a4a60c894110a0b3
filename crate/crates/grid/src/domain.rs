//! Rectangular grid domains and radius sweeps.

use crate::{GridError, Result};

/// An axis-aligned box sampled at cell centers, with a local-dimension
/// value used as the normalizing factor of ball averages.
#[derive(Clone, Debug)]
pub struct GridDomain {
    lo: Vec<f64>,
    hi: Vec<f64>,
    res: Vec<usize>,
    local_dim: f64,
}

impl GridDomain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, res: Vec<usize>) -> Result<Self> {
        let d = lo.len();
        if d == 0 || hi.len() != d || res.len() != d {
            return Err(GridError::InvalidDomain("inconsistent dimensions".into()));
        }
        if res.iter().any(|&r| r < 16) {
            return Err(GridError::InvalidDomain("resolution below 16 per axis".into()));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !a.is_finite() || !b.is_finite() || a >= b) {
            return Err(GridError::InvalidDomain("empty box".into()));
        }
        let local_dim = d as f64;
        Ok(GridDomain { lo, hi, res, local_dim })
    }

    /// Symmetric box `[-1, 1]^d`.
    pub fn symmetric(dim: usize, res: usize) -> Result<Self> {
        Self::new(vec![-1.0; dim], vec![1.0; dim], vec![res; dim])
    }

    /// Override the local dimension `n(x)` (constant over the box).
    pub fn with_local_dim(mut self, n: f64) -> Self {
        self.local_dim = n;
        self
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn local_dim(&self) -> f64 {
        self.local_dim
    }

    pub fn resolution(&self) -> &[usize] {
        &self.res
    }

    pub fn cell_size(&self, axis: usize) -> f64 {
        (self.hi[axis] - self.lo[axis]) / self.res[axis] as f64
    }

    pub fn max_cell_size(&self) -> f64 {
        (0..self.dim()).map(|a| self.cell_size(a)).fold(0.0, f64::max)
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.dim()).map(|a| self.cell_size(a)).product()
    }

    pub fn cell_count(&self) -> usize {
        self.res.iter().product()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter().zip(&self.lo).all(|(v, l)| v >= l)
            && x.iter().zip(&self.hi).all(|(v, h)| v <= h)
    }

    /// Center of the cell with the given flat index (row-major, axis 0
    /// fastest).
    pub fn center(&self, mut idx: usize) -> Vec<f64> {
        (0..self.dim())
            .map(|a| {
                let i = idx % self.res[a];
                idx /= self.res[a];
                self.lo[a] + (i as f64 + 0.5) * self.cell_size(a)
            })
            .collect()
    }

    /// Flat index of the cell whose center is nearest to `x`.
    pub fn nearest_cell(&self, x: &[f64]) -> Result<usize> {
        if !self.contains(x) {
            return Err(GridError::OutsideBox(x.to_vec()));
        }
        let mut idx = 0;
        let mut stride = 1;
        for a in 0..self.dim() {
            let h = self.cell_size(a);
            let raw = ((x[a] - self.lo[a]) / h - 0.5).round() as isize;
            let i = raw.clamp(0, self.res[a] as isize - 1) as usize;
            idx += stride * i;
            stride *= self.res[a];
        }
        Ok(idx)
    }

    /// Flat indices of all cells whose centers lie in the closed ball
    /// `B(x, radius)` (centers are always inside the box, so the
    /// intersection with the box is automatic).
    pub fn cells_in_ball(&self, x: &[f64], radius: f64) -> Result<Vec<usize>> {
        if !self.contains(x) {
            return Err(GridError::OutsideBox(x.to_vec()));
        }
        let d = self.dim();
        // per-axis index windows around x
        let window: Vec<(usize, usize)> = (0..d)
            .map(|a| {
                let h = self.cell_size(a);
                let lo_i = (((x[a] - radius) - self.lo[a]) / h - 0.5).floor().max(0.0) as usize;
                let hi_i = ((((x[a] + radius) - self.lo[a]) / h - 0.5).ceil() as usize)
                    .min(self.res[a] - 1);
                (lo_i, hi_i)
            })
            .collect();
        let mut out = Vec::new();
        let mut cursor: Vec<usize> = window.iter().map(|w| w.0).collect();
        'outer: loop {
            let mut idx = 0;
            let mut stride = 1;
            let mut dist2 = 0.0;
            for a in 0..d {
                idx += stride * cursor[a];
                stride *= self.res[a];
                let c = self.lo[a] + (cursor[a] as f64 + 0.5) * self.cell_size(a);
                dist2 += (c - x[a]) * (c - x[a]);
            }
            if dist2 <= radius * radius {
                out.push(idx);
            }
            for a in 0..d {
                cursor[a] += 1;
                if cursor[a] <= window[a].1 {
                    continue 'outer;
                }
                cursor[a] = window[a].0;
            }
            break;
        }
        Ok(out)
    }
}

/// A strictly decreasing family of ball radii.
#[derive(Clone, Debug)]
pub struct RadiusSweep {
    radii: Vec<f64>,
}

impl RadiusSweep {
    /// Geometric sweep `start, start·ratio, …` with `count` radii.
    pub fn geometric(start: f64, ratio: f64, count: usize) -> Result<Self> {
        let start_ok = start.is_finite() && start > 0.0;
        let ratio_ok = ratio.is_finite() && ratio > 0.0 && ratio < 1.0;
        if !start_ok || !ratio_ok || count == 0 {
            return Err(GridError::InvalidDomain("bad sweep parameters".into()));
        }
        let radii = (0..count).map(|k| start * ratio.powi(k as i32)).collect();
        Ok(RadiusSweep { radii })
    }

    /// The default sweep: ratio 1/2, six radii.
    pub fn default_for(start: f64) -> Result<Self> {
        Self::geometric(start, 0.5, 6)
    }

    /// Drop radii finer than `min_radius` (keeping at least the coarsest).
    pub fn clamped(mut self, min_radius: f64) -> Self {
        let keep: Vec<f64> = self.radii.iter().copied().filter(|&r| r >= min_radius).collect();
        if !keep.is_empty() {
            self.radii = keep;
        } else {
            self.radii.truncate(1);
        }
        self
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }
}
