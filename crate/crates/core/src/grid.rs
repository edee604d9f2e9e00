//! Uniform tensor grids on `[−L, L]^{2n}` with Dirichlet truncation.
//!
//! The grid has `N = 2·round(L/h) + 1` points per axis (so the origin is a
//! node) including the two boundary points `±L`. Boundary values are pinned
//! to zero, so the unknowns are the `M = N − 2` interior points per axis,
//! ordered lexicographically over `(x₁, y₁, …, xₙ, yₙ)` with `x₁` most
//! significant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the total node count `N^{2n}`.
pub const DEFAULT_NODE_CAP: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    n: usize,
    half_width: f64,
    h: f64,
    points_per_axis: usize,
}

impl Grid {
    pub fn new(n: usize, half_width: f64, h: f64) -> Result<Self> {
        Self::with_cap(n, half_width, h, DEFAULT_NODE_CAP)
    }

    pub fn with_cap(n: usize, half_width: f64, h: f64, cap: usize) -> Result<Self> {
        if !(1..=2).contains(&n) {
            return Err(Error::UnsupportedDimension(n));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "L must be positive, got {half_width}"
            )));
        }
        if !(h > 0.0 && h <= half_width) {
            return Err(Error::InvalidArgument(format!(
                "spacing must satisfy 0 < h ≤ L, got h = {h}, L = {half_width}"
            )));
        }
        let half_steps = (half_width / h).round() as usize;
        let points_per_axis = 2 * half_steps + 1;
        let nodes = (points_per_axis as u128).pow(2 * n as u32);
        if nodes > cap as u128 {
            return Err(Error::GridCap {
                nodes: usize::try_from(nodes).unwrap_or(usize::MAX),
                cap,
            });
        }
        Ok(Self {
            n,
            half_width,
            h: 2.0 * half_width / (points_per_axis - 1) as f64,
            points_per_axis,
        })
    }

    /// Complex dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Real dimension `2n`.
    pub fn axes(&self) -> usize {
        2 * self.n
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// `N`, boundary points included.
    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    /// `N^{2n}`.
    pub fn total_nodes(&self) -> usize {
        self.points_per_axis.pow(self.axes() as u32)
    }

    /// `M = N − 2` unknowns per axis.
    pub fn interior_per_axis(&self) -> usize {
        self.points_per_axis - 2
    }

    /// Number of unknowns `M^{2n}`.
    pub fn dim(&self) -> usize {
        self.interior_per_axis().pow(self.axes() as u32)
    }

    /// Coordinate of interior index `i ∈ [0, M)` along any axis.
    pub fn coord(&self, i: usize) -> f64 {
        -self.half_width + (i + 1) as f64 * self.h
    }

    /// Index stride of `axis` in the unknown vector.
    pub fn stride(&self, axis: usize) -> usize {
        self.interior_per_axis()
            .pow((self.axes() - 1 - axis) as u32)
    }

    pub fn multi_index(&self, k: usize) -> Vec<usize> {
        let m = self.interior_per_axis();
        let mut idx = vec![0; self.axes()];
        let mut rem = k;
        for a in (0..self.axes()).rev() {
            idx[a] = rem % m;
            rem /= m;
        }
        idx
    }

    /// Inverse of [`Grid::multi_index`].
    pub fn index(&self, idx: &[usize]) -> usize {
        let m = self.interior_per_axis();
        idx.iter().fold(0, |k, &i| k * m + i)
    }

    pub fn point(&self, k: usize) -> Vec<f64> {
        self.multi_index(k)
            .into_iter()
            .map(|i| self.coord(i))
            .collect()
    }

    /// Neighbour of unknown `k` one step along `axis` (`forward` or back);
    /// `None` when that neighbour is a boundary node.
    pub fn neighbor(&self, k: usize, axis: usize, forward: bool) -> Option<usize> {
        let m = self.interior_per_axis();
        let s = self.stride(axis);
        let i = (k / s) % m;
        if forward {
            (i + 1 < m).then(|| k + s)
        } else {
            (i > 0).then(|| k - s)
        }
    }

    /// Distance in grid layers from the outermost interior layer (0 for
    /// unknowns adjacent to the boundary).
    pub fn layer(&self, k: usize) -> usize {
        let m = self.interior_per_axis();
        self.multi_index(k)
            .into_iter()
            .map(|i| i.min(m - 1 - i))
            .min()
            .unwrap_or(0)
    }

    /// Same box with spacing `h / factor`.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::new(self.n, self.half_width, self.h / factor as f64)
    }

    /// Index in `self` of the node at multi-index `idx` of a grid whose
    /// spacing is `factor` times coarser over the same box.
    pub fn index_from_coarse(&self, idx: &[usize], factor: usize) -> usize {
        let fine: Vec<usize> = idx.iter().map(|&i| (i + 1) * factor - 1).collect();
        self.index(&fine)
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.dim()).map(|k| self.point(k))
    }
}
