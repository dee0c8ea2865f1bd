//! Uniform grids on symmetric intervals and rectangles.
//!
//! Interior nodes carry the unknowns; the "full" node set adds the Dirichlet
//! boundary. Wells and bound constructions work on the full node set through
//! [`Lattice`], which hides whether the grid is 1D or 2D.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform grid on `(-l, l)` with `n` interior nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub l: f64,
    pub n: usize,
    pub h: f64,
}

impl Grid1D {
    pub fn new(l: f64, n: usize) -> Result<Self> {
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::InvalidGrid(format!("half-length must be positive, got {l}")));
        }
        if n < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3 interior nodes, got {n}")));
        }
        Ok(Self { l, n, h: 2.0 * l / (n as f64 + 1.0) })
    }

    /// Interior node `i` (0-based).
    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x_full(i + 1)
    }

    /// Full node `j`, `j = 0` and `j = n + 1` are the endpoints.
    #[inline]
    pub fn x_full(&self, j: usize) -> f64 {
        if j == self.n + 1 {
            self.l
        } else {
            -self.l + j as f64 * self.h
        }
    }

    /// Midpoint between full nodes `j` and `j + 1`.
    #[inline]
    pub fn x_mid(&self, j: usize) -> f64 {
        -self.l + (j as f64 + 0.5) * self.h
    }

    pub fn interior(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    pub fn full(&self) -> Vec<f64> {
        (0..self.n + 2).map(|j| self.x_full(j)).collect()
    }

    pub fn lattice(&self) -> Lattice {
        Lattice::Line { n: self.n, h: self.h }
    }
}

/// Uniform grid on `(-lx, lx) x (-ly, ly)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub lx: f64,
    pub ly: f64,
    pub nx: usize,
    pub ny: usize,
    pub hx: f64,
    pub hy: f64,
}

impl Grid2D {
    pub fn new(lx: f64, ly: f64, nx: usize, ny: usize) -> Result<Self> {
        let gx = Grid1D::new(lx, nx)?;
        let gy = Grid1D::new(ly, ny)?;
        Ok(Self { lx, ly, nx, ny, hx: gx.h, hy: gy.h })
    }

    /// Square grid on `(-l, l)^2` with the given spacing (rounded to fit).
    pub fn square_with_spacing(l: f64, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {h}")));
        }
        let n = ((2.0 * l / h).round() as usize).saturating_sub(1);
        Self::new(l, l, n, n)
    }

    pub fn axis_x(&self) -> Grid1D {
        Grid1D { l: self.lx, n: self.nx, h: self.hx }
    }

    pub fn axis_y(&self) -> Grid1D {
        Grid1D { l: self.ly, n: self.ny, h: self.hy }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Interior index of node `(i, j)`.
    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Coordinates of interior node `(i, j)`.
    #[inline]
    pub fn xy(&self, i: usize, j: usize) -> (f64, f64) {
        (self.axis_x().x(i), self.axis_y().x(j))
    }

    #[inline]
    pub fn xy_full(&self, i: usize, j: usize) -> (f64, f64) {
        (self.axis_x().x_full(i), self.axis_y().x_full(j))
    }

    pub fn cell_area(&self) -> f64 {
        self.hx * self.hy
    }

    pub fn lattice(&self) -> Lattice {
        Lattice::Plane { nx: self.nx, ny: self.ny, hx: self.hx, hy: self.hy }
    }

    /// True if the point lies in the closed rectangle.
    #[inline]
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x.abs() <= self.lx && y.abs() <= self.ly
    }
}

/// Full-node graph of a 1D or 2D grid (interior plus boundary nodes).
///
/// 1D full nodes are indexed `0..n+2`; 2D full nodes `fj * (nx + 2) + fi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lattice {
    Line { n: usize, h: f64 },
    Plane { nx: usize, ny: usize, hx: f64, hy: f64 },
}

impl Lattice {
    pub fn full_len(&self) -> usize {
        match *self {
            Lattice::Line { n, .. } => n + 2,
            Lattice::Plane { nx, ny, .. } => (nx + 2) * (ny + 2),
        }
    }

    pub fn interior_len(&self) -> usize {
        match *self {
            Lattice::Line { n, .. } => n,
            Lattice::Plane { nx, ny, .. } => nx * ny,
        }
    }

    /// Measure of one grid cell (`h` or `hx * hy`).
    pub fn cell_volume(&self) -> f64 {
        match *self {
            Lattice::Line { h, .. } => h,
            Lattice::Plane { hx, hy, .. } => hx * hy,
        }
    }

    pub fn is_boundary(&self, k: usize) -> bool {
        self.interior_index(k).is_none()
    }

    /// Interior index of full node `k`, `None` on the boundary.
    pub fn interior_index(&self, k: usize) -> Option<usize> {
        match *self {
            Lattice::Line { n, .. } => (k >= 1 && k <= n).then(|| k - 1),
            Lattice::Plane { nx, ny, .. } => {
                let w = nx + 2;
                let (fi, fj) = (k % w, k / w);
                (fi >= 1 && fi <= nx && fj >= 1 && fj <= ny).then(|| (fj - 1) * nx + (fi - 1))
            }
        }
    }

    pub fn full_index(&self, interior: usize) -> usize {
        match *self {
            Lattice::Line { .. } => interior + 1,
            Lattice::Plane { nx, .. } => {
                let (i, j) = (interior % nx, interior / nx);
                (j + 1) * (nx + 2) + (i + 1)
            }
        }
    }

    /// Neighbours of full node `k` with the connecting edge length.
    pub fn neighbors(&self, k: usize, out: &mut Vec<(usize, f64)>) {
        out.clear();
        match *self {
            Lattice::Line { n, h } => {
                if k > 0 {
                    out.push((k - 1, h));
                }
                if k < n + 1 {
                    out.push((k + 1, h));
                }
            }
            Lattice::Plane { nx, ny, hx, hy } => {
                let w = nx + 2;
                let (fi, fj) = (k % w, k / w);
                if fi > 0 {
                    out.push((k - 1, hx));
                }
                if fi < nx + 1 {
                    out.push((k + 1, hx));
                }
                if fj > 0 {
                    out.push((k - w, hy));
                }
                if fj < ny + 1 {
                    out.push((k + w, hy));
                }
            }
        }
    }

    /// Every edge `(a, b, length)` with `a < b`, boundary nodes included.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        let mut nb = Vec::with_capacity(4);
        for k in 0..self.full_len() {
            self.neighbors(k, &mut nb);
            for &(m, len) in &nb {
                if m > k {
                    out.push((k, m, len));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_and_nodes() {
        let g = Grid1D::new(1.0, 9).unwrap();
        assert_eq!(g.h, 0.2);
        assert!((g.x(0) + 0.8).abs() < 1e-15);
        assert!(g.x(4).abs() < 1e-15);
        assert_eq!(g.x_full(10), 1.0);
        assert_eq!(g.x_full(0), -1.0);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid1D::new(0.0, 10).is_err());
        assert!(Grid1D::new(1.0, 2).is_err());
        assert!(Grid2D::new(1.0, -1.0, 5, 5).is_err());
    }

    #[test]
    fn lattice_indexing_roundtrip() {
        let lat = Grid2D::new(1.0, 2.0, 4, 3).unwrap().lattice();
        for i in 0..lat.interior_len() {
            assert_eq!(lat.interior_index(lat.full_index(i)), Some(i));
        }
        let boundary = (0..lat.full_len()).filter(|&k| lat.is_boundary(k)).count();
        assert_eq!(boundary, 6 * 5 - 12);
        // 2 * nx*ny - nx - ny edges among interior plus boundary links
        let e = lat.edges().len();
        assert_eq!(e, 5 * 5 + 6 * 4);
    }

    #[test]
    fn square_grid_spacing() {
        let g = Grid2D::square_with_spacing(1.0, 0.02).unwrap();
        assert_eq!(g.nx, 99);
        assert!((g.hx - 0.02).abs() < 1e-15);
    }
}
