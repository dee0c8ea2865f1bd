use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::Potential1D;

/// Largest admissible `p * (max b - min b)` before the weights underflow.
pub const MAX_WEIGHT_SPREAD: f64 = 600.0;

/// Symmetric tridiagonal stiffness `A` and diagonal mass `M` of the weighted
/// Dirichlet form `sum w_{i+1/2} (u_{i+1} - u_i)^2 / h^2` against `sum w_i u_i^2`.
///
/// The stiffness is stored through its edge conductances: `edge[j]` couples
/// full nodes `j` and `j + 1`, so `A_ii = edge[i] + edge[i + 1]` and
/// `A_{i,i+1} = -edge[i + 1]`. The two end edges are the Dirichlet closure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TridiagPencil {
    pub n: usize,
    pub diag_a: Vec<f64>,
    pub offdiag_a: Vec<f64>,
    pub diag_m: Vec<f64>,
    pub edge: Vec<f64>,
    /// Log of the common factor `exp(-p min b)` removed from both `A` and `M`.
    pub scale_log: f64,
}

impl TridiagPencil {
    pub fn from_edges(edge: Vec<f64>, diag_m: Vec<f64>, scale_log: f64) -> Result<Self> {
        let n = diag_m.len();
        if edge.len() != n + 1 {
            return Err(Error::SizeMismatch(format!("{} edges for {} nodes", edge.len(), n)));
        }
        if n == 0 {
            return Err(Error::InvalidGrid("empty pencil".into()));
        }
        if edge.iter().chain(&diag_m).any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::NonFinite("pencil entries must be positive and finite".into()));
        }
        let diag_a = (0..n).map(|i| edge[i] + edge[i + 1]).collect();
        let offdiag_a = (1..n).map(|i| -edge[i]).collect();
        Ok(Self { n, diag_a, offdiag_a, diag_m, edge, scale_log })
    }

    /// Same pencil with `A` and `M` multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::from_edges(
            self.edge.iter().map(|e| e * factor).collect(),
            self.diag_m.iter().map(|m| m * factor).collect(),
            self.scale_log + factor.ln(),
        )
    }

    /// `(A u)_i` (dense product, used for residuals).
    pub fn apply_a(&self, u: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|i| {
                let mut v = self.diag_a[i] * u[i];
                if i > 0 {
                    v -= self.edge[i] * u[i - 1];
                }
                if i + 1 < n {
                    v -= self.edge[i + 1] * u[i + 1];
                }
                v
            })
            .collect()
    }

    /// Infinity norm of `A`.
    pub fn norm_a(&self) -> f64 {
        (0..self.n).map(|i| self.diag_a[i] + self.edge[i] + self.edge[i + 1]).fold(0.0, f64::max)
    }

    /// Upper bound on the spectrum of `M^{-1/2} A M^{-1/2}` (row Gershgorin).
    pub fn gershgorin_upper(&self) -> f64 {
        let m = &self.diag_m;
        (0..self.n)
            .map(|i| {
                let mut r = self.diag_a[i] / m[i];
                if i > 0 {
                    r += self.edge[i] / (m[i] * m[i - 1]).sqrt();
                }
                if i + 1 < self.n {
                    r += self.edge[i + 1] / (m[i] * m[i + 1]).sqrt();
                }
                r
            })
            .fold(0.0, f64::max)
    }

    /// Discrete Dirichlet quotient `sum edge (u_{j+1} - u_j)^2 / sum M u^2`
    /// with `u = 0` outside the interior.
    pub fn rayleigh_quotient(&self, u: &[f64]) -> f64 {
        let n = self.n;
        let at = |j: usize| if j == 0 || j > n { 0.0 } else { u[j - 1] };
        let num: f64 = (0..=n).map(|j| {
            let d = at(j + 1) - at(j);
            self.edge[j] * d * d
        }).sum();
        let den: f64 = u.iter().zip(&self.diag_m).map(|(v, m)| m * v * v).sum();
        num / den
    }
}

/// Weighted pencil of `-u'' + p b' u' = lambda u` with Dirichlet ends.
///
/// Weights are `exp(-p (b - min b))`; edge weights use `b` at the cell midpoint
/// when it is known analytically, else the geometric mean of the node weights.
pub fn assemble_pencil(pot: &Potential1D, p: f64) -> Result<TridiagPencil> {
    if !(p.is_finite() && p >= 0.0) {
        return Err(Error::InvalidParameter(format!("p must be finite and nonnegative, got {p}")));
    }
    let b_min = pot.b_min();
    let spread = p * (pot.b_max() - b_min);
    if spread > MAX_WEIGHT_SPREAD {
        return Err(Error::WeightRange { spread, limit: MAX_WEIGHT_SPREAD });
    }
    let n = pot.n();
    let h2 = pot.grid.h * pot.grid.h;
    let edge = (0..=n).map(|j| (-p * (pot.b_edge(j) - b_min)).exp() / h2).collect();
    let mass = (0..n).map(|i| (-p * (pot.b_interior(i) - b_min)).exp()).collect();
    TridiagPencil::from_edges(edge, mass, -p * b_min)
}

/// `LDL^T` factorization of `A - sigma M`.
///
/// Pivots come from the excess recurrence `e_i = edge_i e_{i-1} / d_{i-1} - sigma M_i`,
/// `d_i = edge_{i+1} + e_i`, which never subtracts two stiffness entries; at
/// `sigma = 0` every quantity is a positive sum, so pivots and solves keep full
/// relative accuracy however small the smallest eigenvalue is.
pub(crate) struct Factor<'a> {
    pencil: &'a TridiagPencil,
    pub(crate) pivots: Vec<f64>,
}

impl<'a> Factor<'a> {
    pub(crate) fn new(pencil: &'a TridiagPencil, sigma: f64) -> Option<Self> {
        let n = pencil.n;
        let c = &pencil.edge;
        let m = &pencil.diag_m;
        let mut pivots = Vec::with_capacity(n);
        let mut e = c[0] - sigma * m[0];
        for i in 0..n {
            if i > 0 {
                let prev = pivots[i - 1];
                e = c[i] * (e / prev) - sigma * m[i];
            }
            let d = c[i + 1] + e;
            if d == 0.0 || !d.is_finite() {
                return None;
            }
            pivots.push(d);
        }
        Some(Self { pencil, pivots })
    }

    /// Number of negative pivots = number of eigenvalues below the shift.
    pub(crate) fn negative_count(&self) -> usize {
        self.pivots.iter().filter(|&&d| d < 0.0).count()
    }

    pub(crate) fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.pencil.n;
        let c = &self.pencil.edge;
        let d = &self.pivots;
        let mut y = rhs.to_vec();
        for i in 1..n {
            y[i] += c[i] * (y[i - 1] / d[i - 1]);
        }
        let mut x = vec![0.0; n];
        x[n - 1] = y[n - 1] / d[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = (y[i] + c[i + 1] * x[i + 1]) / d[i];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid1D;
    use crate::potential::{build_potential_1d, PotentialKind};

    #[test]
    fn flat_potential_gives_laplacian() {
        let g = Grid1D::new(1.0, 9).unwrap();
        let pot = build_potential_1d(PotentialKind::Constant { c: 0.0 }, g).unwrap();
        let pen = assemble_pencil(&pot, 17.0).unwrap();
        let h2 = g.h * g.h;
        for i in 0..9 {
            assert!((pen.diag_a[i] - 2.0 / h2).abs() < 1e-9);
            assert_eq!(pen.diag_m[i], 1.0);
        }
        assert!(pen.offdiag_a.iter().all(|&o| (o + 1.0 / h2).abs() < 1e-9));
    }

    #[test]
    fn zero_p_is_p_independent() {
        let g = Grid1D::new(1.0, 21).unwrap();
        let lin = build_potential_1d(PotentialKind::PowerLaw { alpha: 2.0 }, g).unwrap();
        let flat = build_potential_1d(PotentialKind::Constant { c: 0.0 }, g).unwrap();
        assert_eq!(assemble_pencil(&lin, 0.0).unwrap(), assemble_pencil(&flat, 0.0).unwrap());
    }

    #[test]
    fn smallest_mass_weight() {
        let g = Grid1D::new(1.0, 4001).unwrap();
        let pot = build_potential_1d(PotentialKind::PowerLaw { alpha: 2.0 }, g).unwrap();
        let pen = assemble_pencil(&pot, 40.0).unwrap();
        let wmin = pen.diag_m.iter().copied().fold(f64::INFINITY, f64::min);
        // end nodes sit one cell inside x = +-1, where the weight is exp(-20)
        let expected = (-20.0 * (1.0 - g.h) * (1.0 - g.h)).exp();
        assert!((wmin / expected - 1.0).abs() < 1e-12);
        assert!((wmin / (-20.0f64).exp() - 1.0).abs() < 0.03);
        assert!((2.061e-9 / (-20.0f64).exp() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn pencil_structure() {
        let g = Grid1D::new(2.0, 101).unwrap();
        let pot = build_potential_1d(PotentialKind::Quartic, g).unwrap();
        let pen = assemble_pencil(&pot, 30.0).unwrap();
        assert!(pen.diag_m.iter().all(|&m| m > 0.0));
        for i in 0..pen.n {
            let left = if i > 0 { pen.offdiag_a[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < pen.n { pen.offdiag_a[i].abs() } else { 0.0 };
            assert!(pen.diag_a[i] >= left + right);
        }
        assert!(pen.offdiag_a.iter().all(|&o| o <= 0.0));
    }

    #[test]
    fn overflow_guard() {
        let g = Grid1D::new(1.0, 101).unwrap();
        let pot = build_potential_1d(PotentialKind::PowerLaw { alpha: 2.0 }, g).unwrap();
        let err = assemble_pencil(&pot, 2000.0).unwrap_err();
        assert!(matches!(err, Error::WeightRange { .. }));
        assert!(err.to_string().contains("asym"));
        assert!(assemble_pencil(&pot, -1.0).is_err());
    }

    #[test]
    fn factor_solves() {
        let g = Grid1D::new(1.0, 31).unwrap();
        let pot = build_potential_1d(PotentialKind::Sine, g).unwrap();
        let pen = assemble_pencil(&pot, 5.0).unwrap();
        let f = Factor::new(&pen, 0.0).unwrap();
        assert_eq!(f.negative_count(), 0);
        let rhs: Vec<f64> = (0..31).map(|i| 1.0 + i as f64).collect();
        let x = f.solve(&rhs);
        let back = pen.apply_a(&x);
        for (a, b) in back.iter().zip(&rhs) {
            assert!((a - b).abs() < 1e-9 * b.abs());
        }
    }
}
