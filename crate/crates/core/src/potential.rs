//! Velocity potentials `b`, drift fields `a = grad b`, and the Liouville
//! potential `q(x, p) = -(p/2) div a + (p^2/4) |a|^2`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid1D, Grid2D, Lattice};

/// Catalog of analytic 1D potentials on `(-l, l)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialKind {
    /// `b = |x|^alpha / alpha`, `a = |x|^alpha / x`.
    PowerLaw { alpha: f64 },
    /// `b = -cos x`, `a = sin x`.
    Sine,
    /// `b = (x^2 - 1)^2 / 4`, `a = x^3 - x`.
    Quartic,
    /// `b = c x`, `a = c`.
    Constant { c: f64 },
}

impl PotentialKind {
    /// Resolve a catalog id (`power`, `sine`, `quartic`, `constant`).
    pub fn from_id(id: &str, alpha: Option<f64>, c: Option<f64>) -> Result<Self> {
        let kind = match id {
            "power" | "power-law" | "power_law" => {
                PotentialKind::PowerLaw { alpha: alpha.unwrap_or(2.0) }
            }
            "linear" => PotentialKind::PowerLaw { alpha: 2.0 },
            "sine" => PotentialKind::Sine,
            "quartic" => PotentialKind::Quartic,
            "constant" => PotentialKind::Constant { c: c.unwrap_or(1.0) },
            other => return Err(Error::UnknownCatalog(other.to_string())),
        };
        kind.validate()?;
        Ok(kind)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            PotentialKind::PowerLaw { alpha } if !(alpha >= 1.0 && alpha.is_finite()) => Err(
                Error::InvalidParameter(format!("power-law exponent must satisfy alpha >= 1, got {alpha}")),
            ),
            PotentialKind::Constant { c } if !c.is_finite() => {
                Err(Error::NonFinite("constant drift".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn b(&self, x: f64) -> f64 {
        match *self {
            PotentialKind::PowerLaw { alpha } => x.abs().powf(alpha) / alpha,
            PotentialKind::Sine => -x.cos(),
            PotentialKind::Quartic => {
                let s = x * x - 1.0;
                0.25 * s * s
            }
            PotentialKind::Constant { c } => c * x,
        }
    }

    pub fn a(&self, x: f64) -> f64 {
        match *self {
            PotentialKind::PowerLaw { alpha } => {
                if x == 0.0 {
                    0.0
                } else {
                    x.signum() * x.abs().powf(alpha - 1.0)
                }
            }
            PotentialKind::Sine => x.sin(),
            PotentialKind::Quartic => x * x * x - x,
            PotentialKind::Constant { c } => c,
        }
    }

    /// `b''`, absent where `b` is not in `W^{2,inf}` (power law with `alpha < 2`).
    pub fn bpp(&self, x: f64) -> Option<f64> {
        match *self {
            PotentialKind::PowerLaw { alpha } => {
                if alpha == 2.0 {
                    Some(1.0)
                } else if alpha > 2.0 {
                    Some((alpha - 1.0) * x.abs().powf(alpha - 2.0))
                } else {
                    None
                }
            }
            PotentialKind::Sine => Some(x.cos()),
            PotentialKind::Quartic => Some(3.0 * x * x - 1.0),
            PotentialKind::Constant { .. } => Some(0.0),
        }
    }

    pub fn has_second_derivative(&self) -> bool {
        self.bpp(0.5).is_some()
    }
}

/// Sampled 1D potential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Potential1D {
    pub grid: Grid1D,
    /// `b` at all `n + 2` nodes, endpoints included.
    pub b: Vec<f64>,
    /// `a = b'` at the interior nodes.
    pub a: Vec<f64>,
    /// `b''` at the interior nodes (analytic builders only).
    pub bpp: Option<Vec<f64>>,
    /// `b` at the `n + 1` cell midpoints (analytic builders only).
    pub b_mid: Option<Vec<f64>>,
    pub kind: Option<PotentialKind>,
}

/// Build a catalog potential on a grid.
pub fn build_potential_1d(kind: PotentialKind, grid: Grid1D) -> Result<Potential1D> {
    kind.validate()?;
    let b: Vec<f64> = grid.full().iter().map(|&x| kind.b(x)).collect();
    let a: Vec<f64> = grid.interior().iter().map(|&x| kind.a(x)).collect();
    let bpp = if kind.has_second_derivative() {
        Some(grid.interior().iter().map(|&x| kind.bpp(x).unwrap()).collect())
    } else {
        None
    };
    let b_mid = Some((0..=grid.n).map(|j| kind.b(grid.x_mid(j))).collect());
    let pot = Potential1D { grid, b, a, bpp, b_mid, kind: Some(kind) };
    pot.check_finite()?;
    Ok(pot)
}

impl Potential1D {
    /// Potential from closures; `b` at midpoints is taken from the closure.
    pub fn from_analytic(
        grid: Grid1D,
        b: impl Fn(f64) -> f64,
        a: impl Fn(f64) -> f64,
        bpp: Option<&dyn Fn(f64) -> f64>,
    ) -> Result<Self> {
        let pot = Potential1D {
            grid,
            b: grid.full().iter().map(|&x| b(x)).collect(),
            a: grid.interior().iter().map(|&x| a(x)).collect(),
            bpp: bpp.map(|f| grid.interior().iter().map(|&x| f(x)).collect()),
            b_mid: Some((0..=grid.n).map(|j| b(grid.x_mid(j))).collect()),
            kind: None,
        };
        pot.check_finite()?;
        Ok(pot)
    }

    /// Potential from samples of `b` at all `n + 2` nodes; `a` by centered differences.
    pub fn from_samples(grid: Grid1D, b: Vec<f64>) -> Result<Self> {
        if b.len() != grid.n + 2 {
            return Err(Error::SizeMismatch(format!(
                "expected {} samples of b, got {}",
                grid.n + 2,
                b.len()
            )));
        }
        let a = (1..=grid.n).map(|j| (b[j + 1] - b[j - 1]) / (2.0 * grid.h)).collect();
        let pot = Potential1D { grid, b, a, bpp: None, b_mid: None, kind: None };
        pot.check_finite()?;
        Ok(pot)
    }

    fn check_finite(&self) -> Result<()> {
        let ok = self.b.iter().chain(&self.a).all(|v| v.is_finite())
            && self.bpp.as_ref().is_none_or(|v| v.iter().all(|x| x.is_finite()))
            && self.b_mid.as_ref().is_none_or(|v| v.iter().all(|x| x.is_finite()));
        if ok {
            Ok(())
        } else {
            Err(Error::NonFinite("potential samples".into()))
        }
    }

    pub fn n(&self) -> usize {
        self.grid.n
    }

    /// `b` at interior node `i`.
    #[inline]
    pub fn b_interior(&self, i: usize) -> f64 {
        self.b[i + 1]
    }

    pub fn b_min(&self) -> f64 {
        let m = self.b.iter().copied().fold(f64::INFINITY, f64::min);
        match &self.b_mid {
            Some(mid) => mid.iter().copied().fold(m, f64::min),
            None => m,
        }
    }

    pub fn b_max(&self) -> f64 {
        let m = self.b.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        match &self.b_mid {
            Some(mid) => mid.iter().copied().fold(m, f64::max),
            None => m,
        }
    }

    pub fn max_abs_a(&self) -> f64 {
        self.a.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Default membership/pruning tolerance: ten cells' worth of variation in `b`.
    pub fn default_tol(&self) -> f64 {
        10.0 * self.grid.h * self.max_abs_a()
    }

    /// `b` on the edge between full nodes `j` and `j + 1` as seen by the weights:
    /// the analytic midpoint value, else the mean (geometric mean of the weights).
    #[inline]
    pub fn b_edge(&self, j: usize) -> f64 {
        match &self.b_mid {
            Some(mid) => mid[j],
            None => 0.5 * (self.b[j] + self.b[j + 1]),
        }
    }

    /// Restriction to the symmetric subinterval keeping `m` interior nodes on each
    /// side of the centre (the node set is a subset of this grid's nodes).
    pub fn restrict_symmetric(&self, keep: usize) -> Result<Self> {
        let n = self.grid.n;
        if keep * 2 >= n || n.is_multiple_of(2) {
            return Err(Error::InvalidGrid("restriction needs an odd grid larger than the subgrid".into()));
        }
        let centre = n / 2;
        let lo = centre - keep;
        let hi = centre + keep;
        let sub_n = hi - lo + 1;
        let l = self.grid.h * (sub_n as f64 + 1.0) / 2.0;
        let grid = Grid1D { l, n: sub_n, h: self.grid.h };
        Ok(Potential1D {
            grid,
            b: self.b[lo..=hi + 2].to_vec(),
            a: self.a[lo..=hi].to_vec(),
            bpp: self.bpp.as_ref().map(|v| v[lo..=hi].to_vec()),
            b_mid: self.b_mid.as_ref().map(|v| v[lo..=hi + 1].to_vec()),
            kind: self.kind,
        })
    }
}

/// One radial vortex bump `coeff * (x/|x|) sin(pi |x| / R)` centred at `center`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub center: [f64; 2],
    pub radius: f64,
    pub coeff: f64,
}

impl Bump {
    fn r(&self, x: f64, y: f64) -> (f64, f64, f64) {
        let (dx, dy) = (x - self.center[0], y - self.center[1]);
        (dx, dy, dx.hypot(dy))
    }

    pub fn a(&self, x: f64, y: f64) -> (f64, f64) {
        let (dx, dy, r) = self.r(x, y);
        if r == 0.0 || r > self.radius {
            return (0.0, 0.0);
        }
        let s = self.coeff * (PI * r / self.radius).sin() / r;
        (s * dx, s * dy)
    }

    /// Radial potential `coeff (R/pi)(1 - cos(pi r / R))`, constant outside the support.
    pub fn b(&self, x: f64, y: f64) -> f64 {
        let (_, _, r) = self.r(x, y);
        let rr = r.min(self.radius);
        self.coeff * self.radius / PI * (1.0 - (PI * rr / self.radius).cos())
    }

    pub fn div(&self, x: f64, y: f64) -> f64 {
        let (_, _, r) = self.r(x, y);
        let k = PI / self.radius;
        if r == 0.0 {
            2.0 * k * self.coeff
        } else if r <= self.radius {
            self.coeff * (k * (k * r).cos() + (k * r).sin() / r)
        } else {
            0.0
        }
    }

    /// Depth of the well at the centre: `2 coeff R / pi`.
    pub fn depth(&self) -> f64 {
        2.0 * self.coeff * self.radius / PI
    }
}

/// Catalog of 2D drift fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldKind {
    /// Constant field; `b = c1 x + c2 y`.
    Constant { c1: f64, c2: f64 },
    /// A single vortex bump (no disjointness requirement).
    Vortex { bump: Bump },
    /// Several vortex bumps with pairwise disjoint supports inside the domain.
    MultiBump { bumps: Vec<Bump> },
    /// `a = (a1(x1), a2(x2))` from two 1D catalog potentials.
    Separable { x: PotentialKind, y: PotentialKind },
}

impl FieldKind {
    /// Vortex of radius 1/2 at the origin.
    pub fn centered_vortex() -> Self {
        FieldKind::Vortex { bump: Bump { center: [0.0, 0.0], radius: 0.5, coeff: 1.0 } }
    }

    /// Two vortices: radius 2/5 at (1/2, 2/5) and twice-strength radius 1/4 at (-2/3, -3/10).
    pub fn two_vortices() -> Self {
        FieldKind::MultiBump {
            bumps: vec![
                Bump { center: [0.5, 0.4], radius: 0.4, coeff: 1.0 },
                Bump { center: [-2.0 / 3.0, -0.3], radius: 0.25, coeff: 2.0 },
            ],
        }
    }

    /// Resolve a catalog id (`constant2d`, `vortex`, `two-vortex`, `separable-linear`).
    pub fn from_id(id: &str, c: Option<f64>) -> Result<Self> {
        Ok(match id {
            "constant2d" | "constant" => FieldKind::Constant { c1: c.unwrap_or(1.0), c2: 0.0 },
            "vortex" => Self::centered_vortex(),
            "two-vortex" | "two_vortex" => Self::two_vortices(),
            "separable-linear" | "separable" => FieldKind::Separable {
                x: PotentialKind::PowerLaw { alpha: 2.0 },
                y: PotentialKind::PowerLaw { alpha: 2.0 },
            },
            other => return Err(Error::UnknownCatalog(other.to_string())),
        })
    }

    fn bumps(&self) -> &[Bump] {
        match self {
            FieldKind::Vortex { bump } => std::slice::from_ref(bump),
            FieldKind::MultiBump { bumps } => bumps,
            _ => &[],
        }
    }

    fn a(&self, x: f64, y: f64) -> (f64, f64) {
        match self {
            FieldKind::Constant { c1, c2 } => (*c1, *c2),
            FieldKind::Separable { x: kx, y: ky } => (kx.a(x), ky.a(y)),
            _ => self.bumps().iter().fold((0.0, 0.0), |acc, bump| {
                let v = bump.a(x, y);
                (acc.0 + v.0, acc.1 + v.1)
            }),
        }
    }

    fn b(&self, x: f64, y: f64) -> f64 {
        match self {
            FieldKind::Constant { c1, c2 } => c1 * x + c2 * y,
            FieldKind::Separable { x: kx, y: ky } => kx.b(x) + ky.b(y),
            _ => self.bumps().iter().map(|bump| bump.b(x, y)).sum(),
        }
    }

    fn div(&self, x: f64, y: f64) -> Option<f64> {
        match self {
            FieldKind::Constant { .. } => Some(0.0),
            FieldKind::Separable { x: kx, y: ky } => Some(kx.bpp(x)? + ky.bpp(y)?),
            _ => Some(self.bumps().iter().map(|bump| bump.div(x, y)).sum()),
        }
    }

    fn validate(&self, grid: &Grid2D) -> Result<()> {
        match self {
            FieldKind::MultiBump { bumps } => {
                for (i, p) in bumps.iter().enumerate() {
                    if !(p.radius > 0.0 && p.coeff.is_finite()) {
                        return Err(Error::InvalidParameter(format!("bump {i}: radius must be positive")));
                    }
                    let inside = p.center[0].abs() + p.radius <= grid.lx
                        && p.center[1].abs() + p.radius <= grid.ly;
                    if !inside {
                        return Err(Error::InvalidParameter(format!("bump {i}: support leaves the domain")));
                    }
                    for (j, q) in bumps.iter().enumerate().skip(i + 1) {
                        let d = (p.center[0] - q.center[0]).hypot(p.center[1] - q.center[1]);
                        if d <= p.radius + q.radius {
                            return Err(Error::Overlap(format!("bumps {i} and {j} have intersecting supports")));
                        }
                    }
                }
                Ok(())
            }
            FieldKind::Vortex { bump } if !(bump.radius > 0.0) => {
                Err(Error::InvalidParameter("vortex radius must be positive".into()))
            }
            FieldKind::Separable { x, y } => {
                x.validate()?;
                y.validate()
            }
            _ => Ok(()),
        }
    }
}

/// Sampled 2D drift field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Field2D {
    pub grid: Grid2D,
    /// `b` at all full nodes (boundary ring included), if a potential is known.
    pub b: Option<Vec<f64>>,
    /// Components of `a` at interior nodes.
    pub a1: Vec<f64>,
    pub a2: Vec<f64>,
    /// `div a` at interior nodes (analytic builders only).
    pub diva: Option<Vec<f64>>,
    pub kind: Option<FieldKind>,
}

pub fn build_field_2d(kind: FieldKind, grid: Grid2D) -> Result<Field2D> {
    kind.validate(&grid)?;
    let lat = grid.lattice();
    let mut b = vec![0.0; lat.full_len()];
    for fj in 0..grid.ny + 2 {
        for fi in 0..grid.nx + 2 {
            let (x, y) = grid.xy_full(fi, fj);
            b[fj * (grid.nx + 2) + fi] = kind.b(x, y);
        }
    }
    let mut a1 = Vec::with_capacity(grid.len());
    let mut a2 = Vec::with_capacity(grid.len());
    let mut diva = Some(Vec::with_capacity(grid.len()));
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let (x, y) = grid.xy(i, j);
            let (u, v) = kind.a(x, y);
            a1.push(u);
            a2.push(v);
            diva = match (diva, kind.div(x, y)) {
                (Some(mut d), Some(val)) => {
                    d.push(val);
                    Some(d)
                }
                _ => None,
            };
        }
    }
    let field = Field2D { grid, b: Some(b), a1, a2, diva, kind: Some(kind) };
    field.check_finite()?;
    Ok(field)
}

impl Field2D {
    /// Field given only by its components (no potential known).
    pub fn from_components(grid: Grid2D, a1: Vec<f64>, a2: Vec<f64>) -> Result<Self> {
        if a1.len() != grid.len() || a2.len() != grid.len() {
            return Err(Error::SizeMismatch("field components must cover the interior".into()));
        }
        let f = Field2D { grid, b: None, a1, a2, diva: None, kind: None };
        f.check_finite()?;
        Ok(f)
    }

    fn check_finite(&self) -> Result<()> {
        let ok = self.a1.iter().chain(&self.a2).all(|v| v.is_finite())
            && self.b.as_ref().is_none_or(|v| v.iter().all(|x| x.is_finite()))
            && self.diva.as_ref().is_none_or(|v| v.iter().all(|x| x.is_finite()));
        if ok {
            Ok(())
        } else {
            Err(Error::NonFinite("field samples".into()))
        }
    }

    pub fn max_abs_a(&self) -> f64 {
        self.a1.iter().zip(&self.a2).fold(0.0, |m, (u, v)| m.max(u.hypot(*v)))
    }

    pub fn default_tol(&self) -> f64 {
        10.0 * self.grid.hx.max(self.grid.hy) * self.max_abs_a()
    }

    /// `b` at full node `(fi, fj)`.
    pub fn b_full(&self, fi: usize, fj: usize) -> Option<f64> {
        self.b.as_ref().map(|b| b[fj * (self.grid.nx + 2) + fi])
    }

    /// `b` at interior node index `k`.
    pub fn b_interior(&self) -> Option<Vec<f64>> {
        let b = self.b.as_ref()?;
        let lat = self.grid.lattice();
        Some((0..self.grid.len()).map(|k| b[lat.full_index(k)]).collect())
    }
}

/// Anything carrying a sampled drift on interior nodes.
pub trait DriftSamples {
    fn lattice(&self) -> Lattice;
    /// `div a` at interior nodes (analytic or centered-difference fallback).
    fn div_a(&self) -> Vec<f64>;
    /// `|a|^2` at interior nodes.
    fn a_sq(&self) -> Vec<f64>;
    /// `b` on the full lattice, if known.
    fn b_full_nodes(&self) -> Option<&[f64]>;
    /// Whether `div a` comes from an analytic channel rather than differences.
    fn div_is_analytic(&self) -> bool;
    /// Lowest Dirichlet eigenvalue of `-Δ` on the box.
    fn box_eigenvalue(&self) -> f64;
}

/// Derivative of interior samples with one-sided second-order stencils at the ends.
fn diff_interior(v: &[f64], h: f64, out: &mut [f64], stride: usize, len: usize, offset: usize) {
    let at = |i: usize| v[offset + i * stride];
    for i in 0..len {
        let d = if i == 0 {
            (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h)
        } else if i == len - 1 {
            (3.0 * at(i) - 4.0 * at(i - 1) + at(i - 2)) / (2.0 * h)
        } else {
            (at(i + 1) - at(i - 1)) / (2.0 * h)
        };
        out[offset + i * stride] += d;
    }
}

impl DriftSamples for Potential1D {
    fn lattice(&self) -> Lattice {
        self.grid.lattice()
    }

    fn div_a(&self) -> Vec<f64> {
        if let Some(bpp) = &self.bpp {
            return bpp.clone();
        }
        let mut out = vec![0.0; self.grid.n];
        diff_interior(&self.a, self.grid.h, &mut out, 1, self.grid.n, 0);
        out
    }

    fn a_sq(&self) -> Vec<f64> {
        self.a.iter().map(|v| v * v).collect()
    }

    fn b_full_nodes(&self) -> Option<&[f64]> {
        Some(&self.b)
    }

    fn div_is_analytic(&self) -> bool {
        self.bpp.is_some()
    }

    fn box_eigenvalue(&self) -> f64 {
        PI * PI / (4.0 * self.grid.l * self.grid.l)
    }
}

impl DriftSamples for Field2D {
    fn lattice(&self) -> Lattice {
        self.grid.lattice()
    }

    fn div_a(&self) -> Vec<f64> {
        if let Some(d) = &self.diva {
            return d.clone();
        }
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let mut out = vec![0.0; nx * ny];
        for j in 0..ny {
            diff_interior(&self.a1, self.grid.hx, &mut out, 1, nx, j * nx);
        }
        for i in 0..nx {
            diff_interior(&self.a2, self.grid.hy, &mut out, nx, ny, i);
        }
        out
    }

    fn a_sq(&self) -> Vec<f64> {
        self.a1.iter().zip(&self.a2).map(|(u, v)| u * u + v * v).collect()
    }

    fn b_full_nodes(&self) -> Option<&[f64]> {
        self.b.as_deref()
    }

    fn div_is_analytic(&self) -> bool {
        self.diva.is_some()
    }

    fn box_eigenvalue(&self) -> f64 {
        let g = &self.grid;
        PI * PI / 4.0 * (1.0 / (g.lx * g.lx) + 1.0 / (g.ly * g.ly))
    }
}

/// `q(x, p) = -(p/2) div a + (p^2/4) |a|^2` at interior nodes.
pub fn liouville_q(field: &impl DriftSamples, p: f64) -> Result<Vec<f64>> {
    if !p.is_finite() {
        return Err(Error::NonFinite(format!("p = {p}")));
    }
    Ok(liouville_q_from(&field.div_a(), &field.a_sq(), p))
}

pub(crate) fn liouville_q_from(div: &[f64], a_sq: &[f64], p: f64) -> Vec<f64> {
    div.iter().zip(a_sq).map(|(d, s)| -0.5 * p * d + 0.25 * p * p * s).collect()
}

/// Outcome of the sampled check that `a` is odd and the sets where `b` is
/// near its minimum lie left of those where it is near its maximum on `[0, l]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionCheck {
    pub holds: bool,
    pub odd: bool,
    pub odd_defect: f64,
    pub ordered: bool,
    /// `min b` and `max b` over `[0, l]`.
    pub b1: f64,
    pub b2: f64,
    pub max_b1_x: f64,
    pub min_b2_x: f64,
    pub tol: f64,
    pub diagnostic: String,
}

pub fn check_assumption_ab(pot: &Potential1D, tol: Option<f64>) -> AssumptionCheck {
    let tol = tol.unwrap_or_else(|| pot.default_tol());
    let g = &pot.grid;
    let n = g.n;
    let odd_defect = (0..n).map(|i| (pot.a[i] + pot.a[n - 1 - i]).abs()).fold(0.0, f64::max);
    let odd = odd_defect <= tol;

    let half: Vec<(f64, f64)> = (0..n + 2)
        .map(|j| (g.x_full(j), pot.b[j]))
        .filter(|(x, _)| *x >= -1e-12 * g.l)
        .collect();
    let b1 = half.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let b2 = half.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let max_b1_x = half.iter().filter(|p| p.1 <= b1 + tol).map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let min_b2_x = half.iter().filter(|p| p.1 >= b2 - tol).map(|p| p.0).fold(f64::INFINITY, f64::min);
    let ordered = max_b1_x < min_b2_x;
    let holds = odd && ordered;
    let diagnostic = match (odd, ordered) {
        (true, true) => "a is odd and max B1 < min B2".to_string(),
        (false, _) => format!("a is not odd on the grid (max |a(x)+a(-x)| = {odd_defect:e})"),
        (true, false) => format!("ordering fails: max B1 = {max_b1_x} >= min B2 = {min_b2_x}"),
    };
    AssumptionCheck { holds, odd, odd_defect, ordered, b1, b2, max_b1_x, min_b2_x, tol, diagnostic }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(l: f64, n: usize) -> Grid1D {
        Grid1D::new(l, n).unwrap()
    }

    #[test]
    fn power_law_samples() {
        let pot = build_potential_1d(PotentialKind::PowerLaw { alpha: 2.0 }, grid(1.0, 9)).unwrap();
        assert_eq!(pot.b[5], 0.0);
        assert_eq!(pot.b[0], 0.5);
        assert_eq!(pot.b[10], 0.5);
        for (i, &x) in pot.grid.interior().iter().enumerate() {
            assert!((pot.a[i] - x).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_constant_drift() {
        let pot = build_potential_1d(PotentialKind::Constant { c: 0.0 }, grid(2.0, 15)).unwrap();
        assert!(pot.b.iter().all(|&v| v == 0.0));
        assert!(pot.a.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn sine_barrier_on_half_interval() {
        let pot = build_potential_1d(PotentialKind::Sine, grid(1.5 * PI, 3001)).unwrap();
        let half: Vec<f64> = (0..pot.n() + 2)
            .filter(|&j| pot.grid.x_full(j) >= 0.0)
            .map(|j| pot.b[j])
            .collect();
        let lo = half.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = half.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        assert!((hi - lo - 2.0).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_catalog() {
        assert!(matches!(
            build_potential_1d(PotentialKind::PowerLaw { alpha: 0.5 }, grid(1.0, 9)),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(PotentialKind::from_id("cubic", None, None), Err(Error::UnknownCatalog(_))));
    }

    #[test]
    fn single_bump_field() {
        let g = Grid2D::new(1.0, 1.0, 81, 81).unwrap();
        let f = build_field_2d(FieldKind::centered_vortex(), g).unwrap();
        for j in 0..g.ny {
            for i in 0..g.nx {
                let (x, y) = g.xy(i, j);
                let k = g.idx(i, j);
                let m = f.a1[k].hypot(f.a2[k]);
                assert!(m <= 1.0 + 1e-14);
                if x.hypot(y) >= 0.5 {
                    assert_eq!(m, 0.0);
                }
            }
        }
    }

    #[test]
    fn constant_zero_field() {
        let g = Grid2D::new(1.0, 1.0, 9, 9).unwrap();
        let f = build_field_2d(FieldKind::Constant { c1: 0.0, c2: 0.0 }, g).unwrap();
        assert!(f.b.unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn two_vortex_depths() {
        // oracle: integral of coeff*sin(pi r/R) over [0, R] = 2 coeff R / pi
        let FieldKind::MultiBump { bumps } = FieldKind::two_vortices() else { unreachable!() };
        let quad = |c: f64, r: f64| {
            let m = 2000;
            let h = r / m as f64;
            (0..m).map(|k| c * (PI * (k as f64 + 0.5) * h / r).sin() * h).sum::<f64>()
        };
        assert!((bumps[0].depth() - quad(1.0, 0.4)).abs() < 1e-6);
        assert!((bumps[1].depth() - quad(2.0, 0.25)).abs() < 1e-6);
        assert!((bumps[0].depth() - 0.2546).abs() < 1e-4);
        assert!((bumps[1].depth() - 1.0 / PI).abs() < 1e-4);
    }

    #[test]
    fn overlapping_bumps_rejected() {
        let g = Grid2D::new(1.0, 1.0, 9, 9).unwrap();
        let kind = FieldKind::MultiBump {
            bumps: vec![
                Bump { center: [0.0, 0.0], radius: 0.4, coeff: 1.0 },
                Bump { center: [0.5, 0.0], radius: 0.2, coeff: 1.0 },
            ],
        };
        assert!(matches!(build_field_2d(kind, g), Err(Error::Overlap(_))));
    }

    #[test]
    fn q_examples() {
        let pot = build_potential_1d(PotentialKind::PowerLaw { alpha: 2.0 }, grid(1.0, 41)).unwrap();
        let p = 7.0;
        let q = liouville_q(&pot, p).unwrap();
        for (i, &x) in pot.grid.interior().iter().enumerate() {
            assert!((q[i] - (-p / 2.0 + p * p * x * x / 4.0)).abs() < 1e-12);
        }
        let c = 1.5;
        let pot = build_potential_1d(PotentialKind::Constant { c }, grid(1.0, 41)).unwrap();
        assert!(liouville_q(&pot, p).unwrap().iter().all(|&v| (v - p * p * c * c / 4.0).abs() < 1e-12));
        assert!(liouville_q(&pot, 0.0).unwrap().iter().all(|&v| v == 0.0));
        assert!(liouville_q(&pot, f64::NAN).is_err());
    }

    #[test]
    fn centered_difference_order() {
        // max |D b - a| should drop by ~4 when h halves
        let kind = PotentialKind::Sine;
        let err = |n: usize| {
            let pot = build_potential_1d(kind, grid(2.0, n)).unwrap();
            let s = Potential1D::from_samples(pot.grid, pot.b.clone()).unwrap();
            s.a.iter().zip(&pot.a).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
        };
        let (e1, e2) = (err(99), err(199));
        let order = (e1 / e2).log2();
        assert!(order > 1.9, "order {order}");
    }

    #[test]
    fn fallback_divergence_tracks_analytic() {
        let kind = PotentialKind::Quartic;
        let pot = build_potential_1d(kind, grid(2.0, 401)).unwrap();
        let mut s = pot.clone();
        s.bpp = None;
        let d = s.div_a();
        let exact = pot.div_a();
        let err = d.iter().zip(&exact).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(err < 1e-3, "{err}");
    }

    #[test]
    fn assumption_examples() {
        let lin = build_potential_1d(PotentialKind::PowerLaw { alpha: 2.0 }, grid(1.0, 401)).unwrap();
        let c = check_assumption_ab(&lin, None);
        assert!(c.holds, "{}", c.diagnostic);
        assert!(c.max_b1_x < 0.35 && c.min_b2_x > 0.9);

        let sine = build_potential_1d(PotentialKind::Sine, grid(3.0 * PI, 1201)).unwrap();
        let c = check_assumption_ab(&sine, None);
        assert!(c.odd);
        assert!(!c.holds);

        let quartic = build_potential_1d(PotentialKind::Quartic, grid(2.0, 801)).unwrap();
        assert!(check_assumption_ab(&quartic, None).holds);

        let shifted = Potential1D::from_analytic(grid(1.0, 101), |x| (x - 0.3).powi(2), |x| 2.0 * (x - 0.3), None).unwrap();
        assert!(!check_assumption_ab(&shifted, None).odd);
    }
}
