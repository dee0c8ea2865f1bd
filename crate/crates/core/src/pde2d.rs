//! Time integration of `u_t - Δu + p a·∇u = 0` on a rectangle with Dirichlet
//! data, by a first-order characteristic (semi-Lagrangian) step followed by
//! an implicit diffusion solve, and decay-rate / profile extraction.
//!
//! Each step evaluates the previous solution at the departure point
//! `x - p a(x) tau` by bilinear interpolation (zero outside the domain), then
//! solves `(I - tau Δ_h) u = ũ` with Jacobi-preconditioned conjugate gradients.
//! The state is kept at unit maximum; the removed factor is accumulated in
//! `log_scale`, so arbitrarily small amplitudes never underflow.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid2D;
use crate::potential::Field2D;

pub const DEFAULT_TAU: f64 = 5e-4;
pub const CG_RTOL: f64 = 1e-10;
const CG_MAX_ITER: usize = 5000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct State2D {
    pub grid: Grid2D,
    /// Interior values; the true solution is `u * exp(log_scale)`.
    pub u: Vec<f64>,
    pub t: f64,
    pub tau: f64,
    pub log_scale: f64,
}

/// Initial data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialCondition {
    Ones,
    /// `cos(pi x / 2 lx) cos(pi y / 2 ly)`.
    Cosine,
    Values(Vec<f64>),
}

impl State2D {
    pub fn new(grid: Grid2D, init: &InitialCondition, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!("time step must be positive, got {tau}")));
        }
        let u = match init {
            InitialCondition::Ones => vec![1.0; grid.len()],
            InitialCondition::Cosine => {
                let mut u = Vec::with_capacity(grid.len());
                for j in 0..grid.ny {
                    for i in 0..grid.nx {
                        let (x, y) = grid.xy(i, j);
                        u.push((0.5 * std::f64::consts::PI * x / grid.lx).cos()
                            * (0.5 * std::f64::consts::PI * y / grid.ly).cos());
                    }
                }
                u
            }
            InitialCondition::Values(v) => {
                if v.len() != grid.len() {
                    return Err(Error::SizeMismatch(format!("{} initial values for {} nodes", v.len(), grid.len())));
                }
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(Error::NonFinite("initial data".into()));
                }
                v.clone()
            }
        };
        Ok(Self { grid, u, t: 0.0, tau, log_scale: 0.0 })
    }

    /// `u * exp(log_scale)` (may underflow; prefer the log norms).
    pub fn values(&self) -> Vec<f64> {
        let s = self.log_scale.exp();
        self.u.iter().map(|v| v * s).collect()
    }

    pub fn log_l2_norm(&self) -> f64 {
        let ss: f64 = self.u.iter().map(|v| v * v).sum::<f64>() * self.grid.cell_area();
        0.5 * ss.ln() + self.log_scale
    }

    pub fn log_max_norm(&self) -> f64 {
        self.u.iter().fold(0.0f64, |m, v| m.max(v.abs())).ln() + self.log_scale
    }

    /// Rescale to unit maximum, moving the factor into `log_scale`.
    pub fn renormalize(&mut self) -> Result<()> {
        let m = self.u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if m == 0.0 {
            return Err(Error::ZeroState("all values are zero".into()));
        }
        self.u.iter_mut().for_each(|v| *v /= m);
        self.log_scale += m.ln();
        Ok(())
    }
}

/// Bilinear stencil of one departure point: up to four interior indices.
#[derive(Debug, Clone, Copy)]
struct Stencil {
    idx: [u32; 4],
    w: [f64; 4],
}

const NONE: u32 = u32::MAX;

/// Precomputed departure stencils and solver scratch for fixed `(field, p, tau)`.
pub struct Stepper {
    grid: Grid2D,
    tau: f64,
    stencils: Vec<Option<Stencil>>,
    diag: f64,
    cx: f64,
    cy: f64,
    /// Renormalize every this many steps (0: never).
    pub renorm_every: usize,
    steps: usize,
    scratch: [Vec<f64>; 4],
    pub last_cg_iterations: usize,
}

impl Stepper {
    pub fn new(field: &Field2D, p: f64, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!("time step must be positive, got {tau}")));
        }
        if !p.is_finite() {
            return Err(Error::NonFinite(format!("p = {p}")));
        }
        let g = field.grid;
        let mut stencils = Vec::with_capacity(g.len());
        for j in 0..g.ny {
            for i in 0..g.nx {
                let k = g.idx(i, j);
                let (x, y) = g.xy(i, j);
                let xd = x - p * field.a1[k] * tau;
                let yd = y - p * field.a2[k] * tau;
                stencils.push(bilinear(&g, xd, yd));
            }
        }
        let cx = tau / (g.hx * g.hx);
        let cy = tau / (g.hy * g.hy);
        let n = g.len();
        Ok(Self {
            grid: g,
            tau,
            stencils,
            diag: 1.0 + 2.0 * cx + 2.0 * cy,
            cx,
            cy,
            renorm_every: 1,
            steps: 0,
            scratch: [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]],
            last_cg_iterations: 0,
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Advance one time step in place.
    pub fn step(&mut self, state: &mut State2D) -> Result<()> {
        if state.grid != self.grid || state.u.len() != self.grid.len() {
            return Err(Error::SizeMismatch("state and stepper grids differ".into()));
        }
        let [rhs, r, z, pdir] = &mut self.scratch;
        for (k, st) in self.stencils.iter().enumerate() {
            rhs[k] = match st {
                None => 0.0,
                Some(s) => {
                    let mut v = 0.0;
                    for m in 0..4 {
                        if s.idx[m] != NONE {
                            v += s.w[m] * state.u[s.idx[m] as usize];
                        }
                    }
                    v
                }
            };
        }
        let grid = self.grid;
        let (diag, cx, cy) = (self.diag, self.cx, self.cy);
        let iters = cg_solve(&grid, diag, cx, cy, rhs, &mut state.u, r, z, pdir)?;
        self.last_cg_iterations = iters;
        state.t += self.tau;
        self.steps += 1;
        if self.renorm_every > 0 && self.steps.is_multiple_of(self.renorm_every) {
            state.renormalize()?;
        }
        Ok(())
    }
}

fn bilinear(g: &Grid2D, x: f64, y: f64) -> Option<Stencil> {
    if !(x.abs() <= g.lx && y.abs() <= g.ly) {
        return None;
    }
    // full-lattice coordinates, boundary ring at 0 and n + 1
    let fx = ((x + g.lx) / g.hx).clamp(0.0, (g.nx + 1) as f64);
    let fy = ((y + g.ly) / g.hy).clamp(0.0, (g.ny + 1) as f64);
    let i0 = (fx.floor() as usize).min(g.nx);
    let j0 = (fy.floor() as usize).min(g.ny);
    let (sx, sy) = (fx - i0 as f64, fy - j0 as f64);
    let corner = |fi: usize, fj: usize| -> u32 {
        if fi >= 1 && fi <= g.nx && fj >= 1 && fj <= g.ny {
            g.idx(fi - 1, fj - 1) as u32
        } else {
            NONE
        }
    };
    Some(Stencil {
        idx: [corner(i0, j0), corner(i0 + 1, j0), corner(i0, j0 + 1), corner(i0 + 1, j0 + 1)],
        w: [(1.0 - sx) * (1.0 - sy), sx * (1.0 - sy), (1.0 - sx) * sy, sx * sy],
    })
}

/// `y = (I - tau Δ_h) x` with Dirichlet rows.
fn apply(g: &Grid2D, diag: f64, cx: f64, cy: f64, x: &[f64], y: &mut [f64]) {
    let (nx, ny) = (g.nx, g.ny);
    for j in 0..ny {
        let row = j * nx;
        for i in 0..nx {
            let k = row + i;
            let mut v = diag * x[k];
            if i > 0 {
                v -= cx * x[k - 1];
            }
            if i + 1 < nx {
                v -= cx * x[k + 1];
            }
            if j > 0 {
                v -= cy * x[k - nx];
            }
            if j + 1 < ny {
                v -= cy * x[k + nx];
            }
            y[k] = v;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Jacobi-preconditioned CG for `(I - tau Δ_h) x = b`, warm-started from the incoming `x`.
#[allow(clippy::too_many_arguments)]
fn cg_solve(
    g: &Grid2D,
    diag: f64,
    cx: f64,
    cy: f64,
    b: &[f64],
    x: &mut [f64],
    r: &mut [f64],
    z: &mut [f64],
    p: &mut [f64],
) -> Result<usize> {
    let bnorm = dot(b, b).sqrt();
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(0);
    }
    apply(g, diag, cx, cy, x, r);
    for k in 0..r.len() {
        r[k] = b[k] - r[k];
        z[k] = r[k] / diag;
    }
    p.copy_from_slice(z);
    let mut rz = dot(r, z);
    let mut ap = vec![0.0; x.len()];
    for it in 0..CG_MAX_ITER {
        let rn = dot(r, r).sqrt();
        if rn <= CG_RTOL * bnorm {
            return Ok(it);
        }
        apply(g, diag, cx, cy, p, &mut ap);
        let alpha = rz / dot(p, &ap);
        for k in 0..x.len() {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
            z[k] = r[k] / diag;
        }
        let rz_new = dot(r, z);
        let beta = rz_new / rz;
        rz = rz_new;
        for k in 0..p.len() {
            p[k] = z[k] + beta * p[k];
        }
    }
    let residual = dot(r, r).sqrt() / bnorm;
    Err(Error::CgNoConvergence { iterations: CG_MAX_ITER, residual })
}

/// One step from scratch (builds the stencils each call).
pub fn step(state: &State2D, field: &Field2D, p: f64) -> Result<State2D> {
    let mut s = state.clone();
    Stepper::new(field, p, state.tau)?.step(&mut s)?;
    Ok(s)
}

/// Norm history point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormSample {
    pub t: f64,
    pub log_l2: f64,
    pub log_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub samples: Vec<NormSample>,
    pub rate_l2: f64,
    pub rate_max: f64,
    pub window: [f64; 2],
    /// Rates over the two halves of the window agree to `plateau_tol`.
    pub plateau_flag: bool,
    pub plateau_tol: f64,
    /// `rate_l2`, the estimate of `lambda_1`.
    pub lambda_est: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayOptions {
    pub t_end: f64,
    pub tau: f64,
    /// Fit window; defaults to the last 40% of the run.
    pub window: Option<[f64; 2]>,
    pub plateau_tol: f64,
}

impl Default for DecayOptions {
    fn default() -> Self {
        Self { t_end: 2.0, tau: DEFAULT_TAU, window: None, plateau_tol: 1e-2 }
    }
}

/// Least-squares slope of `y` against `x`.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Fit decay rates to a recorded norm history.
pub fn fit_decay(samples: Vec<NormSample>, window: [f64; 2], plateau_tol: f64) -> Result<DecayFit> {
    let sel: Vec<&NormSample> = samples.iter().filter(|s| s.t >= window[0] && s.t <= window[1] + 1e-12).collect();
    if sel.len() < 10 {
        return Err(Error::DecayFit(format!("window {window:?} holds {} samples, need at least 10", sel.len())));
    }
    let t: Vec<f64> = sel.iter().map(|s| s.t).collect();
    let l2: Vec<f64> = sel.iter().map(|s| s.log_l2).collect();
    let mx: Vec<f64> = sel.iter().map(|s| s.log_max).collect();
    if l2.iter().chain(&mx).any(|v| !v.is_finite()) {
        return Err(Error::DecayFit("norm history is not finite".into()));
    }
    let rate_l2 = -ls_slope(&t, &l2);
    let rate_max = -ls_slope(&t, &mx);
    let half = t.len() / 2;
    let r1 = -ls_slope(&t[..half], &l2[..half]);
    let r2 = -ls_slope(&t[half..], &l2[half..]);
    let scale = rate_l2.abs().max(1e-300);
    let plateau_flag = (r1 - r2).abs() <= plateau_tol * scale && (rate_l2 - rate_max).abs() <= plateau_tol * scale;
    Ok(DecayFit { samples, rate_l2, rate_max, window, plateau_flag, plateau_tol, lambda_est: rate_l2 })
}

/// Run to `t_end` from `init`, record norms every step and fit the decay rate.
pub fn estimate_decay(field: &Field2D, p: f64, init: &InitialCondition, opts: &DecayOptions) -> Result<(DecayFit, State2D)> {
    estimate_decay_with(field, p, init, opts, |_, _| Ok(()))
}

/// [`estimate_decay`] with a hook called after every step with `(state, step)`.
pub fn estimate_decay_with(
    field: &Field2D,
    p: f64,
    init: &InitialCondition,
    opts: &DecayOptions,
    mut on_step: impl FnMut(&State2D, usize) -> Result<()>,
) -> Result<(DecayFit, State2D)> {
    if !(opts.t_end > 0.0) {
        return Err(Error::InvalidParameter(format!("t_end must be positive, got {}", opts.t_end)));
    }
    let mut state = State2D::new(field.grid, init, opts.tau)?;
    if state.u.iter().any(|&v| v < 0.0) || state.u.iter().all(|&v| v == 0.0) {
        return Err(Error::InvalidParameter("initial data must be nonnegative and nonzero".into()));
    }
    let window = opts.window.unwrap_or([0.6 * opts.t_end, opts.t_end]);
    if !(window[0] < window[1] && window[0] >= 0.0 && window[1] <= opts.t_end + 1e-12) {
        return Err(Error::InvalidParameter(format!("window {window:?} must lie inside (0, {}]", opts.t_end)));
    }
    let mut stepper = Stepper::new(field, p, opts.tau)?;
    let steps = (opts.t_end / opts.tau).round() as usize;
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(NormSample { t: 0.0, log_l2: state.log_l2_norm(), log_max: state.log_max_norm() });
    for k in 1..=steps {
        stepper.step(&mut state)?;
        if state.u.iter().all(|&v| v == 0.0) {
            return Err(Error::ZeroState(format!("solution vanished at t = {}", state.t)));
        }
        on_step(&state, k)?;
        samples.push(NormSample { t: state.t, log_l2: state.log_l2_norm(), log_max: state.log_max_norm() });
    }
    Ok((fit_decay(samples, window, opts.plateau_tol)?, state))
}

/// First-order Richardson combination of rates at `(h, tau)` and `(h/2, tau/2)`.
pub fn richardson_first_order(coarse: f64, fine: f64) -> f64 {
    2.0 * fine - coarse
}

/// Profile normalised to unit maximum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub grid: Grid2D,
    pub values: Vec<f64>,
}

/// Samples `(s, value)` along a segment, `s` the arc length from the start.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub from: [f64; 2],
    pub to: [f64; 2],
    pub s: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn extract_profile(state: &State2D) -> Result<Profile> {
    let m = state.u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(m > 0.0) {
        return Err(Error::ZeroState("profile needs a positive maximum".into()));
    }
    Ok(Profile { grid: state.grid, values: state.u.iter().map(|v| v / m).collect() })
}

impl Profile {
    /// Bilinear interpolation with zero boundary values; `0` outside the domain.
    pub fn at(&self, x: f64, y: f64) -> f64 {
        match bilinear(&self.grid, x, y) {
            None => 0.0,
            Some(s) => (0..4).filter(|&m| s.idx[m] != NONE).map(|m| s.w[m] * self.values[s.idx[m] as usize]).sum(),
        }
    }

    /// Section along the segment from `a` to `b` with `samples` points.
    pub fn section(&self, a: [f64; 2], b: [f64; 2], samples: usize) -> Section {
        let samples = samples.max(2);
        let len = (b[0] - a[0]).hypot(b[1] - a[1]);
        let mut s = Vec::with_capacity(samples);
        let mut values = Vec::with_capacity(samples);
        for k in 0..samples {
            let t = k as f64 / (samples - 1) as f64;
            let (x, y) = (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]));
            s.push(t * len);
            values.push(self.at(x, y));
        }
        Section { from: a, to: b, s, values }
    }

    /// Section along `x2 = 0` at the interior nodes of the `x1` axis.
    pub fn section_x2_zero(&self) -> Section {
        let g = &self.grid;
        let samples = g.nx + 2;
        self.section([-g.lx, 0.0], [g.lx, 0.0], samples)
    }

    /// `(min, max)` over interior nodes inside the disk.
    pub fn range_in_disk(&self, center: [f64; 2], radius: f64) -> Option<(f64, f64)> {
        let g = &self.grid;
        let mut out: Option<(f64, f64)> = None;
        for j in 0..g.ny {
            for i in 0..g.nx {
                let (x, y) = g.xy(i, j);
                if (x - center[0]).hypot(y - center[1]) <= radius {
                    let v = self.values[g.idx(i, j)];
                    out = Some(out.map_or((v, v), |(lo, hi)| (lo.min(v), hi.max(v))));
                }
            }
        }
        out
    }

    /// Fraction of `sum values` carried by nodes inside the disk.
    pub fn mass_fraction_in_disk(&self, center: [f64; 2], radius: f64) -> f64 {
        let g = &self.grid;
        let (mut inside, mut total) = (0.0, 0.0);
        for j in 0..g.ny {
            for i in 0..g.nx {
                let (x, y) = g.xy(i, j);
                let v = self.values[g.idx(i, j)];
                total += v;
                if (x - center[0]).hypot(y - center[1]) <= radius {
                    inside += v;
                }
            }
        }
        inside / total
    }
}

/// `v = exp(-p (b - b_ref)) u`, normalised to unit maximum.
pub fn adjoint_profile(state: &State2D, field: &Field2D, p: f64) -> Result<Profile> {
    let b = field.b_interior().ok_or(Error::MissingPotential)?;
    if b.len() != state.u.len() {
        return Err(Error::SizeMismatch("state and field grids differ".into()));
    }
    if state.u.iter().all(|&v| v <= 0.0) {
        return Err(Error::ZeroState("adjoint profile needs positive values".into()));
    }
    let peak = (0..b.len())
        .filter(|&k| state.u[k] > 0.0)
        .max_by(|&i, &k| (state.u[i].ln() - p * b[i]).total_cmp(&(state.u[k].ln() - p * b[k])))
        .expect("positive node");
    let b_ref = b[peak];
    let mut v: Vec<f64> = state.u.iter().zip(&b).map(|(u, bk)| u.max(0.0) * (-p * (bk - b_ref)).exp()).collect();
    let top = v.iter().copied().fold(0.0, f64::max);
    v.iter_mut().for_each(|x| *x /= top);
    Ok(Profile { grid: state.grid, values: v })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::potential::{build_field_2d, FieldKind};

    fn still(n: usize) -> Field2D {
        build_field_2d(FieldKind::Constant { c1: 0.0, c2: 0.0 }, Grid2D::new(1.0, 1.0, n, n).unwrap()).unwrap()
    }

    #[test]
    fn cosine_decays_by_discrete_factor() {
        let f = still(41);
        let g = f.grid;
        let tau = 1e-3;
        let s0 = State2D::new(g, &InitialCondition::Cosine, tau).unwrap();
        let mut stepper = Stepper::new(&f, 0.0, tau).unwrap();
        stepper.renorm_every = 0;
        let mut s = s0.clone();
        stepper.step(&mut s).unwrap();
        // discrete eigenvalue of the 5-point Laplacian for this mode
        let lam_h = 2.0 * 4.0 / (g.hx * g.hx) * (PI * g.hx / 4.0).sin().powi(2);
        let factor = 1.0 / (1.0 + tau * lam_h);
        for (a, b) in s.u.iter().zip(&s0.u) {
            assert!((a - factor * b).abs() < 1e-9);
        }
        assert!((factor - 1.0 / (1.0 + tau * PI * PI / 2.0)).abs() < 1e-5);
    }

    #[test]
    fn zero_stays_zero() {
        let f = still(11);
        let s = State2D::new(f.grid, &InitialCondition::Values(vec![0.0; 121]), 1e-3).unwrap();
        let mut st = Stepper::new(&f, 3.0, 1e-3).unwrap();
        st.renorm_every = 0;
        let mut s1 = s.clone();
        st.step(&mut s1).unwrap();
        assert!(s1.u.iter().all(|&v| v == 0.0));
        let mut s2 = s.clone();
        assert!(Stepper::new(&f, 3.0, 1e-3).unwrap().step(&mut s2).is_err());
    }

    #[test]
    fn renormalization_does_not_change_norms() {
        let f = build_field_2d(FieldKind::centered_vortex(), Grid2D::new(1.0, 1.0, 31, 31).unwrap()).unwrap();
        let mut logs = Vec::new();
        for every in [0, 1, 7] {
            let mut s = State2D::new(f.grid, &InitialCondition::Ones, 1e-3).unwrap();
            let mut st = Stepper::new(&f, 20.0, 1e-3).unwrap();
            st.renorm_every = every;
            for _ in 0..50 {
                st.step(&mut s).unwrap();
            }
            logs.push(s.log_l2_norm());
        }
        assert!((logs[0] - logs[1]).abs() < 1e-10 && (logs[0] - logs[2]).abs() < 1e-10);
    }

    #[test]
    fn max_principle() {
        let f = build_field_2d(FieldKind::two_vortices(), Grid2D::new(1.0, 1.0, 41, 41).unwrap()).unwrap();
        let mut s = State2D::new(f.grid, &InitialCondition::Ones, 5e-4).unwrap();
        let mut st = Stepper::new(&f, 50.0, 5e-4).unwrap();
        st.renorm_every = 0;
        for _ in 0..40 {
            st.step(&mut s).unwrap();
            assert!(s.u.iter().all(|&v| (-1e-12..=1.0 + 1e-12).contains(&v)));
        }
    }

    #[test]
    fn profile_and_sections() {
        let f = still(41);
        let s = State2D::new(f.grid, &InitialCondition::Cosine, 1e-3).unwrap();
        let prof = extract_profile(&s).unwrap();
        assert_eq!(prof.values.iter().copied().fold(0.0, f64::max), 1.0);
        let sec = prof.section_x2_zero();
        for (s, v) in sec.s.iter().zip(&sec.values) {
            let x = s - 1.0;
            assert!((v - (PI * x / 2.0).cos()).abs() < 1e-3);
        }
        let zero = State2D::new(f.grid, &InitialCondition::Values(vec![0.0; 41 * 41]), 1e-3).unwrap();
        assert!(extract_profile(&zero).is_err());
    }

    #[test]
    fn adjoint_at_zero_p() {
        let f = build_field_2d(FieldKind::centered_vortex(), Grid2D::new(1.0, 1.0, 21, 21).unwrap()).unwrap();
        let s = State2D::new(f.grid, &InitialCondition::Cosine, 1e-3).unwrap();
        let u = extract_profile(&s).unwrap();
        let v = adjoint_profile(&s, &f, 0.0).unwrap();
        for (a, b) in u.values.iter().zip(&v.values) {
            assert!((a - b).abs() < 1e-14);
        }
        let nob = Field2D::from_components(f.grid, f.a1.clone(), f.a2.clone()).unwrap();
        assert!(matches!(adjoint_profile(&s, &nob, 1.0), Err(Error::MissingPotential)));
    }

    #[test]
    fn short_window_rejected() {
        let f = still(11);
        let opts = DecayOptions { t_end: 0.01, tau: 1e-3, window: Some([0.005, 0.01]), plateau_tol: 1e-2 };
        assert!(matches!(estimate_decay(&f, 0.0, &InitialCondition::Ones, &opts), Err(Error::DecayFit(_))));
    }
}
