use serde::{Deserialize, Serialize};

use super::pencil::{Factor, TridiagPencil};
use crate::error::{Error, Result};

pub const DEFAULT_RTOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Smallest shift the bisection resolves.
const SHIFT_FLOOR: f64 = 1e-300;
const MAX_NUDGES: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    /// 1-based index `k` of `lambda_k`.
    pub index: usize,
    pub lambda: f64,
    /// Nodal eigenfunction, `max |u| = 1`; positive for the principal pair.
    pub u: Vec<f64>,
    /// `||A u - lambda M u||_inf / (||A||_inf ||u||_inf)`.
    pub residual: f64,
    pub iterations: usize,
}

fn residual(pencil: &TridiagPencil, lambda: f64, u: &[f64]) -> f64 {
    let au = pencil.apply_a(u);
    let r = au
        .iter()
        .zip(u)
        .zip(&pencil.diag_m)
        .map(|((a, v), m)| (a - lambda * m * v).abs())
        .fold(0.0, f64::max);
    let unorm = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    r / (pencil.norm_a() * unorm)
}

fn normalize_max(u: &mut [f64]) {
    let (mut peak, mut sign) = (0.0f64, 1.0);
    for &v in u.iter() {
        if v.abs() > peak {
            peak = v.abs();
            sign = v.signum();
        }
    }
    if peak > 0.0 {
        let s = sign / peak;
        u.iter_mut().for_each(|v| *v *= s);
    }
}

/// Principal eigenpair by inverse iteration from the all-ones vector.
///
/// Each sweep solves `A x = M u` with the positive factorization and takes
/// the quotient `u^T M u / u^T M x`; both sums have nonnegative terms, so the
/// eigenvalue keeps relative accuracy even when it is exponentially small.
pub fn principal_eig(pencil: &TridiagPencil, rtol: f64) -> Result<EigenPair> {
    principal_eig_with(pencil, rtol, DEFAULT_MAX_ITER)
}

pub fn principal_eig_with(pencil: &TridiagPencil, rtol: f64, max_iter: usize) -> Result<EigenPair> {
    let factor = Factor::new(pencil, 0.0).ok_or(Error::PivotBreakdown { shift: 0.0, retries: 0 })?;
    let m = &pencil.diag_m;
    let mut u = vec![1.0; pencil.n];
    let mut lambda = f64::INFINITY;
    let mut last_step = f64::INFINITY;
    let mut gap = f64::NAN;
    for it in 1..=max_iter {
        let rhs: Vec<f64> = u.iter().zip(m).map(|(v, w)| v * w).collect();
        let x = factor.solve(&rhs);
        let num: f64 = rhs.iter().zip(&u).map(|(r, v)| r * v).sum();
        let den: f64 = rhs.iter().zip(&x).map(|(r, v)| r * v).sum();
        let next = num / den;
        let step = (lambda - next).abs();
        if last_step.is_finite() && last_step > 0.0 {
            gap = step / last_step;
        }
        last_step = step;
        lambda = next;
        u = x;
        normalize_max(&mut u);
        if step <= rtol * lambda {
            let residual = residual(pencil, lambda, &u);
            return Ok(EigenPair { index: 1, lambda, u, residual, iterations: it });
        }
    }
    Err(Error::NoConvergence { iterations: max_iter, last_quotient: lambda, gap_estimate: gap })
}

/// Inertia of `A - sigma M`, nudging the shift off exact pivot breakdowns.
fn count_below(pencil: &TridiagPencil, sigma: f64) -> Result<(usize, f64)> {
    let mut s = sigma;
    for retry in 0..=MAX_NUDGES {
        if let Some(f) = Factor::new(pencil, s) {
            return Ok((f.negative_count(), s));
        }
        s = sigma * (1.0 + 4.0 * f64::EPSILON * (retry as f64 + 1.0));
    }
    Err(Error::PivotBreakdown { shift: sigma, retries: MAX_NUDGES })
}

/// Golden-ratio start vector: deterministic and free of any grid symmetry.
fn start_vector(n: usize) -> Vec<f64> {
    const PHI: f64 = 0.618_033_988_749_894_9;
    (0..n).map(|i| 0.5 + ((i as f64 + 1.0) * PHI).fract()).collect()
}

fn m_orthogonalize(u: &mut [f64], basis: &[Vec<f64>], mass: &[f64]) {
    for v in basis {
        let num: f64 = u.iter().zip(v).zip(mass).map(|((a, b), m)| a * b * m).sum();
        let den: f64 = v.iter().zip(mass).map(|(b, m)| b * b * m).sum();
        let c = num / den;
        u.iter_mut().zip(v).for_each(|(a, b)| *a -= c * b);
    }
}

/// First `m` eigenpairs by Sturm-count bisection and shifted inverse iteration.
///
/// Brackets are refined in the log domain while they span more than a factor
/// of four, so exponentially small eigenvalues are located to relative width
/// `rtol`. Eigenvalues that coincide to within `rtol` are returned as a cluster
/// whose vectors are `M`-orthonormalized in no particular order.
pub fn eigs_bisection(pencil: &TridiagPencil, m: usize, rtol: f64) -> Result<Vec<EigenPair>> {
    if m == 0 || m > pencil.n {
        return Err(Error::InvalidParameter(format!("requested {m} eigenvalues of a size-{} pencil", pencil.n)));
    }
    if !(rtol > 0.0) {
        return Err(Error::InvalidParameter(format!("rtol must be positive, got {rtol}")));
    }
    let upper = pencil.gershgorin_upper() * (1.0 + 1e-12);
    let (floor_count, _) = count_below(pencil, SHIFT_FLOOR)?;
    if floor_count > 0 {
        return Err(Error::Unresolvable { index: 1 });
    }
    // (shift, count) probes shared between eigenvalues
    let mut probes: Vec<(f64, usize)> = vec![(SHIFT_FLOOR, 0), (upper, pencil.n)];
    let mut values = Vec::with_capacity(m);
    for k in 1..=m {
        let mut lo = probes.iter().filter(|p| p.1 < k).map(|p| p.0).fold(SHIFT_FLOOR, f64::max);
        let mut hi = probes.iter().filter(|p| p.1 >= k).map(|p| p.0).fold(upper, f64::min);
        while hi - lo > rtol * hi {
            let mid = if hi > 4.0 * lo { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
            if mid <= lo || mid >= hi {
                break;
            }
            let (c, s) = count_below(pencil, mid)?;
            probes.push((s, c));
            if c >= k {
                hi = s;
            } else {
                lo = s;
            }
        }
        values.push(0.5 * (lo + hi));
    }

    let mass = &pencil.diag_m;
    let mut pairs: Vec<EigenPair> = Vec::with_capacity(m);
    for (k, &lambda) in values.iter().enumerate() {
        let basis: Vec<Vec<f64>> = pairs.iter().map(|p| p.u.clone()).collect();
        let mut shift = lambda;
        let factor = {
            let mut f = None;
            for retry in 0..=MAX_NUDGES {
                if let Some(x) = Factor::new(pencil, shift) {
                    f = Some(x);
                    break;
                }
                shift = lambda * (1.0 + 4.0 * f64::EPSILON * (retry as f64 + 1.0));
            }
            f.ok_or(Error::PivotBreakdown { shift: lambda, retries: MAX_NUDGES })?
        };
        let mut u = if k == 0 { vec![1.0; pencil.n] } else { start_vector(pencil.n) };
        m_orthogonalize(&mut u, &basis, mass);
        normalize_max(&mut u);
        let mut iterations = 0;
        for _ in 0..6 {
            iterations += 1;
            let rhs: Vec<f64> = u.iter().zip(mass).map(|(v, w)| v * w).collect();
            let mut x = factor.solve(&rhs);
            m_orthogonalize(&mut x, &basis, mass);
            normalize_max(&mut x);
            let change = x.iter().zip(&u).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            u = x;
            if change < 1e-12 {
                break;
            }
        }
        if k == 0 && u.iter().sum::<f64>() < 0.0 {
            u.iter_mut().for_each(|v| *v = -*v);
        }
        let residual = residual(pencil, lambda, &u);
        pairs.push(EigenPair { index: k + 1, lambda, u, residual, iterations });
    }
    Ok(pairs)
}
