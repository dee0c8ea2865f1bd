//! Rigorous bounds on the principal eigenvalue: comparison of Schrödinger
//! potentials, `O(p^2)` envelopes, the no-decay certificate, and test-function
//! upper bounds built on potential wells.
//!
//! Well bounds are exact statements about the discrete pencil: the test
//! function is a grid function vanishing outside the well, and its weighted
//! quotient is evaluated with the same edge weights the solver uses.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Lattice;
use crate::logsum::LogSum;
use crate::potential::{liouville_q, DriftSamples};
use crate::wells::{basin_at_level, Well, WellSource};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub p: f64,
    /// Lower bound on `lambda_1`, `-inf` when none applies.
    pub lower: f64,
    /// Natural log of the upper bound, `+inf` when none applies.
    pub log_upper: f64,
    pub lower_source: String,
    pub upper_source: String,
    pub certified: bool,
    pub caveat: Option<String>,
}

impl BoundReport {
    pub fn upper(&self) -> f64 {
        self.log_upper.exp()
    }

    /// Whether `lambda` lies in `[lower, upper]` up to a relative `slack`.
    pub fn contains(&self, lambda: f64, slack: f64) -> bool {
        let up = lambda.ln() <= self.log_upper + slack;
        let lo = self.lower <= lambda + slack * lambda.abs();
        up && lo
    }
}

/// Closed interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, v: f64, slack: f64) -> bool {
        v >= self.lo - slack && v <= self.hi + slack
    }
}

/// `lambda_1(q1)` lies in `lam2 + [min(q1 - q2), max(q1 - q2)]`.
pub fn comparison_bounds(q1: &[f64], q2: &[f64], lam2: f64) -> Result<Interval> {
    if q1.len() != q2.len() || q1.is_empty() {
        return Err(Error::SizeMismatch(format!("potentials on {} and {} nodes", q1.len(), q2.len())));
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (a, b) in q1.iter().zip(q2) {
        let d = a - b;
        lo = lo.min(d);
        hi = hi.max(d);
    }
    Ok(Interval { lo: lam2 + lo, hi: lam2 + hi })
}

/// Interval for `lambda_1(p1) - lambda_1(p2)`, `p1 > p2 >= 0`, from
/// `q(p1) - q(p2) = ((p1 - p2)/(p1 + p2)) q(p1 + p2)`.
pub fn difference_interval(field: &impl DriftSamples, p1: f64, p2: f64) -> Result<Interval> {
    if !(p1 > p2 && p2 >= 0.0) {
        return Err(Error::InvalidParameter(format!("need p1 > p2 >= 0, got {p1}, {p2}")));
    }
    let q = liouville_q(field, p1 + p2)?;
    let f = (p1 - p2) / (p1 + p2);
    let lo = q.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(Interval { lo: f * lo, hi: f * hi })
}

/// Envelope `lambda_box - (p/2) sup div a + (p^2/4) inf |a|^2 <= lambda_1 <=
/// lambda_box - (p/2) inf div a + (p^2/4) sup |a|^2`.
pub fn p2_envelope(field: &impl DriftSamples, p: f64, lambda_box: Option<f64>) -> Result<BoundReport> {
    if !(p.is_finite() && p >= 0.0) {
        return Err(Error::InvalidParameter(format!("p must be finite and nonnegative, got {p}")));
    }
    let lam = lambda_box.unwrap_or_else(|| field.box_eigenvalue());
    let div = field.div_a();
    let asq = field.a_sq();
    let fold = |v: &[f64]| {
        v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
    };
    let (div_lo, div_hi) = fold(&div);
    let (a_lo, a_hi) = fold(&asq);
    let lower = lam - 0.5 * p * div_hi + 0.25 * p * p * a_lo;
    let upper = lam - 0.5 * p * div_lo + 0.25 * p * p * a_hi;
    let analytic = field.div_is_analytic();
    Ok(BoundReport {
        p,
        lower,
        log_upper: if upper > 0.0 { upper.ln() } else { f64::NEG_INFINITY },
        lower_source: "box eigenvalue plus inf q".into(),
        upper_source: "box eigenvalue plus sup q".into(),
        certified: analytic,
        caveat: (!analytic).then(|| "div a from centered differences of sampled a".to_string()),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoDecayCertificate {
    pub p0: f64,
    /// `min q(., p0) >= 0`.
    pub holds: bool,
    pub min_q: f64,
    /// Interior node attaining `min q` when the certificate fails.
    pub witness: Option<usize>,
    /// `p0 / 2` when `lambda_1` is known to be nondecreasing from there on.
    pub nondecreasing_from: Option<f64>,
    pub note: String,
}

/// Sufficient condition `inf q(., p0) >= 0` for the absence of exponential decay.
pub fn no_decay_certificate(field: &impl DriftSamples, p0: f64) -> Result<NoDecayCertificate> {
    if !(p0 > 0.0 && p0.is_finite()) {
        return Err(Error::InvalidParameter(format!("p0 must be positive, got {p0}")));
    }
    let q = liouville_q(field, p0)?;
    let (k, min_q) = q
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::InvalidGrid("empty grid".into()))?;
    let holds = min_q >= 0.0;
    let mut note = if holds {
        format!("q(., {p0}) >= 0: lambda_1 is nondecreasing for p >= {}, and b has no potential well", p0 / 2.0)
    } else {
        format!("q(., {p0}) < 0 at interior node {k}")
    };
    if !field.div_is_analytic() {
        note.push_str("; div a from differences (b may lack a bounded second derivative)");
    }
    Ok(NoDecayCertificate {
        p0,
        holds,
        min_q,
        witness: (!holds).then_some(k),
        nondecreasing_from: holds.then_some(p0 / 2.0),
        note,
    })
}

/// Upper bounds from the collar test function of one well.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WellBound {
    pub report: BoundReport,
    /// `ln(C) - omega p`.
    pub log_upper_explicit: f64,
    /// Log of the weighted quotient of the test function.
    pub log_upper_quotient: f64,
    pub log_c: f64,
    pub omega: f64,
    pub beta: f64,
    pub epsilon: f64,
    /// `|{b - min b <= beta}|` inside the well.
    pub core_measure: f64,
    /// `|N^eps|`: edges on which the test function varies, times the cell volume.
    pub collar_measure: f64,
}

/// Well parameters; `None` selects the defaults `beta = depth/4`,
/// `omega = depth/2` and the widest admissible collar.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct WellParams {
    pub epsilon: Option<f64>,
    pub beta: Option<f64>,
    pub omega: Option<f64>,
}

/// Shortest edge-path distance from every full node to the complement of `mask`.
fn distance_to_outside(lat: &Lattice, mask: &[bool]) -> Vec<f64> {
    let n = lat.full_len();
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    for (k, d) in dist.iter_mut().enumerate() {
        let inside = lat.interior_index(k).is_some_and(|i| mask[i]);
        if !inside {
            *d = 0.0;
            heap.push(Reverse((Ordered(0.0), k)));
        }
    }
    let mut nb = Vec::with_capacity(4);
    while let Some(Reverse((Ordered(d), k))) = heap.pop() {
        if d > dist[k] {
            continue;
        }
        lat.neighbors(k, &mut nb);
        for &(m, len) in &nb {
            let nd = d + len;
            if nd < dist[m] {
                dist[m] = nd;
                heap.push(Reverse((Ordered(nd), m)));
            }
        }
    }
    dist
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Ordered(f64);

impl Eq for Ordered {}

impl PartialOrd for Ordered {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordered {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

struct TestFunction {
    /// `u` on the full lattice.
    u: Vec<f64>,
    /// Edges `(a, b, len)` on which `u` varies.
    active: Vec<(usize, usize, f64)>,
}

fn build_test_function(lat: &Lattice, dist: &[f64], epsilon: f64) -> TestFunction {
    let u: Vec<f64> = dist.iter().map(|&d| (d / epsilon).min(1.0)).collect();
    let active = lat.edges().into_iter().filter(|&(a, b, _)| u[a] != u[b]).collect();
    TestFunction { u, active }
}

/// Collar condition: `b - bmin >= level` on the collar nodes and on every edge
/// where the test function varies.
fn collar_holds(source: &impl WellSource, b: &[f64], tf: &TestFunction, mask: &[bool], bmin: f64, level: f64) -> bool {
    let lat = source.lattice();
    let nodes_ok = (0..mask.len())
        .filter(|&i| mask[i])
        .all(|i| {
            let k = lat.full_index(i);
            tf.u[k] >= 1.0 || b[k] - bmin >= level
        });
    nodes_ok && tf.active.iter().all(|&(a, c, _)| source.edge_b(a, c) - bmin >= level)
}

/// Bound for a test function supported on `mask` with minimum `bmin` and depth `depth`.
fn collar_bound(
    source: &impl WellSource,
    mask: &[bool],
    bmin: f64,
    depth: f64,
    p: f64,
    params: WellParams,
) -> Result<WellBound> {
    if !(p.is_finite() && p >= 0.0) {
        return Err(Error::InvalidParameter(format!("p must be finite and nonnegative, got {p}")));
    }
    let lat = source.lattice();
    let b = source.b_full()?;
    if mask.len() != lat.interior_len() {
        return Err(Error::SizeMismatch("well mask and grid differ".into()));
    }
    let beta = params.beta.unwrap_or(0.25 * depth);
    let omega = params.omega.unwrap_or(0.5 * depth);
    if !(beta > 0.0 && omega > 0.0 && beta + omega < depth) {
        return Err(Error::Infeasible(format!(
            "need 0 < beta, 0 < omega, beta + omega < depth; got beta = {beta}, omega = {omega}, depth = {depth}"
        )));
    }
    let level = beta + omega;
    let dist = distance_to_outside(&lat, mask);
    let hmin = match lat {
        Lattice::Line { h, .. } => h,
        Lattice::Plane { hx, hy, .. } => hx.min(hy),
    };

    let (epsilon, tf) = match params.epsilon {
        Some(eps) => {
            if !(eps > 0.0) {
                return Err(Error::InvalidParameter(format!("collar width must be positive, got {eps}")));
            }
            let tf = build_test_function(&lat, &dist, eps);
            if !collar_holds(source, b, &tf, mask, bmin, level) {
                return Err(Error::Collar(format!(
                    "b - min b < beta + omega = {level} inside the collar of width {eps}"
                )));
            }
            (eps, tf)
        }
        None => {
            // the admissible widths form an initial segment of k = 1, 2, ...
            let kmax = (0..mask.len())
                .filter(|&i| mask[i])
                .map(|i| dist[lat.full_index(i)])
                .fold(0.0, f64::max)
                / hmin;
            let admissible = |k: usize| {
                let tf = build_test_function(&lat, &dist, k as f64 * hmin);
                collar_holds(source, b, &tf, mask, bmin, level).then_some(tf)
            };
            let first = admissible(1).ok_or_else(|| {
                Error::Collar(format!("no collar of one cell keeps b - min b >= beta + omega = {level}"))
            })?;
            let (mut lo, mut hi) = (1usize, (kmax.ceil() as usize).max(1) + 1);
            let mut best = first;
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                match admissible(mid) {
                    Some(tf) => {
                        lo = mid;
                        best = tf;
                    }
                    None => hi = mid,
                }
            }
            (lo as f64 * hmin, best)
        }
    };

    let vol = lat.cell_volume();
    let core = (0..mask.len())
        .filter(|&i| mask[i] && b[lat.full_index(i)] - bmin <= beta)
        .count();
    if core == 0 {
        return Err(Error::Infeasible(format!("no grid node of the well has b - min b <= beta = {beta}")));
    }
    let core_measure = core as f64 * vol;
    let collar_measure = tf.active.len() as f64 * vol;
    let log_c = -2.0 * epsilon.ln() - core_measure.ln() + collar_measure.ln();
    let log_upper_explicit = log_c - omega * p;

    let mut num = LogSum::new();
    for &(a, c, len) in &tf.active {
        let du = (tf.u[a] - tf.u[c]).abs() / len;
        num.add(-p * (source.edge_b(a, c) - bmin) + 2.0 * du.ln());
    }
    let mut den = LogSum::new();
    for (i, &m) in mask.iter().enumerate() {
        if m {
            let k = lat.full_index(i);
            den.add(-p * (b[k] - bmin) + 2.0 * tf.u[k].ln());
        }
    }
    let log_upper_quotient = num.value() - den.value();

    Ok(WellBound {
        report: BoundReport {
            p,
            lower: f64::NEG_INFINITY,
            log_upper: log_upper_quotient.min(log_upper_explicit),
            lower_source: "none".into(),
            upper_source: "collar test function".into(),
            certified: true,
            caveat: Some("bounds the eigenvalue of the discrete pencil on this grid".into()),
        },
        log_upper_explicit,
        log_upper_quotient,
        log_c,
        omega,
        beta,
        epsilon,
        core_measure,
        collar_measure,
    })
}

/// `lambda_1(p) <= C e^{-omega p}` and the sharper quotient of the same test function.
pub fn well_upper_bound(source: &impl WellSource, well: &Well, p: f64, params: WellParams) -> Result<WellBound> {
    collar_bound(source, &well.region_mask, well.min_value, well.depth, p, params)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiWellBound {
    pub m: usize,
    pub report: BoundReport,
    /// Common basin level (smallest barrier among the wells).
    pub level: f64,
    /// Smallest `omega` over the wells.
    pub omega: f64,
    pub per_well: Vec<WellBound>,
}

/// `lambda_m(p) <= max_j` (quotient of the `j`-th collar test function),
/// with the basins cut at the lowest barrier among the chosen wells.
pub fn multiwell_upper_bound(
    source: &impl WellSource,
    wells: &[Well],
    p: f64,
    params: &[WellParams],
) -> Result<MultiWellBound> {
    if wells.is_empty() {
        return Err(Error::InvalidParameter("need at least one well".into()));
    }
    if !params.is_empty() && params.len() != wells.len() {
        return Err(Error::SizeMismatch(format!("{} parameter sets for {} wells", params.len(), wells.len())));
    }
    let lat = source.lattice();
    let level = wells.iter().map(|w| w.barrier_value).fold(f64::INFINITY, f64::min);
    let masks =
        wells.iter().map(|w| basin_at_level(source, w.min_location, level)).collect::<Result<Vec<_>>>()?;

    // supports must be disjoint and not joined by an edge
    let mut owner = vec![usize::MAX; lat.interior_len()];
    for (j, mask) in masks.iter().enumerate() {
        for (i, &m) in mask.iter().enumerate() {
            if m {
                if owner[i] != usize::MAX {
                    return Err(Error::Overlap(format!("wells {} and {j} share node {i}", owner[i])));
                }
                owner[i] = j;
            }
        }
    }
    let mut nb = Vec::with_capacity(4);
    for (i, &o) in owner.iter().enumerate() {
        if o == usize::MAX {
            continue;
        }
        lat.neighbors(lat.full_index(i), &mut nb);
        for &(k, _) in &nb {
            if let Some(t) = lat.interior_index(k) {
                if owner[t] != usize::MAX && owner[t] != o {
                    return Err(Error::Overlap(format!("wells {o} and {} touch at node {i}", owner[t])));
                }
            }
        }
    }

    let mut per_well = Vec::with_capacity(wells.len());
    for (j, (w, mask)) in wells.iter().zip(&masks).enumerate() {
        let par = params.get(j).copied().unwrap_or_default();
        per_well.push(collar_bound(source, mask, w.min_value, level - w.min_value, p, par)?);
    }
    let log_q = per_well.iter().map(|b| b.log_upper_quotient).fold(f64::NEG_INFINITY, f64::max);
    let log_e = per_well.iter().map(|b| b.log_upper_explicit).fold(f64::NEG_INFINITY, f64::max);
    let omega = per_well.iter().map(|b| b.omega).fold(f64::INFINITY, f64::min);
    Ok(MultiWellBound {
        m: wells.len(),
        report: BoundReport {
            p,
            lower: f64::NEG_INFINITY,
            log_upper: log_q.min(log_e),
            lower_source: "none".into(),
            upper_source: format!("max over {} disjoint collar test functions", wells.len()),
            certified: true,
            caveat: Some("bounds the m-th eigenvalue of the discrete pencil on this grid".into()),
        },
        level,
        omega,
        per_well,
    })
}
