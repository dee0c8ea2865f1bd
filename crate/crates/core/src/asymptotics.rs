//! Large-`p` formulas for the principal eigenvalue, carried as natural logs.
//!
//! * [`product_formula`]: `lambda ~ (int_0^l e^{-pb})^{-1} (int_0^l e^{pb})^{-1}` for odd drifts;
//! * [`laplace_integral`] / [`laplace_predict`]: `int_0^L e^{-p g} ~ Gamma(1/mu + 1) p^{-1/mu}`;
//! * [`closed_form`]: the power-law, sine and quartic catalog.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::logsum::LogSum;
use crate::potential::{check_assumption_ab, AssumptionCheck, Potential1D, PotentialKind};

/// Log of a positive integral together with the log of an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogQuad {
    pub log_value: f64,
    pub abs_error_log: f64,
}

impl LogQuad {
    pub fn rel_error(&self) -> f64 {
        (self.abs_error_log - self.log_value).exp()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AsymptoticForm {
    ProductFormula,
    ClosedForm { catalog: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticValue {
    pub log_lambda: f64,
    pub form: AsymptoticForm,
    pub p: f64,
    /// False when the odd-drift / ordering hypothesis failed on the grid.
    pub reliable: bool,
    /// Relative quadrature error estimate (product formula only).
    pub rel_error: Option<f64>,
    pub diagnostic: Option<String>,
}

impl AsymptoticValue {
    /// `exp(log_lambda)` when it is representable.
    pub fn lambda(&self) -> Option<f64> {
        (self.log_lambda.abs() < 700.0).then(|| self.log_lambda.exp())
    }
}

/// Exponent change per sub-interval in the interpolated path.
const SUB_STEP: f64 = 0.05;
/// Panels whose exponent range exceeds this, or whose second difference exceeds
/// [`CURVATURE`], are integrated through a quadratic fit.
const RESOLVED: f64 = 0.05;
const CURVATURE: f64 = 2e-4;
/// Panels this far below the peak only need a coarse rule.
const NEGLIGIBLE: f64 = 60.0;
const MAX_SUB: usize = 1 << 16;

/// Quadratic in Newton form through three points.
#[derive(Debug, Clone, Copy)]
struct Quadratic {
    xa: f64,
    xb: f64,
    ya: f64,
    d1: f64,
    d2: f64,
}

impl Quadratic {
    fn through(x: [f64; 3], y: [f64; 3]) -> Self {
        let d1 = (y[1] - y[0]) / (x[1] - x[0]);
        let d12 = (y[2] - y[1]) / (x[2] - x[1]);
        let d2 = (d12 - d1) / (x[2] - x[0]);
        Self { xa: x[0], xb: x[1], ya: y[0], d1, d2 }
    }

    #[inline]
    fn eval(&self, x: f64) -> f64 {
        self.ya + (x - self.xa) * (self.d1 + self.d2 * (x - self.xb))
    }

    /// `(min, max)` of the quadratic on `[a, b]`.
    fn range(&self, a: f64, b: f64) -> (f64, f64) {
        let (fa, fb) = (self.eval(a), self.eval(b));
        let (mut lo, mut hi) = (fa.min(fb), fa.max(fb));
        if self.d2 != 0.0 {
            // Q' = d1 + d2 (2x - xa - xb)
            let xv = 0.5 * (self.xa + self.xb - self.d1 / self.d2);
            if xv > a && xv < b {
                let fv = self.eval(xv);
                lo = lo.min(fv);
                hi = hi.max(fv);
            }
        }
        (lo, hi)
    }
}

/// Composite Simpson of `e^{Q}` over `[a, b]` with `m` (even) sub-intervals, in logs.
fn log_simpson_quadratic(q: &Quadratic, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let mut acc = LogSum::new();
    for k in 0..=m {
        let w = if k == 0 || k == m {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc.add_weighted(w, q.eval(a + k as f64 * h));
    }
    acc.value() + (h / 3.0).ln()
}

/// `ln |e^a - e^b|`.
fn log_abs_diff(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + (-(lo - hi).exp_m1()).max(0.0).ln()
}

fn sub_count(q: &Quadratic, width: f64, spread: f64, top: f64, peak: f64) -> usize {
    if top < peak - NEGLIGIBLE {
        return 4;
    }
    let by_spread = spread / SUB_STEP;
    let by_curvature = width * (2.0 * q.d2.abs() / CURVATURE).sqrt();
    let m = by_spread.max(by_curvature).ceil().max(2.0) as usize;
    // a multiple of four keeps the half-resolution comparison a Simpson rule
    (m.div_ceil(4) * 4).min(MAX_SUB)
}

/// One panel `[a, b]` of `e^{Q}`: returns `(log value, log error)`.
fn interpolated_panel(q: &Quadratic, a: f64, b: f64, peak: f64) -> (f64, f64) {
    let (lo, hi) = q.range(a, b);
    let m = sub_count(q, b - a, hi - lo, hi, peak);
    let fine = log_simpson_quadratic(q, a, b, m);
    let coarse = log_simpson_quadratic(q, a, b, m / 2);
    (fine, log_abs_diff(fine, coarse))
}

/// `ln int e^{e(x)} dx` over `[x_0, x_last]` from samples `e_k = e(x_k)`.
///
/// Pairs of equal cells form Simpson panels on the samples when the exponent
/// varies by at most [`RESOLVED`] across them; otherwise (and for an odd
/// trailing cell or an unequal first cell) the exponent is replaced by the
/// quadratic through three neighbouring samples and integrated on a fine
/// sub-grid. The error estimate is Simpson against trapezoid (resolved) or
/// against the half-resolution sub-grid (interpolated).
pub fn log_integral_sampled(x: &[f64], e: &[f64]) -> Result<LogQuad> {
    let len = x.len();
    if len != e.len() {
        return Err(Error::SizeMismatch(format!("{} abscissae, {} samples", len, e.len())));
    }
    if len < 3 {
        return Err(Error::InvalidGrid("need at least three samples".into()));
    }
    if x.windows(2).any(|w| !(w[1] > w[0])) || e.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidParameter("abscissae must increase and samples be numbers".into()));
    }

    let quad_at = |k: usize| {
        let s = k.min(len - 3);
        Quadratic::through([x[s], x[s + 1], x[s + 2]], [e[s], e[s + 1], e[s + 2]])
    };

    // panel layout: (start index, cells)
    let mut panels = Vec::with_capacity(len / 2 + 1);
    let mut k = 0;
    while k + 1 < len {
        let paired = k + 2 < len && {
            let (h0, h1) = (x[k + 1] - x[k], x[k + 2] - x[k + 1]);
            (h0 - h1).abs() <= 1e-9 * h0.max(h1)
        };
        if paired {
            panels.push((k, 2));
            k += 2;
        } else {
            panels.push((k, 1));
            k += 1;
        }
    }

    let peak = panels
        .iter()
        .map(|&(k, c)| quad_at(k.saturating_sub(usize::from(c == 1 && k + 2 >= len))).range(x[k], x[k + c]).1)
        .fold(f64::NEG_INFINITY, f64::max)
        .max(e.iter().copied().fold(f64::NEG_INFINITY, f64::max));

    let mut value = LogSum::new();
    let mut error = LogSum::new();
    for &(k, cells) in &panels {
        let (a, b) = (x[k], x[k + cells]);
        let (v, err) = if cells == 2 {
            let q = quad_at(k);
            let (lo, hi) = q.range(a, b);
            let (e0, e1, e2) = (e[k], e[k + 1], e[k + 2]);
            let local_hi = hi.max(e0).max(e1).max(e2);
            let local_lo = lo.min(e0).min(e1).min(e2);
            if local_hi - local_lo <= RESOLVED && (e0 - 2.0 * e1 + e2).abs() <= CURVATURE {
                let h = x[k + 1] - x[k];
                let mut s = LogSum::new();
                s.add_weighted(h / 3.0, e0);
                s.add_weighted(4.0 * h / 3.0, e1);
                s.add_weighted(h / 3.0, e2);
                let mut t = LogSum::new();
                t.add_weighted(h / 2.0, e0);
                t.add_weighted(h, e1);
                t.add_weighted(h / 2.0, e2);
                (s.value(), log_abs_diff(s.value(), t.value()))
            } else {
                interpolated_panel(&q, a, b, peak)
            }
        } else {
            let start = if k + 2 < len { k } else { k - 1 };
            interpolated_panel(&quad_at(start), a, b, peak)
        };
        value.add(v);
        error.add(err);
    }
    Ok(LogQuad { log_value: value.value(), abs_error_log: error.value() })
}

/// Abscissae and `b` samples on `[0, l]`, with `x = 0` included exactly.
fn half_interval(pot: &Potential1D) -> (Vec<f64>, Vec<f64>) {
    let g = &pot.grid;
    let total = g.n + 2;
    let first = (0..total).find(|&j| g.x_full(j) >= -1e-9 * g.h).unwrap_or(total - 1);
    let mut xs = Vec::with_capacity(total - first + 1);
    let mut bs = Vec::with_capacity(total - first + 1);
    let x0 = g.x_full(first);
    if x0 > 1e-9 * g.h {
        // x = 0 sits on a cell midpoint
        let b0 = match &pot.b_mid {
            Some(mid) => mid[first - 1],
            None => Quadratic::through(
                [g.x_full(first - 1), x0, g.x_full(first + 1)],
                [pot.b[first - 1], pot.b[first], pot.b[first + 1]],
            )
            .eval(0.0),
        };
        xs.push(0.0);
        bs.push(b0);
        xs.push(x0);
    } else {
        xs.push(0.0);
    }
    bs.push(pot.b[first]);
    for j in first + 1..total {
        xs.push(g.x_full(j));
        bs.push(pot.b[j]);
    }
    (xs, bs)
}

/// `ln int_0^l e^{s p b}` for `s = +-1`.
pub fn log_exp_integral(pot: &Potential1D, p: f64, sign: f64) -> Result<LogQuad> {
    let (xs, bs) = half_interval(pot);
    let e: Vec<f64> = bs.iter().map(|b| sign * p * b).collect();
    log_integral_sampled(&xs, &e)
}

/// Product-formula prediction `-ln int_0^l e^{-pb} - ln int_0^l e^{pb}`.
pub fn product_formula(pot: &Potential1D, p: f64) -> Result<AsymptoticValue> {
    if !(p.is_finite() && p >= 0.0) {
        return Err(Error::InvalidParameter(format!("p must be finite and nonnegative, got {p}")));
    }
    let minus = log_exp_integral(pot, p, -1.0)?;
    let plus = log_exp_integral(pot, p, 1.0)?;
    let check: AssumptionCheck = check_assumption_ab(pot, None);
    let rel_error = minus.rel_error() + plus.rel_error();
    Ok(AsymptoticValue {
        log_lambda: -(minus.log_value + plus.log_value),
        form: AsymptoticForm::ProductFormula,
        p,
        reliable: check.holds,
        rel_error: Some(rel_error),
        diagnostic: (!check.holds).then_some(check.diagnostic),
    })
}

/// `ln(Gamma(1/mu + 1) p^{-1/mu})`.
pub fn laplace_predict(mu: f64, p: f64) -> Result<f64> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::InvalidParameter(format!("mu must be positive, got {mu}")));
    }
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("p must be positive, got {p}")));
    }
    Ok(ln_gamma(1.0 / mu + 1.0) - p.ln() / mu)
}

/// The function `g` of a Laplace integral.
pub enum LaplaceIntegrand<'a> {
    Analytic(&'a dyn Fn(f64) -> f64),
    /// Samples on increasing abscissae from `0` to `L`.
    Sampled { x: &'a [f64], g: &'a [f64] },
}

fn gauss_rule(order: usize) -> Vec<(f64, f64)> {
    GaussLegendre::new(NonZeroUsize::new(order).expect("positive order")).as_node_weight_pairs().to_vec()
}

/// `ln int_0^L e^{-p g(x)} dx` for `g(0) = 0`, `g ~ x^mu` near 0.
///
/// Analytic integrands use Gauss-Legendre on panels that grow geometrically
/// away from `x = 0`, both towards the origin and towards `L`, starting from
/// the Laplace width `p^{-1/mu}`; the error estimate compares 24- and
/// 12-point rules.
pub fn laplace_integral(g: LaplaceIntegrand<'_>, big_l: f64, mu: f64, p: f64) -> Result<LogQuad> {
    laplace_predict(mu, p)?;
    if !(big_l > 0.0 && big_l.is_finite()) {
        return Err(Error::InvalidParameter(format!("L must be positive, got {big_l}")));
    }
    match g {
        LaplaceIntegrand::Analytic(f) => {
            check_leading_power(f, mu, big_l)?;
            Ok(laplace_analytic(f, big_l, mu, p))
        }
        LaplaceIntegrand::Sampled { x, g } => {
            if x.len() != g.len() || x.len() < 3 {
                return Err(Error::SizeMismatch("sampled integrand needs matching arrays of length >= 3".into()));
            }
            if x[0].abs() > 1e-14 || g[0].abs() > 1e-12 || (x[x.len() - 1] - big_l).abs() > 1e-9 * big_l {
                return Err(Error::InvalidParameter("samples must span [0, L] with g(0) = 0".into()));
            }
            let k = 1;
            let ratio = g[k] / x[k].powf(mu);
            if !(ratio > 0.5 && ratio < 2.0) {
                return Err(Error::InvalidParameter(format!(
                    "g(x)/x^mu = {ratio} near 0; g is not of order x^{mu}"
                )));
            }
            let e: Vec<f64> = g.iter().map(|v| -p * v).collect();
            log_integral_sampled(x, &e)
        }
    }
}

fn check_leading_power(f: impl Fn(f64) -> f64, mu: f64, big_l: f64) -> Result<()> {
    if f(0.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!("g(0) = {} is not zero", f(0.0))));
    }
    let x = 1e-6 * big_l.min(1.0);
    let ratio = f(x) / x.powf(mu);
    if !(ratio - 1.0).abs().lt(&1e-2) {
        return Err(Error::InvalidParameter(format!(
            "x^-mu g(x) = {ratio} at x = {x:e}; expected 1 near the origin"
        )));
    }
    Ok(())
}

fn laplace_analytic(f: &dyn Fn(f64) -> f64, big_l: f64, mu: f64, p: f64) -> LogQuad {
    let width = p.powf(-1.0 / mu).min(big_l);
    let mut edges = vec![0.0];
    let mut inner: Vec<f64> = (1..=60).map(|k| width * 0.5f64.powi(k)).collect();
    inner.reverse();
    edges.extend(inner);
    let mut x = width;
    while x < big_l {
        edges.push(x);
        x *= 2.0;
    }
    edges.push(big_l);

    let fine = gauss_rule(24);
    let coarse = gauss_rule(12);
    let panel = |rule: &[(f64, f64)], a: f64, b: f64| {
        let (c, r) = (0.5 * (a + b), 0.5 * (b - a));
        let mut acc = LogSum::new();
        for &(t, w) in rule {
            acc.add_weighted(w * r, -p * f(c + r * t));
        }
        acc.value()
    };
    let mut value = LogSum::new();
    let mut rough = LogSum::new();
    for w in edges.windows(2) {
        value.add(panel(&fine, w[0], w[1]));
        rough.add(panel(&coarse, w[0], w[1]));
    }
    let v = value.value();
    LogQuad { log_value: v, abs_error_log: log_abs_diff(v, rough.value()) }
}

/// Closed-form asymptotics of the catalog potentials on `(-l, l)`.
pub fn closed_form(kind: PotentialKind, l: f64, p: f64) -> Result<AsymptoticValue> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("p must be positive, got {p}")));
    }
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::InvalidParameter(format!("l must be positive, got {l}")));
    }
    let lp = p.ln();
    let (log_lambda, catalog) = match kind {
        PotentialKind::PowerLaw { alpha } => {
            if !(alpha >= 1.0) {
                return Err(Error::InvalidParameter(format!("power law needs alpha >= 1, got {alpha}")));
            }
            let inv = 1.0 / alpha;
            let v = inv * inv.ln() + (alpha - 1.0) * l.ln() - ln_gamma(inv + 1.0) + (inv + 1.0) * lp
                - l.powf(alpha) / alpha * p;
            (v, format!("power-law(alpha={alpha})"))
        }
        PotentialKind::Sine => {
            if !(l < 2.0 * PI) {
                return Err(Error::InvalidParameter(format!("sine closed form needs 0 < l < 2 pi, got {l}")));
            }
            if (l - PI).abs() <= 1e-9 * PI {
                // both integrals are half-Gaussians at an end point
                ((2.0 / PI).ln() + lp - 2.0 * p, "sine(l=pi)".to_string())
            } else if l < PI {
                let v = (2f64.sqrt() * l.sin() / PI.sqrt()).ln() + 1.5 * lp - (1.0 - l.cos()) * p;
                (v, "sine(0<l<pi)".to_string())
            } else {
                ((1.0 / PI).ln() + lp - 2.0 * p, "sine(pi<l<2pi)".to_string())
            }
        }
        PotentialKind::Quartic => {
            if !(l > 2f64.sqrt()) {
                return Err(Error::InvalidParameter(format!("quartic closed form needs l > sqrt 2, got {l}")));
            }
            let a = l * l * l - l;
            let b = 0.25 * (l * l - 1.0) * (l * l - 1.0);
            ((a / PI.sqrt()).ln() + 1.5 * lp - b * p, "quartic".to_string())
        }
        PotentialKind::Constant { .. } => {
            return Err(Error::InvalidParameter("constant drift has no decaying closed form".into()))
        }
    };
    Ok(AsymptoticValue {
        log_lambda,
        form: AsymptoticForm::ClosedForm { catalog },
        p,
        reliable: true,
        rel_error: None,
        diagnostic: None,
    })
}

/// The sum rule for separable drifts next to the naive full-domain product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparableCaveat {
    pub p: f64,
    pub per_axis: Vec<AsymptoticValue>,
    /// `ln sum_i lambda_i` (correct for a product domain).
    pub log_sum: f64,
    /// `-d ln 4 + sum_i ln lambda_i` (the product formula applied on the whole box).
    pub log_naive_product: f64,
}

pub fn separable_product_caveat(pots: &[Potential1D], p: f64) -> Result<SeparableCaveat> {
    if pots.is_empty() {
        return Err(Error::InvalidParameter("need at least one axis".into()));
    }
    let per_axis = pots.iter().map(|pot| product_formula(pot, p)).collect::<Result<Vec<_>>>()?;
    let logs: Vec<f64> = per_axis.iter().map(|v| v.log_lambda).collect();
    let log_sum = crate::logsum::log_sum_exp(&logs);
    let log_naive_product = -(pots.len() as f64) * 4f64.ln() + logs.iter().sum::<f64>();
    Ok(SeparableCaveat { p, per_axis, log_sum, log_naive_product })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid1D;
    use crate::potential::build_potential_1d;

    fn pot(kind: PotentialKind, l: f64, n: usize) -> Potential1D {
        build_potential_1d(kind, Grid1D::new(l, n).unwrap()).unwrap()
    }

    #[test]
    fn flat_potential_gives_inverse_square() {
        for n in [100, 101] {
            let v = product_formula(&pot(PotentialKind::Constant { c: 0.0 }, 2.0, n), 37.0).unwrap();
            assert!((v.log_lambda + 2.0 * 2f64.ln()).abs() < 1e-13, "{}", v.log_lambda);
        }
    }

    #[test]
    fn sampled_integral_of_gaussian() {
        // int_0^1 e^{-p x^2/2} = sqrt(pi/(2p)) erf(sqrt(p/2))
        let x: Vec<f64> = (0..=1000).map(|k| k as f64 / 1000.0).collect();
        for p in [1.0, 100.0, 1e4, 1e7] {
            let e: Vec<f64> = x.iter().map(|x| -p * x * x / 2.0).collect();
            let q = log_integral_sampled(&x, &e).unwrap();
            let exact = (PI / (2.0 * p)).sqrt().ln() + statrs::function::erf::erf((p / 2.0).sqrt()).ln();
            assert!((q.log_value - exact).abs() < 1e-7, "p={p}: {} vs {exact}", q.log_value);
            assert!(q.rel_error() < 1e-3);
        }
    }

    #[test]
    fn laplace_linear_exact() {
        let g = |x: f64| x;
        for p in [1.0, 10.0, 1e3, 1e5] {
            let q = laplace_integral(LaplaceIntegrand::Analytic(&g), 2.0, 1.0, p).unwrap();
            let exact = (-(-2.0 * p).exp_m1() / p).ln();
            assert!((q.log_value - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn laplace_rejects_bad_input() {
        let g = |x: f64| x * x;
        assert!(laplace_integral(LaplaceIntegrand::Analytic(&g), 1.0, 0.0, 10.0).is_err());
        assert!(laplace_integral(LaplaceIntegrand::Analytic(&g), 1.0, 1.0, 10.0).is_err());
        let shifted = |x: f64| 1.0 + x;
        assert!(laplace_integral(LaplaceIntegrand::Analytic(&shifted), 1.0, 1.0, 10.0).is_err());
    }

    #[test]
    fn linear_drift_closed_form_value() {
        let v = closed_form(PotentialKind::PowerLaw { alpha: 2.0 }, 1.0, 40.0).unwrap();
        let expected = (2.0 / PI).sqrt() * 40f64.powf(1.5) * (-20f64).exp();
        assert!((v.lambda().unwrap() / expected - 1.0).abs() < 1e-12);
        assert!((v.lambda().unwrap() - 4.16e-7).abs() < 0.01e-7);
    }

    #[test]
    fn unit_power_law_coefficient() {
        let v = closed_form(PotentialKind::PowerLaw { alpha: 1.0 }, 1.0, 10.0).unwrap();
        assert!((v.log_lambda - (2.0 * 10f64.ln() - 10.0)).abs() < 1e-12);
    }

    #[test]
    fn closed_form_ranges() {
        assert!(closed_form(PotentialKind::Sine, 7.0, 10.0).is_err());
        assert!(closed_form(PotentialKind::Quartic, 1.2, 10.0).is_err());
        assert!(closed_form(PotentialKind::PowerLaw { alpha: 0.5 }, 1.0, 10.0).is_err());
        assert!(closed_form(PotentialKind::Constant { c: 1.0 }, 1.0, 10.0).is_err());
    }

    #[test]
    fn product_matches_closed_form_at_large_p() {
        let cases = [
            (PotentialKind::PowerLaw { alpha: 2.0 }, 1.0),
            (PotentialKind::Sine, PI),
            (PotentialKind::Sine, 1.5 * PI),
            (PotentialKind::Sine, 0.5 * PI),
            (PotentialKind::Quartic, 2.0),
        ];
        for (kind, l) in cases {
            let pt = pot(kind, l, 4001);
            let p = 2000.0;
            let a = product_formula(&pt, p).unwrap();
            let b = closed_form(kind, l, p).unwrap();
            assert!((a.log_lambda - b.log_lambda).abs() < 0.02, "{kind:?} l={l}: {} vs {}", a.log_lambda, b.log_lambda);
        }
    }

    #[test]
    fn caveat_single_axis() {
        let pt = pot(PotentialKind::PowerLaw { alpha: 2.0 }, 1.0, 401);
        let c = separable_product_caveat(std::slice::from_ref(&pt), 40.0).unwrap();
        assert!((c.log_sum - c.per_axis[0].log_lambda).abs() < 1e-14);
    }
}
