//! Parameter sweeps over `p` for a 1D catalog potential and the fit of the
//! decay exponent `b0` in `ln(1/lambda_1) ~ b0 p + gamma ln p + c`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{closed_form, product_formula};
use crate::bounds::{p2_envelope, well_upper_bound, WellParams};
use crate::eigen::{principal_for, MAX_WEIGHT_SPREAD};
use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::potential::{build_potential_1d, Potential1D, PotentialKind};
use crate::wells::detect_wells;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: f64,
    /// Solver eigenvalue when the weight spread is in range.
    pub lambda_solver: Option<f64>,
    pub solver_error: Option<String>,
    /// Product-formula log value.
    pub log_lambda_asym: Option<f64>,
    /// Closed-form log value, when the catalog has one for this domain.
    pub log_lambda_closed: Option<f64>,
    /// `min(explicit, quotient)` well bound, else the envelope upper bound.
    pub log_upper: f64,
    pub log_upper_explicit: Option<f64>,
    pub log_upper_quotient: Option<f64>,
    pub lower: f64,
    /// `ln lambda` used for the fit: the solver when available, else the product formula.
    pub log_lambda: Option<f64>,
    /// `(1/p) ln(1/lambda)`.
    pub rate_running: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct B0Fit {
    pub b0: f64,
    pub gamma: f64,
    pub c: f64,
    /// Two standard errors of `b0`; `None` without residual degrees of freedom.
    pub half_width: Option<f64>,
    pub rows_used: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub kind: PotentialKind,
    pub l: f64,
    pub n: usize,
    pub rows: Vec<SweepRow>,
    pub fit: Option<B0Fit>,
    pub fit_note: Option<String>,
    pub b0_detected: Option<f64>,
    /// `|fitted_b0 - b0_detected|`.
    pub b0_gap: Option<f64>,
}

fn sweep_row(pot: &Potential1D, kind: PotentialKind, p: f64, rtol: f64) -> Result<SweepRow> {
    let spread = p * (pot.b_max() - pot.b_min());
    let (lambda_solver, solver_error) = if spread <= MAX_WEIGHT_SPREAD {
        match principal_for(pot, p, rtol) {
            Ok(pair) => (Some(pair.lambda), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, Some(Error::WeightRange { spread, limit: MAX_WEIGHT_SPREAD }.to_string()))
    };
    let log_lambda_asym = if p > 0.0 { product_formula(pot, p).ok().map(|v| v.log_lambda) } else { None };
    let log_lambda_closed = closed_form(kind, pot.grid.l, p).ok().map(|v| v.log_lambda);
    let env = p2_envelope(pot, p, None)?;
    let (mut log_upper, mut log_upper_explicit, mut log_upper_quotient) = (env.log_upper, None, None);
    let wells = detect_wells(pot, None)?;
    if let Some(d) = wells.deepest {
        if let Ok(wb) = well_upper_bound(pot, &wells.wells[d], p, WellParams::default()) {
            log_upper = log_upper.min(wb.report.log_upper);
            log_upper_explicit = Some(wb.log_upper_explicit);
            log_upper_quotient = Some(wb.log_upper_quotient);
        }
    }
    let log_lambda = lambda_solver.map(f64::ln).or(log_lambda_asym);
    let rate_running = log_lambda.filter(|_| p > 0.0).map(|ll| -ll / p);
    Ok(SweepRow {
        p,
        lambda_solver,
        solver_error,
        log_lambda_asym,
        log_lambda_closed,
        log_upper,
        log_upper_explicit,
        log_upper_quotient,
        lower: env.lower,
        log_lambda,
        rate_running,
    })
}

/// Least-squares fit of `ln(1/lambda) = b0 p + gamma ln p + c` over rows with `rate_running > 0`.
pub fn fit_b0(rows: &[SweepRow]) -> std::result::Result<B0Fit, String> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.p > 0.0 && r.rate_running.is_some_and(|v| v > 0.0))
        .map(|r| (r.p, -r.log_lambda.expect("rate implies log")))
        .collect();
    if pts.len() < 3 {
        return Err(format!("not applicable: {} decaying rows, need at least 3", pts.len()));
    }
    let m = pts.len();
    let a = DMatrix::from_fn(m, 3, |i, j| match j {
        0 => pts[i].0,
        1 => pts[i].0.ln(),
        _ => 1.0,
    });
    let y = DVector::from_iterator(m, pts.iter().map(|t| t.1));
    let svd = a.clone().svd(true, true);
    let coef = svd.solve(&y, 1e-14).map_err(|e| format!("least squares failed: {e}"))?;
    let b0 = coef[0];
    if !(b0 > 0.0 && b0.is_finite()) {
        return Err(format!("not applicable: fitted slope {b0} is not positive"));
    }
    let half_width = (m > 3).then(|| {
        let resid = &y - &a * &coef;
        let s2 = resid.norm_squared() / (m - 3) as f64;
        let cov = (a.transpose() * &a).try_inverse().map(|inv| inv[(0, 0)] * s2);
        cov.map(|v| 2.0 * v.max(0.0).sqrt())
    });
    Ok(B0Fit { b0, gamma: coef[1], c: coef[2], half_width: half_width.flatten(), rows_used: m })
}

/// Run the sweep concurrently over `ps`; rows come back sorted by `p`.
pub fn run_sweep(kind: PotentialKind, l: f64, n: usize, ps: &[f64], rtol: f64) -> Result<SweepResult> {
    if ps.len() < 3 {
        return Err(Error::InvalidParameter(format!("a sweep needs at least 3 values of p, got {}", ps.len())));
    }
    if let Some(p) = ps.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
        return Err(Error::InvalidParameter(format!("p must be finite and nonnegative, got {p}")));
    }
    let pot = build_potential_1d(kind, Grid1D::new(l, n)?)?;
    let mut ps = ps.to_vec();
    ps.sort_by(f64::total_cmp);
    let rows: Vec<Result<SweepRow>> = ps.par_iter().map(|&p| sweep_row(&pot, kind, p, rtol)).collect();
    let mut ok = Vec::with_capacity(rows.len());
    let mut first_err = None;
    for r in rows {
        match r {
            Ok(row) => ok.push(row),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    if ok.iter().all(|r| r.log_lambda.is_none()) {
        return Err(first_err.unwrap_or_else(|| Error::InvalidParameter("no value of p produced an eigenvalue".into())));
    }
    let b0_detected = detect_wells(&pot, None)?.b0();
    let (fit, fit_note) = match fit_b0(&ok) {
        Ok(f) => (Some(f), None),
        Err(note) => (None, Some(note)),
    };
    let b0_gap = fit.as_ref().zip(b0_detected).map(|(f, b)| (f.b0 - b).abs());
    Ok(SweepResult { kind, l, n, rows: ok, fit, fit_note, b0_detected, b0_gap })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_drift_has_no_fit() {
        let r = run_sweep(PotentialKind::Constant { c: 1.0 }, 1.0, 401, &[2.0, 4.0, 8.0], 1e-10).unwrap();
        assert!(r.fit.is_none());
        assert!(r.fit_note.as_deref().unwrap().starts_with("not applicable"));
        let rates: Vec<f64> = r.rows.iter().map(|row| row.rate_running.unwrap()).collect();
        assert!(rates.iter().all(|&v| v < 0.0));
        assert!(rates.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn too_few_points() {
        assert!(run_sweep(PotentialKind::Sine, 3.0, 101, &[1.0, 2.0], 1e-10).is_err());
    }

    #[test]
    fn exact_model_recovered() {
        let rows: Vec<SweepRow> = [10.0f64, 20.0, 30.0, 40.0]
            .iter()
            .map(|&p| {
                let ll = -(0.5 * p - 1.5 * p.ln() + 0.3);
                SweepRow {
                    p,
                    lambda_solver: Some(ll.exp()),
                    solver_error: None,
                    log_lambda_asym: None,
                    log_lambda_closed: None,
                    log_upper: f64::INFINITY,
                    log_upper_explicit: None,
                    log_upper_quotient: None,
                    lower: f64::NEG_INFINITY,
                    log_lambda: Some(ll),
                    rate_running: Some(-ll / p),
                }
            })
            .collect();
        let f = fit_b0(&rows).unwrap();
        assert!((f.b0 - 0.5).abs() < 1e-10 && (f.gamma + 1.5).abs() < 1e-8);
        assert!(f.half_width.unwrap() < 1e-8);
    }
}
