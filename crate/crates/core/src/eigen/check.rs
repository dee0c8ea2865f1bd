use serde::{Deserialize, Serialize};

use super::pencil::assemble_pencil;
use super::solve::{principal_eig, EigenPair};
use crate::error::{Error, Result};
use crate::potential::{liouville_q, Potential1D};

/// `v = exp(-p b) u`, rescaled so that `max v = 1`.
pub fn adjoint_eigenfunction(pair: &EigenPair, pot: &Potential1D, p: f64) -> Result<Vec<f64>> {
    if pair.u.len() != pot.n() {
        return Err(Error::SizeMismatch("eigenfunction and potential grids differ".into()));
    }
    if pair.u.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidParameter("adjoint needs a positive principal eigenfunction".into()));
    }
    let peak = (0..pot.n())
        .map(|i| pair.u[i].ln() - p * pot.b_interior(i))
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let b_ref = pot.b_interior(peak);
    let mut v: Vec<f64> = (0..pot.n()).map(|i| pair.u[i] * (-p * (pot.b_interior(i) - b_ref)).exp()).collect();
    let top = v.iter().copied().fold(0.0, f64::max);
    if top != 1.0 {
        v.iter_mut().for_each(|x| *x /= top);
    }
    Ok(v)
}

/// Cross-validation of the weighted pencil against `-w'' + q w = lambda w`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfAdjointCheck {
    pub p: f64,
    pub lambda_pencil: f64,
    pub lambda_lq: Option<f64>,
    pub rel_discrepancy: Option<f64>,
    /// `||q||_inf n eps / lambda`: relative accuracy the `q` route can deliver.
    pub floor: f64,
    pub skipped: bool,
    pub diagnostic: String,
}

/// Count of eigenvalues below `sigma` of the symmetric tridiagonal
/// `(-1/h^2, 2/h^2 + q_i, -1/h^2)` (plain Sturm sequence).
fn schrodinger_count(q: &[f64], h: f64, sigma: f64) -> usize {
    let off2 = 1.0 / (h * h * h * h);
    let diag = 2.0 / (h * h);
    let mut count = 0;
    let mut d = 1.0;
    for (i, &qi) in q.iter().enumerate() {
        d = diag + qi - sigma - if i == 0 { 0.0 } else { off2 / d };
        if d == 0.0 {
            d = f64::EPSILON * (diag + qi.abs());
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Lowest eigenvalue of `-w'' + q w` on the interior nodes `q` with spacing `h`, by bisection.
pub fn schrodinger_principal(q: &[f64], h: f64, rtol: f64) -> f64 {
    let qmin = q.iter().copied().fold(f64::INFINITY, f64::min);
    let qmax = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut lo = qmin;
    let mut hi = qmax + 4.0 / (h * h);
    for _ in 0..200 {
        if hi - lo <= rtol * hi.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if schrodinger_count(q, h, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn selfadjoint_check(pot: &Potential1D, p: f64, rtol: f64) -> Result<SelfAdjointCheck> {
    let pencil = match assemble_pencil(pot, p) {
        Ok(pen) => pen,
        Err(err @ Error::WeightRange { .. }) => {
            return Ok(SelfAdjointCheck {
                p,
                lambda_pencil: f64::NAN,
                lambda_lq: None,
                rel_discrepancy: None,
                floor: f64::INFINITY,
                skipped: true,
                diagnostic: err.to_string(),
            })
        }
        Err(e) => return Err(e),
    };
    let lambda_pencil = principal_eig(&pencil, rtol.min(1e-10))?.lambda;
    let q = liouville_q(pot, p)?;
    let qnorm = q.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = qnorm * pot.n() as f64 * f64::EPSILON / lambda_pencil;
    if floor > rtol {
        return Ok(SelfAdjointCheck {
            p,
            lambda_pencil,
            lambda_lq: None,
            rel_discrepancy: None,
            floor,
            skipped: true,
            diagnostic: format!(
                "rounding floor {floor:e} of the q route exceeds rtol {rtol:e}; the weighted pencil is authoritative"
            ),
        });
    }
    let lambda_lq = schrodinger_principal(&q, pot.grid.h, 1e-14);
    let rel = (lambda_lq - lambda_pencil).abs() / lambda_pencil;
    Ok(SelfAdjointCheck {
        p,
        lambda_pencil,
        lambda_lq: Some(lambda_lq),
        rel_discrepancy: Some(rel),
        floor,
        skipped: false,
        diagnostic: format!("relative discrepancy {rel:e}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::solve::principal_eig;
    use crate::grid::Grid1D;
    use crate::potential::{build_potential_1d, PotentialKind};

    fn pot(kind: PotentialKind, l: f64, n: usize) -> Potential1D {
        build_potential_1d(kind, Grid1D::new(l, n).unwrap()).unwrap()
    }

    #[test]
    fn adjoint_at_zero_p_is_u() {
        let pt = pot(PotentialKind::PowerLaw { alpha: 2.0 }, 1.0, 201);
        let pair = principal_eig(&assemble_pencil(&pt, 0.0).unwrap(), 1e-12).unwrap();
        let v = adjoint_eigenfunction(&pair, &pt, 0.0).unwrap();
        for (a, b) in v.iter().zip(&pair.u) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn adjoint_flat_potential_is_u() {
        let pt = pot(PotentialKind::Constant { c: 0.0 }, 1.0, 201);
        let pair = principal_eig(&assemble_pencil(&pt, 9.0).unwrap(), 1e-12).unwrap();
        assert_eq!(adjoint_eigenfunction(&pair, &pt, 9.0).unwrap(), pair.u);
    }

    #[test]
    fn adjoint_concentrates_at_well_bottom() {
        let pt = pot(PotentialKind::PowerLaw { alpha: 2.0 }, 1.0, 401);
        let mut widths = Vec::new();
        for p in [5.0, 20.0, 80.0] {
            let pair = principal_eig(&assemble_pencil(&pt, p).unwrap(), 1e-12).unwrap();
            let v = adjoint_eigenfunction(&pair, &pt, p).unwrap();
            let imax = v.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
            assert!(pt.grid.x(imax).abs() < 1e-12);
            widths.push(v.iter().filter(|&&x| x > 0.5).count());
            assert!(v.iter().all(|&x| x > 0.0));
        }
        assert!(widths[0] > widths[1] && widths[1] > widths[2]);
    }

    #[test]
    fn routes_coincide_at_zero() {
        let pt = pot(PotentialKind::Sine, 2.0, 301);
        let chk = selfadjoint_check(&pt, 0.0, 1e-9).unwrap();
        assert!(!chk.skipped);
        assert!(chk.rel_discrepancy.unwrap() < 1e-12);
    }

    #[test]
    fn routes_agree_for_linear_drift() {
        // both routes are independent second-order discretizations; their gap
        // at n = 4000 is ~3.3e-6 and shrinks fourfold per refinement
        let gap = |n: usize| {
            let pt = pot(PotentialKind::PowerLaw { alpha: 2.0 }, 1.0, n);
            let chk = selfadjoint_check(&pt, 10.0, 1e-9).unwrap();
            assert!(!chk.skipped, "{}", chk.diagnostic);
            chk.rel_discrepancy.unwrap()
        };
        let (g4, g8) = (gap(4000), gap(8000));
        assert!(g4 <= 5e-6, "{g4}");
        assert!(g8 <= 1e-6, "{g8}");
        assert!((g4 / g8).log2() > 1.9);
    }

    #[test]
    fn floor_skips_large_p() {
        let pt = pot(PotentialKind::PowerLaw { alpha: 2.0 }, 1.0, 4001);
        let chk = selfadjoint_check(&pt, 80.0, 1e-9).unwrap();
        assert!(chk.skipped);
        assert!(chk.floor > 1e-9);
        assert!(chk.diagnostic.contains("floor"));
    }
}
