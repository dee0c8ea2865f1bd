//! Dirichlet eigenpairs of `-u'' + p a u' = lambda u` on `(-l, l)` through the
//! weighted divergence form `-(e^{-pb} u')' = lambda e^{-pb} u`.

mod check;
mod pencil;
mod solve;

pub use check::{adjoint_eigenfunction, schrodinger_principal, selfadjoint_check, SelfAdjointCheck};
pub use pencil::{assemble_pencil, TridiagPencil, MAX_WEIGHT_SPREAD};
pub use solve::{eigs_bisection, principal_eig, principal_eig_with, EigenPair, DEFAULT_MAX_ITER, DEFAULT_RTOL};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grid::Grid1D;
use crate::potential::{build_potential_1d, Potential1D, PotentialKind};

/// Principal eigenpair of a potential at drift strength `p`.
pub fn principal_for(pot: &Potential1D, p: f64, rtol: f64) -> Result<EigenPair> {
    principal_eig(&assemble_pencil(pot, p)?, rtol)
}

/// Principal eigenvalue on `n` and `2n + 1` nodes and the second-order
/// Richardson combination `fine + (fine - coarse) / 3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extrapolated {
    pub n: usize,
    pub coarse: f64,
    pub fine: f64,
    pub lambda: f64,
}

pub fn principal_richardson(kind: PotentialKind, l: f64, n: usize, p: f64, rtol: f64) -> Result<Extrapolated> {
    let coarse = principal_for(&build_potential_1d(kind, Grid1D::new(l, n)?)?, p, rtol)?.lambda;
    let fine = principal_for(&build_potential_1d(kind, Grid1D::new(l, 2 * n + 1)?)?, p, rtol)?.lambda;
    Ok(Extrapolated { n, coarse, fine, lambda: fine + (fine - coarse) / 3.0 })
}
