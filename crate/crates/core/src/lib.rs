//! Principal Dirichlet eigenvalues of `-Δu + p a·∇u` with gradient drift `a = ∇b`.
//!
//! The crate is organised around the sampled potential:
//!
//! * [`potential`] builds `b`, `a` and the Liouville potential `q(x, p)`;
//! * [`wells`] finds potential wells and their depths by sublevel persistence;
//! * [`eigen`] solves the 1D weighted pencil with relative accuracy;
//! * [`asymptotics`] evaluates large-`p` formulas in log arithmetic;
//! * [`bounds`] evaluates comparison, envelope and well bounds;
//! * [`pde2d`] integrates the parabolic problem on rectangles and reads off decay rates.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod asymptotics;
pub mod bounds;
pub mod eigen;
pub mod error;
pub mod export;
pub mod grid;
pub mod logsum;
pub mod pde2d;
pub mod potential;
pub mod sweep;
pub mod wells;

pub use error::{Error, Result};
pub use grid::{Grid1D, Grid2D};
pub use potential::{build_field_2d, build_potential_1d, Field2D, FieldKind, Potential1D, PotentialKind};
