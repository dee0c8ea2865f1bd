//! Fixtures shared by the benchmarks.

use driftlab::{build_field_2d, build_potential_1d, Field2D, FieldKind, Grid1D, Grid2D, Potential1D, PotentialKind};

pub fn linear_1d(n: usize) -> Potential1D {
    build_potential_1d(PotentialKind::PowerLaw { alpha: 2.0 }, Grid1D::new(1.0, n).unwrap()).unwrap()
}

pub fn quartic_1d(n: usize) -> Potential1D {
    build_potential_1d(PotentialKind::Quartic, Grid1D::new(2.0, n).unwrap()).unwrap()
}

pub fn two_vortices(h: f64) -> Field2D {
    build_field_2d(FieldKind::two_vortices(), Grid2D::square_with_spacing(1.0, h).unwrap()).unwrap()
}
