//! Seeded random states and unitaries for sweeps and property checks.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::qcore::{c, r, ComplexMatrix, ComplexVector, DensityMatrix, PureState};

fn ginibre<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    DMatrix::from_fn(rows, cols, |_, _| c(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal)))
}

/// Haar-random unitary via QR of a Ginibre matrix with phase correction.
pub fn unitary<R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix {
    let qr = ginibre(n, n, rng).qr();
    let (mut q, rr) = (qr.q(), qr.r());
    for k in 0..n {
        let d = rr[(k, k)];
        let ph = if d.norm() > 0.0 { d / r(d.norm()) } else { r(1.0) };
        let mut col = q.column_mut(k);
        col *= ph;
    }
    q
}

/// Uniformly random pure state over `dims`.
pub fn pure_state<R: Rng>(dims: &[usize], rng: &mut R) -> PureState {
    let n: usize = dims.iter().product();
    let v: ComplexVector = ginibre(n, 1, rng).column(0).into_owned();
    PureState::normalized(dims.to_vec(), v).expect("Gaussian vectors are non-zero")
}

/// Hilbert–Schmidt random density matrix over `dims` (full rank with probability one).
pub fn density_matrix<R: Rng>(dims: &[usize], rng: &mut R) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let g = ginibre(n, n, rng);
    let m = &g * g.adjoint();
    DensityMatrix::from_unnormalized(dims.to_vec(), m).expect("GG† is positive")
}

/// Random state of rank `k`, useful for probing rank-deficient edge cases.
pub fn density_matrix_rank<R: Rng>(dims: &[usize], k: usize, rng: &mut R) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let g = ginibre(n, k.max(1), rng);
    DensityMatrix::from_unnormalized(dims.to_vec(), &g * g.adjoint()).expect("GG† is positive")
}
