//! Dense complex linear algebra and density-operator primitives.
//!
//! Every state carries its subsystem dimension signature, so qubit pairs,
//! qutrit pairs and three/four-party registers all go through the same code.
//! Multi-indices are row-major: the first subsystem is the most significant digit.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{domain, Result};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

/// Normalization tolerance for states.
pub const TOL_NORM: f64 = 1e-10;
/// Hermiticity tolerance.
pub const TOL_HERM: f64 = 1e-10;
/// Smallest eigenvalue accepted as "non-negative".
pub const TOL_PSD: f64 = 1e-9;
/// Reconstruction tolerance for decompositions.
pub const TOL_RECON: f64 = 1e-9;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Builds a complex matrix from real row-major entries.
pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> ComplexMatrix {
    assert_eq!(entries.len(), rows * cols, "entry count must equal rows*cols");
    ComplexMatrix::from_row_iterator(rows, cols, entries.iter().map(|&x| r(x)))
}

/// Builds a complex matrix from complex row-major entries.
pub fn complex_matrix(rows: usize, cols: usize, entries: &[C64]) -> ComplexMatrix {
    assert_eq!(entries.len(), rows * cols, "entry count must equal rows*cols");
    ComplexMatrix::from_row_slice(rows, cols, entries)
}

/// Kronecker product.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Kronecker product of a list of matrices, left to right.
pub fn tensor_all(ms: &[ComplexMatrix]) -> ComplexMatrix {
    let mut acc = ComplexMatrix::identity(1, 1);
    for m in ms {
        acc = acc.kronecker(m);
    }
    acc
}

/// Largest absolute entry of `m − m†`.
pub fn hermiticity_error(m: &ComplexMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest absolute entry of `U†U − I` (for a square U) or `V†V − I` for an isometry.
pub fn isometry_error(u: &ComplexMatrix) -> f64 {
    let g = u.adjoint() * u;
    let id = ComplexMatrix::identity(g.nrows(), g.ncols());
    (g - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest absolute entry of `U†U − I` and `UU† − I`.
pub fn unitarity_error(u: &ComplexMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    isometry_error(u).max(isometry_error(&u.adjoint()))
}

/// Maximum entrywise distance between two matrices of equal shape.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return domain("dimension signature must list at least one subsystem");
    }
    if let Some(d) = dims.iter().find(|&&d| d < 2) {
        return domain(format!("subsystem dimension {d} is below 2"));
    }
    Ok(dims.iter().product())
}

/// Row-major strides for a dimension signature.
fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Offsets of every multi-index over the chosen subsystems, in row-major order.
fn offsets(dims: &[usize], subsystems: &[usize]) -> Vec<usize> {
    let st = strides(dims);
    let mut out = vec![0usize];
    for &k in subsystems {
        let mut next = Vec::with_capacity(out.len() * dims[k]);
        for &base in &out {
            for v in 0..dims[k] {
                next.push(base + v * st[k]);
            }
        }
        out = next;
    }
    out
}

/// Computational basis ket over `dims` with the given digits.
pub fn basis_ket(dims: &[usize], digits: &[usize]) -> ComplexVector {
    assert_eq!(dims.len(), digits.len());
    let st = strides(dims);
    let n: usize = dims.iter().product();
    let idx: usize = digits.iter().zip(&st).map(|(d, s)| d * s).sum();
    let mut v = ComplexVector::zeros(n);
    v[idx] = r(1.0);
    v
}

/// A normalized state vector with a subsystem signature.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amps: ComplexVector,
}

impl PureState {
    /// Validates normalization within [`TOL_NORM`].
    pub fn new(dims: Vec<usize>, amps: ComplexVector) -> Result<Self> {
        let n = check_dims(&dims)?;
        if amps.len() != n {
            return domain(format!("amplitude count {} does not match dimension {n}", amps.len()));
        }
        let norm2 = amps.norm_squared();
        if (norm2 - 1.0).abs() > TOL_NORM {
            return domain(format!("state norm² is {norm2}, expected 1"));
        }
        Ok(Self { dims, amps })
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(dims: Vec<usize>, amps: ComplexVector) -> Result<Self> {
        let norm = amps.norm();
        if norm < 1e-14 {
            return domain("cannot normalize the zero vector");
        }
        Self::new(dims, amps / r(norm))
    }

    /// Normalizes real amplitudes.
    pub fn from_real(dims: Vec<usize>, amps: &[f64]) -> Result<Self> {
        Self::normalized(dims, ComplexVector::from_iterator(amps.len(), amps.iter().map(|&x| r(x))))
    }

    pub fn basis(dims: Vec<usize>, digits: &[usize]) -> Result<Self> {
        check_dims(&dims)?;
        if digits.len() != dims.len() || digits.iter().zip(&dims).any(|(d, n)| d >= n) {
            return domain("basis digits do not fit the dimension signature");
        }
        let v = basis_ket(&dims, digits);
        Self::new(dims, v)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &PureState) -> C64 {
        self.amps.dotc(&other.amps)
    }

    /// |ψ⟩⟨ψ| as a validated density matrix.
    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::new(self.dims.clone(), projector(&self.amps))
            .expect("projector of a normalized vector is a state")
    }

    /// Tensor product of two pure states.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let amps = self.amps.kronecker(&other.amps);
        PureState { dims, amps }
    }

    /// Reorders subsystems: new subsystem `k` is old subsystem `order[k]`.
    pub fn permute(&self, order: &[usize]) -> Result<PureState> {
        let (dims, map) = permutation_map(&self.dims, order)?;
        let mut amps = ComplexVector::zeros(self.amps.len());
        for (new_idx, &old_idx) in map.iter().enumerate() {
            amps[new_idx] = self.amps[old_idx];
        }
        Ok(PureState { dims, amps })
    }
}

/// |v⟩⟨v| (no normalization).
pub fn projector(v: &ComplexVector) -> ComplexMatrix {
    v * v.adjoint()
}

/// For each new flat index, the old flat index it reads from.
fn permutation_map(dims: &[usize], order: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut seen = vec![false; dims.len()];
    if order.len() != dims.len() {
        return domain("permutation length must equal the number of subsystems");
    }
    for &o in order {
        if o >= dims.len() || seen[o] {
            return domain(format!("{order:?} is not a permutation of the subsystems"));
        }
        seen[o] = true;
    }
    let new_dims: Vec<usize> = order.iter().map(|&o| dims[o]).collect();
    let old_offsets = offsets(dims, order);
    Ok((new_dims, old_offsets))
}

/// A validated density operator with a subsystem signature.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    m: ComplexMatrix,
}

/// Which invariant a candidate density matrix violates, if any.
pub fn density_violation(dims: &[usize], m: &ComplexMatrix) -> Option<String> {
    let n: usize = dims.iter().product();
    if m.nrows() != n || m.ncols() != n {
        return Some(format!("matrix is {}x{}, signature needs {n}x{n}", m.nrows(), m.ncols()));
    }
    let herm = hermiticity_error(m);
    if herm > TOL_HERM {
        return Some(format!("not Hermitian (error {herm:.3e})"));
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > TOL_NORM || tr.im.abs() > TOL_NORM {
        return Some(format!("trace is {tr}, expected 1"));
    }
    let h = (m + m.adjoint()) * r(0.5);
    let min = symmetric_eigen_robust(&h).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < -TOL_PSD {
        return Some(format!("negative eigenvalue {min:.3e}"));
    }
    None
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(dims: Vec<usize>, m: ComplexMatrix) -> Result<Self> {
        check_dims(&dims)?;
        if let Some(why) = density_violation(&dims, &m) {
            return domain(format!("invalid density matrix: {why}"));
        }
        Ok(Self { dims, m })
    }

    /// Normalizes a positive operator by its trace before validation.
    pub fn from_unnormalized(dims: Vec<usize>, m: ComplexMatrix) -> Result<Self> {
        let tr = m.trace().re;
        if tr <= 1e-14 {
            return domain("operator has vanishing trace");
        }
        Self::new(dims, m / r(tr))
    }

    pub fn from_real(dims: Vec<usize>, entries: &[f64]) -> Result<Self> {
        let n: usize = dims.iter().product();
        if entries.len() != n * n {
            return domain(format!("expected {} entries, got {}", n * n, entries.len()));
        }
        Self::new(dims, real_matrix(n, n, entries))
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let n = check_dims(&dims)?;
        Self::new(dims, ComplexMatrix::identity(n, n) / r(n as f64))
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    /// Entry (i, j).
    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.m).expect("density matrices are Hermitian").values
    }

    /// Tr ρ².
    pub fn purity(&self) -> f64 {
        (&self.m * &self.m).trace().re
    }

    /// Tr(Aρ) for any operator A of matching size.
    pub fn expectation(&self, a: &ComplexMatrix) -> C64 {
        (a * &self.m).trace()
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityMatrix { dims, m: self.m.kronecker(&other.m) }
    }

    /// Convex mixture `p·self + (1−p)·other`.
    pub fn mix(&self, p: f64, other: &DensityMatrix) -> Result<DensityMatrix> {
        if self.dims != other.dims {
            return domain("cannot mix states with different signatures");
        }
        if !(0.0..=1.0).contains(&p) {
            return domain(format!("mixing weight {p} outside [0,1]"));
        }
        DensityMatrix::new(self.dims.clone(), &self.m * r(p) + &other.m * r(1.0 - p))
    }

    /// Reorders subsystems: new subsystem `k` is old subsystem `order[k]`.
    pub fn permute(&self, order: &[usize]) -> Result<DensityMatrix> {
        let (dims, map) = permutation_map(&self.dims, order)?;
        let n = self.dim();
        let m = ComplexMatrix::from_fn(n, n, |i, j| self.m[(map[i], map[j])]);
        Ok(DensityMatrix { dims, m })
    }

    /// Applies `K ρ K†` and renormalizes; fails if the result has vanishing trace.
    pub fn conjugate_normalized(&self, k: &ComplexMatrix) -> Result<DensityMatrix> {
        DensityMatrix::from_unnormalized(self.dims.clone(), k * &self.m * k.adjoint())
    }
}

fn check_subsystem(dims: &[usize], k: usize) -> Result<()> {
    if k >= dims.len() {
        return domain(format!("subsystem index {k} out of range for {} subsystems", dims.len()));
    }
    Ok(())
}

/// Partial trace of a raw matrix, keeping `keep` (in the given order).
pub fn partial_trace_matrix(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    if keep.is_empty() || keep.len() >= dims.len() {
        return domain("keep must be a non-empty proper subset of the subsystems");
    }
    let mut seen = vec![false; dims.len()];
    for &k in keep {
        check_subsystem(dims, k)?;
        if seen[k] {
            return domain(format!("subsystem {k} listed twice"));
        }
        seen[k] = true;
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !seen[*k]).collect();
    let ko = offsets(dims, keep);
    let to = offsets(dims, &traced);
    let n = ko.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (i, &ri) in ko.iter().enumerate() {
        for (j, &rj) in ko.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for &t in &to {
                acc += m[(ri + t, rj + t)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Reduced state on the `keep` subsystems.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let m = partial_trace_matrix(&rho.m, &rho.dims, keep)?;
    let dims = keep.iter().map(|&k| rho.dims[k]).collect();
    // Hermiticity and trace survive exactly up to rounding; skip re-validation cost.
    Ok(DensityMatrix { dims, m })
}

/// Partial transpose of a raw matrix on one subsystem.
pub fn partial_transpose_matrix(m: &ComplexMatrix, dims: &[usize], subsystem: usize) -> Result<ComplexMatrix> {
    check_subsystem(dims, subsystem)?;
    let n: usize = dims.iter().product();
    if m.nrows() != n || m.ncols() != n {
        return domain("matrix size does not match the dimension signature");
    }
    let st = strides(dims)[subsystem];
    let d = dims[subsystem];
    let digit = |i: usize| (i / st) % d;
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        let (di, dj) = (digit(i), digit(j));
        let i2 = i - di * st + dj * st;
        let j2 = j - dj * st + di * st;
        m[(i2, j2)]
    }))
}

/// ρ^{T_k}: transpose on subsystem `k` only. Not necessarily positive.
pub fn partial_transpose(rho: &DensityMatrix, subsystem: usize) -> Result<ComplexMatrix> {
    partial_transpose_matrix(&rho.m, &rho.dims, subsystem)
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues, descending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, matching `values`.
    pub vectors: ComplexMatrix,
}

/// Rotates `v` so its first component with modulus above 1e-12 is real and positive.
pub fn fix_phase(v: &mut ComplexVector) {
    if let Some(z) = v.iter().find(|z| z.norm() > 1e-12).copied() {
        let ph = z.conj() / r(z.norm());
        for e in v.iter_mut() {
            *e *= ph;
        }
    }
}

/// Eigen-decomposition of an exactly Hermitian matrix that never returns non-finite values.
///
/// The default QR iteration can overflow on some highly degenerate spectra (large rank-one
/// projectors, for instance). A diagonal shift leaves the eigenvectors unchanged and moves the
/// spectrum away from the troublesome configuration; a bounded iteration is the last resort.
fn symmetric_eigen_robust(sym: &ComplexMatrix) -> nalgebra::SymmetricEigen<C64, nalgebra::Dyn> {
    let finite = |e: &nalgebra::SymmetricEigen<C64, nalgebra::Dyn>| {
        e.eigenvalues.iter().all(|x| x.is_finite())
            && e.eigenvectors.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    };
    let eig = sym.clone().symmetric_eigen();
    if finite(&eig) {
        return eig;
    }
    let n = sym.nrows();
    let shift = 1.0 + sym.norm();
    let mut shifted = (sym + ComplexMatrix::identity(n, n) * r(shift)).symmetric_eigen();
    if finite(&shifted) {
        shifted.eigenvalues.iter_mut().for_each(|x| *x -= shift);
        return shifted;
    }
    sym.clone()
        .try_symmetric_eigen(f64::EPSILON, 100_000)
        .filter(finite)
        .expect("Hermitian eigen-decomposition failed to converge")
}

/// Hermitian eigen-decomposition, eigenvalues descending, eigenvector phase fixed.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let herm = hermiticity_error(m);
    if herm > TOL_HERM {
        return domain(format!("matrix is not Hermitian (error {herm:.3e})"));
    }
    let sym = (m + m.adjoint()) * r(0.5);
    let eig = symmetric_eigen_robust(&sym);
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let mut v: ComplexVector = eig.eigenvectors.column(k).into_owned();
        fix_phase(&mut v);
        vectors.set_column(col, &v);
    }
    Ok(HermitianEigen { values, vectors })
}

/// Applies a real function to the spectrum of a Hermitian matrix.
pub fn hermitian_function(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let e = hermitian_eigen(m)?;
    let d =
        ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(e.values.len(), e.values.iter().map(|&x| r(f(x)))));
    Ok(&e.vectors * d * e.vectors.adjoint())
}

/// Principal square root of a positive semidefinite matrix.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let e = hermitian_eigen(m)?;
    if let Some(&min) = e.values.last() {
        if min < -TOL_PSD {
            return domain(format!("matrix has negative eigenvalue {min:.3e}"));
        }
    }
    hermitian_function(m, |x| x.max(0.0).sqrt())
}

/// Sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    m.clone().singular_values().iter().sum()
}

/// Schmidt form of a bipartite pure state.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// Non-negative coefficients λᵢ, descending.
    pub coefficients: Vec<f64>,
    /// Left basis vectors as columns.
    pub left_basis: ComplexMatrix,
    /// Right basis vectors as columns.
    pub right_basis: ComplexMatrix,
    /// Number of coefficients above 1e-12.
    pub rank: usize,
}

impl SchmidtDecomposition {
    /// Σ λᵢ |iA⟩|iB⟩ over all stored terms.
    pub fn reconstruct(&self) -> ComplexVector {
        let (na, nb) = (self.left_basis.nrows(), self.right_basis.nrows());
        let mut v = ComplexVector::zeros(na * nb);
        for (k, &l) in self.coefficients.iter().enumerate() {
            let a: ComplexVector = self.left_basis.column(k).into_owned();
            let b: ComplexVector = self.right_basis.column(k).into_owned();
            v += a.kronecker(&b) * r(l);
        }
        v
    }
}

/// Singular-value route to the Schmidt form.
pub fn schmidt_decompose(psi: &PureState) -> Result<SchmidtDecomposition> {
    if psi.dims.len() != 2 {
        return domain(format!("Schmidt form needs two subsystems, got {}", psi.dims.len()));
    }
    let (na, nb) = (psi.dims[0], psi.dims[1]);
    let mat = ComplexMatrix::from_fn(na, nb, |i, j| psi.amps[i * nb + j]);
    let svd = mat.svd(true, true);
    let u = svd.u.expect("requested U");
    let vt = svd.v_t.expect("requested V^T");
    let k = svd.singular_values.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let coefficients: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let mut left = ComplexMatrix::zeros(na, k);
    let mut right = ComplexMatrix::zeros(nb, k);
    for (col, &i) in order.iter().enumerate() {
        left.set_column(col, &u.column(i));
        // ψ = U Σ V†, so the right Schmidt vectors are the rows of V† taken as kets.
        let row = vt.row(i).transpose();
        right.set_column(col, &row);
    }
    let rank = coefficients.iter().filter(|&&l| l > 1e-12).count();
    Ok(SchmidtDecomposition { coefficients, left_basis: left, right_basis: right, rank })
}

/// Purification |ψ⟩ = Σ √pᵢ |eᵢ⟩|i⟩ with a reference system of the same dimension.
pub fn purify(rho: &DensityMatrix) -> PureState {
    let e = hermitian_eigen(&rho.m).expect("density matrices are Hermitian");
    let n = rho.dim();
    let mut amps = ComplexVector::zeros(n * n);
    for (k, &p) in e.values.iter().enumerate() {
        let w = p.max(0.0).sqrt();
        if w == 0.0 {
            continue;
        }
        let ek: ComplexVector = e.vectors.column(k).into_owned();
        amps += ek.kronecker(&basis_ket(&[n], &[k])) * r(w);
    }
    let mut dims = rho.dims.clone();
    dims.push(n);
    PureState::normalized(dims, amps).expect("purification of a unit-trace state is normalized")
}

/// Named gates. `toffoli` flips the last qubit when the first two are set;
/// `fredkin` swaps the first two qubits when the last one is set.
pub mod gates {
    use super::*;

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2, 2)
    }

    pub fn pauli_x() -> ComplexMatrix {
        real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0])
    }

    pub fn pauli_y() -> ComplexMatrix {
        complex_matrix(2, 2, &[r(0.0), c(0.0, -1.0), c(0.0, 1.0), r(0.0)])
    }

    pub fn pauli_z() -> ComplexMatrix {
        real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0])
    }

    pub fn hadamard() -> ComplexMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        real_matrix(2, 2, &[s, s, s, -s])
    }

    pub fn cnot() -> ComplexMatrix {
        permutation(&[0, 1, 3, 2])
    }

    pub fn toffoli() -> ComplexMatrix {
        permutation(&[0, 1, 2, 3, 4, 5, 7, 6])
    }

    pub fn fredkin() -> ComplexMatrix {
        permutation(&[0, 1, 2, 5, 4, 3, 6, 7])
    }

    /// Pauli matrices in (x, y, z) order.
    pub fn paulis() -> [ComplexMatrix; 3] {
        [pauli_x(), pauli_y(), pauli_z()]
    }

    /// Every named gate with its label.
    pub fn all() -> Vec<(&'static str, ComplexMatrix)> {
        vec![
            ("I", identity()),
            ("X", pauli_x()),
            ("Y", pauli_y()),
            ("Z", pauli_z()),
            ("H", hadamard()),
            ("CNOT", cnot()),
            ("Toffoli", toffoli()),
            ("Fredkin", fredkin()),
        ]
    }

    /// Permutation matrix sending basis state `j` to `p[j]`.
    fn permutation(p: &[usize]) -> ComplexMatrix {
        let n = p.len();
        let mut m = ComplexMatrix::zeros(n, n);
        for (j, &i) in p.iter().enumerate() {
            m[(i, j)] = r(1.0);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bell_plus() -> PureState {
        PureState::from_real(vec![2, 2], &[1.0, 0.0, 0.0, 1.0]).unwrap()
    }

    #[test]
    fn identity_tensor_identity() {
        let i2 = gates::identity();
        assert_eq!(tensor(&i2, &i2), ComplexMatrix::identity(4, 4));
    }

    #[test]
    fn double_bit_flip() {
        let xx = tensor(&gates::pauli_x(), &gates::pauli_x());
        let out = xx * basis_ket(&[2, 2], &[0, 0]);
        assert_eq!(out, basis_ket(&[2, 2], &[1, 1]));
    }

    #[test]
    fn odd_bell_projector_by_hand() {
        // (|01⟩+|10⟩)/√2 expanded by hand.
        let v = (basis_ket(&[2, 2], &[0, 1]) + basis_ket(&[2, 2], &[1, 0])) * r(0.5f64.sqrt());
        let p = projector(&v);
        let hand = real_matrix(4, 4, &[0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.5, 0.0, 0.0, 0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(max_abs_diff(&p, &hand) < 1e-15);
    }

    #[test]
    fn marginal_of_bell_is_mixed() {
        let rho = bell_plus().density();
        let a = partial_trace(&rho, &[0]).unwrap();
        assert!(max_abs_diff(a.matrix(), &(ComplexMatrix::identity(2, 2) * r(0.5))) < 1e-15);
    }

    #[test]
    fn ghz_marginal_is_classical() {
        let ghz = PureState::from_real(vec![2, 2, 2], &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let ab = partial_trace(&ghz.density(), &[0, 1]).unwrap();
        let expected = real_matrix(4, 4, &{
            let mut e = [0.0; 16];
            e[0] = 0.5;
            e[15] = 0.5;
            e
        });
        assert!(max_abs_diff(ab.matrix(), &expected) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_keep() {
        let rho = bell_plus().density();
        assert!(partial_trace(&rho, &[]).is_err());
        assert!(partial_trace(&rho, &[0, 1]).is_err());
        assert!(partial_trace(&rho, &[2]).is_err());
    }

    #[test]
    fn bell_partial_transpose_spectrum() {
        let pt = partial_transpose(&bell_plus().density(), 1).unwrap();
        let e = hermitian_eigen(&pt).unwrap();
        assert_abs_diff_eq!(*e.values.last().unwrap(), -0.5, epsilon = 1e-12);
        assert!(partial_transpose(&bell_plus().density(), 2).is_err());
    }

    #[test]
    fn product_state_stays_positive_under_pt() {
        let a = DensityMatrix::from_real(vec![2], &[0.7, 0.2, 0.2, 0.3]).unwrap();
        let b = DensityMatrix::from_real(vec![2], &[0.4, 0.1, 0.1, 0.6]).unwrap();
        let ab = a.tensor(&b);
        let pt = partial_transpose(&ab, 1).unwrap();
        let expected = tensor(a.matrix(), &b.matrix().transpose());
        assert!(max_abs_diff(&pt, &expected) < 1e-15);
        assert!(hermitian_eigen(&pt).unwrap().values.iter().all(|&x| x > -1e-12));
    }

    #[test]
    fn eigen_examples() {
        let e = hermitian_eigen(&ComplexMatrix::identity(4, 4)).unwrap();
        assert_eq!(e.values, vec![1.0; 4]);
        let z = hermitian_eigen(&gates::pauli_z()).unwrap();
        assert_abs_diff_eq!(z.values[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(z.values[1], -1.0, epsilon = 1e-15);
        assert!(hermitian_eigen(&real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn eigenvector_phase_is_canonical() {
        let e = hermitian_eigen(&gates::pauli_y()).unwrap();
        for k in 0..2 {
            let v = e.vectors.column(k);
            let first = v.iter().find(|z| z.norm() > 1e-12).unwrap();
            assert!(first.im.abs() < 1e-15 && first.re > 0.0);
        }
    }

    #[test]
    fn sqrt_examples() {
        let i = ComplexMatrix::identity(3, 3);
        assert!(max_abs_diff(&psd_sqrt(&i).unwrap(), &i) < 1e-14);
        let d = real_matrix(2, 2, &[4.0, 0.0, 0.0, 1.0]);
        assert!(max_abs_diff(&psd_sqrt(&d).unwrap(), &real_matrix(2, 2, &[2.0, 0.0, 0.0, 1.0])) < 1e-14);
        let p = bell_plus().density().into_matrix();
        assert!(max_abs_diff(&psd_sqrt(&p).unwrap(), &p) < 1e-12);
        assert!(psd_sqrt(&gates::pauli_z()).is_err());
    }

    #[test]
    fn schmidt_examples() {
        let s = schmidt_decompose(&PureState::basis(vec![2, 2], &[0, 0]).unwrap()).unwrap();
        assert_eq!(s.rank, 1);
        assert_abs_diff_eq!(s.coefficients[0], 1.0, epsilon = 1e-14);
        let s = schmidt_decompose(&bell_plus()).unwrap();
        assert_eq!(s.rank, 2);
        for l in &s.coefficients {
            assert_abs_diff_eq!(*l, 0.5f64.sqrt(), epsilon = 1e-14);
        }
        let psi = PureState::from_real(vec![2, 2], &[0.9f64.sqrt(), 0.0, 0.0, 0.1f64.sqrt()]).unwrap();
        let s = schmidt_decompose(&psi).unwrap();
        assert_abs_diff_eq!(s.coefficients[0], 0.9f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(s.coefficients[1], 0.1f64.sqrt(), epsilon = 1e-14);
        let three = PureState::basis(vec![2, 2, 2], &[0, 0, 0]).unwrap();
        assert!(schmidt_decompose(&three).is_err());
    }

    #[test]
    fn purify_mixed_qubit() {
        let rho = DensityMatrix::maximally_mixed(vec![2]).unwrap();
        let psi = purify(&rho);
        assert_eq!(psi.dims(), &[2, 2]);
        let back = partial_trace(&psi.density(), &[0]).unwrap();
        assert!(max_abs_diff(back.matrix(), rho.matrix()) < 1e-12);
        let s = schmidt_decompose(&psi).unwrap();
        assert_eq!(s.rank, 2);
    }

    #[test]
    fn purify_pure_qubit_has_rank_one_reference() {
        let rho = PureState::basis(vec![2], &[0]).unwrap().density();
        let psi = purify(&rho);
        assert_eq!(schmidt_decompose(&psi).unwrap().rank, 1);
    }

    #[test]
    fn gates_are_unitary() {
        for (name, g) in gates::all() {
            assert!(unitarity_error(&g) < 1e-12, "{name}");
        }
    }

    #[test]
    fn three_qubit_gates_act_as_documented() {
        let t = gates::toffoli() * basis_ket(&[2, 2, 2], &[1, 1, 0]);
        assert_eq!(t, basis_ket(&[2, 2, 2], &[1, 1, 1]));
        let f = gates::fredkin() * basis_ket(&[2, 2, 2], &[0, 1, 1]);
        assert_eq!(f, basis_ket(&[2, 2, 2], &[1, 0, 1]));
        let f0 = gates::fredkin() * basis_ket(&[2, 2, 2], &[0, 1, 0]);
        assert_eq!(f0, basis_ket(&[2, 2, 2], &[0, 1, 0]));
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::from_real(vec![2], &[0.5, 0.0, 0.0, 0.6]).is_err());
        assert!(DensityMatrix::from_real(vec![2], &[1.2, 0.0, 0.0, -0.2]).is_err());
        assert!(DensityMatrix::from_real(vec![2], &[0.5, 0.1, 0.0, 0.5]).is_err());
        assert!(DensityMatrix::from_real(vec![1], &[1.0]).is_err());
    }

    #[test]
    fn permutation_of_subsystems() {
        let psi = PureState::basis(vec![2, 3], &[1, 2]).unwrap();
        let p = psi.permute(&[1, 0]).unwrap();
        assert_eq!(p.dims(), &[3, 2]);
        assert_eq!(p.amplitudes(), &basis_ket(&[3, 2], &[2, 1]));
        assert!(psi.permute(&[0, 0]).is_err());
    }
}
