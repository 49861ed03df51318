//! The Bužek–Hillery universal cloning machine in dimension `n` and what its outputs are good for.
//!
//! The machine acts on the original `a`, a blank copy `b` and an `n`-level machine `x`:
//!
//! `|i⟩|0⟩|X⟩ ↦ c|i⟩|i⟩|Xᵢ⟩ + d Σ_{j≠i} (|i⟩|j⟩ + |j⟩|i⟩)|Xⱼ⟩`, with `c² + 2(n−1)d² = 1`.
//!
//! This module builds the machine as an isometry, produces its two-qutrit output, checks the
//! reduction criterion, builds and applies local filters, evaluates the dense-coding capacity and
//! a qutrit teleportation witness, and clones both halves of an entangled qubit pair.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::measures::{self, EntropyKind};
use crate::qcore::{
    self, fix_phase, hermitian_eigen, isometry_error, partial_trace, partial_trace_matrix, projector, r, ComplexMatrix,
    ComplexVector, DensityMatrix, PureState,
};
use crate::statezoo;

/// Tolerance on `c² + 2(n−1)d² = 1`.
pub const TOL_NORMALIZATION: f64 = 1e-12;
/// An eigenvalue below this counts as a violation of the reduction criterion.
pub const TOL_REDUCTION: f64 = 1e-10;
/// Smallest acceptable normalization after filtering.
pub const TOL_FILTER_NORM: f64 = 1e-12;

/// Machine parameters `(c, d)` and the resulting scaling factor `s = c² + (n−2)d²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CloningParams {
    pub n: usize,
    pub c: f64,
    pub d: f64,
    pub s: f64,
}

impl CloningParams {
    /// The optimal universal machine: c² = 2/(n+1), d² = 1/(2(n+1)).
    pub fn optimal(n: usize) -> Result<Self> {
        uqcm_params(n, None)
    }

    /// Fidelity of a single clone with a pure input when the output has the scaling form.
    pub fn clone_fidelity(&self) -> f64 {
        self.s + (1.0 - self.s) / self.n as f64
    }

    /// True when `c = 2d`, i.e. the clone marginal is a shrunk copy of the input.
    pub fn is_universal(&self) -> bool {
        (self.c - 2.0 * self.d).abs() <= 1e-12
    }

    /// Deviation from `c² + 2(n−1)d² = 1`.
    pub fn normalization_error(&self) -> f64 {
        (self.c * self.c + 2.0 * (self.n as f64 - 1.0) * self.d * self.d - 1.0).abs()
    }
}

/// Largest admissible `d` in dimension `n` (where `c` reaches zero).
pub fn d_max(n: usize) -> f64 {
    (1.0 / (2.0 * (n as f64 - 1.0))).sqrt()
}

/// Machine parameters in dimension `n`; `d = None` selects the optimal machine.
pub fn uqcm_params(n: usize, d: Option<f64>) -> Result<CloningParams> {
    if n < 2 {
        return domain(format!("cloning dimension n = {n} must be at least 2"));
    }
    let nf = n as f64;
    let d = match d {
        None => (1.0 / (2.0 * (nf + 1.0))).sqrt(),
        Some(d) => {
            if !(d.is_finite() && d >= 0.0 && d <= d_max(n) + 1e-15) {
                return domain(format!("d = {d} outside [0, {}] for n = {n}", d_max(n)));
            }
            d.min(d_max(n))
        }
    };
    let c = (1.0 - 2.0 * (nf - 1.0) * d * d).max(0.0).sqrt();
    Ok(CloningParams { n, c, d, s: c * c + (nf - 2.0) * d * d })
}

/// The Wootters–Zurek copier `c = 1, d = 0`.
pub fn wootters_zurek(n: usize) -> Result<CloningParams> {
    uqcm_params(n, Some(0.0))
}

/// The machine as an `n³ × n` isometry from the input into original ⊗ copy ⊗ machine.
pub fn cloning_isometry(p: &CloningParams) -> Result<ComplexMatrix> {
    if p.normalization_error() > TOL_NORMALIZATION {
        return domain(format!("c² + 2(n−1)d² deviates from 1 by {:.3e}", p.normalization_error()));
    }
    let n = p.n;
    let idx = |a: usize, b: usize, x: usize| (a * n + b) * n + x;
    let mut v = ComplexMatrix::zeros(n * n * n, n);
    for i in 0..n {
        v[(idx(i, i, i), i)] += r(p.c);
        for j in (0..n).filter(|&j| j != i) {
            v[(idx(i, j, j), i)] += r(p.d);
            v[(idx(j, i, j), i)] += r(p.d);
        }
    }
    debug_assert!(isometry_error(&v) < 1e-10);
    Ok(v)
}

/// Clones a pure state: returns the full original ⊗ copy ⊗ machine state and the original's marginal.
pub fn clone_pure(psi: &PureState, p: &CloningParams) -> Result<(PureState, DensityMatrix)> {
    if psi.dims() != [p.n] {
        return domain(format!("input dims {:?} do not match machine dimension {}", psi.dims(), p.n));
    }
    let out = PureState::new(vec![p.n; 3], cloning_isometry(p)? * psi.amplitudes())?;
    let marginal = partial_trace(&out.density(), &[0])?;
    Ok((out, marginal))
}

/// s·|ψ⟩⟨ψ| + (1−s)/n·I.
pub fn scaled_form(psi: &PureState, s: f64) -> Result<DensityMatrix> {
    let n = psi.dim();
    let m = projector(psi.amplitudes()) * r(s) + ComplexMatrix::identity(n, n) * r((1.0 - s) / n as f64);
    DensityMatrix::new(psi.dims().to_vec(), m)
}

/// The two clones of the uniform qutrit superposition, machine traced out.
#[derive(Debug, Clone)]
pub struct ClonePairOutput {
    pub joint: DensityMatrix,
    pub machine: CloningParams,
    /// `d² = 1/8`, the optimal machine.
    pub optimal: bool,
}

/// Clones `(|0⟩+|1⟩+|2⟩)/√3` with machine parameter `d ∈ (0, 1/2]` and keeps both clones.
pub fn qutrit_cloned_pair(d: f64) -> Result<ClonePairOutput> {
    if !(d > 0.0 && d <= 0.5) {
        return domain(format!("d = {d} outside (0, 1/2]"));
    }
    let machine = uqcm_params(3, Some(d))?;
    let input = PureState::normalized(vec![3], ComplexVector::from_element(3, r(1.0)))?;
    let (out, _) = clone_pure(&input, &machine)?;
    let joint = partial_trace(&out.density(), &[0, 1])?;
    Ok(ClonePairOutput { joint, machine, optimal: (d * d - 0.125).abs() <= 1e-12 })
}

/// Closed forms `(e₁, e₂)` of two partial-transpose eigenvalues of the cloned qutrit pair.
pub fn ppt_closed_form_eigenvalues(d: f64) -> (f64, f64) {
    let t = (1.0 - 4.0 * d * d).max(0.0).sqrt();
    let (d2, d3, d4) = (d * d, d * d * d, d * d * d * d);
    let e1 = (1.0 + 4.0 * d2) / 6.0 - (1.0 + 24.0 * d2 - 104.0 * d4 + 32.0 * t * d3).sqrt() / 6.0;
    let e2 = (1.0 - 5.0 * d2) / 6.0 - (1.0 - 6.0 * d2 + 25.0 * d4 - 16.0 * t * d3).sqrt() / 6.0;
    (e1, e2)
}

/// Closed form of the most negative eigenvalue of `ρ_a⊗I − ρ` for the non-optimal pair.
pub fn non_optimal_reduction_eigenvalue(d: f64) -> f64 {
    let t = (1.0 - 4.0 * d * d).max(0.0).sqrt();
    let rad = 1.0 - 18.0 * d * d + 4.0 * t * d + 113.0 * d.powi(4) - 44.0 * d.powi(3) * t;
    (1.0 - 3.0 * d * d) / 6.0 + t * d / 3.0 - rad.max(0.0).sqrt() / 6.0
}

/// Lower end (exclusive) of the `d` range on which the non-optimal filter is built.
pub fn non_optimal_filter_lower_bound() -> f64 {
    (6.0 + 2f64.sqrt()) / 17.0
}

/// Which reduction operator produced an eigenpair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionSide {
    /// ρ_A ⊗ I − ρ.
    A,
    /// I ⊗ ρ_B − ρ.
    B,
}

/// Outcome of the reduction criterion.
#[derive(Debug, Clone)]
pub struct ReductionCheck {
    pub violated: bool,
    /// Smallest eigenvalue of ρ_A⊗I − ρ with its (phase-fixed) eigenvector.
    pub side_a: (f64, ComplexVector),
    /// Smallest eigenvalue of I⊗ρ_B − ρ with its eigenvector.
    pub side_b: (f64, ComplexVector),
}

impl ReductionCheck {
    /// The more negative of the two sides.
    pub fn most_negative(&self) -> (ReductionSide, f64, &ComplexVector) {
        if self.side_a.0 <= self.side_b.0 {
            (ReductionSide::A, self.side_a.0, &self.side_a.1)
        } else {
            (ReductionSide::B, self.side_b.0, &self.side_b.1)
        }
    }
}

fn require_square(rho: &DensityMatrix) -> Result<usize> {
    match rho.dims() {
        [a, b] if a == b => Ok(*a),
        dims => domain(format!("expected an n⊗n state, got dims {dims:?}")),
    }
}

fn smallest_eigenpair(m: &ComplexMatrix) -> Result<(f64, ComplexVector)> {
    let e = hermitian_eigen(m)?;
    let k = e.values.len() - 1;
    Ok((e.values[k], e.vectors.column(k).into_owned()))
}

/// Evaluates `ρ_A⊗I − ρ ≥ 0` and `I⊗ρ_B − ρ ≥ 0`.
pub fn reduction_check(rho: &DensityMatrix) -> Result<ReductionCheck> {
    let n = require_square(rho)?;
    let dims = [n, n];
    let id = ComplexMatrix::identity(n, n);
    let ra = partial_trace_matrix(rho.matrix(), &dims, &[0])?;
    let rb = partial_trace_matrix(rho.matrix(), &dims, &[1])?;
    let side_a = smallest_eigenpair(&(qcore::tensor(&ra, &id) - rho.matrix()))?;
    let side_b = smallest_eigenpair(&(qcore::tensor(&id, &rb) - rho.matrix()))?;
    let violated = side_a.0 < -TOL_REDUCTION || side_b.0 < -TOL_REDUCTION;
    Ok(ReductionCheck { violated, side_a, side_b })
}

/// Local filter `A` with `A_ij = √n·a_ij` for an eigenvector `Σ a_ij |i⟩|j⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterMatrix {
    pub a: ComplexMatrix,
}

/// Builds the filter from any vector of length `n²` (row-major `a_ij`), after phase normalization.
pub fn filter_from_eigenvector(v: &ComplexVector, n: usize) -> Result<FilterMatrix> {
    if v.len() != n * n {
        return domain(format!("eigenvector has length {}, expected {}", v.len(), n * n));
    }
    let mut v = v.clone();
    fix_phase(&mut v);
    let s = (n as f64).sqrt();
    Ok(FilterMatrix { a: ComplexMatrix::from_fn(n, n, |i, j| v[i * n + j] * r(s)) })
}

/// Filter from the side-A violation of the reduction criterion; refuses if there is none.
pub fn filter_from_reduction(rho: &DensityMatrix) -> Result<FilterMatrix> {
    let n = require_square(rho)?;
    let check = reduction_check(rho)?;
    let (value, vector) = &check.side_a;
    if *value >= -TOL_REDUCTION {
        return domain(format!("ρ_A⊗I − ρ has no negative eigenvalue (minimum {value:.3e}); nothing to filter"));
    }
    filter_from_eigenvector(vector, n)
}

/// `(A†⊗I) ρ (A⊗I)` renormalized to unit trace.
pub fn distill(rho: &DensityMatrix, filter: &FilterMatrix) -> Result<DensityMatrix> {
    let n = require_square(rho)?;
    if filter.a.shape() != (n, n) {
        return domain(format!("filter is {:?}, state needs {n}×{n}", filter.a.shape()));
    }
    let k = qcore::tensor(&filter.a.adjoint(), &ComplexMatrix::identity(n, n));
    let out = &k * rho.matrix() * k.adjoint();
    let norm = out.trace().re;
    if norm <= TOL_FILTER_NORM {
        return domain("filter annihilates state");
    }
    let out = out / r(norm);
    DensityMatrix::new(rho.dims().to_vec(), (&out + out.adjoint()) * r(0.5))
}

/// The filter for the optimal cloned pair, written out entrywise.
pub fn optimal_filter_closed_form() -> FilterMatrix {
    let s = 29f64.sqrt();
    let t = 3f64.sqrt();
    #[rustfmt::skip]
    let e = [
        t * (1.5 - s / 2.0), t * (-3.5 + s / 2.0), -t,
        t * (3.5 - s / 2.0), t * (-1.5 + s / 2.0), t,
        t * (2.5 - s / 2.0), t * (-2.5 + s / 2.0), 0.0,
    ];
    FilterMatrix { a: qcore::real_matrix(3, 3, &e) }
}

/// Filter for the non-optimal pair; only defined for `d ∈ ((6+√2)/17, 1/2]`.
pub fn non_optimal_filter(d: f64) -> Result<FilterMatrix> {
    let lo = non_optimal_filter_lower_bound();
    if !(d > lo && d <= 0.5) {
        return domain(format!("non-optimal filter needs d ∈ ({lo}, 1/2], got {d}"));
    }
    filter_from_reduction(&qutrit_cloned_pair(d)?.joint)
}

/// S(ρ_B) − S(ρ_AB) in bits.
pub fn dense_coding_entropy_gap(rho: &DensityMatrix) -> Result<f64> {
    require_square(rho)?;
    let rb = partial_trace(rho, &[1])?;
    Ok(measures::entropy(&rb, EntropyKind::VonNeumann, 2.0)? - measures::entropy(rho, EntropyKind::VonNeumann, 2.0)?)
}

/// χ = log₂ n + S(ρ_B) − S(ρ_AB), in bits.
pub fn dense_coding_capacity(rho: &DensityMatrix) -> Result<f64> {
    let n = require_square(rho)?;
    Ok((n as f64).log2() + dense_coding_entropy_gap(rho)?)
}

/// A state is dense-codeable when its capacity beats the classical `log₂ n`.
pub fn is_dense_codeable(rho: &DensityMatrix) -> Result<bool> {
    Ok(dense_coding_entropy_gap(rho)? > 0.0)
}

/// `I/3 − |φ⁺⟩⟨φ⁺|` on two qutrits.
pub fn qutrit_teleportation_witness() -> ComplexMatrix {
    let phi = statezoo::generalized_max_entangled(3).expect("n = 3 is valid");
    ComplexMatrix::identity(9, 9) * r(1.0 / 3.0) - projector(phi.amplitudes())
}

/// Tr(Wρ) for the qutrit witness; negative values certify usefulness for teleportation.
pub fn teleportation_witness_qutrit(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims() != [3, 3] {
        return domain(format!("qutrit witness needs a 3⊗3 state, got dims {:?}", rho.dims()));
    }
    measures::witness_expectation(&qutrit_teleportation_witness(), rho)
}

/// Coefficients of the non-local clone pair in dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pqrs {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub s: f64,
}

/// P = (c² + (n−1)d²)², Q = d²(4c² + 4cd(n−2) + (n−2)d²), R = d²(c² + (n−1)d²), S = d⁴.
pub fn pqrs(params: &CloningParams) -> Pqrs {
    let (c, d, n) = (params.c, params.d, params.n as f64);
    let base = c * c + (n - 1.0) * d * d;
    Pqrs {
        p: base * base,
        q: d * d * (4.0 * c * c + 4.0 * c * d * (n - 2.0) + (n - 2.0) * d * d),
        r: d * d * base,
        s: d.powi(4),
    }
}

/// Both halves of an entangled qubit pair cloned by the same two-level machine.
#[derive(Debug, Clone)]
pub struct BipartiteCloneOutput {
    /// Original and its own copy, (1,3).
    pub local: DensityMatrix,
    /// Original and the other party's copy, (1,4).
    pub nonlocal: DensityMatrix,
    pub pqrs: Pqrs,
}

/// Clones qubits 1 and 2 of `√λ₁|00⟩ + √λ₂|11⟩`; copies are 3 and 4.
pub fn clone_bipartite(lambda1: f64, params: &CloningParams) -> Result<BipartiteCloneOutput> {
    if !(0.0..=1.0).contains(&lambda1) {
        return domain(format!("λ₁ = {lambda1} outside [0, 1]"));
    }
    if params.n != 2 {
        return domain(format!("bipartite cloning needs a qubit machine, got n = {}", params.n));
    }
    let input = PureState::from_real(vec![2, 2], &[lambda1.sqrt(), 0.0, 0.0, (1.0 - lambda1).sqrt()])?;
    let v = cloning_isometry(params)?;
    // Output order: (1, 3, x₁, 2, 4, x₂).
    let out = PureState::new(vec![2; 6], qcore::tensor(&v, &v) * input.amplitudes())?;
    let rho = out.density();
    let local = partial_trace(&rho, &[0, 1])?;
    let nonlocal = partial_trace(&rho, &[0, 4])?;
    Ok(BipartiteCloneOutput { local, nonlocal, pqrs: pqrs(params) })
}

/// Critical input concurrence (1+c²)/(4c²) above which the non-local clone pair is entangled.
pub fn critical_concurrence(c: f64) -> Result<f64> {
    let lo = 1.0 / 3f64.sqrt();
    if !(c > lo && c <= 1.0) {
        return domain(format!("c = {c} outside (1/√3, 1]"));
    }
    Ok((1.0 + c * c) / (4.0 * c * c))
}

/// Machine parameters for a qubit cloner given `c`, with `d² = (1−c²)/2`.
pub fn qubit_params_from_c(c: f64) -> Result<CloningParams> {
    if !(0.0..=1.0).contains(&c) {
        return domain(format!("c = {c} outside [0, 1]"));
    }
    uqcm_params(2, Some(((1.0 - c * c) / 2.0).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn params_examples() {
        let p = uqcm_params(3, None).unwrap();
        assert_abs_diff_eq!(p.c * p.c, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p.d * p.d, 0.125, epsilon = 1e-15);
        assert_abs_diff_eq!(p.s, 0.625, epsilon = 1e-15);
        let q = uqcm_params(2, None).unwrap();
        assert_abs_diff_eq!(q.s, 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.clone_fidelity(), 5.0 / 6.0, epsilon = 1e-15);
        let wz = wootters_zurek(2).unwrap();
        assert_eq!((wz.c, wz.d, wz.s), (1.0, 0.0, 1.0));
        assert!(uqcm_params(1, None).is_err());
        assert!(uqcm_params(3, Some(0.6)).is_err());
    }

    #[test]
    fn isometry_holds() {
        for n in 2..=4 {
            for d in [0.0, 0.1, d_max(n)] {
                let v = cloning_isometry(&uqcm_params(n, Some(d)).unwrap()).unwrap();
                assert!(isometry_error(&v) < 1e-12);
            }
        }
    }

    #[test]
    fn clone_pure_examples() {
        let p = uqcm_params(2, None).unwrap();
        let (_, m) = clone_pure(&PureState::basis(vec![2], &[0]).unwrap(), &p).unwrap();
        assert_abs_diff_eq!(m.at(0, 0).re, 5.0 / 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.at(1, 1).re, 1.0 / 6.0, epsilon = 1e-12);

        let psi = PureState::normalized(vec![3], ComplexVector::from_element(3, r(1.0))).unwrap();
        let (_, m) = clone_pure(&psi, &uqcm_params(3, None).unwrap()).unwrap();
        let expected = scaled_form(&psi, 0.625).unwrap();
        assert!(qcore::max_abs_diff(m.matrix(), expected.matrix()) < 1e-12);

        let (full, _) = clone_pure(&PureState::basis(vec![2], &[1]).unwrap(), &wootters_zurek(2).unwrap()).unwrap();
        let copies = partial_trace(&full.density(), &[0, 1]).unwrap();
        assert_abs_diff_eq!(copies.at(3, 3).re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn optimal_pair_filter_matches_printed_matrix_up_to_scale() {
        let pair = qutrit_cloned_pair(0.125f64.sqrt()).unwrap();
        let check = reduction_check(&pair.joint).unwrap();
        assert!(check.violated);
        // The printed filter, read as a vector, lies in the negative eigenspace of ρ_A⊗I − ρ.
        let printed = optimal_filter_closed_form().a;
        let v = ComplexVector::from_fn(9, |k, _| printed[(k / 3, k % 3)]);
        let ra = partial_trace_matrix(pair.joint.matrix(), &[3, 3], &[0]).unwrap();
        let op = qcore::tensor(&ra, &ComplexMatrix::identity(3, 3)) - pair.joint.matrix();
        let residual = &op * &v - &v * r(check.side_a.0);
        assert!(residual.norm() < 1e-10);
    }

    #[test]
    fn identity_filter_is_a_no_op() {
        let pair = qutrit_cloned_pair(0.3).unwrap();
        let f = FilterMatrix { a: ComplexMatrix::identity(3, 3) };
        let out = distill(&pair.joint, &f).unwrap();
        assert!(qcore::max_abs_diff(out.matrix(), pair.joint.matrix()) < 1e-12);
        let zero = FilterMatrix { a: ComplexMatrix::zeros(3, 3) };
        assert!(distill(&pair.joint, &zero).is_err());
    }

    #[test]
    fn reduction_holds_for_products() {
        let a = DensityMatrix::from_real(vec![3], &[0.5, 0.1, 0.0, 0.1, 0.3, 0.0, 0.0, 0.0, 0.2]).unwrap();
        let b = DensityMatrix::maximally_mixed(vec![3]).unwrap();
        assert!(!reduction_check(&a.tensor(&b)).unwrap().violated);
        assert!(filter_from_reduction(&a.tensor(&b)).is_err());
    }

    #[test]
    fn non_optimal_filter_domain() {
        assert!(non_optimal_filter(0.4).is_err());
        assert!(non_optimal_filter(0.5).is_ok());
        let check = reduction_check(&qutrit_cloned_pair(0.47).unwrap().joint).unwrap();
        assert_abs_diff_eq!(check.side_a.0, non_optimal_reduction_eigenvalue(0.47), epsilon = 1e-10);
    }

    #[test]
    fn witness_and_capacity_examples() {
        let phi = statezoo::generalized_max_entangled(3).unwrap().density();
        assert_abs_diff_eq!(teleportation_witness_qutrit(&phi).unwrap(), -2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(dense_coding_capacity(&phi).unwrap(), 2.0 * 3f64.log2(), epsilon = 1e-10);
        let mixed = DensityMatrix::maximally_mixed(vec![3, 3]).unwrap();
        assert_abs_diff_eq!(teleportation_witness_qutrit(&mixed).unwrap(), 2.0 / 9.0, epsilon = 1e-12);
        assert!(teleportation_witness_qutrit(&DensityMatrix::maximally_mixed(vec![2, 2]).unwrap()).is_err());
    }

    #[test]
    fn bipartite_examples() {
        let p = qubit_params_from_c((2.0f64 / 3.0).sqrt()).unwrap();
        let out = clone_bipartite(0.5, &p).unwrap();
        let nl = out.nonlocal.matrix();
        assert_abs_diff_eq!(nl[(0, 0)].re, 13.0 / 36.0, epsilon = 1e-12);
        assert_abs_diff_eq!(nl[(0, 3)].re, 2.0 / 9.0, epsilon = 1e-12);
        assert_abs_diff_eq!(nl[(1, 1)].re, 5.0 / 36.0, epsilon = 1e-12);
        let w = measures::witness_expectation(&measures::optimal_witness_two_qubit(), &out.local).unwrap();
        assert_abs_diff_eq!(w, 1.0 / (3.0 * 3f64.sqrt()), epsilon = 1e-12);
        assert_abs_diff_eq!(critical_concurrence(1.0).unwrap(), 0.5, epsilon = 1e-15);
        assert!(critical_concurrence(0.5).is_err());
        assert!(clone_bipartite(1.5, &p).is_err());
    }

    #[test]
    fn bipartite_cloning_is_valid_on_a_fine_grid() {
        // Large rank-one projectors here used to trip the eigen-solver into non-finite values.
        for k in 0..=400 {
            let c = k as f64 / 400.0;
            let p = qubit_params_from_c(c).unwrap();
            for l in [0.0, 0.3, 0.5, 1.0] {
                let out = clone_bipartite(l, &p).unwrap();
                assert!(out.nonlocal.eigenvalues().iter().all(|x| x.is_finite() && *x > -1e-12));
            }
        }
    }
}
