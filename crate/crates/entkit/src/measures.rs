//! Entanglement, mixedness and distance measures.
//!
//! Conventions:
//! - entropies take an explicit logarithm base; `0·log 0 = 0`;
//! - negativity uses the trace norm of the partial transpose on the second subsystem;
//! - the singlet fraction is a maximization over all maximally entangled states,
//!   carried out by enumerating a unitary basis and then running a monotone ascent.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::qcore::{
    self, hermitian_eigen, hermiticity_error, partial_trace, partial_transpose, psd_sqrt, r, schmidt_decompose,
    trace_norm, ComplexMatrix, ComplexVector, DensityMatrix, PureState, C64, TOL_HERM,
};
use crate::random;

/// Default seed for the randomized restarts of [`singlet_fraction`].
pub const SINGLET_FRACTION_SEED: u64 = 0x5eed_f00d;
/// Number of Haar-random restarts used by [`singlet_fraction`].
pub const SINGLET_FRACTION_RESTARTS: usize = 32;
/// Convergence threshold of the ascent.
pub const SINGLET_FRACTION_TOL: f64 = 1e-9;
/// Determinant threshold for the Peres–Horodecki verdict.
pub const PH_DET_TOL: f64 = 1e-14;

fn require_two_qubits(rho: &DensityMatrix, what: &str) -> Result<()> {
    if rho.dims() != [2, 2] {
        return domain(format!("{what} needs a 2⊗2 state, got dims {:?}", rho.dims()));
    }
    Ok(())
}

fn require_bipartite(dims: &[usize], what: &str) -> Result<()> {
    if dims.len() != 2 {
        return domain(format!("{what} needs a bipartite state, got dims {dims:?}"));
    }
    Ok(())
}

/// (σy⊗σy) ρ* (σy⊗σy).
pub fn spin_flip(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    require_two_qubits(rho, "spin flip")?;
    let yy = qcore::tensor(&qcore::gates::pauli_y(), &qcore::gates::pauli_y());
    Ok(&yy * rho.matrix().conjugate() * &yy)
}

/// Eigenvalues of ρ below this are treated as exact zeros by [`concurrence`].
pub const CONCURRENCE_EIGEN_FLOOR: f64 = 1e-14;

/// Wootters concurrence of a two-qubit state.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho, "concurrence")?;
    // With ρ̃ = Yρ*Y, the square roots of the eigenvalues of ρρ̃ are the singular values of
    // √ρ·Y·√ρ*. Taking them directly avoids square roots of round-off noise on rank-deficient states.
    let yy = qcore::tensor(&qcore::gates::pauli_y(), &qcore::gates::pauli_y());
    // Eigenvalues at round-off level are zeroed before the square root: √(1e-16) would
    // otherwise leak ~1e-8 into the result.
    let s = qcore::hermitian_function(rho.matrix(), |x| if x > CONCURRENCE_EIGEN_FLOOR { x.sqrt() } else { 0.0 })?;
    let a = &s * yy * s.conjugate();
    let mut roots: Vec<f64> = a.singular_values().iter().copied().collect();
    roots.sort_by(|x, y| y.total_cmp(x));
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).max(0.0))
}

/// Tangle τ = C².
pub fn tangle(rho: &DensityMatrix) -> Result<f64> {
    concurrence(rho).map(|c| c * c)
}

/// Closed-form concurrence of the X-shaped matrix
/// `[[a,0,0,0],[0,b,c,0],[0,c*,d,0],[0,0,0,e]]`: `2·max(|c| − √(ae), 0)`.
pub fn concurrence_x_form(a: f64, b: f64, coherence: C64, d: f64, e: f64) -> Result<f64> {
    x_form_matrix(a, b, coherence, d, e)?;
    Ok(2.0 * (coherence.norm() - (a * e).sqrt()).max(0.0))
}

/// Assembles and validates the X-shaped matrix used by [`concurrence_x_form`].
pub fn x_form_matrix(a: f64, b: f64, coherence: C64, d: f64, e: f64) -> Result<DensityMatrix> {
    let z = C64::new(0.0, 0.0);
    #[rustfmt::skip]
    let m = qcore::complex_matrix(4, 4, &[
        r(a), z, z, z,
        z, r(b), coherence, z,
        z, coherence.conj(), r(d), z,
        z, z, z, r(e),
    ]);
    DensityMatrix::new(vec![2, 2], m)
}

/// Negativity. For 2⊗2 this is `2·max(0, −Σλ_neg)` of ρ^{T_B}; in general `(‖ρ^{T}‖₁ − 1)/(n − 1)`
/// with `n` the smaller local dimension. Both agree on 2⊗2.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    require_bipartite(rho.dims(), "negativity")?;
    let pt = partial_transpose(rho, 1)?;
    if rho.dims() == [2, 2] {
        let neg: f64 = hermitian_eigen(&pt)?.values.iter().filter(|&&x| x < 0.0).sum();
        return Ok(2.0 * (-neg).max(0.0));
    }
    let n = rho.dims()[0].min(rho.dims()[1]) as f64;
    Ok(((trace_norm(&pt) - 1.0) / (n - 1.0)).max(0.0))
}

/// Binary entropy in bits with `h(0) = h(1) = 0`.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

/// Entanglement of formation from the concurrence.
pub fn eof_from_concurrence(cc: f64) -> f64 {
    let cc = cc.clamp(0.0, 1.0);
    binary_entropy((1.0 + (1.0 - cc * cc).max(0.0).sqrt()) / 2.0)
}

/// Entanglement of formation of a two-qubit state.
pub fn entanglement_of_formation(rho: &DensityMatrix) -> Result<f64> {
    concurrence(rho).map(eof_from_concurrence)
}

/// Which entropy to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyKind {
    /// −Σ λ log λ.
    VonNeumann,
    /// n/(n−1)·(1 − Tr ρ²).
    Linear,
}

/// Shannon entropy of a probability vector in the given base.
pub fn shannon(probs: &[f64], base: f64) -> Result<f64> {
    check_base(base)?;
    Ok(probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum::<f64>() / base.ln())
}

fn check_base(base: f64) -> Result<()> {
    if !(base.is_finite() && base > 1.0) {
        return domain(format!("entropy base {base} must exceed 1"));
    }
    Ok(())
}

/// Von Neumann or linear entropy. `base` must exceed 1 for both kinds.
pub fn entropy(rho: &DensityMatrix, kind: EntropyKind, base: f64) -> Result<f64> {
    check_base(base)?;
    match kind {
        EntropyKind::VonNeumann => {
            let vals = hermitian_eigen(rho.matrix())?.values;
            let clipped: Vec<f64> = vals.iter().map(|&x| x.max(0.0)).collect();
            shannon(&clipped, base)
        }
        EntropyKind::Linear => {
            let n = rho.dim() as f64;
            Ok((n / (n - 1.0) * (1.0 - rho.purity())).max(0.0))
        }
    }
}

/// Von Neumann entropy in bits.
pub fn von_neumann_bits(rho: &DensityMatrix) -> f64 {
    entropy(rho, EntropyKind::VonNeumann, 2.0).expect("base 2 is valid")
}

/// Entropy of entanglement (bits) of a bipartite pure state, from the first marginal.
pub fn entropy_of_entanglement(psi: &PureState) -> Result<f64> {
    require_bipartite(psi.dims(), "entropy of entanglement")?;
    let rho_a = partial_trace(&psi.density(), &[0])?;
    Ok(von_neumann_bits(&rho_a))
}

/// Entropy of entanglement via the Schmidt coefficients (independent route).
pub fn entropy_of_entanglement_schmidt(psi: &PureState) -> Result<f64> {
    let s = schmidt_decompose(psi)?;
    let probs: Vec<f64> = s.coefficients.iter().map(|l| l * l).collect();
    shannon(&probs, 2.0)
}

/// Entropy of entanglement for a density matrix that must be pure.
pub fn entropy_of_entanglement_of(rho: &DensityMatrix) -> Result<f64> {
    require_bipartite(rho.dims(), "entropy of entanglement")?;
    let purity = rho.purity();
    if (purity - 1.0).abs() > 1e-10 {
        return domain(format!("entropy of entanglement needs a pure state, purity is {purity}"));
    }
    Ok(von_neumann_bits(&partial_trace(rho, &[0])?))
}

/// ⟨Φ_U|ρ|Φ_U⟩ for |Φ_U⟩ = Σ U_ij |i⟩|j⟩ / √n.
fn overlap_with_unitary(rho: &ComplexMatrix, u: &ComplexMatrix) -> f64 {
    let n = u.nrows();
    let v = vec_of(u);
    (v.adjoint() * rho * &v)[(0, 0)].re / n as f64
}

/// Row-major vectorization: entry (i, j) lands at index i·n + j.
fn vec_of(u: &ComplexMatrix) -> ComplexVector {
    let n = u.nrows();
    ComplexVector::from_fn(n * n, |k, _| u[(k / n, k % n)])
}

fn unvec(v: &ComplexVector, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| v[i * n + j])
}

/// Unitary factor of the polar decomposition.
fn polar_unitary(g: &ComplexMatrix) -> ComplexMatrix {
    let svd = g.clone().svd(true, true);
    svd.u.expect("requested U") * svd.v_t.expect("requested V^T")
}

/// Clock-and-shift unitaries Xˣ Zʸ, the usual orthogonal basis of maximally entangled states.
pub fn weyl_heisenberg(n: usize) -> Vec<ComplexMatrix> {
    let w = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / n as f64);
    let shift = ComplexMatrix::from_fn(n, n, |i, j| if i == (j + 1) % n { r(1.0) } else { r(0.0) });
    let clock = ComplexMatrix::from_fn(n, n, |i, j| if i == j { w.powu(i as u32) } else { r(0.0) });
    let mut out = Vec::with_capacity(n * n);
    let mut xp = ComplexMatrix::identity(n, n);
    for _ in 0..n {
        let mut zp = ComplexMatrix::identity(n, n);
        for _ in 0..n {
            out.push(&xp * &zp);
            zp = &zp * &clock;
        }
        xp = &xp * &shift;
    }
    out
}

/// Maximally entangled state (Σ U_ij|ij⟩)/√n for a unitary U.
pub fn maximally_entangled_from_unitary(u: &ComplexMatrix) -> Result<PureState> {
    let n = u.nrows();
    if qcore::unitarity_error(u) > 1e-10 {
        return domain("matrix is not unitary");
    }
    PureState::new(vec![n, n], vec_of(u) / r((n as f64).sqrt()))
}

fn require_square_bipartite(rho: &DensityMatrix) -> Result<usize> {
    let d = rho.dims();
    if d.len() != 2 || d[0] != d[1] {
        return domain(format!("singlet fraction needs an n⊗n state, got dims {d:?}"));
    }
    Ok(d[0])
}

/// Largest overlap of `rho` with the clock-and-shift maximally entangled basis (Bell basis for qubits).
pub fn singlet_fraction_basis(rho: &DensityMatrix) -> Result<f64> {
    let n = require_square_bipartite(rho)?;
    Ok(weyl_heisenberg(n).iter().map(|u| overlap_with_unitary(rho.matrix(), u)).fold(f64::NEG_INFINITY, f64::max))
}

fn ascend(rho: &ComplexMatrix, mut u: ComplexMatrix) -> f64 {
    let n = u.nrows();
    let mut f = overlap_with_unitary(rho, &u);
    for _ in 0..10_000 {
        let g = unvec(&(rho * vec_of(&u)), n);
        if g.iter().all(|z| z.norm() < 1e-300) {
            break;
        }
        let next = polar_unitary(&g);
        let fn_ = overlap_with_unitary(rho, &next);
        u = next;
        let gain = fn_ - f;
        f = f.max(fn_);
        if gain <= SINGLET_FRACTION_TOL {
            break;
        }
    }
    f
}

/// Fully entangled fraction `max_Φ ⟨Φ|ρ|Φ⟩` with a caller-chosen seed for the random restarts.
pub fn singlet_fraction_seeded(rho: &DensityMatrix, seed: u64) -> Result<f64> {
    let n = require_square_bipartite(rho)?;
    let m = rho.matrix();
    let mut best = f64::NEG_INFINITY;
    for u in weyl_heisenberg(n) {
        best = best.max(ascend(m, u));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SINGLET_FRACTION_RESTARTS {
        best = best.max(ascend(m, random::unitary(n, &mut rng)));
    }
    Ok(best)
}

/// Fully entangled fraction with the default seed.
pub fn singlet_fraction(rho: &DensityMatrix) -> Result<f64> {
    singlet_fraction_seeded(rho, SINGLET_FRACTION_SEED)
}

/// Distance or similarity between two states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// ½ Tr|ρ − σ|.
    Trace,
    /// Tr √(√ρ σ √ρ).
    Fidelity,
    /// Tr (ρ − σ)².
    HilbertSchmidt,
    /// √2 · √(1 − fidelity).
    Bures,
}

/// Uhlmann fidelity Tr √(√ρ σ √ρ) (not squared).
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dims(rho, sigma)?;
    let s = psd_sqrt(rho.matrix())?;
    let inner = &s * sigma.matrix() * &s;
    let inner = (&inner + inner.adjoint()) * r(0.5);
    let vals = hermitian_eigen(&inner)?.values;
    Ok(vals.iter().map(|&x| x.max(0.0).sqrt()).sum::<f64>().min(1.0))
}

fn same_dims(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dims() != sigma.dims() {
        return domain(format!("dimension mismatch {:?} vs {:?}", rho.dims(), sigma.dims()));
    }
    Ok(())
}

/// Evaluates the chosen metric.
pub fn distance(rho: &DensityMatrix, sigma: &DensityMatrix, metric: Metric) -> Result<f64> {
    same_dims(rho, sigma)?;
    let diff = rho.matrix() - sigma.matrix();
    match metric {
        Metric::Trace => Ok(0.5 * trace_norm(&diff)),
        Metric::Fidelity => fidelity(rho, sigma),
        Metric::HilbertSchmidt => Ok((&diff * &diff).trace().re.max(0.0)),
        Metric::Bures => Ok(2f64.sqrt() * (1.0 - fidelity(rho, sigma)?).max(0.0).sqrt()),
    }
}

/// Separability verdict for two qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Separability {
    Separable,
    Entangled,
}

/// Leading principal minors of the partially transposed matrix, with the verdict they imply.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeresHorodecki {
    pub w2: f64,
    pub w3: f64,
    pub w4: f64,
    pub verdict: Separability,
}

/// Determinant test: with W₂ ≥ 0, the state is entangled iff W₃ < 0 or W₄ < 0.
pub fn peres_horodecki(rho: &DensityMatrix) -> Result<PeresHorodecki> {
    require_two_qubits(rho, "Peres-Horodecki test")?;
    let pt = partial_transpose(rho, 1)?;
    let minor = |k: usize| -> f64 { pt.view((0, 0), (k, k)).into_owned().determinant().re };
    let (w2, w3, w4) = (minor(2), minor(3), minor(4));
    let entangled = w2 >= -PH_DET_TOL && (w3 < -PH_DET_TOL || w4 < -PH_DET_TOL);
    let verdict = if entangled { Separability::Entangled } else { Separability::Separable };
    Ok(PeresHorodecki { w2, w3, w4, verdict })
}

/// Re Tr(Wρ) for a Hermitian witness W.
pub fn witness_expectation(w: &ComplexMatrix, rho: &DensityMatrix) -> Result<f64> {
    if w.nrows() != rho.dim() || w.ncols() != rho.dim() {
        return domain(format!("witness is {}x{}, state is {}x{}", w.nrows(), w.ncols(), rho.dim(), rho.dim()));
    }
    let herm = hermiticity_error(w);
    if herm > TOL_HERM {
        return domain(format!("witness is not Hermitian (error {herm:.3e})"));
    }
    Ok(rho.expectation(w).re)
}

/// The two-qubit witness with diagonal (0, 1/√3, 1/√3, 0) and corner entries −1/√3.
pub fn optimal_witness_two_qubit() -> ComplexMatrix {
    let s = 1.0 / 3f64.sqrt();
    #[rustfmt::skip]
    let e = [
        0.0, 0.0, 0.0, -s,
        0.0, s, 0.0, 0.0,
        0.0, 0.0, s, 0.0,
        -s, 0.0, 0.0, 0.0,
    ];
    qcore::real_matrix(4, 4, &e)
}

/// ½(I − σx⊗σx + σy⊗σy − σz⊗σz).
pub fn pauli_witness_two_qubit() -> ComplexMatrix {
    let [x, y, z] = qcore::gates::paulis();
    let iota = qcore::tensor(&x, &x) - qcore::tensor(&y, &y) + qcore::tensor(&z, &z);
    (ComplexMatrix::identity(4, 4) - iota) * r(0.5)
}

/// Named scalar measures, as exposed on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    Concurrence,
    Tangle,
    Negativity,
    Eof,
    EntropyVn,
    EntropyLinear,
    SingletFraction,
    EntropyOfEntanglement,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 8] = [
        MeasureKind::Concurrence,
        MeasureKind::Tangle,
        MeasureKind::Negativity,
        MeasureKind::Eof,
        MeasureKind::EntropyVn,
        MeasureKind::EntropyLinear,
        MeasureKind::SingletFraction,
        MeasureKind::EntropyOfEntanglement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::Concurrence => "concurrence",
            MeasureKind::Tangle => "tangle",
            MeasureKind::Negativity => "negativity",
            MeasureKind::Eof => "eof",
            MeasureKind::EntropyVn => "entropy_vn",
            MeasureKind::EntropyLinear => "entropy_linear",
            MeasureKind::SingletFraction => "singlet_fraction",
            MeasureKind::EntropyOfEntanglement => "entropy_of_entanglement",
        }
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasureKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        MeasureKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            let names: Vec<&str> = MeasureKind::ALL.iter().map(|k| k.name()).collect();
            format!("unknown measure '{s}' (expected one of {})", names.join(", "))
        })
    }
}

/// A computed measure with the base used (entropies only).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureValue {
    pub kind: MeasureKind,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<f64>,
}

/// Evaluates a named measure. `base` is used by the von Neumann and linear entropies only;
/// the entropy of entanglement is always reported in bits.
pub fn evaluate(kind: MeasureKind, rho: &DensityMatrix, base: f64) -> Result<MeasureValue> {
    let (value, base) = match kind {
        MeasureKind::Concurrence => (concurrence(rho)?, None),
        MeasureKind::Tangle => (tangle(rho)?, None),
        MeasureKind::Negativity => (negativity(rho)?, None),
        MeasureKind::Eof => (entanglement_of_formation(rho)?, None),
        MeasureKind::EntropyVn => (entropy(rho, EntropyKind::VonNeumann, base)?, Some(base)),
        MeasureKind::EntropyLinear => (entropy(rho, EntropyKind::Linear, base)?, Some(base)),
        MeasureKind::SingletFraction => (singlet_fraction(rho)?, None),
        MeasureKind::EntropyOfEntanglement => (entropy_of_entanglement_of(rho)?, Some(2.0)),
    };
    Ok(MeasureValue { kind, value, base })
}

/// Builds a 2⊗2 density matrix with complex entries from a generic closure (test/CLI helper).
pub fn two_qubit_from_fn(f: impl Fn(usize, usize) -> C64) -> Result<DensityMatrix> {
    DensityMatrix::new(vec![2, 2], DMatrix::from_fn(4, 4, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statezoo::{bell, generalized_max_entangled, nmems, werner};
    use approx::assert_abs_diff_eq;

    fn product00() -> DensityMatrix {
        PureState::basis(vec![2, 2], &[0, 0]).unwrap().density()
    }

    #[test]
    fn concurrence_examples() {
        assert_abs_diff_eq!(concurrence(&bell(1).unwrap().density()).unwrap(), 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(concurrence(&werner(0.75).unwrap()).unwrap(), 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(concurrence(&product00()).unwrap(), 0.0, epsilon = 1e-10);
        let x = x_form_matrix(0.125, 0.375, r(0.25), 0.375, 0.125).unwrap();
        assert_abs_diff_eq!(concurrence(&x).unwrap(), 0.25, epsilon = 1e-10);
        let three = DensityMatrix::maximally_mixed(vec![3, 3]).unwrap();
        assert!(concurrence(&three).is_err());
    }

    #[test]
    fn x_form_examples() {
        assert_abs_diff_eq!(concurrence_x_form(0.125, 0.375, r(0.25), 0.375, 0.125).unwrap(), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(concurrence_x_form(0.25, 0.25, r(0.0), 0.25, 0.25).unwrap(), 0.0, epsilon = 1e-15);
        let q = 1.0 / 3.0;
        assert_abs_diff_eq!(concurrence_x_form(q, q, r(q), q, 0.0).unwrap(), 2.0 / 3.0, epsilon = 1e-15);
        assert!(concurrence_x_form(0.5, 0.5, r(0.5), 0.5, 0.5).is_err());
    }

    #[test]
    fn nmems_concurrence_matches_x_form() {
        for k in 0..=20 {
            let p = k as f64 / 20.0;
            let rho = nmems(p).unwrap();
            let q = (1.0 - p) / 3.0;
            let closed = concurrence_x_form((p + 2.0) / 6.0, q, r(q), q, p / 2.0).unwrap();
            assert_abs_diff_eq!(concurrence(&rho).unwrap(), closed, epsilon = 1e-10);
        }
    }

    #[test]
    fn negativity_examples() {
        assert_abs_diff_eq!(negativity(&bell(3).unwrap().density()).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(negativity(&product00()).unwrap(), 0.0, epsilon = 1e-12);
        let w = werner(0.9).unwrap();
        // Werner PT spectrum: three eigenvalues (2−F)/3·... ; the negative one is (1 − 2F)/2.
        assert_abs_diff_eq!(negativity(&w).unwrap(), 2.0 * 0.9 - 1.0, epsilon = 1e-12);
        assert!(negativity(&w).unwrap() <= concurrence(&w).unwrap() + 1e-12);
        let q = generalized_max_entangled(3).unwrap().density();
        assert_abs_diff_eq!(negativity(&q).unwrap(), 1.0, epsilon = 1e-12);
        let ghz = crate::statezoo::ghz3().density();
        assert!(negativity(&ghz).is_err());
    }

    #[test]
    fn eof_examples() {
        assert_abs_diff_eq!(entanglement_of_formation(&bell(1).unwrap().density()).unwrap(), 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(entanglement_of_formation(&product00()).unwrap(), 0.0, epsilon = 1e-10);
        let x: f64 = (1.0 + 0.75f64.sqrt()) / 2.0;
        let h = -x * x.log2() - (1.0 - x) * (1.0 - x).log2();
        assert_abs_diff_eq!(entanglement_of_formation(&werner(0.75).unwrap()).unwrap(), h, epsilon = 1e-9);
    }

    #[test]
    fn entropy_examples() {
        let pure = bell(2).unwrap().density();
        assert_abs_diff_eq!(entropy(&pure, EntropyKind::VonNeumann, 2.0).unwrap(), 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(entropy(&pure, EntropyKind::Linear, 2.0).unwrap(), 0.0, epsilon = 1e-10);
        let mixed = DensityMatrix::maximally_mixed(vec![2, 2]).unwrap();
        assert_abs_diff_eq!(entropy(&mixed, EntropyKind::VonNeumann, 4.0).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(entropy(&mixed, EntropyKind::Linear, 4.0).unwrap(), 1.0, epsilon = 1e-12);
        assert!(entropy(&mixed, EntropyKind::VonNeumann, 1.0).is_err());
        assert!(entropy(&mixed, EntropyKind::Linear, 0.5).is_err());
    }

    #[test]
    fn werner_linear_entropy_round_trip() {
        for k in 0..=10 {
            let f = 0.3 + 0.07 * k as f64;
            let sl = entropy(&werner(f).unwrap(), EntropyKind::Linear, 2.0).unwrap();
            assert_abs_diff_eq!((1.0 + 3.0 * (1.0 - sl).sqrt()) / 4.0, f, epsilon = 1e-10);
        }
    }

    #[test]
    fn entanglement_entropy_examples() {
        let b = bell(1).unwrap();
        assert_abs_diff_eq!(entropy_of_entanglement(&b).unwrap(), 1.0, epsilon = 1e-10);
        let p = PureState::basis(vec![2, 2], &[0, 0]).unwrap();
        assert_abs_diff_eq!(entropy_of_entanglement(&p).unwrap(), 0.0, epsilon = 1e-10);
        let s = PureState::from_real(vec![2, 2], &[0.9f64.sqrt(), 0.0, 0.0, 0.1f64.sqrt()]).unwrap();
        let h = binary_entropy(0.9);
        assert_abs_diff_eq!(entropy_of_entanglement(&s).unwrap(), h, epsilon = 1e-10);
        assert_abs_diff_eq!(entropy_of_entanglement_schmidt(&s).unwrap(), h, epsilon = 1e-10);
        assert!(entropy_of_entanglement_of(&werner(0.9).unwrap()).is_err());
    }

    #[test]
    fn singlet_fraction_examples() {
        assert_abs_diff_eq!(singlet_fraction(&bell(3).unwrap().density()).unwrap(), 1.0, epsilon = 1e-10);
        let mixed9 = DensityMatrix::maximally_mixed(vec![3, 3]).unwrap();
        assert_abs_diff_eq!(singlet_fraction(&mixed9).unwrap(), 1.0 / 9.0, epsilon = 1e-10);
        assert_abs_diff_eq!(singlet_fraction(&werner(0.8).unwrap()).unwrap(), 0.8, epsilon = 1e-9);
        // Locally rotated Bell state is still maximally entangled but not in the basis.
        let mut rng = <ChaCha8Rng as SeedableRng>::seed_from_u64(3);
        let u = random::unitary(2, &mut rng);
        let psi = maximally_entangled_from_unitary(&u).unwrap();
        let f = singlet_fraction(&psi.density()).unwrap();
        assert_abs_diff_eq!(f, 1.0, epsilon = 1e-8);
        assert!(singlet_fraction_basis(&psi.density()).unwrap() < 0.999);
        let ghz = crate::statezoo::ghz3().density();
        assert!(singlet_fraction(&ghz).is_err());
    }

    #[test]
    fn distance_examples() {
        let a = PureState::basis(vec![2], &[0]).unwrap().density();
        let b = PureState::basis(vec![2], &[1]).unwrap().density();
        for m in [Metric::Trace, Metric::HilbertSchmidt, Metric::Bures] {
            assert_abs_diff_eq!(distance(&a, &a, m).unwrap(), 0.0, epsilon = 1e-7);
        }
        assert_abs_diff_eq!(distance(&a, &a, Metric::Fidelity).unwrap(), 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(distance(&a, &b, Metric::Trace).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(distance(&a, &b, Metric::HilbertSchmidt).unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(distance(&a, &b, Metric::Bures).unwrap(), 2f64.sqrt(), epsilon = 1e-7);
        assert!(distance(&a, &product00(), Metric::Trace).is_err());
    }

    #[test]
    fn peres_horodecki_examples() {
        assert_eq!(peres_horodecki(&product00()).unwrap().verdict, Separability::Separable);
        assert_eq!(peres_horodecki(&werner(0.9).unwrap()).unwrap().verdict, Separability::Entangled);
        assert_eq!(peres_horodecki(&werner(0.4).unwrap()).unwrap().verdict, Separability::Separable);
    }

    #[test]
    fn witness_examples() {
        let w = optimal_witness_two_qubit();
        let psi_plus = bell(1).unwrap().density();
        assert_abs_diff_eq!(witness_expectation(&w, &psi_plus).unwrap(), -1.0 / 3f64.sqrt(), epsilon = 1e-12);
        let mixed = DensityMatrix::maximally_mixed(vec![2, 2]).unwrap();
        assert_abs_diff_eq!(witness_expectation(&w, &mixed).unwrap(), w.trace().re / 4.0, epsilon = 1e-15);
        let bad = qcore::real_matrix(4, 4, &[0.0; 16]);
        assert!(witness_expectation(&bad, &DensityMatrix::maximally_mixed(vec![2]).unwrap()).is_err());
        let p = pauli_witness_two_qubit();
        assert!(witness_expectation(&p, &psi_plus).unwrap() < 0.0);
    }

    #[test]
    fn measure_names_round_trip() {
        for k in MeasureKind::ALL {
            assert_eq!(k.name().parse::<MeasureKind>().unwrap(), k);
        }
        assert!("bogus".parse::<MeasureKind>().is_err());
    }
}
