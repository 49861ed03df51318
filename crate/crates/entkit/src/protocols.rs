//! Controlled dense coding and cloning-controlled secret sharing, simulated step by step.
//!
//! # Controlled dense coding
//!
//! A controller (Cliff, and for four-party states also Paul) measures his qubit in the rotated
//! basis `|+⟩ = cosθ|0⟩ + sinθ|1⟩`, `|−⟩ = sinθ|0⟩ − cosθ|1⟩`. The sender Alice then adds an
//! auxiliary qubit in `|0⟩`, applies a collective unitary to (her qubit, auxiliary) and measures
//! the auxiliary qubit. On outcome `0` Alice and Bob hold a filtered two-party state; when that
//! state is maximally entangled two bits are sent, otherwise one.
//!
//! The collective unitaries act on (Alice, auxiliary) with flat index `A + 2·aux`; their
//! auxiliary-`0` block is the local filter `diag(t, 1)` on Alice's qubit. The qutrit braid
//! matrices act on (Alice, auxiliary) with flat index `3·A + aux`.
//!
//! Two filter policies are used:
//!
//! - GHZ-like channels (`ghz`, `ghz_class`, `pati`, `ghz4`, `liqiu_w`) get the equalizing filter,
//!   which rescales Alice's two computational branches to equal weight. For `ghz` at the outcome
//!   `|+⟩` this is exactly `U₁(θ)`, and for `ghz4` at `(+, +)` exactly `U₂(θ, ε)`. When the
//!   required ratio exceeds one, the mirror image (Alice's levels swapped) is used instead.
//! - W-type channels (`w3`, `w4`) get the fixed filter `U₁(θ)`, driven by Cliff's angle, and
//!   mirrored when `|tan θ| > 1`.
//!
//! Reported figures of merit, conditioned on the controller outcomes:
//!
//! - `success_probability = P(aux = 0) · (1 − √(1 − C²))`, with `C` the concurrence of the
//!   normalized auxiliary-`0` state. The second factor is the optimal probability of converting
//!   that pure state into a maximally entangled pair.
//! - `bits_transmitted_avg = 1 + success_probability`.
//!
//! # Secret sharing
//!
//! Charlie encodes a bit as `|Ψ⁺⟩` (bit 0) or `|Ψ⁻⟩` (bit 1). Cliff clones both qubits with the
//! universal qubit machine, and Alice and Bob receive the non-local pair. Alice measures in the
//! Hadamard basis and announces her outcome. Bob then applies the three-outcome measurement
//! `E₁, E₂, E₃` and succeeds with probability `Q = 4c²d²`.

use std::collections::BTreeMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cloning::{self, CloningParams};
use crate::error::{domain, Result};
use crate::measures;
use crate::qcore::{
    self, gates, hermitian_eigen, hermiticity_error, partial_trace_matrix, r, unitarity_error, ComplexMatrix,
    ComplexVector, DensityMatrix, PureState, C64,
};
use crate::statezoo;

/// Every collective unitary must be unitary to this tolerance.
pub const TOL_UNITARY: f64 = 1e-10;
/// A shared state counts as maximally entangled when its concurrence is within this of one.
pub const TOL_MAX_ENTANGLED: f64 = 1e-9;
/// Outcome branches with smaller probability are treated as impossible.
pub const MIN_BRANCH_PROBABILITY: f64 = 1e-14;
/// Slack allowed when a radicand `1 − x²` dips below zero through rounding.
pub const TOL_RADICAND: f64 = 1e-12;
/// Monte-Carlo shots per independent random stream.
pub const MONTE_CARLO_CHUNK: u64 = 4096;

// ---------------------------------------------------------------------------------------------
// Measurement bases
// ---------------------------------------------------------------------------------------------

/// An orthonormal measurement basis for a controller.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementBasis {
    /// Rotation angle in radians.
    pub angle: f64,
    /// One label per basis vector, in outcome order.
    pub labels: Vec<String>,
    #[serde(skip)]
    pub vectors: Vec<ComplexVector>,
}

impl MeasurementBasis {
    /// `|+⟩ = cosθ|0⟩ + sinθ|1⟩`, `|−⟩ = sinθ|0⟩ − cosθ|1⟩`.
    pub fn qubit(theta: f64) -> Self {
        let (s, co) = theta.sin_cos();
        Self {
            angle: theta,
            labels: vec!["+".into(), "-".into()],
            vectors: vec![real_vector(&[co, s]), real_vector(&[s, -co])],
        }
    }

    /// The computational basis `{|0⟩, |1⟩}`.
    pub fn computational_qubit() -> Self {
        Self {
            angle: 0.0,
            labels: vec!["0".into(), "1".into()],
            vectors: vec![real_vector(&[1.0, 0.0]), real_vector(&[0.0, 1.0])],
        }
    }

    /// `|↑⟩ = sinθ|0⟩ + cosθ|2⟩`, `|↗⟩ = |1⟩`, `|↓⟩ = cosθ|0⟩ − sinθ|2⟩`.
    pub fn qutrit(theta: f64) -> Self {
        let (s, co) = theta.sin_cos();
        Self {
            angle: theta,
            labels: vec!["up".into(), "diag".into(), "down".into()],
            vectors: vec![real_vector(&[s, 0.0, co]), real_vector(&[0.0, 1.0, 0.0]), real_vector(&[co, 0.0, -s])],
        }
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.vectors.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let g = self.vectors[i].dotc(&self.vectors[j]);
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - r(target)).norm());
            }
        }
        worst
    }

    fn vector(&self, k: usize) -> Result<&ComplexVector> {
        match self.vectors.get(k) {
            Some(v) => Ok(v),
            None => domain(format!("outcome index {k} outside 0..{}", self.vectors.len())),
        }
    }

    fn label(&self, k: usize) -> String {
        self.labels.get(k).cloned().unwrap_or_else(|| k.to_string())
    }
}

fn real_vector(x: &[f64]) -> ComplexVector {
    ComplexVector::from_iterator(x.len(), x.iter().map(|&v| r(v)))
}

// ---------------------------------------------------------------------------------------------
// Collective unitaries
// ---------------------------------------------------------------------------------------------

/// Which collective unitary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitaryTag {
    /// Single-angle 4×4 filter unitary.
    U1,
    /// Two-angle 4×4 filter unitary.
    U2,
    /// 9×9 braid matrix for the `|↑⟩` outcome.
    V1,
    /// 9×9 braid matrix for the `|↓⟩` outcome.
    V2,
    /// The 4×4 unitary of the three-qubit GHZ scheme; identical to `U1`.
    Hao,
}

impl UnitaryTag {
    pub fn name(self) -> &'static str {
        match self {
            UnitaryTag::U1 => "U1",
            UnitaryTag::U2 => "U2",
            UnitaryTag::V1 => "V1",
            UnitaryTag::V2 => "V2",
            UnitaryTag::Hao => "hao",
        }
    }
}

/// A collective unitary on (Alice, auxiliary) together with the angles that built it.
#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveUnitary {
    pub tag: UnitaryTag,
    pub theta: f64,
    pub epsilon: Option<f64>,
    pub matrix: ComplexMatrix,
}

/// `√(1 − x²)`, or a domain error naming the radical when `|x| > 1`.
fn radical(x: f64, name: &str) -> Result<f64> {
    let v = 1.0 - x * x;
    if !v.is_finite() || v < -TOL_RADICAND {
        return domain(format!("radicand of {name} is {v:.6e} < 0"));
    }
    Ok(v.max(0.0).sqrt())
}

fn ratio(num: f64, den: f64, name: &str) -> Result<f64> {
    if den.abs() < 1e-300 {
        return domain(format!("{name} has a vanishing denominator"));
    }
    Ok(num / den)
}

/// The 4×4 filter unitary with auxiliary-`0` block `diag(t, 1)`, index `A + 2·aux`.
fn u1_matrix(t: f64) -> Result<ComplexMatrix> {
    let s = radical(t, "√(1 − t²)")?;
    #[rustfmt::skip]
    let e = [
        t,   0.0, s,   0.0,
        0.0, 1.0, 0.0, 0.0,
        0.0, 0.0, 0.0, -1.0,
        s,   0.0, -t,  0.0,
    ];
    Ok(qcore::real_matrix(4, 4, &e))
}

/// The two-angle variant: the ratio enters the same filter block, the orthogonal
/// complement is routed through `|A=0, aux=1⟩`.
fn u2_matrix(q: f64) -> Result<ComplexMatrix> {
    let s = radical(q, "√(1 − q²)")?;
    #[rustfmt::skip]
    let e = [
        q,   0.0, s,   0.0,
        0.0, 1.0, 0.0, 0.0,
        -s,  0.0, q,   0.0,
        0.0, 0.0, 0.0, -1.0,
    ];
    Ok(qcore::real_matrix(4, 4, &e))
}

/// Conjugation by `X` on Alice's qubit: the filter then acts on level 1 instead of level 0.
fn mirror_alice(m: &ComplexMatrix) -> ComplexMatrix {
    let p = qcore::tensor(&gates::identity(), &gates::pauli_x());
    // Flat index A + 2·aux means Alice is the least significant factor.
    &p * m * &p
}

/// 9×9 braid matrix with `(0,0) = a`, `(2,2) = b` and the matching radicals.
fn braid_matrix(a: f64, b: f64, name_a: &str, name_b: &str) -> Result<ComplexMatrix> {
    let ra = radical(a, name_a)?;
    let rb = radical(b, name_b)?;
    let mut m = ComplexMatrix::identity(9, 9);
    m[(0, 0)] = r(a);
    m[(0, 8)] = r(ra);
    m[(8, 0)] = r(ra);
    m[(8, 8)] = r(-a);
    m[(2, 2)] = r(b);
    m[(2, 6)] = r(rb);
    m[(6, 2)] = r(rb);
    m[(6, 6)] = r(-b);
    Ok(m)
}

/// Builds a collective unitary from its angles.
///
/// Domains: `U1`/`hao` need `|sin θ| ≤ |cos θ|`; `U2` needs `|sin θ sin ε| ≤ |cos θ cos ε|`;
/// `V1` and `V2` carry both `√(1 − cot²θ)` and `√(1 − tan²θ)` and are therefore real and
/// unitary only where `|sin θ| = |cos θ|`. Outside its domain the error names the radical whose
/// argument would go negative.
pub fn collective_unitary(tag: UnitaryTag, theta: f64, epsilon: Option<f64>) -> Result<CollectiveUnitary> {
    if !theta.is_finite() || epsilon.is_some_and(|e| !e.is_finite()) {
        return domain("angles must be finite");
    }
    let (s, co) = theta.sin_cos();
    let matrix = match tag {
        UnitaryTag::U1 | UnitaryTag::Hao => {
            if epsilon.is_some() {
                return domain(format!("{} takes a single angle", tag.name()));
            }
            let t = ratio(s, co, "sinθ/cosθ")?;
            u1_matrix(t).map_err(|_| rename(tag, "√(1 − sin²θ/cos²θ)", t))?
        }
        UnitaryTag::U2 => {
            let Some(eps) = epsilon else {
                return domain("U2 needs the second angle ε");
            };
            let (se, ce) = eps.sin_cos();
            let q = ratio(s * se, co * ce, "sinθ sinε/(cosθ cosε)")?;
            u2_matrix(q).map_err(|_| rename(tag, "√(1 − sin²θ sin²ε/(cos²θ cos²ε))", q))?
        }
        UnitaryTag::V1 | UnitaryTag::V2 => {
            if epsilon.is_some() {
                return domain(format!("{} takes a single angle", tag.name()));
            }
            let cot = ratio(co, s, "cosθ/sinθ")?;
            let tan = ratio(s, co, "sinθ/cosθ")?;
            let (a, b, na, nb) = if tag == UnitaryTag::V1 {
                (cot, tan, "√(1 − cos²θ/sin²θ)", "√(1 − sin²θ/cos²θ)")
            } else {
                (tan, cot, "√(1 − sin²θ/cos²θ)", "√(1 − cos²θ/sin²θ)")
            };
            if 1.0 - a * a < -TOL_RADICAND {
                return Err(rename(tag, na, a));
            }
            if 1.0 - b * b < -TOL_RADICAND {
                return Err(rename(tag, nb, b));
            }
            braid_matrix(a, b, na, nb)?
        }
    };
    let err = unitarity_error(&matrix);
    if err > TOL_UNITARY {
        return domain(format!("{} at θ = {theta} is not unitary (error {err:.3e})", tag.name()));
    }
    Ok(CollectiveUnitary { tag, theta, epsilon, matrix })
}

fn rename(tag: UnitaryTag, radical_name: &str, x: f64) -> crate::Error {
    crate::Error::Domain(format!(
        "{} outside its domain: radicand of {radical_name} is {:.6e} < 0",
        tag.name(),
        1.0 - x * x
    ))
}

// ---------------------------------------------------------------------------------------------
// Controlled dense coding
// ---------------------------------------------------------------------------------------------

/// Channels available to controlled dense coding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CdcFamily {
    /// (|000⟩ + |111⟩)/√2 over (A, B, C).
    Ghz,
    /// One of the seven GHZ-class states, `i ∈ 1..=7`.
    GhzClass { i: u8 },
    /// (|000⟩ + l|111⟩)/√(1+l²), `l > 0`.
    Pati { l: f64 },
    /// (|0000⟩ + |1111⟩)/√2 over (P, A, B, C).
    Ghz4,
    /// The prototype three-qubit W state.
    W3,
    /// The four-qubit W state over (P, A, B, C).
    W4,
    /// Li–Qiu W-class state, `n ≥ 1`; the controller reads the computational basis.
    LiqiuW { n: f64 },
    /// (|000⟩ + |111⟩ + |222⟩)/√3 over three qutrits.
    QutritGhz,
}

impl CdcFamily {
    pub fn tag(&self) -> String {
        match self {
            CdcFamily::Ghz => "ghz".into(),
            CdcFamily::GhzClass { i } => format!("ghz_class({i})"),
            CdcFamily::Pati { l } => format!("pati(l={l})"),
            CdcFamily::Ghz4 => "ghz4".into(),
            CdcFamily::W3 => "w3".into(),
            CdcFamily::W4 => "w4".into(),
            CdcFamily::LiqiuW { n } => format!("liqiu_w(n={n})"),
            CdcFamily::QutritGhz => "qutrit_ghz".into(),
        }
    }

    /// Four-party channels have a second controller, Paul, holding the first qubit.
    pub fn has_paul(&self) -> bool {
        matches!(self, CdcFamily::Ghz4 | CdcFamily::W4)
    }

    /// Ratio between the family written with unit coefficients and its normalized form.
    ///
    /// Multiplying `|branch|²` by the square of this reproduces concurrences quoted on the
    /// unnormalized branch amplitudes.
    pub fn amplitude_scale(&self) -> f64 {
        match self {
            CdcFamily::Ghz | CdcFamily::GhzClass { .. } | CdcFamily::Ghz4 | CdcFamily::LiqiuW { .. } => 2f64.sqrt(),
            CdcFamily::Pati { l } => (1.0 + l * l).sqrt(),
            CdcFamily::W3 | CdcFamily::QutritGhz => 3f64.sqrt(),
            CdcFamily::W4 => 2.0,
        }
    }

    fn state(&self) -> Result<PureState> {
        match *self {
            CdcFamily::Ghz => Ok(statezoo::ghz3()),
            CdcFamily::GhzClass { i } => statezoo::ghz_class(i),
            CdcFamily::Pati { l } => statezoo::pati(l),
            CdcFamily::Ghz4 => Ok(statezoo::ghz4()),
            CdcFamily::W3 => Ok(statezoo::w3_prototype()),
            CdcFamily::W4 => Ok(statezoo::w4()),
            CdcFamily::LiqiuW { n } => statezoo::liqiu_w(n),
            CdcFamily::QutritGhz => Ok(statezoo::qutrit_ghz3()),
        }
    }

    fn filter_policy(&self) -> FilterPolicy {
        match self {
            CdcFamily::W3 | CdcFamily::W4 => FilterPolicy::FixedTan,
            _ => FilterPolicy::Equalizing,
        }
    }

    fn unitary_tag(&self) -> UnitaryTag {
        match self {
            CdcFamily::Ghz | CdcFamily::GhzClass { .. } => UnitaryTag::Hao,
            CdcFamily::Ghz4 => UnitaryTag::U2,
            _ => UnitaryTag::U1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FilterPolicy {
    Equalizing,
    FixedTan,
}

/// Controller and auxiliary outcomes selecting one branch of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct CdcOutcomes {
    /// Cliff's outcome: 0 = `|+⟩`, 1 = `|−⟩` (qutrits: 0 = ↑, 1 = ↗, 2 = ↓).
    pub controller: usize,
    /// Paul's outcome for four-party channels (0 = `|+⟩`, 1 = `|−⟩`).
    pub paul: Option<usize>,
    /// Alice's auxiliary readout.
    pub aux: usize,
}

/// The filter Alice actually applied.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AppliedFilter {
    pub tag: UnitaryTag,
    /// Ratio placed on the filtered level, in `[−1, 1]`.
    pub ratio: f64,
    /// Alice's level carrying the ratio.
    pub level: usize,
}

/// Transcript of one controlled-dense-coding branch.
#[derive(Debug, Clone, Serialize)]
pub struct CdcReport {
    pub family: String,
    pub theta: f64,
    pub epsilon: Option<f64>,
    pub outcomes: CdcOutcomes,
    /// Human-readable outcome labels, in measurement order.
    pub outcome_labels: Vec<String>,
    /// Probability of the controller outcomes.
    pub controller_probability: f64,
    /// Concurrence of the controller-conditioned state before Alice's filter.
    pub prefilter_concurrence: f64,
    /// The filter Alice applied, if any.
    pub filter: Option<AppliedFilter>,
    /// Probability of the requested auxiliary outcome given the controller outcomes.
    pub aux_probability: f64,
    #[serde(skip)]
    pub shared_state: PureState,
    /// Real and imaginary parts of the normalized shared amplitudes.
    pub shared_amplitudes: Vec<[f64; 2]>,
    /// Concurrence of the normalized shared state.
    pub shared_concurrence: f64,
    /// `2|ad − bc|` on the branch amplitudes with the family's normalization dropped.
    pub amplitude_concurrence: f64,
    /// Probability of ending with a maximally entangled pair, given the controller outcomes.
    pub success_probability: f64,
    pub bits_transmitted_avg: f64,
    pub maximally_entangled: bool,
}

/// An unnormalized branch: its squared norm is the branch probability.
#[derive(Debug, Clone)]
struct Branch {
    dims: Vec<usize>,
    amps: ComplexVector,
}

impl Branch {
    fn from_state(s: &PureState) -> Self {
        Self { dims: s.dims().to_vec(), amps: s.amplitudes().clone() }
    }

    fn weight(&self) -> f64 {
        self.amps.norm_squared()
    }

    /// Projects subsystem `k` onto `v`, removing it.
    fn project(&self, k: usize, v: &ComplexVector) -> Branch {
        let d = self.dims[k];
        let inner: usize = self.dims[k + 1..].iter().product();
        let outer: usize = self.dims[..k].iter().product();
        let mut amps = ComplexVector::zeros(outer * inner);
        for o in 0..outer {
            for i in 0..inner {
                amps[o * inner + i] = (0..d).map(|j| v[j].conj() * self.amps[(o * d + j) * inner + i]).sum::<C64>();
            }
        }
        let mut dims = self.dims.clone();
        dims.remove(k);
        Branch { dims, amps }
    }

    fn normalized(&self) -> Result<PureState> {
        PureState::normalized(self.dims.clone(), self.amps.clone())
    }
}

/// Schmidt weights of a bipartite pure state over `da ⊗ db`, descending.
fn schmidt_weights(psi: &PureState) -> Result<Vec<f64>> {
    let dims = psi.dims();
    if dims.len() != 2 {
        return domain("shared state must be bipartite");
    }
    let rho_a = partial_trace_matrix(&qcore::projector(psi.amplitudes()), dims, &[0])?;
    Ok(hermitian_eigen(&rho_a)?.values.iter().map(|&x| x.max(0.0)).collect())
}

/// Concurrence of a bipartite pure state: `2|ad − bc|` for qubits, `√(2(1 − Tr ρ_A²))` otherwise.
pub fn pure_concurrence(psi: &PureState) -> Result<f64> {
    let dims = psi.dims();
    if dims == [2, 2] {
        let a = psi.amplitudes();
        return Ok((a[0] * a[3] - a[1] * a[2]).norm() * 2.0);
    }
    let w = schmidt_weights(psi)?;
    let purity: f64 = w.iter().map(|x| x * x).sum();
    Ok((2.0 * (1.0 - purity)).max(0.0).sqrt())
}

/// Optimal probability of converting `psi` into a two-level maximally entangled pair by local
/// operations and classical communication: `min(1, 2(1 − λ_max))`.
pub fn conversion_probability(psi: &PureState) -> Result<f64> {
    let w = schmidt_weights(psi)?;
    let max = w.first().copied().unwrap_or(1.0);
    Ok((2.0 * (1.0 - max)).clamp(0.0, 1.0))
}

/// Applies a 4×4 collective unitary (index `A + 2·aux`) to `|ψ⟩_AB|0⟩_aux`; returns the two
/// auxiliary branches over (A, B).
fn apply_qubit_collective(psi: &PureState, u: &ComplexMatrix) -> [Branch; 2] {
    let amps = psi.amplitudes();
    let mut out = [ComplexVector::zeros(4), ComplexVector::zeros(4)];
    for a in 0..2 {
        for b in 0..2 {
            let x = amps[2 * a + b];
            for a2 in 0..2 {
                for (aux, branch) in out.iter_mut().enumerate() {
                    branch[2 * a2 + b] += u[(a2 + 2 * aux, a)] * x;
                }
            }
        }
    }
    out.map(|amps| Branch { dims: vec![2, 2], amps })
}

/// Applies a 9×9 collective unitary (index `3·A + aux`) to `|ψ⟩_AB|0⟩_aux`.
fn apply_qutrit_collective(psi: &PureState, u: &ComplexMatrix) -> [Branch; 3] {
    let amps = psi.amplitudes();
    let mut out = [ComplexVector::zeros(9), ComplexVector::zeros(9), ComplexVector::zeros(9)];
    for a in 0..3 {
        for b in 0..3 {
            let x = amps[3 * a + b];
            for a2 in 0..3 {
                for (aux, branch) in out.iter_mut().enumerate() {
                    branch[3 * a2 + b] += u[(3 * a2 + aux, 3 * a)] * x;
                }
            }
        }
    }
    out.map(|amps| Branch { dims: vec![3, 3], amps })
}

/// Chooses Alice's filter for a two-qubit shared state.
fn choose_filter(family: &CdcFamily, theta: f64, shared: &PureState) -> Result<(AppliedFilter, ComplexMatrix)> {
    let (level, ratio) = match family.filter_policy() {
        FilterPolicy::Equalizing => {
            let a = shared.amplitudes();
            let n0 = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt();
            let n1 = (a[2].norm_sqr() + a[3].norm_sqr()).sqrt();
            if n0 >= n1 {
                (0, n1 / n0)
            } else {
                (1, n0 / n1)
            }
        }
        FilterPolicy::FixedTan => {
            let (s, co) = theta.sin_cos();
            if s.abs() <= co.abs() {
                (0, s / co)
            } else {
                (1, co / s)
            }
        }
    };
    let tag = family.unitary_tag();
    let base = if tag == UnitaryTag::U2 { u2_matrix(ratio)? } else { u1_matrix(ratio)? };
    let matrix = if level == 0 { base } else { mirror_alice(&base) };
    Ok((AppliedFilter { tag, ratio, level }, matrix))
}

fn check_theta(theta: f64) -> Result<()> {
    if !theta.is_finite() {
        return domain(format!("controller angle θ = {theta} must be finite"));
    }
    Ok(())
}

/// Controller stage shared by single runs and branch enumeration.
struct ControllerStage {
    labels: Vec<String>,
    probability: f64,
    shared: PureState,
}

fn controller_stage(
    family: &CdcFamily,
    state: &PureState,
    theta: f64,
    epsilon: Option<f64>,
    controller: usize,
    paul: Option<usize>,
) -> Result<ControllerStage> {
    let cliff_basis = match family {
        CdcFamily::LiqiuW { .. } => MeasurementBasis::computational_qubit(),
        _ => MeasurementBasis::qubit(theta),
    };
    let last = state.dims().len() - 1;
    let mut branch = Branch::from_state(state).project(last, cliff_basis.vector(controller)?);
    let mut labels = vec![format!("cliff={}", cliff_basis.label(controller))];
    if family.has_paul() {
        let eps = epsilon.ok_or_else(|| crate::Error::Domain(format!("{} needs Paul's angle ε", family.tag())))?;
        if !eps.is_finite() {
            return domain(format!("Paul's angle ε = {eps} must be finite"));
        }
        let paul_basis = MeasurementBasis::qubit(eps);
        let k = paul.unwrap_or(0);
        branch = branch.project(0, paul_basis.vector(k)?);
        labels.push(format!("paul={}", paul_basis.label(k)));
    } else if epsilon.is_some() || paul.is_some() {
        return domain(format!("{} has no second controller", family.tag()));
    }
    let probability = branch.weight();
    if probability < MIN_BRANCH_PROBABILITY {
        return domain(format!("controller outcome {labels:?} has zero probability"));
    }
    Ok(ControllerStage { labels, probability, shared: branch.normalized()? })
}

/// Simulates one branch of controlled dense coding.
///
/// The controller outcomes select the two-party state; Alice filters it with her collective
/// unitary and reads her auxiliary qubit (`outcomes.aux`). Success probability and average bits
/// are averaged over Alice's readout, conditioned on the controller outcomes.
pub fn cdc_run(family: CdcFamily, theta: f64, epsilon: Option<f64>, outcomes: CdcOutcomes) -> Result<CdcReport> {
    if family == CdcFamily::QutritGhz {
        if epsilon.is_some() || outcomes.paul.is_some() {
            return domain("qutrit_ghz has no second controller");
        }
        return qutrit_cdc_run(theta, outcomes.controller, outcomes.aux);
    }
    check_theta(theta)?;
    let state = family.state()?;
    let stage = controller_stage(&family, &state, theta, epsilon, outcomes.controller, outcomes.paul)?;
    let prefilter_concurrence = pure_concurrence(&stage.shared)?;
    let (filter, branches) = if prefilter_concurrence < MIN_BRANCH_PROBABILITY {
        // A product state has nothing to concentrate; Alice skips the filter.
        let zero = Branch { dims: vec![2, 2], amps: ComplexVector::zeros(4) };
        (None, [Branch::from_state(&stage.shared), zero])
    } else {
        let (filter, u) = choose_filter(&family, theta, &stage.shared)?;
        (Some(filter), apply_qubit_collective(&stage.shared, &u))
    };
    let success_probability = aux_zero_success(&branches[0])?;
    let chosen = match branches.get(outcomes.aux) {
        Some(b) => b,
        None => return domain(format!("auxiliary outcome {} outside 0..2", outcomes.aux)),
    };
    let aux_probability = chosen.weight();
    if aux_probability < MIN_BRANCH_PROBABILITY {
        return domain(format!("auxiliary outcome {} has zero probability", outcomes.aux));
    }
    let shared_state = chosen.normalized()?;
    let shared_concurrence = pure_concurrence(&shared_state)?;
    let mut outcome_labels = stage.labels;
    outcome_labels.push(format!("aux={}", outcomes.aux));
    let theta_reported = if matches!(family, CdcFamily::LiqiuW { .. }) { 0.0 } else { theta };
    Ok(CdcReport {
        family: family.tag(),
        theta: theta_reported,
        epsilon,
        outcomes: CdcOutcomes {
            paul: if family.has_paul() { Some(outcomes.paul.unwrap_or(0)) } else { None },
            ..outcomes
        },
        outcome_labels,
        controller_probability: stage.probability,
        prefilter_concurrence,
        filter,
        aux_probability,
        shared_amplitudes: amplitude_pairs(&shared_state),
        shared_state,
        shared_concurrence,
        amplitude_concurrence: family.amplitude_scale().powi(2)
            * stage.probability
            * aux_probability
            * shared_concurrence,
        success_probability,
        bits_transmitted_avg: 1.0 + success_probability,
        maximally_entangled: shared_concurrence >= 1.0 - TOL_MAX_ENTANGLED,
    })
}

fn aux_zero_success(b0: &Branch) -> Result<f64> {
    let p0 = b0.weight();
    if p0 < MIN_BRANCH_PROBABILITY {
        return Ok(0.0);
    }
    Ok(p0 * conversion_probability(&b0.normalized()?)?)
}

fn amplitude_pairs(psi: &PureState) -> Vec<[f64; 2]> {
    psi.amplitudes().iter().map(|z| [z.re, z.im]).collect()
}

/// Controlled dense coding over qutrits with the `(|000⟩ + |111⟩ + |222⟩)/√3` channel.
///
/// Cliff measures `{|↑⟩, |↗⟩, |↓⟩}` (outcomes 0, 1, 2). On `|↑⟩` Alice applies `V₁`, on `|↓⟩`
/// she applies `V₂`, and on `|↗⟩` the shared state is the product `|11⟩` and no unitary is
/// applied. The braid matrices are real and unitary only at `|sin θ| = |cos θ|`.
pub fn qutrit_cdc_run(theta: f64, controller: usize, aux: usize) -> Result<CdcReport> {
    check_theta(theta)?;
    let basis = MeasurementBasis::qutrit(theta);
    let state = statezoo::qutrit_ghz3();
    let cliff = Branch::from_state(&state).project(2, basis.vector(controller)?);
    let controller_probability = cliff.weight();
    if controller_probability < MIN_BRANCH_PROBABILITY {
        return domain(format!("controller outcome {} has zero probability", basis.label(controller)));
    }
    let shared = cliff.normalized()?;
    let prefilter_concurrence = pure_concurrence(&shared)?;
    let (filter, branches) = match controller {
        1 => {
            let zero = Branch { dims: vec![3, 3], amps: ComplexVector::zeros(9) };
            (None, [Branch::from_state(&shared), zero.clone(), zero])
        }
        _ => {
            let tag = if controller == 0 { UnitaryTag::V1 } else { UnitaryTag::V2 };
            let v = collective_unitary(tag, theta, None)?;
            let ratio = v.matrix[(0, 0)].re;
            (Some(AppliedFilter { tag, ratio, level: 0 }), apply_qutrit_collective(&shared, &v.matrix))
        }
    };
    let success_probability = aux_zero_success(&branches[0])?;
    let chosen = match branches.get(aux) {
        Some(b) => b,
        None => return domain(format!("auxiliary outcome {aux} outside 0..3")),
    };
    let aux_probability = chosen.weight();
    if aux_probability < MIN_BRANCH_PROBABILITY {
        return domain(format!("auxiliary outcome {aux} has zero probability"));
    }
    let shared_state = chosen.normalized()?;
    let shared_concurrence = pure_concurrence(&shared_state)?;
    Ok(CdcReport {
        family: CdcFamily::QutritGhz.tag(),
        theta,
        epsilon: None,
        outcomes: CdcOutcomes { controller, paul: None, aux },
        outcome_labels: vec![format!("cliff={}", basis.label(controller)), format!("aux={aux}")],
        controller_probability,
        prefilter_concurrence,
        filter,
        aux_probability,
        shared_amplitudes: amplitude_pairs(&shared_state),
        shared_state,
        shared_concurrence,
        amplitude_concurrence: 3.0 * controller_probability * aux_probability * shared_concurrence,
        success_probability,
        bits_transmitted_avg: 1.0 + success_probability,
        maximally_entangled: shared_concurrence >= 1.0 - TOL_MAX_ENTANGLED,
    })
}

/// Alice's four qutrit encodings on levels {0, 2}: `|0⟩⟨0| + |2⟩⟨2|`, `|0⟩⟨2| + |2⟩⟨0|`,
/// `|0⟩⟨2| − |2⟩⟨0|`, `|0⟩⟨0| − |2⟩⟨2|`, applied to her half of `shared`.
pub fn qutrit_encodings(shared: &PureState) -> Result<Vec<PureState>> {
    if shared.dims() != [3, 3] {
        return domain("qutrit encodings need a two-qutrit state");
    }
    let op = |e: [(usize, usize, f64); 2]| {
        let mut m = ComplexMatrix::zeros(3, 3);
        for (i, j, v) in e {
            m[(i, j)] = r(v);
        }
        m
    };
    let ops = [
        op([(0, 0, 1.0), (2, 2, 1.0)]),
        op([(0, 2, 1.0), (2, 0, 1.0)]),
        op([(0, 2, 1.0), (2, 0, -1.0)]),
        op([(0, 0, 1.0), (2, 2, -1.0)]),
    ];
    ops.iter()
        .map(|m| {
            PureState::normalized(vec![3, 3], qcore::tensor(m, &ComplexMatrix::identity(3, 3)) * shared.amplitudes())
        })
        .collect()
}

/// One joint outcome of a run with its total probability.
#[derive(Debug, Clone, Serialize)]
pub struct BranchRecord {
    pub labels: Vec<String>,
    pub probability: f64,
    /// Probability that this branch ends with a maximally entangled pair.
    pub conversion_probability: f64,
    pub shared_concurrence: f64,
}

/// Every joint outcome (controllers, then Alice's auxiliary) with non-zero probability.
pub fn cdc_branches(family: CdcFamily, theta: f64, epsilon: Option<f64>) -> Result<Vec<BranchRecord>> {
    check_theta(theta)?;
    let (n_ctrl, n_paul, n_aux) = match family {
        CdcFamily::QutritGhz => (3, 1, 3),
        f if f.has_paul() => (2, 2, 2),
        _ => (2, 1, 2),
    };
    let mut out = Vec::new();
    for controller in 0..n_ctrl {
        for p in 0..n_paul {
            let paul = family.has_paul().then_some(p);
            for aux in 0..n_aux {
                let outcomes = CdcOutcomes { controller, paul, aux };
                match cdc_run(family, theta, epsilon, outcomes) {
                    Ok(rep) => {
                        let conversion = if aux == 0 { conversion_probability(&rep.shared_state)? } else { 0.0 };
                        out.push(BranchRecord {
                            labels: rep.outcome_labels,
                            probability: rep.controller_probability * rep.aux_probability,
                            conversion_probability: conversion,
                            shared_concurrence: rep.shared_concurrence,
                        });
                    }
                    Err(crate::Error::Domain(msg)) if msg.contains("zero probability") => continue,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(out)
}

/// Success probability and bits averaged over every controller outcome.
#[derive(Debug, Clone, Serialize)]
pub struct CdcAverage {
    pub family: String,
    pub theta: f64,
    pub epsilon: Option<f64>,
    pub success_probability: f64,
    pub bits_transmitted_avg: f64,
    pub branches: Vec<BranchRecord>,
}

pub fn cdc_average(family: CdcFamily, theta: f64, epsilon: Option<f64>) -> Result<CdcAverage> {
    let branches = cdc_branches(family, theta, epsilon)?;
    let success: f64 = branches.iter().map(|b| b.probability * b.conversion_probability).sum();
    Ok(CdcAverage {
        family: family.tag(),
        theta,
        epsilon,
        success_probability: success,
        bits_transmitted_avg: 1.0 + success,
        branches,
    })
}

/// Closed-form success probability averaged over the controller outcomes.
///
/// - `ghz`, `ghz_class`: `2 min(sin²θ, cos²θ)`, i.e. bits `1 + 2sin²θ` on `[0, π/4]` and
///   `1 + 2cos²θ` on `[π/4, π/2]`.
/// - `pati(l)` (here `l ≥ 0` is admitted): `2[min(cos²θ, l²sin²θ) + min(sin²θ, l²cos²θ)]/(1+l²)`,
///   which equals `2l²/(1+l²)` for `l ≤ 1` both at `θ = π/4` and at the matched angle
///   `θ = arctan(1/l)`.
/// - `ghz4`: `Σ_{j,k} min(w_j0² v_k0², w_j1² v_k1²)` over Paul's `w` and Cliff's `v` basis vectors.
/// - `liqiu_w(n)`: `1/(n+1)`.
/// - `qutrit_ghz`: `2/3` where the braid matrices exist.
/// - `w3`, `w4`: no closed form; the simulated average is returned.
pub fn cdc_success_probability(family: CdcFamily, theta: f64, epsilon: Option<f64>) -> Result<f64> {
    check_theta(theta)?;
    let (s, co) = theta.sin_cos();
    let (s2, c2) = (s * s, co * co);
    match family {
        CdcFamily::Ghz => Ok(2.0 * s2.min(c2)),
        CdcFamily::GhzClass { i } => {
            statezoo::ghz_class(i)?;
            Ok(2.0 * s2.min(c2))
        }
        CdcFamily::Pati { l } => {
            if !(l.is_finite() && l >= 0.0) {
                return domain(format!("pati parameter l = {l} must be real and ≥ 0"));
            }
            let l2 = l * l;
            Ok(2.0 * (c2.min(l2 * s2) + s2.min(l2 * c2)) / (1.0 + l2))
        }
        CdcFamily::Ghz4 => {
            let Some(eps) = epsilon else {
                return domain("ghz4 needs Paul's angle ε");
            };
            let v = MeasurementBasis::qubit(theta);
            let w = MeasurementBasis::qubit(eps);
            let mut total = 0.0;
            for vk in &v.vectors {
                for wj in &w.vectors {
                    total += (wj[0].norm_sqr() * vk[0].norm_sqr()).min(wj[1].norm_sqr() * vk[1].norm_sqr());
                }
            }
            Ok(total)
        }
        CdcFamily::LiqiuW { n } => {
            statezoo::liqiu_w(n)?;
            Ok(1.0 / (n + 1.0))
        }
        CdcFamily::QutritGhz => {
            collective_unitary(UnitaryTag::V1, theta, None)?;
            Ok(2.0 / 3.0)
        }
        CdcFamily::W3 | CdcFamily::W4 => Ok(cdc_average(family, theta, epsilon)?.success_probability),
    }
}

/// The controller angle matched to `pati(l)`: `θ = arctan(1/l)`.
pub fn pati_matched_angle(l: f64) -> Result<f64> {
    if !(l.is_finite() && l >= 0.0) {
        return domain(format!("pati parameter l = {l} must be real and ≥ 0"));
    }
    Ok(if l == 0.0 { std::f64::consts::FRAC_PI_2 } else { (1.0 / l).atan() })
}

/// `2l²/(1+l²)` on `l ∈ [0, 1]`.
pub fn pati_success_closed_form(l: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&l) {
        return domain(format!("pati parameter l = {l} outside [0, 1]"));
    }
    Ok(2.0 * l * l / (1.0 + l * l))
}

/// `|sin 2θ|`: concurrence of the GHZ channel after Cliff's measurement.
pub fn ghz_prefilter_concurrence(theta: f64) -> f64 {
    (2.0 * theta).sin().abs()
}

/// `2 sin²θ sin²ε`: the four-qubit GHZ branch `(+, +, aux 0)` on unnormalized amplitudes.
pub fn ghz4_amplitude_concurrence(theta: f64, epsilon: f64) -> f64 {
    2.0 * theta.sin().powi(2) * epsilon.sin().powi(2)
}

/// Concurrence of the normalized `w3` branch `(+, aux 0)`:
/// `2 sinθ cos³θ / (sin⁴θ + sin²θ cos²θ + cos⁴θ)`.
pub fn w3_shared_concurrence(theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    2.0 * (s * c * c * c).abs() / (s.powi(4) + s * s * c * c + c.powi(4))
}

/// Concurrence of the normalized `w4` branch `(+, +, aux 0)`:
/// the state `a|00⟩ + sinθ cosε|01⟩ + cosθ cosε|10⟩` with `a = sinθ sinε + sin²θ cosε / cosθ`.
pub fn w4_shared_concurrence(theta: f64, epsilon: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let (se, ce) = epsilon.sin_cos();
    // Scaled by cosθ so the ray stays finite at cosθ = 0.
    let a = s * se * c + s * s * ce;
    let b = s * ce * c;
    let d = c * ce * c;
    let n2 = a * a + b * b + d * d;
    if n2 == 0.0 {
        return 0.0;
    }
    2.0 * (b * d).abs() / n2
}

/// `sin 2θ cos²ε`: the `w4` branch `(+, +, aux 0)` on unnormalized amplitudes, for `|tan θ| ≤ 1`.
pub fn w4_amplitude_concurrence(theta: f64, epsilon: f64) -> f64 {
    (2.0 * theta).sin() * epsilon.cos().powi(2)
}

// ---------------------------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------------------------

/// Empirical outcome counts next to the exact values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloSummary {
    pub shots: u64,
    pub seed: u64,
    /// Counts per joint outcome label.
    pub counts: BTreeMap<String, u64>,
    /// Exact probability per joint outcome label.
    pub exact: BTreeMap<String, f64>,
    pub successes: u64,
    pub empirical_success: f64,
    pub exact_success: f64,
}

/// Samples `shots` runs over `(label, probability, success probability)` outcomes.
///
/// Shots are split into chunks of [`MONTE_CARLO_CHUNK`], each with its own ChaCha stream derived
/// from `seed`; chunk counts are summed, so the result does not depend on the thread count.
pub fn monte_carlo(outcomes: &[(String, f64, f64)], shots: u64, seed: u64) -> Result<MonteCarloSummary> {
    if outcomes.is_empty() {
        return domain("no outcomes to sample");
    }
    if outcomes.iter().any(|(_, p, s)| !(p.is_finite() && *p >= 0.0) || !(0.0..=1.0 + 1e-12).contains(s)) {
        return domain("outcome probabilities must be finite and non-negative, successes in [0, 1]");
    }
    let dist = WeightedIndex::new(outcomes.iter().map(|o| o.1))
        .map_err(|e| crate::Error::Domain(format!("invalid outcome weights: {e}")))?;
    let chunks = shots.div_ceil(MONTE_CARLO_CHUNK);
    let (counts, successes) = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let n = MONTE_CARLO_CHUNK.min(shots - k * MONTE_CARLO_CHUNK);
            let mut counts = vec![0u64; outcomes.len()];
            let mut successes = 0u64;
            for _ in 0..n {
                let i = dist.sample(&mut rng);
                counts[i] += 1;
                if rng.random::<f64>() < outcomes[i].2 {
                    successes += 1;
                }
            }
            (counts, successes)
        })
        .reduce(
            || (vec![0u64; outcomes.len()], 0u64),
            |(mut a, sa), (b, sb)| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                (a, sa + sb)
            },
        );
    let total: f64 = outcomes.iter().map(|o| o.1).sum();
    let mut count_map = BTreeMap::new();
    let mut exact = BTreeMap::new();
    for ((label, p, _), n) in outcomes.iter().zip(&counts) {
        *count_map.entry(label.clone()).or_insert(0) += n;
        *exact.entry(label.clone()).or_insert(0.0) += p / total;
    }
    Ok(MonteCarloSummary {
        shots,
        seed,
        counts: count_map,
        exact,
        successes,
        empirical_success: if shots == 0 { 0.0 } else { successes as f64 / shots as f64 },
        exact_success: outcomes.iter().map(|o| o.1 * o.2).sum::<f64>() / total,
    })
}

/// Samples complete controlled-dense-coding runs.
pub fn cdc_monte_carlo(
    family: CdcFamily,
    theta: f64,
    epsilon: Option<f64>,
    shots: u64,
    seed: u64,
) -> Result<MonteCarloSummary> {
    let outcomes: Vec<(String, f64, f64)> = cdc_branches(family, theta, epsilon)?
        .into_iter()
        .map(|b| (b.labels.join(","), b.probability, b.conversion_probability))
        .collect();
    monte_carlo(&outcomes, shots, seed)
}

// ---------------------------------------------------------------------------------------------
// Secret sharing
// ---------------------------------------------------------------------------------------------

/// Alice's Hadamard-basis readout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HadamardOutcome {
    /// `(|0⟩ + |1⟩)/√2`, announced as bit 0.
    Plus,
    /// `(|0⟩ − |1⟩)/√2`, announced as bit 1.
    Minus,
}

impl HadamardOutcome {
    pub fn sign(self) -> f64 {
        match self {
            HadamardOutcome::Plus => 1.0,
            HadamardOutcome::Minus => -1.0,
        }
    }

    fn label(self) -> &'static str {
        match self {
            HadamardOutcome::Plus => "+",
            HadamardOutcome::Minus => "-",
        }
    }
}

/// Status of the three measurement elements as operators.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PovmValidity {
    pub hermitian: [bool; 3],
    /// Smallest eigenvalue of each element's Hermitian part.
    pub min_eigenvalue: [f64; 3],
    pub positive: [bool; 3],
    /// Whether `E₁ + E₂ + E₃ = I`.
    pub complete: bool,
}

/// Transcript of one secret-sharing run.
#[derive(Debug, Clone, Serialize)]
pub struct SecretShareReport {
    pub c: f64,
    pub d: f64,
    /// `Q = 4c²d²`.
    pub q: f64,
    pub charlie_bit: u8,
    pub alice_outcome: HadamardOutcome,
    pub alice_probability: f64,
    #[serde(skip)]
    pub channel: DensityMatrix,
    /// The shared channel, row-major `[re, im]` pairs.
    pub channel_matrix: Vec<Vec<[f64; 2]>>,
    #[serde(skip)]
    pub bob_state: DensityMatrix,
    pub bob_matrix: Vec<Vec<[f64; 2]>>,
    /// `Tr(E₁ρ_B), Tr(E₂ρ_B), Tr(E₃ρ_B)`.
    pub povm_stats: [f64; 3],
    /// The element (1 or 2) that fires only on Bob's actual state.
    pub conclusive_element: u8,
    /// Charlie's bit as Bob reads it off a conclusive click.
    pub decoded_bit: u8,
    pub success_probability: f64,
    pub povm_validity: PovmValidity,
}

/// Machine parameters for the secret-sharing protocol, `c ∈ (1/√3, 1]`, `d² = (1 − c²)/2`.
pub fn secret_share_params(c: f64) -> Result<CloningParams> {
    cloning::critical_concurrence(c)?;
    cloning::qubit_params_from_c(c)
}

/// The channel shared by Alice and Bob: the non-local clone pair of `|Ψ⁺⟩` (bit 0) or `|Ψ⁻⟩`.
pub fn secret_share_channel(c: f64, charlie_bit: u8) -> Result<DensityMatrix> {
    if charlie_bit > 1 {
        return domain(format!("Charlie's bit must be 0 or 1, got {charlie_bit}"));
    }
    let params = secret_share_params(c)?;
    let plus = cloning::clone_bipartite(0.5, &params)?.nonlocal;
    if charlie_bit == 0 {
        return Ok(plus);
    }
    // The machine is covariant: a Z on the first original flips the sign of |00⟩⟨11|.
    let z1 = qcore::tensor(&gates::pauli_z(), &gates::identity());
    DensityMatrix::new(vec![2, 2], &z1 * plus.matrix() * &z1)
}

/// `((P+S)/2)(|00⟩⟨00| + |11⟩⟨11|) ± (Q/2)(|00⟩⟨11| + |11⟩⟨00|) + R(|01⟩⟨01| + |10⟩⟨10|)`.
pub fn secret_share_channel_closed_form(c: f64, charlie_bit: u8) -> Result<DensityMatrix> {
    let params = secret_share_params(c)?;
    let k = cloning::pqrs(&params);
    let sign = if charlie_bit == 0 { 1.0 } else { -1.0 };
    let (a, o) = ((k.p + k.s) / 2.0, sign * k.q / 2.0);
    #[rustfmt::skip]
    let e = [
        a,   0.0, 0.0, o,
        0.0, k.r, 0.0, 0.0,
        0.0, 0.0, k.r, 0.0,
        o,   0.0, 0.0, a,
    ];
    DensityMatrix::from_real(vec![2, 2], &e)
}

/// `E₁ = [[Q/2, 1], [0, Q/2]]`, `E₂ = [[Q/2, −1], [0, Q/2]]`, `E₃ = I − E₁ − E₂`, entered as written.
pub fn povm_elements(q: f64) -> [ComplexMatrix; 3] {
    let e1 = qcore::real_matrix(2, 2, &[q / 2.0, 1.0, 0.0, q / 2.0]);
    let e2 = qcore::real_matrix(2, 2, &[q / 2.0, -1.0, 0.0, q / 2.0]);
    let e3 = ComplexMatrix::identity(2, 2) - &e1 - &e2;
    [e1, e2, e3]
}

/// Reports Hermiticity, positivity and completeness of the measurement elements.
pub fn povm_validity(elements: &[ComplexMatrix; 3]) -> Result<PovmValidity> {
    let mut hermitian = [false; 3];
    let mut min_eigenvalue = [0.0; 3];
    let mut positive = [false; 3];
    for (k, e) in elements.iter().enumerate() {
        hermitian[k] = hermiticity_error(e) <= qcore::TOL_HERM;
        let h = (e + e.adjoint()) * r(0.5);
        let vals = hermitian_eigen(&h)?.values;
        min_eigenvalue[k] = vals.iter().copied().fold(f64::INFINITY, f64::min);
        positive[k] = hermitian[k] && min_eigenvalue[k] >= -qcore::TOL_PSD;
    }
    let sum = &elements[0] + &elements[1] + &elements[2];
    let complete = qcore::max_abs_diff(&sum, &ComplexMatrix::identity(2, 2)) <= 1e-12;
    Ok(PovmValidity { hermitian, min_eigenvalue, positive, complete })
}

/// `Tr(E ρ)`; the imaginary part must vanish.
fn trace_pairing(e: &ComplexMatrix, rho: &DensityMatrix) -> Result<f64> {
    let t = (e * rho.matrix()).trace();
    if t.im.abs() > 1e-12 {
        return domain(format!("Tr(Eρ) has imaginary part {:.3e}", t.im));
    }
    Ok(t.re)
}

fn matrix_rows(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

/// Runs the secret-sharing protocol for one choice of Charlie's bit and Alice's outcome.
pub fn secret_share_run(c: f64, charlie_bit: u8, alice_outcome: HadamardOutcome) -> Result<SecretShareReport> {
    let params = secret_share_params(c)?;
    let channel = secret_share_channel(c, charlie_bit)?;
    let q = cloning::pqrs(&params).q;
    let h = real_vector(&[1.0 / 2f64.sqrt(), alice_outcome.sign() / 2f64.sqrt()]);
    let proj = qcore::tensor(&qcore::projector(&h), &gates::identity());
    let post = &proj * channel.matrix() * &proj;
    let bob_unnormalized = partial_trace_matrix(&post, &[2, 2], &[1])?;
    let alice_probability = bob_unnormalized.trace().re;
    if alice_probability < MIN_BRANCH_PROBABILITY {
        return domain("Alice's outcome has zero probability");
    }
    let bob_state = DensityMatrix::from_unnormalized(vec![2], bob_unnormalized)?;
    let elements = povm_elements(q);
    let povm_stats = [
        trace_pairing(&elements[0], &bob_state)?,
        trace_pairing(&elements[1], &bob_state)?,
        trace_pairing(&elements[2], &bob_state)?,
    ];
    // Bob's state is ½[I + σ Q σx] with σ = (−1)^bit · (Alice's sign); E₁ fires only for σ = +1.
    let sigma = if charlie_bit == 0 { 1.0 } else { -1.0 } * alice_outcome.sign();
    let conclusive_element: u8 = if sigma > 0.0 { 1 } else { 2 };
    let decoded_bit = match (conclusive_element, alice_outcome) {
        (1, HadamardOutcome::Plus) | (2, HadamardOutcome::Minus) => 0,
        _ => 1,
    };
    let success_probability = povm_stats[conclusive_element as usize - 1];
    Ok(SecretShareReport {
        c,
        d: params.d,
        q,
        charlie_bit,
        alice_outcome,
        alice_probability,
        channel_matrix: matrix_rows(channel.matrix()),
        channel,
        bob_matrix: matrix_rows(bob_state.matrix()),
        bob_state,
        povm_stats,
        conclusive_element,
        decoded_bit,
        success_probability,
        povm_validity: povm_validity(&elements)?,
    })
}

/// Protocol success averaged over Charlie's bit and Alice's outcome.
pub fn secret_share_success(c: f64) -> Result<f64> {
    let mut total = 0.0;
    for bit in 0..2u8 {
        for out in [HadamardOutcome::Plus, HadamardOutcome::Minus] {
            let rep = secret_share_run(c, bit, out)?;
            total += 0.5 * rep.alice_probability * rep.success_probability;
        }
    }
    Ok(total)
}

/// Samples complete secret-sharing runs: Charlie's fair coin, Alice's readout, Bob's click.
pub fn secret_share_monte_carlo(c: f64, shots: u64, seed: u64) -> Result<MonteCarloSummary> {
    let mut outcomes = Vec::new();
    for bit in 0..2u8 {
        for out in [HadamardOutcome::Plus, HadamardOutcome::Minus] {
            let rep = secret_share_run(c, bit, out)?;
            for (k, &p) in rep.povm_stats.iter().enumerate() {
                if !(-1e-12..=1.0 + 1e-12).contains(&p) {
                    return domain(format!("Tr(E{}ρ) = {p} is not a probability", k + 1));
                }
                let label = format!("bit={bit},alice={},bob=E{}", out.label(), k + 1);
                let success = if k + 1 == rep.conclusive_element as usize { 1.0 } else { 0.0 };
                outcomes.push((label, 0.5 * rep.alice_probability * p.max(0.0), success));
            }
        }
    }
    monte_carlo(&outcomes, shots, seed)
}

/// Witness and concurrence checks on the non-local clone pair of `√λ₁|00⟩ + √λ₂|11⟩`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessChecks {
    /// `Tr(W⁽¹⁾ρ)` evaluated on the simulated state.
    pub w1_value: f64,
    /// `(−2/√3)(Q√(λ₁λ₂) − R)`.
    pub w1_closed_form: f64,
    /// `Tr(½(I − ι)ρ)` with `ι = σx⊗σx − σy⊗σy + σz⊗σz`.
    pub w2_value: f64,
    /// `(1 + c²)/(4c²)`.
    pub critical_concurrence: f64,
    /// `2√(λ₁λ₂)`.
    pub input_concurrence: f64,
    /// `Tr(W⁽¹⁾ρ) < 0`.
    pub entangled: bool,
    /// Concurrence of the simulated non-local pair.
    pub output_concurrence: f64,
}

pub fn secret_share_witness_checks(c: f64, lambda1: f64) -> Result<WitnessChecks> {
    let critical = cloning::critical_concurrence(c)?;
    let params = cloning::qubit_params_from_c(c)?;
    let out = cloning::clone_bipartite(lambda1, &params)?;
    let k = out.pqrs;
    let root = (lambda1 * (1.0 - lambda1)).max(0.0).sqrt();
    let w1_value = measures::witness_expectation(&measures::optimal_witness_two_qubit(), &out.nonlocal)?;
    let w2_value = measures::witness_expectation(&measures::pauli_witness_two_qubit(), &out.nonlocal)?;
    Ok(WitnessChecks {
        w1_value,
        w1_closed_form: -2.0 / 3f64.sqrt() * (k.q * root - k.r),
        w2_value,
        critical_concurrence: critical,
        input_concurrence: 2.0 * root,
        entangled: w1_value < 0.0,
        output_concurrence: measures::concurrence(&out.nonlocal)?,
    })
}
