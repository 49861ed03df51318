//! Named pure and mixed state families.
//!
//! Bell states are indexed once for the whole crate:
//!
//! | k | label | vector                |
//! |---|-------|-----------------------|
//! | 1 | Ψ⁺    | (\|00⟩ + \|11⟩)/√2    |
//! | 2 | Ψ⁻    | (\|00⟩ − \|11⟩)/√2    |
//! | 3 | Φ⁺    | (\|01⟩ + \|10⟩)/√2    |
//! | 4 | Φ⁻    | (\|01⟩ − \|10⟩)/√2    |
//!
//! so the singlet is Φ⁻ (k = 4). Every constructor validates its parameters and
//! returns a state that has already passed the density/normalization checks.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::qcore::{
    self, basis_ket, partial_trace, projector, r, ComplexMatrix, ComplexVector, DensityMatrix, PureState,
};

/// Tolerance used when checking that mixture weights sum to one.
const TOL_WEIGHTS: f64 = 1e-10;

/// Parameterized two-qubit mixed families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum MixedFamily {
    /// Werner state with singlet fraction `f ∈ (1/4, 1]`.
    Werner { f: f64 },
    /// Munro–James–White–Kwiat MEMS whose parameter is its own concurrence, `c ∈ [0, 1]`.
    Mjwk { c: f64 },
    /// Wei et al. MEMS: a Ψ⁺ mixture with diagonal noise, weights summing to one.
    Wei { x: f64, y: f64, a: f64, b: f64, gamma: f64 },
    /// Werner state rotated onto √a|00⟩ + √(1−a)|11⟩, `f ∈ (1/2, 1]`, `a ∈ [1/2, 1]`.
    WernerDerivative { f: f64, a: f64 },
    /// GHZ/W marginal mixture `p ∈ [0, 1]`.
    Nmems { p: f64 },
    /// Ishizaka–Hiroshima MEMS with spectrum `p₁ ≥ p₂ ≥ p₃ ≥ p₄`.
    IhMems { p: [f64; 4] },
    /// Non-local output of cloning both halves of Ψ⁺ with machine weight `c2 = c²`.
    ClonedMems { c2: f64 },
}

/// Pure-state families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PureFamily {
    /// Bell state `k ∈ 1..=4` in the crate-wide order.
    Bell {
        k: u8,
    },
    Ghz3,
    Ghz4,
    /// One of the seven GHZ-class states `i ∈ 1..=7`.
    GhzClass {
        i: u8,
    },
    W3Prototype,
    W3NonPrototype,
    W4,
    /// (|000⟩ + l|111⟩)/√(1+l²), `l > 0`.
    Pati {
        l: f64,
    },
    /// (|φ⟩|0⟩ + |00⟩|1⟩)/√2 with |φ⟩ = (|10⟩ + √n|01⟩)/√(n+1), `n ≥ 1`.
    LiqiuW {
        n: f64,
    },
    QutritGhz3,
    /// Σᵢ|ii⟩/√n over n⊗n.
    GeneralizedMaxEntangled {
        n: usize,
    },
}

impl MixedFamily {
    /// Family tag as used on the command line.
    pub fn tag(&self) -> &'static str {
        match self {
            MixedFamily::Werner { .. } => "werner",
            MixedFamily::Mjwk { .. } => "mjwk",
            MixedFamily::Wei { .. } => "wei",
            MixedFamily::WernerDerivative { .. } => "werner_derivative",
            MixedFamily::Nmems { .. } => "nmems",
            MixedFamily::IhMems { .. } => "ih_mems",
            MixedFamily::ClonedMems { .. } => "cloned_mems",
        }
    }

    /// Parameter values in declaration order; used as a sort key for sweeps.
    pub fn parameters(&self) -> Vec<f64> {
        match *self {
            MixedFamily::Werner { f } => vec![f],
            MixedFamily::Mjwk { c } => vec![c],
            MixedFamily::Wei { x, y, a, b, gamma } => vec![x, y, a, b, gamma],
            MixedFamily::WernerDerivative { f, a } => vec![f, a],
            MixedFamily::Nmems { p } => vec![p],
            MixedFamily::IhMems { p } => p.to_vec(),
            MixedFamily::ClonedMems { c2 } => vec![c2],
        }
    }
}

impl fmt::Display for MixedFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MixedFamily::Werner { f: x } => write!(f, "werner(F={x})"),
            MixedFamily::Mjwk { c } => write!(f, "mjwk(C={c})"),
            MixedFamily::Wei { x, y, a, b, gamma } => write!(f, "wei(x={x},y={y},a={a},b={b},gamma={gamma})"),
            MixedFamily::WernerDerivative { f: x, a } => write!(f, "werner_derivative(F={x},a={a})"),
            MixedFamily::Nmems { p } => write!(f, "nmems(p={p})"),
            MixedFamily::IhMems { p } => write!(f, "ih_mems(p={p:?})"),
            MixedFamily::ClonedMems { c2 } => write!(f, "cloned_mems(c2={c2})"),
        }
    }
}

fn in_range(name: &str, x: f64, lo: f64, lo_open: bool, hi: f64) -> Result<()> {
    let ok = x.is_finite() && (if lo_open { x > lo } else { x >= lo }) && x <= hi;
    if !ok {
        let br = if lo_open { "(" } else { "[" };
        return domain(format!("{name} = {x} outside {br}{lo}, {hi}]"));
    }
    Ok(())
}

fn bell_vector(k: u8) -> Result<ComplexVector> {
    let s = FRAC_1_SQRT_2;
    let amps = match k {
        1 => [s, 0.0, 0.0, s],
        2 => [s, 0.0, 0.0, -s],
        3 => [0.0, s, s, 0.0],
        4 => [0.0, s, -s, 0.0],
        _ => return domain(format!("Bell index {k} outside 1..=4")),
    };
    Ok(ComplexVector::from_iterator(4, amps.iter().map(|&x| r(x))))
}

/// Bell state `k ∈ 1..=4`: Ψ⁺, Ψ⁻, Φ⁺, Φ⁻.
pub fn bell(k: u8) -> Result<PureState> {
    PureState::new(vec![2, 2], bell_vector(k)?)
}

/// |Bₖ⟩⟨Bₖ| as a raw matrix.
pub fn bell_projector(k: u8) -> Result<ComplexMatrix> {
    Ok(projector(&bell_vector(k)?))
}

fn sparse_qubits(n: usize, terms: &[(&str, f64)]) -> Result<PureState> {
    let dims = vec![2; n];
    let mut v = ComplexVector::zeros(1 << n);
    for (bits, w) in terms {
        debug_assert_eq!(bits.len(), n);
        let digits: Vec<usize> = bits.bytes().map(|b| (b - b'0') as usize).collect();
        v += basis_ket(&dims, &digits) * r(*w);
    }
    PureState::normalized(dims, v)
}

pub fn ghz3() -> PureState {
    sparse_qubits(3, &[("000", 1.0), ("111", 1.0)]).expect("fixed state")
}

pub fn ghz4() -> PureState {
    sparse_qubits(4, &[("0000", 1.0), ("1111", 1.0)]).expect("fixed state")
}

/// The GHZ-class table, qubit order (A, B, C).
pub fn ghz_class(i: u8) -> Result<PureState> {
    let (u, v, sign) = match i {
        1 => ("010", "101", 1.0),
        2 => ("010", "101", -1.0),
        3 => ("001", "110", -1.0),
        4 => ("001", "110", 1.0),
        5 => ("100", "011", -1.0),
        6 => ("100", "011", 1.0),
        7 => ("000", "111", -1.0),
        _ => return domain(format!("GHZ-class index {i} outside 1..=7")),
    };
    sparse_qubits(3, &[(u, 1.0), (v, sign)])
}

/// (|100⟩ + |010⟩ + |001⟩)/√3.
pub fn w3_prototype() -> PureState {
    sparse_qubits(3, &[("100", 1.0), ("010", 1.0), ("001", 1.0)]).expect("fixed state")
}

/// (|100⟩ + |010⟩ + √2|001⟩)/2.
pub fn w3_nonprototype() -> PureState {
    sparse_qubits(3, &[("100", 1.0), ("010", 1.0), ("001", 2f64.sqrt())]).expect("fixed state")
}

/// Four-qubit W state, qubit order (P, A, B, C).
pub fn w4() -> PureState {
    sparse_qubits(4, &[("1000", 1.0), ("0100", 1.0), ("0010", 1.0), ("0001", 1.0)]).expect("fixed state")
}

/// (|000⟩ + l|111⟩)/√(1+l²) for real `l > 0`.
pub fn pati(l: f64) -> Result<PureState> {
    if !(l.is_finite() && l > 0.0) {
        return domain(format!("pati parameter l = {l} must be real and > 0"));
    }
    sparse_qubits(3, &[("000", 1.0), ("111", l)])
}

/// Li–Qiu W-class state for `n ≥ 1`; reduces to a Bell pair on AB when C reads 0 and `n = 1`.
pub fn liqiu_w(n: f64) -> Result<PureState> {
    if !(n.is_finite() && n >= 1.0) {
        return domain(format!("Li-Qiu parameter n = {n} must be ≥ 1"));
    }
    let k = 1.0 / (n + 1.0).sqrt();
    sparse_qubits(3, &[("100", k), ("010", n.sqrt() * k), ("001", 1.0)])
}

/// (|000⟩ + |111⟩ + |222⟩)/√3 over three qutrits.
pub fn qutrit_ghz3() -> PureState {
    let dims = vec![3, 3, 3];
    let v = (0..3).map(|k| basis_ket(&dims, &[k, k, k])).fold(ComplexVector::zeros(27), |a, b| a + b);
    PureState::normalized(dims, v).expect("fixed state")
}

/// Σᵢ|ii⟩/√n over n⊗n.
pub fn generalized_max_entangled(n: usize) -> Result<PureState> {
    if n < 2 {
        return domain(format!("dimension n = {n} must be ≥ 2"));
    }
    let dims = vec![n, n];
    let v = (0..n).map(|k| basis_ket(&dims, &[k, k])).fold(ComplexVector::zeros(n * n), |a, b| a + b);
    PureState::normalized(dims, v)
}

/// Builds any pure family member.
pub fn make_pure(params: PureFamily) -> Result<PureState> {
    match params {
        PureFamily::Bell { k } => bell(k),
        PureFamily::Ghz3 => Ok(ghz3()),
        PureFamily::Ghz4 => Ok(ghz4()),
        PureFamily::GhzClass { i } => ghz_class(i),
        PureFamily::W3Prototype => Ok(w3_prototype()),
        PureFamily::W3NonPrototype => Ok(w3_nonprototype()),
        PureFamily::W4 => Ok(w4()),
        PureFamily::Pati { l } => pati(l),
        PureFamily::LiqiuW { n } => liqiu_w(n),
        PureFamily::QutritGhz3 => Ok(qutrit_ghz3()),
        PureFamily::GeneralizedMaxEntangled { n } => generalized_max_entangled(n),
    }
}

fn two_qubit(entries: &[f64]) -> Result<DensityMatrix> {
    DensityMatrix::from_real(vec![2, 2], entries)
}

/// (1−F)/3·I + (4F−1)/3·|Φ⁻⟩⟨Φ⁻|, for `F ∈ (1/4, 1]`.
pub fn werner(f: f64) -> Result<DensityMatrix> {
    in_range("F", f, 0.25, true, 1.0)?;
    let m = ComplexMatrix::identity(4, 4) * r((1.0 - f) / 3.0) + bell_projector(4)? * r((4.0 * f - 1.0) / 3.0);
    DensityMatrix::new(vec![2, 2], m)
}

/// Whether `F` lies in the sub-range (1/2, 1] where the Werner state is entangled.
pub fn werner_is_entangled(f: f64) -> bool {
    f > 0.5 && f <= 1.0
}

/// The piecewise diagonal weight of the MJWK family.
pub fn mjwk_h(c: f64) -> f64 {
    if c >= 2.0 / 3.0 {
        c / 2.0
    } else {
        1.0 / 3.0
    }
}

/// MJWK MEMS with concurrence `c ∈ [0, 1]`.
pub fn mjwk(c: f64) -> Result<DensityMatrix> {
    in_range("C", c, 0.0, false, 1.0)?;
    let h = mjwk_h(c);
    #[rustfmt::skip]
    let e = [
        h, 0.0, 0.0, c / 2.0,
        0.0, 1.0 - 2.0 * h, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0,
        c / 2.0, 0.0, 0.0, h,
    ];
    two_qubit(&e)
}

/// Wei et al. MEMS; all weights non-negative with `x+y+a+b+γ = 1`.
pub fn wei(x: f64, y: f64, a: f64, b: f64, gamma: f64) -> Result<DensityMatrix> {
    for (name, v) in [("x", x), ("y", y), ("a", a), ("b", b), ("gamma", gamma)] {
        if !(v.is_finite() && v >= 0.0) {
            return domain(format!("{name} = {v} must be non-negative"));
        }
    }
    let sum = x + y + a + b + gamma;
    if (sum - 1.0).abs() > TOL_WEIGHTS {
        return domain(format!("x+y+a+b+gamma = {sum}, must equal 1"));
    }
    let g = gamma / 2.0;
    #[rustfmt::skip]
    let e = [
        x + g, 0.0, 0.0, g,
        0.0, a, 0.0, 0.0,
        0.0, 0.0, b, 0.0,
        g, 0.0, 0.0, y + g,
    ];
    two_qubit(&e)
}

/// (1−F)/3·I + (4F−1)/3·|ψ⟩⟨ψ| with ψ = √a|00⟩ + √(1−a)|11⟩.
pub fn werner_derivative(f: f64, a: f64) -> Result<DensityMatrix> {
    in_range("F", f, 0.5, true, 1.0)?;
    in_range("a", a, 0.5, false, 1.0)?;
    let psi = sparse_qubits(2, &[("00", a.sqrt()), ("11", (1.0 - a).sqrt())])?;
    let m = ComplexMatrix::identity(4, 4) * r((1.0 - f) / 3.0) + projector(psi.amplitudes()) * r((4.0 * f - 1.0) / 3.0);
    DensityMatrix::new(vec![2, 2], m)
}

/// Upper end of the `a` range on which the Werner derivative stays entangled.
pub fn werner_derivative_entangled_bound(f: f64) -> f64 {
    0.5 * (1.0 + (3.0 * (4.0 * f * f - 1.0)).sqrt() / (4.0 * f - 1.0))
}

/// Mixture of the two-qubit GHZ and W marginals, written out entrywise.
pub fn nmems(p: f64) -> Result<DensityMatrix> {
    in_range("p", p, 0.0, false, 1.0)?;
    let q = (1.0 - p) / 3.0;
    #[rustfmt::skip]
    let e = [
        (p + 2.0) / 6.0, 0.0, 0.0, 0.0,
        0.0, q, q, 0.0,
        0.0, q, q, 0.0,
        0.0, 0.0, 0.0, p / 2.0,
    ];
    two_qubit(&e)
}

/// p·Tr_C|GHZ⟩⟨GHZ| + (1−p)·Tr_C|W⟩⟨W|, computed by actually tracing out the third qubit.
pub fn nmems_from_reductions(p: f64) -> Result<DensityMatrix> {
    in_range("p", p, 0.0, false, 1.0)?;
    let g = partial_trace(&ghz3().density(), &[0, 1])?;
    let w = partial_trace(&w3_prototype().density(), &[0, 1])?;
    g.mix(p, &w)
}

/// p₁|Φ⁻⟩⟨Φ⁻| + p₂|00⟩⟨00| + p₃|Φ⁺⟩⟨Φ⁺| + p₄|11⟩⟨11| with a descending, normalized spectrum.
pub fn ih_mems(p: [f64; 4]) -> Result<DensityMatrix> {
    if p.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
        return domain(format!("weights {p:?} must be non-negative"));
    }
    if p.windows(2).any(|w| w[0] < w[1]) {
        return domain(format!("weights {p:?} must satisfy p1 ≥ p2 ≥ p3 ≥ p4"));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > TOL_WEIGHTS {
        return domain(format!("weights sum to {sum}, must equal 1"));
    }
    let dims = [2, 2];
    let m = bell_projector(4)? * r(p[0])
        + projector(&basis_ket(&dims, &[0, 0])) * r(p[1])
        + bell_projector(3)? * r(p[2])
        + projector(&basis_ket(&dims, &[1, 1])) * r(p[3]);
    DensityMatrix::new(vec![2, 2], m)
}

/// Closed-form non-local output of cloning both halves of Ψ⁺ with a qubit machine of weight `c2`.
///
/// `c2 ∈ [0, 1]` fixes the companion weight `d² = (1 − c²)/2`.
pub fn cloned_mems(c2: f64) -> Result<DensityMatrix> {
    in_range("c2", c2, 0.0, false, 1.0)?;
    let d2 = (1.0 - c2) / 2.0;
    let p = (c2 + d2).powi(2);
    let q = 4.0 * c2 * d2;
    let rr = c2 * d2 + d2 * d2;
    let s = d2 * d2;
    let diag = (p + s) / 2.0;
    #[rustfmt::skip]
    let e = [
        diag, 0.0, 0.0, q / 2.0,
        0.0, rr, 0.0, 0.0,
        0.0, 0.0, rr, 0.0,
        q / 2.0, 0.0, 0.0, diag,
    ];
    two_qubit(&e)
}

/// Builds any mixed family member.
pub fn make_mixed(params: MixedFamily) -> Result<DensityMatrix> {
    match params {
        MixedFamily::Werner { f } => werner(f),
        MixedFamily::Mjwk { c } => mjwk(c),
        MixedFamily::Wei { x, y, a, b, gamma } => wei(x, y, a, b, gamma),
        MixedFamily::WernerDerivative { f, a } => werner_derivative(f, a),
        MixedFamily::Nmems { p } => nmems(p),
        MixedFamily::IhMems { p } => ih_mems(p),
        MixedFamily::ClonedMems { c2 } => cloned_mems(c2),
    }
}

/// Validated single-qubit pure state from a Bloch direction (θ, φ).
pub fn qubit_bloch(theta: f64, phi: f64) -> PureState {
    let v = ComplexVector::from_vec(vec![r((theta / 2.0).cos()), qcore::C64::from_polar((theta / 2.0).sin(), phi)]);
    PureState::new(vec![2], v).expect("Bloch vectors are normalized")
}
