//! Two-qubit states as teleportation channels and Bell-CHSH resources.
//!
//! The analysis goes through the Pauli correlation matrix `t_nm = Tr(ρ σ_n⊗σ_m)`
//! (index order x, y, z) and the eigenvalues `u₁ ≥ u₂ ≥ u₃` of `TᵀT`:
//!
//! - `N(ρ) = √u₁ + √u₂ + √u₃`, useful for standard teleportation iff `N > 1`,
//!   with optimal fidelity `½(1 + N/3)`;
//! - `M(ρ) = u₁ + u₂`, Bell-CHSH violated iff `M > 1`, supremum of the CHSH value `2√M`.

use nalgebra::{Matrix3, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::measures::{self, EntropyKind};
use crate::qcore::{self, gates, partial_trace_matrix, r, ComplexMatrix, DensityMatrix, C64};
use crate::statezoo::{self, mjwk_h, MixedFamily};

/// Largest imaginary residue tolerated in a correlation-matrix entry.
pub const TOL_REAL: f64 = 1e-12;
/// Half-width of the band around `N = 1` reported as a boundary case.
pub const USEFUL_BAND: f64 = 1e-9;
/// Largest deviation from unit length accepted for a measurement direction.
pub const TOL_UNIT: f64 = 1e-9;

/// Pauli correlation matrix of a two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    /// `t[n][m] = Tr(ρ σ_n ⊗ σ_m)`, Pauli order (x, y, z).
    pub t: [[f64; 3]; 3],
}

impl CorrelationMatrix {
    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| self.t[i][j])
    }

    /// Eigenvalues of TᵀT, descending and clipped at zero.
    pub fn u_values(&self) -> [f64; 3] {
        let t = self.matrix();
        let ev = (t.transpose() * t).symmetric_eigenvalues();
        let mut u = [ev[0].max(0.0), ev[1].max(0.0), ev[2].max(0.0)];
        u.sort_by(|a, b| b.total_cmp(a));
        u
    }

    /// Σ √uᵢ.
    pub fn n_value(&self) -> f64 {
        self.u_values().iter().map(|u| u.sqrt()).sum()
    }

    /// u₁ + u₂.
    pub fn m_value(&self) -> f64 {
        let u = self.u_values();
        u[0] + u[1]
    }

    /// E(a, b) = aᵀ T b.
    pub fn correlation(&self, a: &[f64; 3], b: &[f64; 3]) -> f64 {
        (Vector3::from(*a).transpose() * self.matrix() * Vector3::from(*b))[(0, 0)]
    }
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dims() != [2, 2] {
        return domain(format!("channel analysis needs a 2⊗2 state, got dims {:?}", rho.dims()));
    }
    Ok(())
}

/// Builds `T` with `t_nm = Tr(ρ σ_n⊗σ_m)`.
pub fn correlation_matrix(rho: &DensityMatrix) -> Result<CorrelationMatrix> {
    require_two_qubits(rho)?;
    let paulis = gates::paulis();
    let mut t = [[0.0; 3]; 3];
    for (n, sn) in paulis.iter().enumerate() {
        for (m, sm) in paulis.iter().enumerate() {
            let z = rho.expectation(&qcore::tensor(sn, sm));
            if z.im.abs() > TOL_REAL {
                return domain(format!("correlation entry ({n},{m}) has imaginary part {:.3e}", z.im));
            }
            t[n][m] = z.re;
        }
    }
    Ok(CorrelationMatrix { t })
}

/// N(ρ) = Σ √uᵢ.
pub fn n_value(rho: &DensityMatrix) -> Result<f64> {
    Ok(correlation_matrix(rho)?.n_value())
}

/// M(ρ) = u₁ + u₂.
pub fn m_value(rho: &DensityMatrix) -> Result<f64> {
    Ok(correlation_matrix(rho)?.m_value())
}

/// ½(1 + N/3).
pub fn fidelity_from_n(n: f64) -> f64 {
    0.5 * (1.0 + n / 3.0)
}

/// (nF + 1)/(n + 1) for local dimension `n` and fully entangled fraction `F`.
pub fn fidelity_from_singlet_fraction(f: f64, n: usize) -> f64 {
    (n as f64 * f + 1.0) / (n as f64 + 1.0)
}

/// Optimal standard-teleportation fidelity of an n⊗n channel.
///
/// Qubits go through `N(ρ)`; higher dimensions go through the fully entangled fraction.
pub fn optimal_fidelity(rho: &DensityMatrix, n: usize) -> Result<f64> {
    if rho.dims() != [n, n] {
        return domain(format!("expected a {n}⊗{n} state, got dims {:?}", rho.dims()));
    }
    match n {
        2 => Ok(fidelity_from_n(n_value(rho)?)),
        n if n >= 3 => Ok(fidelity_from_singlet_fraction(measures::singlet_fraction(rho)?, n)),
        _ => domain(format!("unsupported local dimension {n}")),
    }
}

/// Teleportation verdict with an explicit tolerance band around `N = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Usefulness {
    Useful,
    Boundary,
    NotUseful,
}

pub fn classify_usefulness(n: f64) -> Usefulness {
    if n > 1.0 + USEFUL_BAND {
        Usefulness::Useful
    } else if n >= 1.0 - USEFUL_BAND {
        Usefulness::Boundary
    } else {
        Usefulness::NotUseful
    }
}

/// Everything the channel analysis reports for one two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelReport {
    pub concurrence: f64,
    pub n_value: f64,
    pub m_value: f64,
    pub singlet_fraction: f64,
    pub fidelity_opt: f64,
    pub usefulness: Usefulness,
    /// `N > 1` outside the tolerance band.
    pub useful_for_teleportation: bool,
    /// `M > 1`.
    pub violates_bell_chsh: bool,
    /// n/(n−1)·(1 − Tr ρ²).
    pub linear_entropy: f64,
}

pub fn analyze_channel(rho: &DensityMatrix) -> Result<ChannelReport> {
    let t = correlation_matrix(rho)?;
    let n = t.n_value();
    let m = t.m_value();
    let usefulness = classify_usefulness(n);
    Ok(ChannelReport {
        concurrence: measures::concurrence(rho)?,
        n_value: n,
        m_value: m,
        singlet_fraction: measures::singlet_fraction(rho)?,
        fidelity_opt: fidelity_from_n(n),
        usefulness,
        useful_for_teleportation: usefulness == Usefulness::Useful,
        violates_bell_chsh: m > 1.0,
        linear_entropy: measures::entropy(rho, EntropyKind::Linear, 2.0)?,
    })
}

/// Published closed forms for a family member. Fields are `None` outside the stated domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub concurrence: f64,
    pub n_value: f64,
    pub m_value: f64,
    pub fidelity_opt: f64,
    pub linear_entropy: f64,
    /// Fidelity re-expressed through the linear entropy, where such a form exists.
    pub fidelity_from_linear_entropy: Option<f64>,
}

/// Closed-form channel figures for each family.
pub fn closed_form(family: &MixedFamily) -> ClosedForm {
    match *family {
        MixedFamily::Werner { f } => {
            let k = 4.0 * f - 1.0;
            let sl = 1.0 - k * k / 9.0;
            ClosedForm {
                concurrence: (2.0 * f - 1.0).max(0.0),
                n_value: k,
                m_value: 2.0 * k * k / 9.0,
                fidelity_opt: (2.0 * f + 1.0) / 3.0,
                linear_entropy: sl,
                fidelity_from_linear_entropy: Some((1.0 + (1.0 - sl).max(0.0).sqrt()) / 2.0),
            }
        }
        MixedFamily::Mjwk { c } => {
            let h = mjwk_h(c);
            let tz = 4.0 * h - 1.0;
            let mut u = [c * c, c * c, tz * tz];
            u.sort_by(|a, b| b.total_cmp(a));
            let upper = c >= 2.0 / 3.0;
            let sl = if upper { 8.0 / 3.0 * (c - c * c) } else { 2.0 / 3.0 * (4.0 / 3.0 - c * c) };
            let f_sl = if sl <= 16.0 / 27.0 {
                2.0 / 3.0 + (2.0 - 3.0 * sl).max(0.0).sqrt() / (3.0 * 2f64.sqrt())
            } else {
                5.0 / 9.0 + (8.0 - 9.0 * sl).max(0.0).sqrt() / (3.0 * 6f64.sqrt())
            };
            ClosedForm {
                concurrence: c,
                n_value: 2.0 * c + tz.abs(),
                m_value: u[0] + u[1],
                fidelity_opt: if upper { (2.0 * c + 1.0) / 3.0 } else { (5.0 + 3.0 * c) / 9.0 },
                linear_entropy: sl,
                fidelity_from_linear_entropy: Some(f_sl),
            }
        }
        MixedFamily::Wei { x, y, a, b, gamma } => {
            let tz = x + y + gamma - a - b;
            let purity = (x + gamma / 2.0).powi(2) + (y + gamma / 2.0).powi(2) + a * a + b * b + gamma * gamma / 2.0;
            ClosedForm {
                concurrence: (gamma - 2.0 * (a * b).sqrt()).max(0.0),
                n_value: 2.0 * gamma + tz.abs(),
                m_value: gamma * gamma + (gamma * gamma).max(tz * tz),
                fidelity_opt: if a + b <= 0.5 {
                    2.0 / 3.0 + (gamma - a - b) / 3.0
                } else {
                    fidelity_from_n(2.0 * gamma + tz.abs())
                },
                linear_entropy: 4.0 / 3.0 * (1.0 - purity),
                fidelity_from_linear_entropy: None,
            }
        }
        MixedFamily::WernerDerivative { f, a } => {
            let k = 4.0 * f - 1.0;
            let s = (a * (1.0 - a)).sqrt();
            let sl = 1.0 - k * k / 9.0;
            ClosedForm {
                concurrence: (2.0 * k / 3.0 * s - 2.0 * (1.0 - f) / 3.0).max(0.0),
                n_value: k * (1.0 + 4.0 * s) / 3.0,
                m_value: (1.0 + 4.0 * a - 4.0 * a * a) * k * k / 9.0,
                fidelity_opt: (9.0 + k * (1.0 + 4.0 * s)) / 18.0,
                linear_entropy: sl,
                fidelity_from_linear_entropy: Some((9.0 + 3.0 * (1.0 - sl).max(0.0).sqrt() * (1.0 + 4.0 * s)) / 18.0),
            }
        }
        MixedFamily::Nmems { p } => {
            let u12 = 4.0 * (1.0 - p).powi(2) / 9.0;
            let u3 = (4.0 * p - 1.0).powi(2) / 9.0;
            let n = if p < 0.25 { (5.0 - 8.0 * p) / 3.0 } else { 1.0 };
            let sl = 2.0 / 27.0 * (8.0 + 14.0 * p - 13.0 * p * p);
            let f_sl = if p < 0.25 {
                Some((7.0 - 4.0 / 26.0 * (14.0 - (612.0 - 702.0 * sl).max(0.0).sqrt())) / 9.0)
            } else {
                None
            };
            ClosedForm {
                concurrence: 2.0 * ((1.0 - p) / 3.0 - (p * (p + 2.0) / 12.0).sqrt()).max(0.0),
                n_value: n,
                m_value: u12 + u12.max(u3),
                fidelity_opt: if p < 0.25 { (7.0 - 4.0 * p) / 9.0 } else { 2.0 / 3.0 },
                linear_entropy: sl,
                fidelity_from_linear_entropy: f_sl,
            }
        }
        MixedFamily::IhMems { p } => {
            let txy = p[2] - p[0];
            let tz = p[1] + p[3] - p[0] - p[2];
            let mut u = [txy * txy, txy * txy, tz * tz];
            u.sort_by(|a, b| b.total_cmp(a));
            let n = 2.0 * txy.abs() + tz.abs();
            ClosedForm {
                concurrence: (p[0] - p[2] - 2.0 * (p[1] * p[3]).sqrt()).max(0.0),
                n_value: n,
                m_value: u[0] + u[1],
                fidelity_opt: fidelity_from_n(n),
                linear_entropy: 4.0 / 3.0 * (1.0 - p.iter().map(|x| x * x).sum::<f64>()),
                fidelity_from_linear_entropy: None,
            }
        }
        MixedFamily::ClonedMems { c2 } => {
            let d2 = (1.0 - c2) / 2.0;
            let q = 4.0 * c2 * d2;
            let rr = c2 * d2 + d2 * d2;
            let tz = 1.0 - 4.0 * rr;
            let mut u = [q * q, q * q, tz * tz];
            u.sort_by(|a, b| b.total_cmp(a));
            let n = 2.0 * q + tz.abs();
            let diag = 0.5 - rr;
            ClosedForm {
                concurrence: (q - 2.0 * rr).max(0.0),
                n_value: n,
                m_value: u[0] + u[1],
                fidelity_opt: fidelity_from_n(n),
                linear_entropy: 4.0 / 3.0 * (1.0 - (2.0 * diag * diag + q * q / 2.0 + 2.0 * rr * rr)),
                fidelity_from_linear_entropy: None,
            }
        }
    }
}

/// One grid point of a family sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyPoint {
    pub params: MixedFamily,
    pub report: ChannelReport,
    pub closed_form: ClosedForm,
}

/// Analyzes every grid point (in parallel) and returns the points sorted by parameter.
pub fn analyze_family(grid: &[MixedFamily]) -> Result<Vec<FamilyPoint>> {
    let mut points = grid
        .par_iter()
        .map(|params| {
            let rho = statezoo::make_mixed(*params)?;
            Ok(FamilyPoint { params: *params, report: analyze_channel(&rho)?, closed_form: closed_form(params) })
        })
        .collect::<Result<Vec<_>>>()?;
    points.sort_by(|a, b| {
        a.params
            .parameters()
            .iter()
            .zip(b.params.parameters().iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(points)
}

/// Single-qubit input `[[x, y], [y*, 1−x]]`.
pub fn input_state(x: f64, y: C64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&x) {
        return domain(format!("input weight x = {x} outside [0, 1]"));
    }
    if y.norm_sqr() > x * (1.0 - x) + 1e-12 {
        return domain(format!("|y|² = {} exceeds x(1−x) = {}", y.norm_sqr(), x * (1.0 - x)));
    }
    DensityMatrix::new(vec![2], qcore::complex_matrix(2, 2, &[r(x), y, y.conj(), r(1.0 - x)]))
}

/// Result of one Bell-measurement outcome in standard teleportation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeleportOutcome {
    /// Bell outcome `k ∈ 1..=4` in the crate-wide order (Ψ⁺, Ψ⁻, Φ⁺, Φ⁻).
    pub bell_outcome: u8,
    pub probability: f64,
    /// Bob's corrected state; `None` when the outcome cannot occur.
    #[serde(skip)]
    pub output_state: Option<DensityMatrix>,
    /// Tr(ρ_in − ρ_out)².
    pub hs_distance: Option<f64>,
    /// 1 − hs_distance.
    pub fidelity: Option<f64>,
}

/// Bob's Pauli correction for each Bell outcome: I, Z, X, Y.
pub fn bell_correction(k: u8) -> Result<ComplexMatrix> {
    Ok(match k {
        1 => gates::identity(),
        2 => gates::pauli_z(),
        3 => gates::pauli_x(),
        4 => gates::pauli_y(),
        _ => return domain(format!("Bell index {k} outside 1..=4")),
    })
}

/// Standard teleportation of `rho_in` through a two-qubit `channel` (Alice holds its first qubit).
pub fn teleport_through(rho_in: &DensityMatrix, channel: &DensityMatrix) -> Result<Vec<TeleportOutcome>> {
    if rho_in.dims() != [2] {
        return domain(format!("input must be a single qubit, got dims {:?}", rho_in.dims()));
    }
    require_two_qubits(channel)?;
    let joint = qcore::tensor(rho_in.matrix(), channel.matrix());
    let dims = [2, 2, 2];
    let mut out = Vec::with_capacity(4);
    for k in 1..=4u8 {
        let proj = qcore::tensor(&statezoo::bell_projector(k)?, &gates::identity());
        let bob = partial_trace_matrix(&(&proj * &joint * &proj), &dims, &[2])?;
        let p = bob.trace().re;
        if p <= 1e-14 {
            out.push(TeleportOutcome {
                bell_outcome: k,
                probability: p.max(0.0),
                output_state: None,
                hs_distance: None,
                fidelity: None,
            });
            continue;
        }
        let u = bell_correction(k)?;
        let corrected = &u * bob * u.adjoint() / r(p);
        let corrected = (&corrected + corrected.adjoint()) * r(0.5);
        let state = DensityMatrix::new(vec![2], corrected)?;
        let diff = rho_in.matrix() - state.matrix();
        let d = (&diff * &diff).trace().re;
        out.push(TeleportOutcome {
            bell_outcome: k,
            probability: p,
            output_state: Some(state),
            hs_distance: Some(d),
            fidelity: Some(1.0 - d),
        });
    }
    Ok(out)
}

/// Four unit measurement directions for a CHSH experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshSettings {
    pub a: [f64; 3],
    pub a_prime: [f64; 3],
    pub b: [f64; 3],
    pub b_prime: [f64; 3],
}

fn check_unit(v: &[f64; 3], name: &str) -> Result<()> {
    let len = Vector3::from(*v).norm();
    if (len - 1.0).abs() > TOL_UNIT {
        return domain(format!("direction {name} has length {len}, expected 1"));
    }
    Ok(())
}

/// E(a,b) + E(a,b') + E(a',b) − E(a',b') with E(u,v) = uᵀTv.
pub fn chsh_value(rho: &DensityMatrix, s: &ChshSettings) -> Result<f64> {
    for (v, name) in [(&s.a, "a"), (&s.a_prime, "a'"), (&s.b, "b"), (&s.b_prime, "b'")] {
        check_unit(v, name)?;
    }
    let t = correlation_matrix(rho)?;
    Ok(t.correlation(&s.a, &s.b) + t.correlation(&s.a, &s.b_prime) + t.correlation(&s.a_prime, &s.b)
        - t.correlation(&s.a_prime, &s.b_prime))
}

/// Supremum of the CHSH value over all settings, `2√M(ρ)`.
pub fn chsh_supremum(rho: &DensityMatrix) -> Result<f64> {
    Ok(2.0 * m_value(rho)?.sqrt())
}

/// Settings that attain [`chsh_supremum`], built from the singular vectors of T.
pub fn chsh_optimal_settings(rho: &DensityMatrix) -> Result<ChshSettings> {
    let t = correlation_matrix(rho)?.matrix();
    let svd = t.svd(true, true);
    let (u, vt) = (svd.u.expect("requested U"), svd.v_t.expect("requested V^T"));
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let (s1, s2) = (svd.singular_values[order[0]], svd.singular_values[order[1]]);
    let u1 = u.column(order[0]).into_owned();
    let u2 = u.column(order[1]).into_owned();
    let v1 = vt.row(order[0]).transpose();
    let v2 = vt.row(order[1]).transpose();
    let phi = s2.atan2(s1);
    let b = v1 * phi.cos() + v2 * phi.sin();
    let b_prime = v1 * phi.cos() - v2 * phi.sin();
    let arr = |v: Vector3<f64>| [v[0], v[1], v[2]];
    Ok(ChshSettings { a: arr(u1), a_prime: arr(u2), b: arr(b), b_prime: arr(b_prime) })
}

/// The textbook settings: a = z, a' = x, b = (z+x)/√2, b' = (z−x)/√2.
pub fn standard_chsh_settings() -> ChshSettings {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ChshSettings { a: [0.0, 0.0, 1.0], a_prime: [1.0, 0.0, 0.0], b: [s, 0.0, s], b_prime: [-s, 0.0, s] }
}

/// Werner singlet fraction at which `M = 1`: (3 + √2)/(4√2).
pub fn werner_bell_boundary() -> f64 {
    (3.0 + 2f64.sqrt()) / (4.0 * 2f64.sqrt())
}

/// Root of a continuous function by bisection on `[lo, hi]` to absolute width `tol`.
pub fn bisect(mut lo: f64, mut hi: f64, tol: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return domain(format!("no sign change on [{lo}, {hi}]"));
    }
    let s_lo = flo.signum();
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
