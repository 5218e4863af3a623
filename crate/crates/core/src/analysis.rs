//! Checks of the translation claims and of the quantitative relations
//! between a two-level scheme and its conjugated retrograde canon.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::canon::{hcrc, hrc_breakpoints, operator_w, ConjugatingMatrix, WFamily};
use crate::irreps::{character, rotation_n};
use crate::linalg::{c64, flatten, frobenius_norm, identity, inner, kron, max_abs_diff, trace, ComplexMatrix};
use crate::propagate::{propagate_provider, propagate_scheme, propagate_scheme_marked, PropagationResult};
use crate::schemes::{PaceFunction, TwoLevelScheme};
use crate::su2::{eta, norm3, rotation, sub3, AxisAngle, Vec3, Y_AXIS};
use crate::{CanonError, Result};

/// Threshold on `‖U(T − r(τ)) − U(τ)‖` accepted as a meeting.
pub const MEETING_TOL: f64 = 1e-8;

/// `|tr(a†b)|/d`, the phase-insensitive overlap of two `d×d` unitaries.
pub fn unitary_overlap(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    trace(&(a.adjoint() * b)).norm() / a.nrows() as f64
}

/// `|⟨↓|U|↑⟩|`.
pub fn transfer_amplitude(u: &ComplexMatrix) -> f64 {
    u[(1, 0)].norm()
}

/// Forward and retrograde propagators at the meeting time of a pace.
#[derive(Debug, Clone)]
pub struct CanonAtMeeting {
    pub tau: f64,
    /// `U(τ)` in the lifted representation.
    pub u_tau: ComplexMatrix,
    /// `U^R(τ) = U(T − r(τ))·U(T − r(0))⁻¹`.
    pub u_r_tau: ComplexMatrix,
    /// `U(T − r(0))`, the endpoint the retrograde path starts from.
    pub u_start: ComplexMatrix,
    /// `‖U(T − r(τ)) − U(τ)‖`, max-entry.
    pub meeting_residual: f64,
    pub forward: PropagationResult,
}

impl CanonAtMeeting {
    /// `U^RC(τ) = U^R(τ)⊗U(τ)`.
    pub fn u_rc(&self) -> ComplexMatrix {
        kron(&self.u_r_tau, &self.u_tau)
    }
}

pub fn canon_at_meeting(s: &TwoLevelScheme, pace: &PaceFunction, n: usize, steps: usize) -> Result<CanonAtMeeting> {
    let tau = pace.meeting_time(s.total)?;
    let back_tau = s.total - pace.r(tau);
    let back_start = s.total - pace.r(0.0);
    let forward = propagate_scheme_marked(s, n, steps, &[tau, back_tau, back_start])?;
    let u_tau = forward.at(tau)?;
    let u_back = forward.at(back_tau)?;
    let u_start = forward.at(back_start)?;
    let meeting_residual = max_abs_diff(&u_back, &u_tau);
    if meeting_residual > MEETING_TOL {
        return Err(CanonError::NoMeetingTime(format!(
            "U(T − r(τ)) and U(τ) differ by {meeting_residual:.3e} at τ = {tau}"
        )));
    }
    let u_r_tau = &u_back * u_start.adjoint();
    Ok(CanonAtMeeting { tau, u_tau, u_r_tau, u_start, meeting_residual, forward })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TranslationOptions {
    pub steps: usize,
    /// "Fidelity one" means at least `1 − tolerance`.
    pub tolerance: f64,
    /// Also integrate `H^CRC` directly and report the deviation.
    pub direct_check: bool,
}

impl Default for TranslationOptions {
    fn default() -> Self {
        Self { steps: crate::propagate::DEFAULT_STEPS, tolerance: 1e-6, direct_check: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslationDiagnostics {
    pub meeting_residual: f64,
    pub unitarity_defect: f64,
    /// `‖e_tgt†·U^CRC(τ)·e_src‖` from direct integration minus the
    /// Kronecker-route value, in absolute terms.
    pub direct_deviation: Option<f64>,
    /// Largest diagonal entry of `H^CRC` seen during direct integration.
    pub max_diagonal: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslationReport {
    pub family: WFamily,
    pub n: usize,
    pub meeting_time: f64,
    /// `|⟨↓|U(T)|↑⟩|` for the two-level propagator.
    pub two_level_final_overlap: f64,
    /// `|tr(target†·U(T − r(0)))|/2` against the rotation encoded in `W`.
    pub two_level_target_fidelity: f64,
    /// `|⟨e_tgt, U^CRC(τ)·e_src⟩|`.
    pub n_level_fidelity: f64,
    /// The complex amplitude behind `n_level_fidelity`, as `[re, im]`.
    pub n_level_amplitude: [f64; 2],
    pub two_level_cpt: bool,
    pub n_level_cpt: bool,
    /// Both sides agree (both transfer or neither does).
    pub consistent: bool,
    /// Both sides show complete transfer.
    pub claim_holds: bool,
    pub diagnostics: TranslationDiagnostics,
}

/// Evaluates both sides of the translation claim at the meeting time.
pub fn verify_translation(
    s: &TwoLevelScheme,
    pace: &PaceFunction,
    w: &ConjugatingMatrix,
    opts: &TranslationOptions,
) -> Result<TranslationReport> {
    let target = w.two_level_target.as_ref().ok_or_else(|| {
        CanonError::Precondition("conjugating matrix does not encode a two-level target rotation".into())
    })?;
    let canon = canon_at_meeting(s, pace, w.n, opts.steps)?;
    let two = if w.n == 2 {
        canon.forward.clone()
    } else {
        propagate_scheme_marked(s, 2, opts.steps, &[s.total - pace.r(0.0)])?
    };
    let u2_start = two.at(s.total - pace.r(0.0))?;
    let two_level_target_fidelity = unitary_overlap(target, &u2_start);
    let two_level_final_overlap = transfer_amplitude(&two.final_u);

    let u_rc = canon.u_rc();
    let amp = inner(&w.column(w.target), &(&u_rc * w.column(w.source)));
    let n_level_fidelity = amp.norm();

    let (direct_deviation, max_diagonal) = if opts.direct_check {
        let breaks = hrc_breakpoints(s, pace, canon.tau);
        let mut diag: f64 = 0.0;
        let direct = propagate_provider(
            |t| {
                let m = hcrc(s, pace, w, t)?;
                diag = diag.max((0..m.nrows()).map(|i| m[(i, i)].norm()).fold(0.0, f64::max));
                Ok(m)
            },
            canon.tau,
            opts.steps,
            &breaks,
        );
        let direct = direct?;
        let d_amp = direct.final_u[(w.target, w.source)];
        (Some((d_amp.norm() - n_level_fidelity).abs()), Some(diag))
    } else {
        (None, None)
    };

    let two_level_cpt = two_level_target_fidelity >= 1.0 - opts.tolerance;
    let n_level_cpt = n_level_fidelity >= 1.0 - opts.tolerance;
    Ok(TranslationReport {
        family: w.family,
        n: w.n,
        meeting_time: canon.tau,
        two_level_final_overlap,
        two_level_target_fidelity,
        n_level_fidelity,
        n_level_amplitude: [amp.re, amp.im],
        two_level_cpt,
        n_level_cpt,
        consistent: two_level_cpt == n_level_cpt,
        claim_holds: two_level_cpt && n_level_cpt,
        diagnostics: TranslationDiagnostics {
            meeting_residual: canon.meeting_residual,
            unitarity_defect: canon.forward.max_unitarity_defect(),
            direct_deviation,
            max_diagonal,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransferCheck {
    /// `min_± ‖U^RC(τ)(|↑↑⟩+|↓↓⟩) ∓ (|↑↓⟩−|↓↑⟩)‖` at `τ = T/2`.
    pub residual: f64,
    pub transfers: bool,
    /// `|⟨↓|U(T)|↑⟩|`.
    pub two_level_overlap: f64,
    /// `|tr(Y†U(T))|/2`.
    pub y_fidelity: f64,
    /// The transfer only happens with near-complete two-level transfer, and
    /// an exact `±Y` endpoint always transfers.
    pub consistent: bool,
}

pub const TRANSFER_TOL: f64 = 1e-6;

/// Tests the entangled-pair transfer of the identity-paced canon at `T/2`.
pub fn entanglement_transfer_check(s: &TwoLevelScheme, steps: usize) -> Result<TransferCheck> {
    let canon = canon_at_meeting(s, &PaceFunction::identity(), 2, steps)?;
    let y = rotation(&AxisAngle { axis: Y_AXIS, angle: PI });
    let pair = flatten(&identity(2))?;
    let singlet = flatten(&y)?;
    let moved = canon.u_rc() * pair;
    let residual = (&moved - &singlet).norm().min((&moved + &singlet).norm());
    let u_end = &canon.forward.final_u;
    let two_level_overlap = transfer_amplitude(u_end);
    let y_fidelity = unitary_overlap(&y, u_end);
    let transfers = residual < TRANSFER_TOL;
    let consistent = (!transfers || two_level_overlap > 1.0 - 1e-4) && (y_fidelity < 1.0 - 1e-12 || transfers);
    Ok(TransferCheck { residual, transfers, two_level_overlap, y_fidelity, consistent })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormRelation {
    /// `‖H^CRC(t)‖_F`.
    pub lhs: f64,
    /// `√(‖h(t)‖² + ‖h(T − t)‖²)`.
    pub rhs: f64,
    /// `lhs / rhs`, or 1 when both vanish.
    pub ratio: f64,
}

/// The ratio predicted by `‖h·J⁽ⁿ⁾‖_F² = ‖h‖²·n(n²−1)/12`; equals 1 at `n = 2`.
pub fn expected_norm_constant(n: usize) -> f64 {
    let n = n as f64;
    n * ((n * n - 1.0) / 12.0).sqrt()
}

/// The constant implied by the printed `1/√2` prefactor at `n = 2`.
pub const PRINTED_NORM_CONSTANT: f64 = std::f64::consts::SQRT_2;

pub fn norm_relation_check(s: &TwoLevelScheme, w: &ConjugatingMatrix, t: f64) -> Result<NormRelation> {
    let lhs = frobenius_norm(&hcrc(s, &PaceFunction::identity(), w, t)?);
    let rhs = (norm3(&s.eval_h(t)?).powi(2) + norm3(&s.eval_h(s.total - t)?).powi(2)).sqrt();
    let ratio = if rhs == 0.0 && lhs == 0.0 { 1.0 } else { lhs / rhs };
    Ok(NormRelation { lhs, rhs, ratio })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormIntegral {
    /// `∫₀^τ ‖H^CRC(t)‖_F² dt`.
    pub canon_energy: f64,
    /// `∫₀^{2τ} ‖h(t)‖² dt`.
    pub scheme_energy: f64,
    /// `canon_energy / scheme_energy`, the squared constant.
    pub constant_sq: f64,
}

/// Two-point Gauss rule on each piece between `knots`, so no node sits on a
/// discontinuity. Exact for piecewise cubics.
fn piecewise_gauss(f: impl Fn(f64) -> Result<f64>, a: f64, b: f64, knots: &[f64], points: usize) -> Result<f64> {
    let offset = 0.5 / 3f64.sqrt();
    let mut edges = vec![a];
    edges.extend(knots.iter().copied().filter(|&k| k > a && k < b));
    edges.push(b);
    let pieces = (points / 2).max(1);
    let mut sum = 0.0;
    for pair in edges.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let m = ((pieces as f64 * (hi - lo) / (b - a)).ceil() as usize).max(1);
        let h = (hi - lo) / m as f64;
        for j in 0..m {
            let mid = lo + (j as f64 + 0.5) * h;
            sum += 0.5 * h * (f(mid - offset * h)? + f(mid + offset * h)?);
        }
    }
    Ok(sum)
}

/// Integral form of the norm relation, by Gauss quadrature on about `points`
/// nodes split at every breakpoint.
pub fn norm_integral_check(s: &TwoLevelScheme, w: &ConjugatingMatrix, points: usize) -> Result<NormIntegral> {
    let pace = PaceFunction::identity();
    let tau = s.total / 2.0;
    let canon_knots = hrc_breakpoints(s, &pace, tau);
    let canon_energy =
        piecewise_gauss(|t| Ok(frobenius_norm(&hcrc(s, &pace, w, t)?).powi(2)), 0.0, tau, &canon_knots, points)?;
    let scheme_energy = piecewise_gauss(|t| Ok(norm3(&s.eval_h(t)?).powi(2)), 0.0, s.total, &s.boundaries(), points)?;
    let constant_sq = if scheme_energy == 0.0 { 1.0 } else { canon_energy / scheme_energy };
    Ok(NormIntegral { canon_energy, scheme_energy, constant_sq })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateSpec {
    /// Swaps `e₁ ↔ e₂`, fixes `e₃`, `e₄`, with `±1` entries.
    EntanglingR,
    /// Swaps `e₁ ↔ e₂` and `e₃ ↔ e₄`.
    DoubleRail,
}

impl GateSpec {
    /// Image row of each column.
    pub fn permutation(&self) -> [usize; 4] {
        match self {
            GateSpec::EntanglingR => [1, 0, 2, 3],
            GateSpec::DoubleRail => [1, 0, 3, 2],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateReport {
    pub gate: GateSpec,
    pub matches: bool,
    /// Max entry deviation after global-phase and sign alignment.
    pub deviation: f64,
    pub global_phase: f64,
    pub signs: [i8; 4],
    pub eta_at_meeting: Vec3,
}

pub const GATE_TOL: f64 = 1e-8;

/// Compares a matrix with a signed permutation pattern up to global phase.
pub fn match_gate(m: &ComplexMatrix, gate: GateSpec) -> (f64, f64, [i8; 4]) {
    let perm = gate.permutation();
    let sq: num_complex::Complex64 = (0..4).map(|j| m[(perm[j], j)] * m[(perm[j], j)]).sum();
    let gamma = 0.5 * sq.arg();
    let unphase = c64(0.0, -gamma).exp();
    let mut signs = [1i8; 4];
    let mut target = ComplexMatrix::zeros(4, 4);
    for j in 0..4 {
        let s = if (m[(perm[j], j)] * unphase).re >= 0.0 { 1 } else { -1 };
        signs[j] = s;
        target[(perm[j], j)] = c64(0.0, gamma).exp() * s as f64;
    }
    (max_abs_diff(m, &target), gamma, signs)
}

/// `U^CRC(T/2)` under `operator_w(theta)` compared with a gate pattern.
pub fn gate_check(s: &TwoLevelScheme, theta: f64, gate: GateSpec, steps: usize) -> Result<GateReport> {
    let canon = canon_at_meeting(s, &PaceFunction::identity(), 2, steps)?;
    let y = rotation(&AxisAngle { axis: Y_AXIS, angle: PI });
    let fid = unitary_overlap(&y, &canon.forward.final_u);
    if fid < 1.0 - 1e-8 {
        return Err(CanonError::Precondition(format!("U(T) is not ±R_ŷ(π) (overlap {fid:.12})")));
    }
    let w = operator_w(theta);
    let m = w.conjugate(&canon.u_rc())?;
    let (deviation, global_phase, signs) = match_gate(&m, gate);
    Ok(GateReport {
        gate,
        matches: deviation < GATE_TOL,
        deviation,
        global_phase,
        signs,
        eta_at_meeting: eta(&canon.u_tau)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlochPaths {
    pub times: Vec<f64>,
    /// `η(U(t))`.
    pub forward: Vec<Vec3>,
    /// `η(U(T − r(t)))`.
    pub backward: Vec<Vec3>,
}

pub fn bloch_paths(s: &TwoLevelScheme, pace: &PaceFunction, samples: usize, steps: usize) -> Result<BlochPaths> {
    let t_max = s.total.min((s.total - pace.b) / pace.a);
    if t_max.is_nan() || t_max <= 0.0 || samples < 2 {
        return Err(CanonError::InvalidParameter(format!("no sampling window (t_max = {t_max}, samples = {samples})")));
    }
    let fwd = propagate_scheme(s, 2, steps)?;
    let mut out = BlochPaths { times: Vec::new(), forward: Vec::new(), backward: Vec::new() };
    for i in 0..samples {
        let t = t_max * i as f64 / (samples - 1) as f64;
        out.times.push(t);
        out.forward.push(eta(&fwd.at(t)?)?);
        out.backward.push(eta(&fwd.at(s.total - pace.r(t))?)?);
    }
    Ok(out)
}

/// Distance between the two Bloch curves at the meeting time.
pub fn bloch_meeting_gap(s: &TwoLevelScheme, pace: &PaceFunction, steps: usize) -> Result<f64> {
    let canon = canon_at_meeting(s, pace, 2, steps)?;
    let back = canon.forward.at(s.total - pace.r(canon.tau))?;
    Ok(norm3(&sub3(&eta(&canon.u_tau)?, &eta(&back)?)))
}

/// Phase `α = arg⟨↓|U(T)|↑⟩` of the two-level transfer.
pub fn transfer_phase(s: &TwoLevelScheme, steps: usize) -> Result<f64> {
    Ok(propagate_scheme(s, 2, steps)?.final_u[(1, 0)].arg())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterReport {
    pub n: usize,
    pub k: usize,
    pub omega: f64,
    /// `χₙ(ω_k)` from the closed form.
    pub formula: f64,
    /// Largest `|tr R⁽ⁿ⁾(ω_k)|` over the sampled axes.
    pub max_trace: f64,
    pub passes: bool,
}

pub const CHARACTER_TOL: f64 = 1e-10;

pub fn character_check(n: usize, k: usize, axes: &[Vec3]) -> Result<CharacterReport> {
    if n < 2 || k == 0 || k >= n {
        return Err(CanonError::InvalidParameter(format!("k = {k} must lie in 1..{n}")));
    }
    let omega = 2.0 * PI * k as f64 / n as f64;
    let formula = character(n, omega);
    let mut max_trace: f64 = 0.0;
    for axis in axes {
        let r = rotation_n(n, &AxisAngle::new(*axis, omega)?)?;
        max_trace = max_trace.max(trace(&r).norm());
    }
    let passes = formula.abs() < CHARACTER_TOL && max_trace < CHARACTER_TOL;
    Ok(CharacterReport { n, k, omega, formula, max_trace, passes })
}

/// Nonzero strictly-upper couplings `(row, col, value)`.
pub fn couplings(m: &ComplexMatrix, tol: f64) -> Vec<(usize, usize, num_complex::Complex64)> {
    let mut out = Vec::new();
    for r in 0..m.nrows() {
        for c in (r + 1)..m.ncols() {
            if m[(r, c)].norm() > tol {
                out.push((r, c, m[(r, c)]));
            }
        }
    }
    out
}

/// Level ordering along which the couplings form a simple path, if they do.
pub fn path_order(edges: &[(usize, usize)], levels: usize) -> Option<Vec<usize>> {
    if edges.len() + 1 != levels {
        return None;
    }
    let mut degree = vec![0usize; levels];
    for &(a, b) in edges {
        degree[a] += 1;
        degree[b] += 1;
    }
    if degree.iter().any(|&d| d == 0 || d > 2) {
        return None;
    }
    let start = degree.iter().position(|&d| d == 1)?;
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while order.len() < levels {
        let next = edges.iter().find_map(|&(a, b)| {
            if a == cur && b != prev {
                Some(b)
            } else if b == cur && a != prev {
                Some(a)
            } else {
                None
            }
        })?;
        if order.contains(&next) {
            return None;
        }
        prev = cur;
        cur = next;
        order.push(cur);
    }
    Some(order)
}
