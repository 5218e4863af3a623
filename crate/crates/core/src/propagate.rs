//! Propagators of `U̇ = −iH(t)U`, `U(0) = I`.
//!
//! Constant segments advance by exact exponentials, time-dependent pieces by
//! midpoint exponentials. The sample grid always contains segment boundaries
//! and any requested marks, so quantities evaluated at those instants never
//! depend on interpolation.

use crate::irreps::{generators, SpinRep};
use crate::linalg::{
    c64, expm_hermitian, hermiticity_defect, identity, inner, reunitarize, unitarity_defect, ComplexMatrix,
    ComplexVector,
};
use crate::schemes::{PaceFunction, Segment, SegmentKind, TwoLevelScheme};
use crate::su2::{scale3, to_axis_angle};
use crate::{CanonError, Result};

pub const DEFAULT_STEPS: usize = 64;
pub const LZ_STEPS: usize = 4096;

/// Drift above which a propagator is re-projected onto the unitary group.
pub const REPROJECT_TOL: f64 = 1e-12;

/// Hermiticity tolerance for matrix-valued providers.
pub const PROVIDER_HERMITIAN_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct PropagationResult {
    pub times: Vec<f64>,
    pub samples: Vec<ComplexMatrix>,
    pub final_u: ComplexMatrix,
    source: Option<(TwoLevelScheme, SpinRep)>,
}

impl PropagationResult {
    pub fn dim(&self) -> usize {
        self.final_u.nrows()
    }

    pub fn end_time(&self) -> f64 {
        *self.times.last().expect("grid is never empty")
    }

    fn grid_tol(&self) -> f64 {
        1e-12 * self.end_time().abs().max(1.0)
    }

    /// Index of the grid point at `t`, if any.
    pub fn grid_index(&self, t: f64) -> Option<usize> {
        let tol = self.grid_tol();
        let i = self.times.partition_point(|&x| x < t - tol);
        (i < self.times.len() && (self.times[i] - t).abs() <= tol).then_some(i)
    }

    /// `U(t)`. Off-grid instants are reached by one residual step from the
    /// preceding sample; this needs the originating scheme.
    pub fn at(&self, t: f64) -> Result<ComplexMatrix> {
        let end = self.end_time();
        let tol = self.grid_tol();
        if !(t >= -tol && t <= end + tol) {
            return Err(CanonError::TimeOutOfRange { t, lo: 0.0, hi: end });
        }
        if let Some(i) = self.grid_index(t) {
            return Ok(self.samples[i].clone());
        }
        let Some((scheme, rep)) = &self.source else {
            return Err(CanonError::Precondition(format!("t = {t} is not on the sample grid")));
        };
        let i = self.times.partition_point(|&x| x <= t) - 1;
        let t0 = self.times[i];
        let (seg, seg_start) = segment_at(scheme, 0.5 * (t0 + t));
        let step = segment_step(seg, seg_start, t0, t, rep)?;
        Ok(step * &self.samples[i])
    }

    pub fn max_unitarity_defect(&self) -> f64 {
        self.samples.iter().map(unitarity_defect).fold(0.0, f64::max)
    }
}

fn segment_at(s: &TwoLevelScheme, t: f64) -> (&Segment, f64) {
    let bounds = s.boundaries();
    let last = s.segments.len() - 1;
    let i = (0..=last).find(|&i| t < bounds[i + 1]).unwrap_or(last);
    (&s.segments[i], bounds[i])
}

fn segment_step(seg: &Segment, seg_start: f64, ta: f64, tb: f64, rep: &SpinRep) -> Result<ComplexMatrix> {
    let h = match seg.kind {
        SegmentKind::Constant => seg.h_start,
        SegmentKind::Linear => seg.value(0.5 * (ta + tb) - seg_start),
    };
    expm_hermitian(&rep.dot(&h), -(tb - ta))
}

fn advance(u: ComplexMatrix, step: &ComplexMatrix) -> ComplexMatrix {
    let next = step * u;
    if unitarity_defect(&next) > REPROJECT_TOL {
        reunitarize(&next)
    } else {
        next
    }
}

/// Propagates the `n`-dimensional lift of a scheme.
pub fn propagate_scheme(s: &TwoLevelScheme, n: usize, steps_per_segment: usize) -> Result<PropagationResult> {
    propagate_scheme_marked(s, n, steps_per_segment, &[])
}

/// Like [`propagate_scheme`], with `marks` inserted into the sample grid.
/// A segment cut by marks keeps its total step count, shared in proportion
/// to the piece lengths.
pub fn propagate_scheme_marked(
    s: &TwoLevelScheme,
    n: usize,
    steps_per_segment: usize,
    marks: &[f64],
) -> Result<PropagationResult> {
    s.validate()?;
    if steps_per_segment == 0 {
        return Err(CanonError::InvalidParameter("steps_per_segment must be ≥ 1".into()));
    }
    let rep = generators(n)?;
    let bounds = s.boundaries();
    let mut times = vec![0.0];
    let mut samples = vec![identity(n)];
    let mut u = identity(n);
    for (i, seg) in s.segments.iter().enumerate() {
        let (t0, t1) = (bounds[i], bounds[i + 1]);
        let eps = 1e-12 * s.total.max(1.0);
        let mut cuts: Vec<f64> = marks.iter().copied().filter(|&m| m > t0 + eps && m < t1 - eps).collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|a, b| (*a - *b).abs() <= eps);
        let mut knots = vec![t0];
        knots.extend(cuts);
        knots.push(t1);
        for w in knots.windows(2) {
            let (a, b) = (w[0], w[1]);
            let k = ((steps_per_segment as f64) * (b - a) / (t1 - t0)).ceil().max(1.0) as usize;
            let dt = (b - a) / k as f64;
            for j in 0..k {
                let ta = a + j as f64 * dt;
                let tb = if j + 1 == k { b } else { a + (j + 1) as f64 * dt };
                u = advance(u, &segment_step(seg, t0, ta, tb, &rep)?);
                times.push(tb);
                samples.push(u.clone());
            }
        }
    }
    Ok(PropagationResult { times, samples, final_u: u, source: Some((s.clone(), rep)) })
}

/// Midpoint-exponential propagation of an arbitrary Hermitian provider over
/// `[0, t_end]`, with `steps` steps between consecutive breakpoints.
pub fn propagate_provider<F>(mut hf: F, t_end: f64, steps: usize, breakpoints: &[f64]) -> Result<PropagationResult>
where
    F: FnMut(f64) -> Result<ComplexMatrix>,
{
    if t_end.is_nan() || t_end <= 0.0 || steps == 0 {
        return Err(CanonError::InvalidParameter(format!("t_end = {t_end}, steps = {steps}")));
    }
    let eps = 1e-12 * t_end.max(1.0);
    let mut knots: Vec<f64> = breakpoints.iter().copied().filter(|&b| b > eps && b < t_end - eps).collect();
    knots.push(0.0);
    knots.push(t_end);
    knots.sort_by(f64::total_cmp);
    knots.dedup_by(|a, b| (*a - *b).abs() <= eps);

    let dim = hf(0.0)?.nrows();
    let mut times = vec![0.0];
    let mut samples = vec![identity(dim)];
    let mut u = identity(dim);
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let dt = (b - a) / steps as f64;
        for j in 0..steps {
            let ta = a + j as f64 * dt;
            let tb = if j + 1 == steps { b } else { a + (j + 1) as f64 * dt };
            let h = hf(0.5 * (ta + tb))?;
            if h.shape() != (dim, dim) {
                return Err(CanonError::DimensionMismatch { expected: dim, got: h.nrows() });
            }
            let defect = hermiticity_defect(&h);
            if defect > PROVIDER_HERMITIAN_TOL {
                return Err(CanonError::NotHermitian(defect));
            }
            let sym = (&h + h.adjoint()) * c64(0.5, 0.0);
            u = advance(u, &expm_hermitian(&sym, -(tb - ta))?);
            times.push(tb);
            samples.push(u.clone());
        }
    }
    Ok(PropagationResult { times, samples, final_u: u, source: None })
}

/// `U(T − r(t))·U(T − r(0))⁻¹`, the propagator of the paced retrograde.
/// For `r(0) = 0` this is `U(T − r(t))·U(T)⁻¹`.
pub fn retrograde_propagator(result: &PropagationResult, pace: &PaceFunction, t: f64) -> Result<ComplexMatrix> {
    let total = result.end_time();
    let now = result.at(total - pace.r(t))?;
    let start = result.at(total - pace.r(0.0))?;
    Ok(now * start.adjoint())
}

/// `|⟨ψ_out, U·ψ_in⟩|`.
pub fn fidelity(u: &ComplexMatrix, psi_in: &ComplexVector, psi_out: &ComplexVector) -> Result<f64> {
    let n = u.nrows();
    for v in [psi_in, psi_out] {
        if v.len() != n {
            return Err(CanonError::DimensionMismatch { expected: n, got: v.len() });
        }
    }
    Ok(inner(psi_out, &(u * psi_in)).norm())
}

pub fn basis_vector(dim: usize, i: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(dim);
    v[i] = c64(1.0, 0.0);
    v
}

/// Constant segment of the given duration whose propagator is `c ∈ SU(2)`.
pub fn segment_for(c: &ComplexMatrix, duration: f64) -> Result<Segment> {
    let aa = to_axis_angle(c)?;
    Ok(Segment::constant(scale3(&aa.axis, -aa.angle / duration), duration))
}

/// Appends a constant segment that steers the (discretized) propagator of
/// `s` onto `target ∈ SU(2)` at the new end time.
pub fn close_scheme(s: &TwoLevelScheme, target: &ComplexMatrix, duration: f64, steps: usize) -> Result<TwoLevelScheme> {
    let u = propagate_scheme(s, 2, steps)?.final_u;
    let seg = segment_for(&(target * u.adjoint()), duration)?;
    s.then(&TwoLevelScheme::new(vec![seg])?)
}
