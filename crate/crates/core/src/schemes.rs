//! Two-level control schemes `H(t) = h(t)·J` built from constant and
//! linear pulse segments, together with their retrograde constructions.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::su2::{add3, scale3, sub3, Vec3};
use crate::{CanonError, Result};

/// Absolute slack allowed when a time lands marginally outside `[0, T]`.
pub const TIME_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentKind {
    Constant,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub kind: SegmentKind,
    pub h_start: Vec3,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_end: Option<Vec3>,
    pub duration: f64,
}

impl Segment {
    pub fn constant(h: Vec3, duration: f64) -> Self {
        Self { kind: SegmentKind::Constant, h_start: h, h_end: None, duration }
    }

    pub fn linear(h_start: Vec3, h_end: Vec3, duration: f64) -> Self {
        Self { kind: SegmentKind::Linear, h_start, h_end: Some(h_end), duration }
    }

    /// End value; constant segments (and linear ones missing `h_end`) hold `h_start`.
    pub fn end(&self) -> Vec3 {
        match self.kind {
            SegmentKind::Constant => self.h_start,
            SegmentKind::Linear => self.h_end.unwrap_or(self.h_start),
        }
    }

    /// `h` at local time `u ∈ [0, duration]`.
    pub fn value(&self, u: f64) -> Vec3 {
        match self.kind {
            SegmentKind::Constant => self.h_start,
            SegmentKind::Linear => {
                let f = (u / self.duration).clamp(0.0, 1.0);
                add3(&self.h_start, &scale3(&sub3(&self.end(), &self.h_start), f))
            }
        }
    }

    fn map(&self, f: impl Fn(&Vec3) -> Vec3) -> Self {
        Self { kind: self.kind, h_start: f(&self.h_start), h_end: self.h_end.map(|h| f(&h)), duration: self.duration }
    }

    /// Time-reversed and negated copy.
    fn reversed_negated(&self) -> Self {
        match self.kind {
            SegmentKind::Constant => Self::constant(scale3(&self.h_start, -1.0), self.duration),
            SegmentKind::Linear => Self::linear(scale3(&self.end(), -1.0), scale3(&self.h_start, -1.0), self.duration),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PaceKind {
    Identity,
    Affine,
}

/// Affine traversal pace `r(t) = a·t + b` of the retrograde path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PaceFunction {
    pub kind: PaceKind,
    #[serde(default = "one")]
    pub a: f64,
    #[serde(default)]
    pub b: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for PaceFunction {
    fn default() -> Self {
        Self::identity()
    }
}

impl PaceFunction {
    pub fn identity() -> Self {
        Self { kind: PaceKind::Identity, a: 1.0, b: 0.0 }
    }

    pub fn affine(a: f64, b: f64) -> Result<Self> {
        let pace = Self { kind: PaceKind::Affine, a, b };
        pace.validate()?;
        Ok(pace)
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind == PaceKind::Identity && (self.a != 1.0 || self.b != 0.0) {
            return Err(CanonError::InvalidParameter("identity pace must have a=1, b=0".into()));
        }
        if !(self.a.is_finite() && self.b.is_finite()) || self.a == 0.0 {
            return Err(CanonError::InvalidParameter(format!("pace slope {} / offset {} invalid", self.a, self.b)));
        }
        Ok(())
    }

    pub fn r(&self, t: f64) -> f64 {
        self.a * t + self.b
    }

    pub fn rate(&self) -> f64 {
        self.a
    }

    /// The instant `τ` with `T − r(τ) = τ`.
    pub fn meeting_time(&self, total: f64) -> Result<f64> {
        if self.a == -1.0 {
            return Err(CanonError::NoMeetingTime("pace slope −1 never meets the forward path".into()));
        }
        let tau = (total - self.b) / (1.0 + self.a);
        if !(tau > 0.0 && tau <= total + TIME_TOL) {
            return Err(CanonError::NoMeetingTime(format!("τ = {tau} lies outside (0, {total}]")));
        }
        for t in [0.0, tau] {
            let back = total - self.r(t);
            if back < -TIME_TOL || back > total + TIME_TOL {
                return Err(CanonError::NoMeetingTime(format!("T − r({t}) = {back} leaves [0, {total}]")));
            }
        }
        Ok(tau)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelScheme {
    #[serde(rename = "T")]
    pub total: f64,
    pub segments: Vec<Segment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pace: Option<PaceFunction>,
}

impl TwoLevelScheme {
    /// Builds a scheme whose duration is the sum of its segments.
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        let total = segments.iter().map(|s| s.duration).sum();
        let s = Self { total, segments, pace: None };
        s.validate()?;
        Ok(s)
    }

    pub fn zero(total: f64) -> Result<Self> {
        Self::new(vec![Segment::constant([0.0; 3], total)])
    }

    pub fn validate(&self) -> Result<()> {
        if self.segments.is_empty() {
            return Err(CanonError::InvalidScheme("scheme has no segments".into()));
        }
        for (i, seg) in self.segments.iter().enumerate() {
            if !seg.duration.is_finite() || seg.duration <= 0.0 {
                return Err(CanonError::InvalidScheme(format!("segment {i} has duration {}", seg.duration)));
            }
            let finite = |v: &Vec3| v.iter().all(|x| x.is_finite());
            if !finite(&seg.h_start) || !finite(&seg.end()) {
                return Err(CanonError::InvalidScheme(format!("segment {i} has non-finite field")));
            }
        }
        let sum: f64 = self.segments.iter().map(|s| s.duration).sum();
        if (sum - self.total).abs() > 1e-12 * self.total.abs().max(1.0) {
            return Err(CanonError::InvalidScheme(format!("durations sum to {sum}, T = {}", self.total)));
        }
        if let Some(p) = &self.pace {
            p.validate()?;
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Self = serde_json::from_str(text).map_err(|e| CanonError::InvalidScheme(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schemes serialize")
    }

    /// Segment start times followed by `T`.
    pub fn boundaries(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.segments.len() + 1);
        let mut t = 0.0;
        out.push(t);
        for seg in &self.segments {
            t += seg.duration;
            out.push(t);
        }
        *out.last_mut().unwrap() = self.total;
        out
    }

    fn locate(&self, t: f64) -> Result<(usize, f64)> {
        if !(t >= -TIME_TOL && t <= self.total + TIME_TOL) {
            return Err(CanonError::TimeOutOfRange { t, lo: 0.0, hi: self.total });
        }
        let t = t.clamp(0.0, self.total);
        let mut start = 0.0;
        let last = self.segments.len() - 1;
        for (i, seg) in self.segments.iter().enumerate() {
            let end = if i == last { self.total } else { start + seg.duration };
            if t < end || i == last {
                return Ok((i, (t - start).clamp(0.0, seg.duration)));
            }
            start = end;
        }
        unreachable!("non-empty scheme")
    }

    /// `h(t)`; right-continuous at segment boundaries, `h(T)` is the final end value.
    pub fn eval_h(&self, t: f64) -> Result<Vec3> {
        let (i, u) = self.locate(t)?;
        Ok(self.segments[i].value(u))
    }

    /// Restriction to `[t0, t1]`, re-based to start at zero.
    pub fn window(&self, t0: f64, t1: f64) -> Result<Self> {
        if !(t0 >= -TIME_TOL && t1 <= self.total + TIME_TOL && t1 - t0 > 0.0) {
            return Err(CanonError::TimeOutOfRange { t: t1, lo: t0, hi: self.total });
        }
        let mut segments = Vec::new();
        let mut start = 0.0;
        for seg in &self.segments {
            let end = start + seg.duration;
            let lo = start.max(t0);
            let hi = end.min(t1);
            if hi - lo > 1e-14 {
                let piece = match seg.kind {
                    SegmentKind::Constant => Segment::constant(seg.h_start, hi - lo),
                    SegmentKind::Linear => Segment::linear(seg.value(lo - start), seg.value(hi - start), hi - lo),
                };
                segments.push(piece);
            }
            start = end;
        }
        let mut s = Self::new(segments)?;
        s.total = t1 - t0;
        let drift: f64 = s.segments.iter().map(|x| x.duration).sum::<f64>() - s.total;
        s.segments.last_mut().unwrap().duration -= drift;
        Ok(s)
    }

    /// Concatenation in time.
    pub fn then(&self, other: &Self) -> Result<Self> {
        let mut segments = self.segments.clone();
        segments.extend(other.segments.iter().cloned());
        let mut s = Self::new(segments)?;
        s.total = self.total + other.total;
        Ok(s)
    }

    /// Whether `h` is continuous across every internal boundary.
    pub fn is_continuous(&self, tol: f64) -> bool {
        self.segments.windows(2).all(|w| crate::su2::norm3(&sub3(&w[0].end(), &w[1].h_start)) <= tol)
    }

    pub fn pace_or_identity(&self) -> PaceFunction {
        self.pace.unwrap_or_default()
    }
}

/// The scheme of `−h(T − t)`.
pub fn retrograde(s: &TwoLevelScheme) -> TwoLevelScheme {
    TwoLevelScheme {
        total: s.total,
        segments: s.segments.iter().rev().map(Segment::reversed_negated).collect(),
        pace: None,
    }
}

/// `−ṙ(t)·h(T − r(t))`.
pub fn retrograde_paced(s: &TwoLevelScheme, pace: &PaceFunction, t: f64) -> Result<Vec3> {
    let back = s.total - pace.r(t);
    if !(back >= -TIME_TOL && back <= s.total + TIME_TOL) {
        return Err(CanonError::TimeOutOfRange { t: back, lo: 0.0, hi: s.total });
    }
    Ok(scale3(&s.eval_h(back)?, -pace.rate()))
}

/// Two-level scheme whose retrograde canon has halves `hb` (retrograde side)
/// and `ha` (forward side): `ha(t)` on `[0, T/2]` then `−hb(T − t)`.
pub fn splice_inverse(hb: &TwoLevelScheme, ha: &TwoLevelScheme) -> Result<TwoLevelScheme> {
    if (hb.total - ha.total).abs() > 1e-12 * ha.total.max(1.0) {
        return Err(CanonError::InvalidScheme(format!("halves have durations {} and {}", hb.total, ha.total)));
    }
    ha.then(&retrograde(hb))
}

fn require_odd(v: i64, name: &str) -> Result<()> {
    if v % 2 == 0 {
        return Err(CanonError::InvalidParameter(format!("{name} = {v} must be odd")));
    }
    Ok(())
}

/// `pπ` rotation about `x̂` followed by `qπ` about `ẑ`, over `T = 2π`.
pub fn pythagorean_scheme(p: i64, q: i64) -> Result<TwoLevelScheme> {
    require_odd(p, "p")?;
    require_odd(q, "q")?;
    let mut s = TwoLevelScheme::new(vec![
        Segment::constant([-(p as f64), 0.0, 0.0], PI),
        Segment::constant([0.0, 0.0, -(q as f64)], PI),
    ])?;
    s.total = 2.0 * PI;
    Ok(s)
}

/// Linear sweep `h(t) = (Ω₀, 0, B(1 − 2t/T̃))`.
pub fn landau_zener_scheme(omega0: f64, b: f64, t_tilde: f64) -> Result<TwoLevelScheme> {
    if !(omega0 > 0.0 && b > 0.0 && t_tilde > 0.0) {
        return Err(CanonError::InvalidParameter(format!(
            "Landau–Zener parameters must be positive (Ω₀={omega0}, B={b}, T̃={t_tilde})"
        )));
    }
    TwoLevelScheme::new(vec![Segment::linear([omega0, 0.0, b], [omega0, 0.0, -b], t_tilde)])
}

/// Rotates every `(h_x, h_y)` by `−α`, the scheme-level image of
/// `H → R_ẑ(α)·H·R_ẑ(−α)`.
pub fn frame_rotate_z(s: &TwoLevelScheme, alpha: f64) -> TwoLevelScheme {
    let (sn, cs) = alpha.sin_cos();
    let rot = |h: &Vec3| [cs * h[0] + sn * h[1], -sn * h[0] + cs * h[1], h[2]];
    TwoLevelScheme { total: s.total, segments: s.segments.iter().map(|seg| seg.map(rot)).collect(), pace: s.pace }
}

fn random_vec<R: Rng>(rng: &mut R, amplitude: f64) -> Vec3 {
    [
        rng.random_range(-amplitude..amplitude),
        rng.random_range(-amplitude..amplitude),
        rng.random_range(-amplitude..amplitude),
    ]
}

/// Random scheme mixing constant and linear segments with durations in `[0.2, 1.2)`.
pub fn random_scheme<R: Rng>(rng: &mut R, segments: usize, amplitude: f64) -> TwoLevelScheme {
    let segs = (0..segments.max(1))
        .map(|_| {
            let duration = rng.random_range(0.2..1.2);
            if rng.random_bool(0.5) {
                Segment::constant(random_vec(rng, amplitude), duration)
            } else {
                Segment::linear(random_vec(rng, amplitude), random_vec(rng, amplitude), duration)
            }
        })
        .collect();
    TwoLevelScheme::new(segs).expect("random segments are valid")
}

/// Random piecewise-linear scheme with `h` continuous in time.
pub fn random_continuous_scheme<R: Rng>(rng: &mut R, segments: usize, amplitude: f64) -> TwoLevelScheme {
    let mut knot = random_vec(rng, amplitude);
    let segs = (0..segments.max(1))
        .map(|_| {
            let next = random_vec(rng, amplitude);
            let seg = Segment::linear(knot, next, rng.random_range(0.2..1.2));
            knot = next;
            seg
        })
        .collect();
    TwoLevelScheme::new(segs).expect("random segments are valid")
}
