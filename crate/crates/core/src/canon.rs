//! Retrograde-canon Hamiltonians, conjugating matrices, and the inverse
//! translation from conjugated `n²`-level Hamiltonians back to two levels.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::irreps::{generators, rotation_n, y_n, SpinRep};
use crate::linalg::{
    c64, flatten, gram_schmidt_complete, hermitian_eigen, identity, inner, kron, max_abs, max_abs_diff,
    partial_trace_first, partial_trace_second, trace, unflatten, unitarity_defect, zeros, Complex64, ComplexMatrix,
    ComplexVector,
};
use crate::schemes::{retrograde_paced, splice_inverse, PaceFunction, Segment, TwoLevelScheme};
use crate::su2::{h_dot_j, is_su2, norm3, rotation, scale3, to_su2, AxisAngle, Vec3};
use crate::{CanonError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WFamily {
    #[default]
    Bell,
    ExampleTheta,
    OperatorTheta,
    GeneralFour,
    GeneralN,
    Explicit,
}

/// Column completion used by [`general_w_n_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Completion {
    /// Flattened Weyl unitaries adapted to the rotation axis. Every column is
    /// `F(P)/√n` for a unitary `P`, which keeps the diagonal of the
    /// conjugated Hamiltonian at zero.
    #[default]
    Weyl,
    /// Gram–Schmidt over canonical basis vectors.
    GramSchmidt,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct WParams {
    pub k: Option<usize>,
    pub axis: Option<Vec3>,
    pub theta: f64,
    pub phi2: f64,
    pub phi3: f64,
    pub phi4: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GeneralFormParams {
    pub phi2: f64,
    pub phi3: f64,
    pub phi4: f64,
    pub theta: f64,
}

/// Unitary `n²×n²` change of basis. Column `source` is the flattened start
/// state and column `target` the flattened transfer target; the transfer
/// happens exactly when `U(T)` equals `±two_level_target`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugatingMatrix {
    pub n: usize,
    pub matrix: ComplexMatrix,
    pub family: WFamily,
    pub params: WParams,
    pub source: usize,
    pub target: usize,
    pub two_level_target: Option<ComplexMatrix>,
}

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn column(entries: [Complex64; 4]) -> ComplexVector {
    ComplexVector::from_vec(entries.to_vec()) * c64(SQRT_HALF, 0.0)
}

fn real_column(entries: [f64; 4]) -> ComplexVector {
    column(entries.map(|x| c64(x, 0.0)))
}

impl ConjugatingMatrix {
    fn from_columns(family: WFamily, params: WParams, cols: &[ComplexVector], source: usize, target: usize) -> Self {
        let matrix = ComplexMatrix::from_columns(cols);
        let n = crate::linalg::exact_sqrt(matrix.nrows()).expect("square dimension");
        let two_level_target = if n == 2 { column_target(&matrix, source, target) } else { None };
        Self { n, matrix, family, params, source, target, two_level_target }
    }

    /// Wraps a user-supplied unitary.
    pub fn explicit(matrix: ComplexMatrix, source: usize, target: usize) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols {
            return Err(CanonError::NotSquare { rows, cols });
        }
        let n = crate::linalg::exact_sqrt(rows).ok_or(CanonError::NotPerfectSquare(rows))?;
        if source >= rows || target >= rows || source == target {
            return Err(CanonError::InvalidParameter(format!("source {source} / target {target} invalid")));
        }
        let defect = unitarity_defect(&matrix);
        if defect > 1e-10 {
            return Err(CanonError::InvalidParameter(format!("W is not unitary (defect {defect:.3e})")));
        }
        let two_level_target = if n == 2 { column_target(&matrix, source, target) } else { None };
        Ok(Self { n, matrix, family: WFamily::Explicit, params: WParams::default(), source, target, two_level_target })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        self.matrix.column(j).into_owned()
    }

    /// `W†·M·W`.
    pub fn conjugate(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_dim(m)?;
        Ok(self.matrix.adjoint() * m * &self.matrix)
    }

    /// `W·M·W†`.
    pub fn unconjugate(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_dim(m)?;
        Ok(&self.matrix * m * self.matrix.adjoint())
    }

    fn check_dim(&self, m: &ComplexMatrix) -> Result<()> {
        if m.shape() != self.matrix.shape() {
            return Err(CanonError::DimensionMismatch { expected: self.dim(), got: m.nrows() });
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: WSpec = serde_json::from_str(text).map_err(|e| CanonError::InvalidParameter(e.to_string()))?;
        spec.build()
    }

    pub fn to_spec(&self) -> WSpec {
        let mut spec = WSpec { family: self.family, n: Some(self.n), ..WSpec::default() };
        match self.family {
            WFamily::Bell => {}
            WFamily::ExampleTheta | WFamily::OperatorTheta => spec.theta = Some(self.params.theta),
            WFamily::GeneralFour => {
                spec.theta = Some(self.params.theta);
                spec.phi2 = Some(self.params.phi2);
                spec.phi3 = Some(self.params.phi3);
                spec.phi4 = Some(self.params.phi4);
            }
            WFamily::GeneralN => {
                spec.k = self.params.k;
                spec.axis = self.params.axis;
            }
            WFamily::Explicit => {
                spec.matrix = Some(self.matrix.transpose().iter().map(|z| [z.re, z.im]).collect());
                spec.source = Some(self.source);
                spec.target = Some(self.target);
            }
        }
        spec
    }
}

/// `m_src·m_tgt⁻¹` projected to SU(2), when the two columns are flattened
/// (scaled) unitaries whose quotient lies in U(2).
fn column_target(w: &ComplexMatrix, source: usize, target: usize) -> Option<ComplexMatrix> {
    let scale = c64(2f64.sqrt(), 0.0);
    let src = unflatten(&w.column(source).into_owned()).ok()? * scale;
    let tgt = unflatten(&w.column(target).into_owned()).ok()? * scale;
    let q = src * tgt.adjoint();
    if unitarity_defect(&q) > 1e-8 {
        return None;
    }
    let u = to_su2(&q);
    is_su2(&u, 1e-8).then_some(u)
}

/// JSON description of a conjugating matrix.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct WSpec {
    pub family: WFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<Vec3>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi3: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi4: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub completion: Option<Completion>,
    /// Row-major `[re, im]` pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<usize>,
}

impl WSpec {
    pub fn build(&self) -> Result<ConjugatingMatrix> {
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| CanonError::InvalidParameter(format!("family {:?} needs `{name}`", self.family)))
        };
        if let (Some(n), WFamily::Bell | WFamily::ExampleTheta | WFamily::OperatorTheta | WFamily::GeneralFour) =
            (self.n, self.family)
        {
            if n != 2 {
                return Err(CanonError::InvalidParameter(format!("family {:?} has n = 2, got {n}", self.family)));
            }
        }
        match self.family {
            WFamily::Bell => Ok(bell_w()),
            WFamily::ExampleTheta => Ok(example_w(need(self.theta, "theta")?)),
            WFamily::OperatorTheta => Ok(operator_w(need(self.theta, "theta")?)),
            WFamily::GeneralFour => Ok(general_four_w(&GeneralFormParams {
                phi2: self.phi2.unwrap_or(0.0),
                phi3: self.phi3.unwrap_or(0.0),
                phi4: self.phi4.unwrap_or(0.0),
                theta: self.theta.unwrap_or(0.0),
            })),
            WFamily::GeneralN => {
                let n = self.n.ok_or_else(|| CanonError::InvalidParameter("general_n needs `n`".into()))?;
                let k = self.k.ok_or_else(|| CanonError::InvalidParameter("general_n needs `k`".into()))?;
                let axis = self.axis.unwrap_or(crate::su2::Y_AXIS);
                general_w_n_with(n, k, axis, self.completion.unwrap_or_default())
            }
            WFamily::Explicit => {
                let entries = self
                    .matrix
                    .as_ref()
                    .ok_or_else(|| CanonError::InvalidParameter("explicit family needs `matrix`".into()))?;
                let dim =
                    crate::linalg::exact_sqrt(entries.len()).ok_or(CanonError::NotPerfectSquare(entries.len()))?;
                let flat: Vec<Complex64> = entries.iter().map(|p| c64(p[0], p[1])).collect();
                let m = crate::linalg::from_rows(dim, dim, &flat);
                ConjugatingMatrix::explicit(m, self.source.unwrap_or(0), self.target.unwrap_or(1))
            }
        }
    }
}

/// Columns `F(I)`, `F(σx)`, `−F(Y)`, `F(σz)`, each over `√2`.
pub fn bell_w() -> ConjugatingMatrix {
    let cols = [
        real_column([1.0, 0.0, 0.0, 1.0]),
        real_column([0.0, 1.0, 1.0, 0.0]),
        real_column([0.0, -1.0, 1.0, 0.0]),
        real_column([1.0, 0.0, 0.0, -1.0]),
    ];
    ConjugatingMatrix::from_columns(WFamily::Bell, WParams::default(), &cols, 0, 2)
}

/// The θ family used for the worked examples; column 3 is `F(Y)/√2`.
pub fn example_w(theta: f64) -> ConjugatingMatrix {
    let (s, c) = theta.sin_cos();
    let cols = [
        real_column([1.0, 0.0, 0.0, 1.0]),
        real_column([s, c, c, -s]),
        real_column([0.0, 1.0, -1.0, 0.0]),
        real_column([c, -s, -s, -c]),
    ];
    let params = WParams { theta, ..WParams::default() };
    ConjugatingMatrix::from_columns(WFamily::ExampleTheta, params, &cols, 0, 2)
}

/// `θ = −atan(p/q)`, the example angle for a Pythagorean scheme.
pub fn pythagorean_theta(p: i64, q: i64) -> f64 {
    -(p as f64 / q as f64).atan()
}

/// The θ family for operator control.
pub fn operator_w(theta: f64) -> ConjugatingMatrix {
    let (s, c) = theta.sin_cos();
    let i = |x: f64| c64(0.0, x);
    let cols = [
        real_column([1.0, 0.0, 0.0, 1.0]),
        real_column([0.0, -1.0, 1.0, 0.0]),
        column([i(s), i(c), i(c), i(-s)]),
        column([i(c), i(-s), i(-s), i(-c)]),
    ];
    let params = WParams { theta, ..WParams::default() };
    ConjugatingMatrix::from_columns(WFamily::OperatorTheta, params, &cols, 0, 1)
}

/// General four-level conjugating matrix, built from its column definitions
/// with the second column along `e^{iφ₂}·(0,1,−1,0)/√2`.
pub fn general_four_w(p: &GeneralFormParams) -> ConjugatingMatrix {
    let (s, c) = p.theta.sin_cos();
    let phase = |phi: f64| Complex64::from_polar(1.0, phi);
    let w1 = real_column([1.0, 0.0, 0.0, 1.0]);
    let w2 = real_column([0.0, 1.0, 1.0, 0.0]);
    let w3 = real_column([0.0, 1.0, -1.0, 0.0]);
    let w4 = real_column([1.0, 0.0, 0.0, -1.0]);
    let cols = [
        w1,
        &w3 * phase(p.phi2),
        (&w2 * c64(c, 0.0) + &w4 * c64(s, 0.0)) * phase(p.phi3),
        (&w4 * c64(c, 0.0) - &w2 * c64(s, 0.0)) * phase(p.phi4),
    ];
    let params = WParams { theta: p.theta, phi2: p.phi2, phi3: p.phi3, phi4: p.phi4, ..WParams::default() };
    ConjugatingMatrix::from_columns(WFamily::GeneralFour, params, &cols, 0, 1)
}

pub fn general_w_n(n: usize, k: usize, axis: Vec3) -> Result<ConjugatingMatrix> {
    general_w_n_with(n, k, axis, Completion::Weyl)
}

/// `n²`-level conjugating matrix for `ω_k = 2kπ/n` about `axis`, with
/// `w₁ = F(R(ω_k)·Yₙ)/√n` and `w₂ = F(Yₙ)/√n`.
pub fn general_w_n_with(n: usize, k: usize, axis: Vec3, completion: Completion) -> Result<ConjugatingMatrix> {
    if n < 2 || k == 0 || k >= n {
        return Err(CanonError::InvalidParameter(format!("k = {k} must lie in 1..{n}")));
    }
    if (norm3(&axis) - 1.0).abs() > 1e-9 {
        return Err(CanonError::InvalidParameter(format!("axis {axis:?} is not a unit vector")));
    }
    let omega = 2.0 * PI * k as f64 / n as f64;
    let aa = AxisAngle { axis, angle: omega };
    let y = y_n(n)?;
    let root = c64(1.0 / (n as f64).sqrt(), 0.0);
    let w1 = flatten(&(rotation_n(n, &aa)? * &y))? * root;
    let w2 = flatten(&y)? * root;
    let overlap = inner(&w1, &w2).norm();
    if overlap > 1e-10 {
        return Err(CanonError::NonOrthonormalSeeds(overlap));
    }
    let matrix =
        match completion {
            Completion::GramSchmidt => gram_schmidt_complete(&[w1, w2], n * n)?,
            Completion::Weyl => {
                let rep = generators(n)?;
                let (_, v) = hermitian_eigen(&rep.dot(&axis))?;
                let zeta = |e: usize| Complex64::from_polar(1.0, 2.0 * PI * e as f64 / n as f64);
                let mut cols = vec![w1, w2];
                for a in 0..n {
                    for b in 0..n {
                        if a == 0 && (b == 0 || b == (n - k) % n) {
                            continue;
                        }
                        // X^a·Z^b in the eigenbasis of r̂·J
                        let xz = ComplexMatrix::from_fn(n, n, |r, c| {
                            if r == (c + a) % n {
                                zeta(b * c % n)
                            } else {
                                c64(0.0, 0.0)
                            }
                        });
                        let p = &v * xz * v.adjoint() * &y;
                        cols.push(flatten(&p)? * root);
                    }
                }
                ComplexMatrix::from_columns(&cols)
            }
        };
    let defect = unitarity_defect(&matrix);
    if defect > 1e-10 {
        return Err(CanonError::NonOrthonormalSeeds(defect));
    }
    let params = WParams { k: Some(k), axis: Some(axis), ..WParams::default() };
    Ok(ConjugatingMatrix {
        n,
        matrix,
        family: WFamily::GeneralN,
        params,
        source: 0,
        target: 1,
        two_level_target: Some(rotation(&aa)),
    })
}

/// `H^RC(t) = H^R(t)⊗Iₙ + Iₙ⊗H(t)` in the `n`-dimensional lift.
pub fn hrc(s: &TwoLevelScheme, pace: &PaceFunction, n: usize, t: f64) -> Result<ComplexMatrix> {
    let rep = generators(n)?;
    hrc_with(&rep, s, pace, t)
}

fn hrc_with(rep: &SpinRep, s: &TwoLevelScheme, pace: &PaceFunction, t: f64) -> Result<ComplexMatrix> {
    let back = rep.dot(&retrograde_paced(s, pace, t)?);
    let fwd = rep.dot(&s.eval_h(t)?);
    let id = identity(rep.n);
    Ok(kron(&back, &id) + kron(&id, &fwd))
}

/// Instants in `(0, t_end)` where either half of `H^RC` changes segment.
pub fn hrc_breakpoints(s: &TwoLevelScheme, pace: &PaceFunction, t_end: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for b in s.boundaries() {
        out.push(b);
        out.push((s.total - b - pace.b) / pace.a);
    }
    let eps = 1e-12 * t_end.abs().max(1.0);
    out.retain(|&t| t > eps && t < t_end - eps);
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() <= eps);
    out
}

/// `W†·H^RC(t)·W`.
pub fn hcrc(s: &TwoLevelScheme, pace: &PaceFunction, w: &ConjugatingMatrix, t: f64) -> Result<ComplexMatrix> {
    w.conjugate(&hrc(s, pace, w.n, t)?)
}

/// Closed form of the conjugated canon under [`general_four_w`], from
/// `h(t)` and `h(T − t)`.
pub fn general_hcrc_form(h_t: &Vec3, h_tt: &Vec3, p: &GeneralFormParams) -> ComplexMatrix {
    let plus = scale3(&crate::su2::add3(h_t, h_tt), 0.5);
    let minus = scale3(&crate::su2::sub3(h_t, h_tt), 0.5);
    let (s, c) = p.theta.sin_cos();
    let a_th = |v: &Vec3| c * v[0] + s * v[2];
    let c_th = |v: &Vec3| c * v[2] - s * v[0];
    let e = |phi: f64| Complex64::from_polar(1.0, phi);
    let i = c64(0.0, 1.0);
    let mut m = zeros(4, 4);
    m[(0, 1)] = -i * e(p.phi2) * plus[1];
    m[(0, 2)] = e(p.phi3) * a_th(&minus);
    m[(0, 3)] = e(p.phi4) * c_th(&minus);
    m[(1, 2)] = -e(p.phi3 - p.phi2) * c_th(&plus);
    m[(1, 3)] = e(p.phi4 - p.phi2) * a_th(&plus);
    m[(2, 3)] = i * e(p.phi4 - p.phi3) * minus[1];
    for r in 0..4 {
        for col in (r + 1)..4 {
            m[(col, r)] = m[(r, col)].conj();
        }
    }
    m
}

/// Splits `M = B⊗Iₙ + Iₙ⊗A` with traceless `A`, `B`; returns `(B, A, residual)`.
pub fn split_canon(m: &ComplexMatrix, n: usize) -> (ComplexMatrix, ComplexMatrix, f64) {
    let shift = trace(m) / c64((n * n) as f64, 0.0);
    let id = identity(n);
    let scale = c64(1.0 / n as f64, 0.0);
    let b = partial_trace_second(m, n) * scale - &id * shift;
    let a = partial_trace_first(m, n) * scale - &id * shift;
    let residual = max_abs_diff(m, &(kron(&b, &id) + kron(&id, &a)));
    (b, a, residual)
}

/// Projects a traceless `n×n` matrix onto `h·J⁽ⁿ⁾`; returns `(h, residual)`.
pub fn project_to_spin(m: &ComplexMatrix, rep: &SpinRep) -> (Vec3, f64) {
    let norm = rep.generator_norm_sqr();
    let comp = |j: &ComplexMatrix| trace(&(m * j)).re / norm;
    let h = [comp(&rep.jx), comp(&rep.jy), comp(&rep.jz)];
    let residual = max_abs_diff(m, &rep.dot(&h));
    (h, residual)
}

/// Membership tolerance for the inverse translation.
pub const FAMILY_TOL: f64 = 1e-9;

/// Two-level components `(h(t), h^R(t))` of a conjugated canon sample.
pub fn decompose(four_h: &ComplexMatrix, w: &ConjugatingMatrix, rep: &SpinRep) -> Result<(Vec3, Vec3)> {
    let m = w.unconjugate(four_h)?;
    let (b, a, split_res) = split_canon(&m, w.n);
    let (ha, res_a) = project_to_spin(&a, rep);
    let (hb, res_b) = project_to_spin(&b, rep);
    let residual = split_res.max(res_a).max(res_b);
    if residual > FAMILY_TOL * max_abs(&m).max(1.0) {
        return Err(CanonError::NotInFamily(residual));
    }
    Ok((ha, hb))
}

/// Recovers the two-level scheme over `[0, 2τ]` whose conjugated canon is
/// `four_h` on `[0, τ]`.
///
/// Between consecutive breakpoints the Hamiltonian is sampled at the quarter
/// points and extrapolated linearly to the piece ends, which is exact for
/// piecewise-linear input and never evaluates a boundary.
pub fn recover_two_level<F>(four_h: F, tau: f64, w: &ConjugatingMatrix, breakpoints: &[f64]) -> Result<TwoLevelScheme>
where
    F: Fn(f64) -> Result<ComplexMatrix>,
{
    if tau.is_nan() || tau <= 0.0 {
        return Err(CanonError::InvalidParameter(format!("τ = {tau} must be positive")));
    }
    let rep = generators(w.n)?;
    let eps = 1e-12 * tau.max(1.0);
    let mut knots: Vec<f64> = breakpoints.iter().copied().filter(|&b| b > eps && b < tau - eps).collect();
    knots.push(0.0);
    knots.push(tau);
    knots.sort_by(f64::total_cmp);
    knots.dedup_by(|a, b| (*a - *b).abs() <= eps);

    let mut fwd = Vec::new();
    let mut back = Vec::new();
    for piece in knots.windows(2) {
        let (lo, hi) = (piece[0], piece[1]);
        let len = hi - lo;
        let (a1, b1) = decompose(&four_h(lo + 0.25 * len)?, w, &rep)?;
        decompose(&four_h(lo + 0.5 * len)?, w, &rep)?;
        let (a3, b3) = decompose(&four_h(lo + 0.75 * len)?, w, &rep)?;
        let ends = |q1: &Vec3, q3: &Vec3| {
            let start = crate::su2::sub3(&scale3(q1, 1.5), &scale3(q3, 0.5));
            let end = crate::su2::sub3(&scale3(q3, 1.5), &scale3(q1, 0.5));
            (start, end)
        };
        fwd.push(piece_segment(ends(&a1, &a3), len));
        back.push(piece_segment(ends(&b1, &b3), len));
    }
    let ha = rebased(fwd, tau)?;
    let hb = rebased(back, tau)?;
    splice_inverse(&hb, &ha)
}

fn piece_segment((start, end): (Vec3, Vec3), len: f64) -> Segment {
    let scale = norm3(&start).max(norm3(&end)).max(1.0);
    if norm3(&crate::su2::sub3(&start, &end)) <= 1e-13 * scale {
        Segment::constant(start, len)
    } else {
        Segment::linear(start, end, len)
    }
}

fn rebased(segments: Vec<Segment>, total: f64) -> Result<TwoLevelScheme> {
    let mut s = TwoLevelScheme::new(segments)?;
    s.total = total;
    let drift: f64 = s.segments.iter().map(|x| x.duration).sum::<f64>() - total;
    s.segments.last_mut().expect("non-empty").duration -= drift;
    Ok(s)
}

/// Recovers the scheme behind `hcrc(s, identity, w, ·)` on `[0, T/2]`.
pub fn recover_from_scheme(s: &TwoLevelScheme, w: &ConjugatingMatrix) -> Result<TwoLevelScheme> {
    let pace = PaceFunction::identity();
    let tau = s.total / 2.0;
    let breaks = hrc_breakpoints(s, &pace, tau);
    recover_two_level(|t| hcrc(s, &pace, w, t), tau, w, &breaks)
}

/// The two-level Hamiltonian `h·J` at `t` as a matrix (helper for callers
/// that only hold a scheme).
pub fn two_level_h(s: &TwoLevelScheme, t: f64) -> Result<ComplexMatrix> {
    Ok(h_dot_j(&s.eval_h(t)?))
}
