//! Spin-1/2 rotations, their axis-angle decomposition, and the Bloch-ball map.
//!
//! Rotations follow the sign convention `R_r(φ) = exp(iφ r̂·J)` with
//! `J = σ/2`, so a propagator generated by the constant Hamiltonian `h·J`
//! over a time `t` is `R_{-ĥ}(‖h‖t)`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::{c64, expm_hermitian, identity, max_abs_diff, pauli, ComplexMatrix};
use crate::{CanonError, Result};

pub type Vec3 = [f64; 3];

pub const X_AXIS: Vec3 = [1.0, 0.0, 0.0];
pub const Y_AXIS: Vec3 = [0.0, 1.0, 0.0];
pub const Z_AXIS: Vec3 = [0.0, 0.0, 1.0];

/// Rotation axis (unit length) and angle in `[0, 4π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisAngle {
    pub axis: Vec3,
    pub angle: f64,
}

impl AxisAngle {
    /// Normalizes the axis and reduces the angle into `[0, 4π)`.
    pub fn new(axis: Vec3, angle: f64) -> Result<Self> {
        let norm = norm3(&axis);
        if norm.is_nan() || norm <= 1e-12 || !angle.is_finite() {
            return Err(CanonError::InvalidParameter(format!(
                "axis {axis:?} / angle {angle} cannot define a rotation"
            )));
        }
        Ok(Self { axis: scale3(&axis, 1.0 / norm), angle: angle.rem_euclid(4.0 * PI) })
    }

    pub fn identity() -> Self {
        Self { axis: Z_AXIS, angle: 0.0 }
    }
}

pub fn norm3(v: &Vec3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

pub fn scale3(v: &Vec3, s: f64) -> Vec3 {
    [v[0] * s, v[1] * s, v[2] * s]
}

pub fn add3(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub3(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Spin-1/2 generators `(σx/2, σy/2, σz/2)`.
pub fn j2() -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let (sx, sy, sz) = pauli();
    let half = c64(0.5, 0.0);
    (sx * half, sy * half, sz * half)
}

/// `h·J` for the spin-1/2 generators.
pub fn h_dot_j(h: &Vec3) -> ComplexMatrix {
    let (jx, jy, jz) = j2();
    jx * c64(h[0], 0.0) + jy * c64(h[1], 0.0) + jz * c64(h[2], 0.0)
}

/// `exp(iφ r̂·J)`.
pub fn rotation(aa: &AxisAngle) -> ComplexMatrix {
    let gen = h_dot_j(&aa.axis);
    expm_hermitian(&gen, aa.angle).expect("r̂·J is Hermitian")
}

fn su2_defect(u: &ComplexMatrix) -> f64 {
    if u.shape() != (2, 2) {
        return f64::INFINITY;
    }
    let unit = max_abs_diff(&(u.adjoint() * u), &identity(2));
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    unit.max((det - c64(1.0, 0.0)).norm())
}

/// The Bloch-ball image `sin(φ/2)·r̂`, read directly off the matrix entries.
fn bloch_vector(u: &ComplexMatrix) -> Vec3 {
    [0.5 * (u[(0, 1)] + u[(1, 0)]).im, 0.5 * (u[(0, 1)] - u[(1, 0)]).re, 0.5 * (u[(0, 0)] - u[(1, 1)]).im]
}

/// Axis-angle form of an SU(2) element, canonicalized so that `sin(φ/2) ≥ 0`
/// (`φ ∈ [0, 2π]`). When the rotation is `±I` the axis is reported as `ẑ`.
pub fn to_axis_angle(u: &ComplexMatrix) -> Result<AxisAngle> {
    let defect = su2_defect(u);
    if defect > 1e-10 {
        return Err(CanonError::NotSu2(defect));
    }
    let v = bloch_vector(u);
    let s = norm3(&v);
    let c = 0.5 * (u[(0, 0)] + u[(1, 1)]).re;
    let angle = 2.0 * s.atan2(c);
    if s < 1e-15 {
        return Ok(AxisAngle { axis: Z_AXIS, angle });
    }
    Ok(AxisAngle { axis: scale3(&v, 1.0 / s), angle })
}

/// `η(R_r(φ)) = sin(φ/2)·r̂`, a point of the closed unit ball.
pub fn eta(u: &ComplexMatrix) -> Result<Vec3> {
    let aa = to_axis_angle(u)?;
    Ok(eta_of(&aa))
}

pub fn eta_of(aa: &AxisAngle) -> Vec3 {
    scale3(&aa.axis, (aa.angle / 2.0).sin())
}

/// Rotation about a uniformly random axis by a uniformly random angle in
/// `[0, 4π)`, reproducible for a fixed seed.
pub fn random_su2(seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rotation(&random_axis_angle(&mut rng))
}

pub fn random_axis<R: Rng>(rng: &mut R) -> Vec3 {
    let z: f64 = rng.random_range(-1.0..1.0);
    let phi: f64 = rng.random_range(0.0..2.0 * PI);
    let rho = (1.0 - z * z).max(0.0).sqrt();
    [rho * phi.cos(), rho * phi.sin(), z]
}

pub fn random_axis_angle<R: Rng>(rng: &mut R) -> AxisAngle {
    let axis = random_axis(rng);
    let angle = rng.random_range(0.0..4.0 * PI);
    AxisAngle { axis, angle }
}

/// Whether `u` lies in SU(2) within `tol`.
pub fn is_su2(u: &ComplexMatrix, tol: f64) -> bool {
    su2_defect(u) < tol
}

/// Projects a unitary `2×2` matrix onto SU(2) by removing `sqrt(det)`.
/// The sign ambiguity of the square root is irrelevant wherever SU(2)
/// elements are compared up to `±`.
pub fn to_su2(u: &ComplexMatrix) -> ComplexMatrix {
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    u / det.sqrt()
}
