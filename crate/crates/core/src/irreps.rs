//! The `n`-dimensional irreducible representations of su(2) and SU(2).

use std::f64::consts::PI;

use crate::linalg::{c64, expm_hermitian, zeros, ComplexMatrix};
use crate::su2::{to_axis_angle, AxisAngle, Vec3, Y_AXIS};
use crate::{CanonError, Result};

/// Spin-`j` generators with `j = (n-1)/2`, in the `Jz` eigenbasis ordered
/// `m = j, j-1, …, -j` (Condon–Shortley phases: `Jx` real, `Jz` diagonal).
#[derive(Debug, Clone, PartialEq)]
pub struct SpinRep {
    pub n: usize,
    pub jx: ComplexMatrix,
    pub jy: ComplexMatrix,
    pub jz: ComplexMatrix,
}

impl SpinRep {
    pub fn spin(&self) -> f64 {
        (self.n as f64 - 1.0) / 2.0
    }

    /// `h·J` in this representation.
    pub fn dot(&self, h: &Vec3) -> ComplexMatrix {
        &self.jx * c64(h[0], 0.0) + &self.jy * c64(h[1], 0.0) + &self.jz * c64(h[2], 0.0)
    }

    /// `tr(Jᵢ²)`, identical for all three components.
    pub fn generator_norm_sqr(&self) -> f64 {
        let n = self.n as f64;
        n * (n * n - 1.0) / 12.0
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(CanonError::InvalidParameter(format!("representation dimension {n} < 2")));
    }
    Ok(())
}

pub fn generators(n: usize) -> Result<SpinRep> {
    check_dim(n)?;
    let j = (n as f64 - 1.0) / 2.0;
    let mut raise = zeros(n, n);
    for i in 1..n {
        let m = j - i as f64;
        raise[(i - 1, i)] = c64((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let lower = raise.transpose();
    let jx = (&raise + &lower) * c64(0.5, 0.0);
    let jy = (&raise - &lower) * c64(0.0, -0.5);
    let jz = ComplexMatrix::from_fn(n, n, |r, c| if r == c { c64(j - r as f64, 0.0) } else { c64(0.0, 0.0) });
    Ok(SpinRep { n, jx, jy, jz })
}

/// `exp(iφ r̂·J⁽ⁿ⁾)`.
pub fn rotation_n(n: usize, aa: &AxisAngle) -> Result<ComplexMatrix> {
    let rep = generators(n)?;
    expm_hermitian(&rep.dot(&aa.axis), aa.angle)
}

/// Linear lift `h·J⁽ⁿ⁾` of the two-level Hamiltonian `h·J⁽²⁾`.
pub fn lift_hamiltonian(h: &Vec3, n: usize) -> Result<ComplexMatrix> {
    Ok(generators(n)?.dot(h))
}

/// `Yₙ = R_ŷ⁽ⁿ⁾(π)`.
pub fn y_n(n: usize) -> Result<ComplexMatrix> {
    let mut y = rotation_n(n, &AxisAngle { axis: Y_AXIS, angle: PI })?;
    // the exact matrix is a signed anti-diagonal permutation
    for z in y.iter_mut() {
        *z = c64(z.re.round(), z.im.round());
    }
    Ok(y)
}

/// Character `χₙ(R(ω)) = sin(nω/2)/sin(ω/2)`.
///
/// Near the removable singularities `ω = 2πm` the limit `n·(-1)^{m(n-1)}`
/// is returned.
pub fn character(n: usize, omega: f64) -> f64 {
    let half = omega / 2.0;
    let denom = half.sin();
    if denom.abs() < 1e-9 {
        let m = (omega / (2.0 * PI)).round() as i64;
        let odd = (m * (n as i64 - 1)).rem_euclid(2) == 1;
        return if odd { -(n as f64) } else { n as f64 };
    }
    (n as f64 * half).sin() / denom
}

/// Group representation `Πₙ(u) = R⁽ⁿ⁾` of the axis-angle form of `u`.
pub fn pi_n(n: usize, u: &ComplexMatrix) -> Result<ComplexMatrix> {
    rotation_n(n, &to_axis_angle(u)?)
}
