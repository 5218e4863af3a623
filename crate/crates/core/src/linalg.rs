//! Dense complex linear algebra used throughout the crate.
//!
//! Matrices are `nalgebra` dense matrices over `Complex64`. Flattening is
//! row-major: entry `(i, j)` of an `n×n` matrix lands at index `n·i + j`
//! (0-based), which makes `(A ⊗ B)·flatten(m) = flatten(A·m·Bᵀ)` hold exactly.

use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64;

use crate::{CanonError, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Hermiticity tolerance, relative to the largest entry (floored at 1).
pub const HERMITIAN_TOL: f64 = 1e-12;

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(rows, cols)
}

/// Builds a matrix from row-major entries.
pub fn from_rows(rows: usize, cols: usize, entries: &[Complex64]) -> ComplexMatrix {
    assert_eq!(rows * cols, entries.len(), "entry count must equal rows*cols");
    ComplexMatrix::from_row_slice(rows, cols, entries)
}

/// Builds a real matrix from row-major entries.
pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> ComplexMatrix {
    let e: Vec<Complex64> = entries.iter().map(|&x| c64(x, 0.0)).collect();
    from_rows(rows, cols, &e)
}

/// Kronecker product with the block convention `(A⊗B)[(i,k),(j,l)] = A[i,j]·B[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Row-major flattening of a square matrix.
pub fn flatten(m: &ComplexMatrix) -> Result<ComplexVector> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(CanonError::NotSquare { rows, cols });
    }
    Ok(ComplexVector::from_iterator(rows * cols, (0..rows).flat_map(|i| (0..cols).map(move |j| m[(i, j)]))))
}

/// Inverse of [`flatten`].
pub fn unflatten(v: &ComplexVector) -> Result<ComplexMatrix> {
    let n = exact_sqrt(v.len()).ok_or(CanonError::NotPerfectSquare(v.len()))?;
    Ok(ComplexMatrix::from_row_slice(n, n, v.as_slice()))
}

pub(crate) fn exact_sqrt(len: usize) -> Option<usize> {
    let n = (len as f64).sqrt().round() as usize;
    (n * n == len).then_some(n)
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn hermiticity_defect(h: &ComplexMatrix) -> f64 {
    max_abs_diff(h, &h.adjoint())
}

/// `max |U†U − I|`.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    let n = u.ncols();
    max_abs_diff(&(u.adjoint() * u), &identity(n))
}

pub fn frobenius_norm(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Standard inner product `⟨v, w⟩ = Σ conj(vᵢ)·wᵢ`.
pub fn inner(v: &ComplexVector, w: &ComplexVector) -> Complex64 {
    v.iter().zip(w.iter()).map(|(a, b)| a.conj() * b).sum()
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum()
}

fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    let (rows, cols) = h.shape();
    if rows != cols {
        return Err(CanonError::NotSquare { rows, cols });
    }
    let defect = hermiticity_defect(h);
    if defect > HERMITIAN_TOL * max_abs(h).max(1.0) {
        return Err(CanonError::NotHermitian(defect));
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted in
/// descending order; columns of the returned matrix are the eigenvectors.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    check_hermitian(h)?;
    let sym = (h + h.adjoint()) * c64(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let n = h.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// `exp(i·s·H)` for Hermitian `H`, via eigendecomposition.
pub fn expm_hermitian(h: &ComplexMatrix, s: f64) -> Result<ComplexMatrix> {
    check_hermitian(h)?;
    let n = h.nrows();
    if s == 0.0 {
        return Ok(identity(n));
    }
    let sym = (h + h.adjoint()) * c64(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (j, lambda) in eig.eigenvalues.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, s * lambda);
        for i in 0..n {
            scaled[(i, j)] *= phase;
        }
    }
    Ok(scaled * v.adjoint())
}

/// Nearest unitary in the polar sense: `U·(U†U)^{-1/2}`, computed from an SVD.
pub fn reunitarize(u: &ComplexMatrix) -> ComplexMatrix {
    let svd = u.clone().svd(true, true);
    match (svd.u, svd.v_t) {
        (Some(left), Some(right)) => left * right,
        _ => u.clone(),
    }
}

/// Completes orthonormal seed columns to a `dim×dim` unitary.
///
/// The extra columns come from orthonormalizing the canonical basis vectors
/// in index order; candidates whose residual norm falls below `1e-8` are
/// skipped. The result is deterministic for given seeds.
pub fn gram_schmidt_complete(seeds: &[ComplexVector], dim: usize) -> Result<ComplexMatrix> {
    if seeds.len() > dim {
        return Err(CanonError::TooManySeeds { seeds: seeds.len(), dim });
    }
    for s in seeds {
        if s.len() != dim {
            return Err(CanonError::DimensionMismatch { expected: dim, got: s.len() });
        }
    }
    let mut worst: f64 = 0.0;
    for (a, sa) in seeds.iter().enumerate() {
        for (b, sb) in seeds.iter().enumerate() {
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((inner(sa, sb) - c64(target, 0.0)).norm());
        }
    }
    if worst > 1e-10 {
        return Err(CanonError::NonOrthonormalSeeds(worst));
    }

    let mut columns: Vec<ComplexVector> = seeds.to_vec();
    for e in 0..dim {
        if columns.len() == dim {
            break;
        }
        let mut v = ComplexVector::zeros(dim);
        v[e] = c64(1.0, 0.0);
        // two passes keep the new column orthogonal to working precision
        for _ in 0..2 {
            for q in &columns {
                let proj = inner(q, &v);
                v -= q * proj;
            }
        }
        let norm = v.norm();
        if norm < 1e-8 {
            continue;
        }
        columns.push(v / c64(norm, 0.0));
    }
    if columns.len() != dim {
        return Err(CanonError::NonOrthonormalSeeds(worst));
    }
    Ok(ComplexMatrix::from_columns(&columns))
}

/// Partial trace over the first factor of an `n⊗n` operator.
pub fn partial_trace_first(m: &ComplexMatrix, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |k, l| (0..n).map(|i| m[(i * n + k, i * n + l)]).sum())
}

/// Partial trace over the second factor of an `n⊗n` operator.
pub fn partial_trace_second(m: &ComplexMatrix, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| (0..n).map(|k| m[(i * n + k, j * n + k)]).sum())
}

/// Pauli matrices `(σx, σy, σz)`.
pub fn pauli() -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let zero = c64(0.0, 0.0);
    let one = c64(1.0, 0.0);
    let i = c64(0.0, 1.0);
    (
        from_rows(2, 2, &[zero, one, one, zero]),
        from_rows(2, 2, &[zero, -i, i, zero]),
        from_rows(2, 2, &[one, zero, zero, -one]),
    )
}
