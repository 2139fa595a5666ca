//! Dense complex matrices and the small helpers the rest of the crate leans on.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>` throughout. The conventions
//! used everywhere:
//!
//! - `max_abs` is the entrywise max modulus, used for residual checks;
//! - `scale(a) = max(1, sigma_max(a))` is the scale that tolerances are
//!   relative to (never zero, so `residual <= tol * scale` is safe for the
//!   zero matrix).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix in double precision.
pub type CMatrix = DMatrix<Complex64>;

/// Shorthand used by tests and generators.
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Real diagonal matrix.
pub fn diag_real(values: &[f64]) -> CMatrix {
    let n = values.len();
    CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            c(values[i], 0.0)
        } else {
            Complex64::ZERO
        }
    })
}

/// Entrywise max modulus.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// Entrywise max modulus of `a - b`. Panics on shape mismatch.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_abs_diff shape mismatch");
    a.iter()
        .zip(b.iter())
        .fold(0.0f64, |acc, (x, y)| acc.max((x - y).norm()))
}

/// max(1, largest singular value). Tolerances are relative to this.
pub fn scale(a: &CMatrix) -> f64 {
    if a.is_empty() || max_abs(a) == 0.0 {
        return 1.0;
    }
    let sv = crate::linalg::singular_values_raw(a);
    sv.iter().fold(1.0f64, |acc, s| acc.max(*s))
}

/// True iff every entry is finite.
pub fn all_finite(a: &CMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Symmetry defect `max_abs(a - a*)`. Zero for exactly Hermitian input.
pub fn hermitian_residual(a: &CMatrix) -> f64 {
    max_abs_diff(a, &a.adjoint())
}

/// `(a + a*) / 2`.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()).scale(0.5)
}

/// Errors unless `a` is square.
pub fn require_square(a: &CMatrix) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::NonSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    Ok(a.nrows())
}

/// Errors unless `a` and `b` have identical shape.
pub fn require_same_shape(a: &CMatrix, b: &CMatrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            left_rows: a.nrows(),
            left_cols: a.ncols(),
            right_rows: b.nrows(),
            right_cols: b.ncols(),
        });
    }
    Ok(())
}

/// Assembles `[[a11, a12], [a21, a22]]`; every block must be n x n.
pub fn two_by_two(a11: &CMatrix, a12: &CMatrix, a21: &CMatrix, a22: &CMatrix) -> CMatrix {
    let n = a11.nrows();
    for b in [a11, a12, a21, a22] {
        assert_eq!(b.shape(), (n, n), "two_by_two blocks must share a shape");
    }
    let mut out = CMatrix::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(a11);
    out.view_mut((0, n), (n, n)).copy_from(a12);
    out.view_mut((n, 0), (n, n)).copy_from(a21);
    out.view_mut((n, n), (n, n)).copy_from(a22);
    out
}

/// The m x m block at block position (i, j) of a matrix made of m x m blocks.
pub fn block(a: &CMatrix, i: usize, j: usize, m: usize) -> CMatrix {
    a.view((i * m, j * m), (m, m)).into_owned()
}

/// `tr(a . b)` without forming the product.
pub fn trace_prod(a: &CMatrix, b: &CMatrix) -> Result<Complex64> {
    if a.ncols() != b.nrows() || a.nrows() != b.ncols() {
        return Err(Error::DimensionMismatch {
            left_rows: a.nrows(),
            left_cols: a.ncols(),
            right_rows: b.nrows(),
            right_cols: b.ncols(),
        });
    }
    let mut acc = Complex64::ZERO;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    Ok(acc)
}

/// Block-diagonal direct sum `a (+) b`.
pub fn direct_sum(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMatrix::zeros(ar + br, ac + bc);
    out.view_mut((0, 0), (ar, ac)).copy_from(a);
    out.view_mut((ar, ac), (br, bc)).copy_from(b);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_of_zero_is_one() {
        let z = CMatrix::zeros(3, 3);
        assert_eq!(scale(&z), 1.0);
    }

    #[test]
    fn scale_is_at_least_one() {
        let a = diag_real(&[0.25]);
        assert_eq!(scale(&a), 1.0);
        let b = diag_real(&[4.0]);
        assert_eq!(scale(&b), 4.0);
    }

    #[test]
    fn block_roundtrip() {
        let a = CMatrix::from_fn(4, 4, |i, j| c((4 * i + j) as f64, 0.0));
        let b = block(&a, 1, 0, 2);
        assert_eq!(b[(0, 0)].re, 8.0);
        assert_eq!(b[(1, 1)].re, 13.0);
    }

    #[test]
    fn non_square_is_rejected() {
        let a = CMatrix::zeros(2, 3);
        assert!(matches!(
            require_square(&a),
            Err(Error::NonSquare { rows: 2, cols: 3 })
        ));
    }
}
