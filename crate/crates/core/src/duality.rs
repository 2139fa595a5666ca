//! Parallel vs trace duality pairings, the opposite matrix order, and the
//! functional flip, at the finite block-matrix level.
//!
//! A functional on n x n block matrices with m x m blocks is stored as its
//! matrix of components `[phi_ij]` with `phi_ij(a) = tr(R_ij a)`. The two
//! pairings in play are
//!
//! ```text
//! parallel:  <[phi_ij], [x_ij]> = sum_ij phi_ij(x_ij)
//! trace:     <[a_ij], [b_ij]>   = sum_ij tr(a_ij b_ji) = tr(A B)
//! ```
//!
//! Under the trace-pairing assembly `G[block j, i] = R_ij` the functional is
//! `phi(X) = tr(G X)`, which makes positivity on the PSD cone decidable: it
//! holds iff G is PSD. Flipping the outer indices of phi corresponds to the
//! outer transpose of G, which is exactly the opposite-order correspondence.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{default_rank_tol, polar, svd};
use crate::matrix::{block, trace_prod, CMatrix};
use crate::sampling::{complex_gaussian, rng_from};
use crate::schatten::{is_positive, schatten_norm, AmplifiedElement, Exponent};

/// `[phi_ij]` with `phi_ij(a) = tr(R_ij a)`; components stored row-major.
#[derive(Debug, Clone)]
pub struct BlockFunctional {
    outer: usize,
    inner: usize,
    reps: Vec<CMatrix>,
}

impl BlockFunctional {
    pub fn new(outer: usize, inner: usize, reps: Vec<CMatrix>) -> Result<Self> {
        if reps.len() != outer * outer {
            return Err(Error::BlockShape {
                expected: outer * outer,
                got: reps.len(),
            });
        }
        for r in &reps {
            if r.nrows() != inner || r.ncols() != inner {
                return Err(Error::DimensionMismatch {
                    left_rows: inner,
                    left_cols: inner,
                    right_rows: r.nrows(),
                    right_cols: r.ncols(),
                });
            }
        }
        Ok(Self { outer, inner, reps })
    }

    pub fn outer(&self) -> usize {
        self.outer
    }

    pub fn inner(&self) -> usize {
        self.inner
    }

    pub fn rep(&self, i: usize, j: usize) -> &CMatrix {
        &self.reps[i * self.outer + j]
    }

    /// The matrix G with `phi(X) = tr(G X)`: block (j, i) of G is R_ij.
    pub fn representing_matrix(&self) -> CMatrix {
        let (n, m) = (self.outer, self.inner);
        let mut g = CMatrix::zeros(n * m, n * m);
        for i in 0..n {
            for j in 0..n {
                g.view_mut((j * m, i * m), (m, m)).copy_from(self.rep(i, j));
            }
        }
        g
    }

    /// Inverse of `representing_matrix`.
    pub fn from_representing_matrix(outer: usize, inner: usize, g: &CMatrix) -> Result<Self> {
        let d = outer * inner;
        if g.nrows() != d || g.ncols() != d {
            return Err(Error::BlockShape {
                expected: d,
                got: g.nrows(),
            });
        }
        let mut reps = Vec::with_capacity(outer * outer);
        for i in 0..outer {
            for j in 0..outer {
                reps.push(block(g, j, i, inner));
            }
        }
        Self::new(outer, inner, reps)
    }

    /// Evaluation on a block element: `sum_ij tr(R_ij x_ij)`.
    pub fn pair(&self, x: &AmplifiedElement) -> Result<Complex64> {
        parallel_pair(self, x)
    }

    /// Positivity on the standard cone: the representing matrix is PSD.
    pub fn is_positive(&self, tol: f64) -> bool {
        is_positive(&self.representing_matrix(), tol)
    }

    /// Positivity on the opposite cone `{x : outer_transpose(x) PSD}`:
    /// the outer transpose of the representing matrix is PSD.
    pub fn is_op_positive(&self, tol: f64) -> bool {
        let g = AmplifiedElement::new(self.outer, self.inner, self.representing_matrix())
            .expect("representing matrix has block shape");
        is_positive(outer_transpose(&g).mat(), tol)
    }

    /// The dual-space involution `phi*(a) = phi(a*)*`: components are
    /// adjointed and the outer indices swapped.
    pub fn involute(&self) -> Self {
        let n = self.outer;
        let mut reps = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                reps.push(self.rep(j, i).adjoint());
            }
        }
        Self {
            outer: n,
            inner: self.inner,
            reps,
        }
    }
}

/// The parallel duality pairing `sum_ij phi_ij(x_ij)`.
pub fn parallel_pair(phi: &BlockFunctional, x: &AmplifiedElement) -> Result<Complex64> {
    if phi.outer != x.outer() || phi.inner != x.inner() {
        return Err(Error::DimensionMismatch {
            left_rows: phi.outer,
            left_cols: phi.inner,
            right_rows: x.outer(),
            right_cols: x.inner(),
        });
    }
    let mut acc = Complex64::ZERO;
    for i in 0..phi.outer {
        for j in 0..phi.outer {
            acc += trace_prod(phi.rep(i, j), &x.block(i, j))?;
        }
    }
    Ok(acc)
}

/// The trace duality pairing: the full trace of the nm x nm product,
/// `tr(A B) = sum_ij tr(a_ij b_ji)`.
pub fn trace_pair_matrix(a: &AmplifiedElement, b: &AmplifiedElement) -> Result<Complex64> {
    if a.outer() != b.outer() || a.inner() != b.inner() {
        return Err(Error::DimensionMismatch {
            left_rows: a.outer(),
            left_cols: a.inner(),
            right_rows: b.outer(),
            right_cols: b.inner(),
        });
    }
    trace_prod(a.mat(), b.mat())
}

/// Swaps the outer indices of the functional: `flip(phi)_ij = phi_ji`.
pub fn flip(phi: &BlockFunctional) -> BlockFunctional {
    let n = phi.outer;
    let mut reps = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            reps.push(phi.rep(j, i).clone());
        }
    }
    BlockFunctional {
        outer: n,
        inner: phi.inner,
        reps,
    }
}

/// Transposes the outer block indices, leaving each inner block untouched.
/// This realizes the opposite matrix order: x is op-positive iff
/// `outer_transpose(x)` is PSD.
pub fn outer_transpose(x: &AmplifiedElement) -> AmplifiedElement {
    let (n, m) = (x.outer(), x.inner());
    let mut mat = CMatrix::zeros(n * m, n * m);
    for i in 0..n {
        for j in 0..n {
            mat.view_mut((i * m, j * m), (m, m)).copy_from(&x.block(j, i));
        }
    }
    AmplifiedElement::new(n, m, mat).expect("outer transpose preserves shape")
}

/// Smallest sampled value of `Re phi(X)` over PSD probes, including the
/// targeted probe along the representing matrix's bottom eigenvector. A
/// positive functional never goes below -tol here; a non-positive one is
/// exposed by the targeted probe.
pub fn min_over_sampled_cone(
    phi: &BlockFunctional,
    samples: u32,
    seed: u64,
) -> Result<f64> {
    let g = phi.representing_matrix();
    let d = g.nrows();
    let mut rng: ChaCha8Rng = rng_from(&[seed, 0x636f6e65]);
    let mut min_value = f64::INFINITY;
    for _ in 0..samples {
        let w = complex_gaussian(&mut rng, d, d);
        let probe = &w * w.adjoint();
        let probe = probe.scale(1.0 / probe.trace().re.max(1e-12));
        min_value = min_value.min(trace_prod(&g, &probe)?.re);
    }
    // targeted probe: the rank-one PSD element along the bottom eigenvector
    let eig = crate::linalg::hermitian_eig(&crate::matrix::hermitian_part(&g), 1.0)?;
    let wcol = eig.vectors.column(0);
    let mut probe = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            probe[(i, j)] = wcol[i] * wcol[j].conj();
        }
    }
    min_value = min_value.min(trace_prod(&g, &probe)?.re);
    Ok(min_value)
}

/// Sampled evaluation of the dual norm `sup { |tr(b c)| : |c|_inf <= 1 }`
/// of the embedding of b into the dual of M_m. The polar-derived contraction
/// attains `|b|_1`, so the returned value matches the trace norm up to
/// rounding while every random sample stays below it.
pub fn dual_norm_lower(b: &CMatrix, samples: u32, seed: u64) -> Result<f64> {
    let n = b.nrows();
    let mut best = 0.0f64;
    let mut rng: ChaCha8Rng = rng_from(&[seed, 0x6475616c]);
    for _ in 0..samples {
        let g = complex_gaussian(&mut rng, b.ncols(), n);
        let smax = svd(&g).max_singular_value();
        if smax == 0.0 {
            continue;
        }
        let contraction = g.scale(1.0 / smax);
        best = best.max(trace_prod(b, &contraction)?.norm());
    }
    if b.nrows() == b.ncols() {
        let pf = polar(b, default_rank_tol(n, n))?;
        best = best.max(trace_prod(b, &pf.isometry.adjoint())?.norm());
    }
    Ok(best)
}

/// Contractivity of a functional in the op sense: `|flip(phi)|` evaluated
/// through the trace pairing equals the q-norm of the representing matrix,
/// so flipping preserves positive-contractive functionals.
pub fn functional_norm(phi: &BlockFunctional, q: Exponent) -> f64 {
    schatten_norm(&phi.representing_matrix(), q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{c, diag_real};

    fn functional_from(entries: &[(usize, usize, CMatrix)], n: usize, m: usize) -> BlockFunctional {
        let mut reps = vec![CMatrix::zeros(m, m); n * n];
        for (i, j, r) in entries {
            reps[i * n + j] = r.clone();
        }
        BlockFunctional::new(n, m, reps).unwrap()
    }

    #[test]
    fn scalar_case_is_plain_product() {
        let phi = functional_from(&[(0, 0, diag_real(&[2.0]))], 1, 1);
        let x = AmplifiedElement::new(1, 1, diag_real(&[3.0])).unwrap();
        assert_eq!(parallel_pair(&phi, &x).unwrap(), c(6.0, 0.0));
    }

    #[test]
    fn single_identity_component() {
        let m = 3;
        let phi = functional_from(&[(0, 0, CMatrix::identity(m, m))], 2, m);
        let x = AmplifiedElement::single_block(2, 0, 0, &CMatrix::identity(m, m)).unwrap();
        assert_eq!(parallel_pair(&phi, &x).unwrap(), c(m as f64, 0.0));
    }

    #[test]
    fn pairing_dimension_mismatch() {
        let phi = functional_from(&[(0, 0, diag_real(&[1.0]))], 1, 1);
        let x = AmplifiedElement::new(2, 1, CMatrix::zeros(2, 2)).unwrap();
        assert!(matches!(
            parallel_pair(&phi, &x),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn trace_pairing_of_identities() {
        let id = AmplifiedElement::new(2, 3, CMatrix::identity(6, 6)).unwrap();
        assert_eq!(trace_pair_matrix(&id, &id).unwrap(), c(6.0, 0.0));
    }

    #[test]
    fn flip_fixes_diagonal_functionals() {
        let phi = functional_from(
            &[(0, 0, diag_real(&[1.0, 2.0])), (1, 1, diag_real(&[3.0, 4.0]))],
            2,
            2,
        );
        let flipped = flip(&phi);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(
                    crate::matrix::max_abs_diff(phi.rep(i, j), flipped.rep(i, j)),
                    0.0
                );
            }
        }
    }

    #[test]
    fn flip_is_an_involution() {
        let phi = functional_from(
            &[(0, 1, diag_real(&[1.0])), (1, 0, diag_real(&[-2.0]))],
            2,
            1,
        );
        let back = flip(&flip(&phi));
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(
                    crate::matrix::max_abs_diff(phi.rep(i, j), back.rep(i, j)),
                    0.0
                );
            }
        }
    }

    #[test]
    fn outer_transpose_is_an_involution() {
        let x = AmplifiedElement::new(
            2,
            2,
            CMatrix::from_fn(4, 4, |i, j| c((i * 4 + j) as f64, (i + j) as f64)),
        )
        .unwrap();
        let back = outer_transpose(&outer_transpose(&x));
        assert_eq!(crate::matrix::max_abs_diff(back.mat(), x.mat()), 0.0);
    }

    #[test]
    fn outer_transpose_fixes_block_diagonal() {
        let y = diag_real(&[1.0, 2.0]);
        let mut mat = CMatrix::zeros(4, 4);
        mat.view_mut((0, 0), (2, 2)).copy_from(&y);
        mat.view_mut((2, 2), (2, 2)).copy_from(&y.scale(3.0));
        let x = AmplifiedElement::new(2, 2, mat).unwrap();
        assert_eq!(
            crate::matrix::max_abs_diff(outer_transpose(&x).mat(), x.mat()),
            0.0
        );
    }

    #[test]
    fn dual_involution_is_an_involution() {
        let phi = functional_from(
            &[
                (0, 1, CMatrix::from_fn(2, 2, |i, j| c(i as f64, j as f64 + 1.0))),
                (1, 0, diag_real(&[-2.0, 5.0])),
            ],
            2,
            2,
        );
        let back = phi.involute().involute();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(
                    crate::matrix::max_abs_diff(phi.rep(i, j), back.rep(i, j)),
                    0.0
                );
            }
        }
    }

    #[test]
    fn representing_matrix_roundtrip() {
        let phi = functional_from(
            &[
                (0, 1, CMatrix::from_fn(2, 2, |i, j| c((i + j) as f64, 1.0))),
                (1, 1, diag_real(&[7.0, -1.0])),
            ],
            2,
            2,
        );
        let g = phi.representing_matrix();
        let back = BlockFunctional::from_representing_matrix(2, 2, &g).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(
                    crate::matrix::max_abs_diff(phi.rep(i, j), back.rep(i, j)),
                    0.0
                );
            }
        }
    }
}
