//! Complex dense decompositions: Hermitian eigendecomposition, SVD, polar
//! decomposition, and functional calculus.
//!
//! All operations are pure functions with explicit tolerances. Decompositions
//! are backed by nalgebra; this module pins our conventions on top of them
//! (ascending eigenvalues, descending singular values, canonical minimal
//! partial isometry).


use crate::error::{Error, Result};
use crate::matrix::{
    c, hermitian_part, hermitian_residual, require_square, scale, CMatrix,
};

/// Default tolerance for Hermitian / PSD membership checks, relative to
/// `scale(a)`.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Numerical-rank cutoff relative to the largest singular value.
///
/// Partial isometries are discontinuous in the input, so every truncation of
/// small singular values must use an explicit cutoff.
pub fn default_rank_tol(rows: usize, cols: usize) -> f64 {
    f64::EPSILON * rows.max(cols) as f64
}

/// Eigendecomposition of a Hermitian matrix: `a = vectors . diag(eigenvalues) . vectors*`
/// with eigenvalues ascending and `vectors` unitary.
#[derive(Debug, Clone)]
pub struct SpectralForm {
    pub eigenvalues: Vec<f64>,
    pub vectors: CMatrix,
}

impl SpectralForm {
    /// `vectors . diag(f(eigenvalues)) . vectors*`, always exactly Hermitian.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let values: Vec<f64> = self.eigenvalues.iter().map(|&t| f(t)).collect();
        self.recombine(&values)
    }

    /// `vectors . diag(values) . vectors*` with one value per eigenvalue
    /// slot.
    pub fn recombine(&self, values: &[f64]) -> CMatrix {
        let n = self.eigenvalues.len();
        assert_eq!(values.len(), n, "one value per eigenvalue");
        let mut m = CMatrix::zeros(n, n);
        // Rank-one accumulation keeps the result Hermitian up to rounding;
        // symmetrize once at the end to make it exact.
        for (k, &value) in values.iter().enumerate() {
            if value == 0.0 {
                continue;
            }
            let col = self.vectors.column(k);
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += col[i] * col[j].conj() * c(value, 0.0);
                }
            }
        }
        hermitian_part(&m)
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.apply(|t| t)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

/// Singular value decomposition `a = u . diag(singular_values) . v*` with
/// singular values descending; `u` is rows x k and `v` is cols x k for
/// k = min(rows, cols).
#[derive(Debug, Clone)]
pub struct SvdForm {
    pub u: CMatrix,
    pub singular_values: Vec<f64>,
    pub v: CMatrix,
}

impl SvdForm {
    pub fn reconstruct(&self) -> CMatrix {
        let k = self.singular_values.len();
        let mut sig = CMatrix::zeros(k, k);
        for (i, &s) in self.singular_values.iter().enumerate() {
            sig[(i, i)] = c(s, 0.0);
        }
        &self.u * sig * self.v.adjoint()
    }

    pub fn max_singular_value(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values above `rank_tol * sigma_max`.
    pub fn numerical_rank(&self, rank_tol: f64) -> usize {
        let cut = rank_tol * self.max_singular_value();
        self.singular_values.iter().filter(|&&s| s > cut).count()
    }
}

/// Polar decomposition data `a = isometry . abs = abs_left . isometry`.
///
/// `isometry` is the canonical minimal partial isometry (zero on the kernel),
/// `abs = |a| = (a* a)^{1/2}` and `abs_left = |a*| = (a a*)^{1/2}`.
#[derive(Debug, Clone)]
pub struct PolarForm {
    pub isometry: CMatrix,
    pub abs: CMatrix,
    pub abs_left: CMatrix,
}

impl PolarForm {
    /// The support projection `isometry* . isometry` of `abs`.
    pub fn right_support(&self) -> CMatrix {
        self.isometry.adjoint() * &self.isometry
    }

    /// The support projection `isometry . isometry*` of `abs_left`.
    pub fn left_support(&self) -> CMatrix {
        &self.isometry * self.isometry.adjoint()
    }
}

fn to_faer(a: &CMatrix) -> faer::Mat<faer::c64> {
    faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn from_faer(a: faer::MatRef<'_, faer::c64>) -> CMatrix {
    CMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// Hermitian eigendecomposition with ascending eigenvalues.
///
/// Errors with `NonHermitian` when the symmetry residual exceeds
/// `tol * scale(a)`. The decomposition itself is taken of the Hermitian part
/// `(a + a*)/2`, so tiny admissible asymmetry never leaks into the output.
pub fn hermitian_eig(a: &CMatrix, tol: f64) -> Result<SpectralForm> {
    require_square(a)?;
    let residual = hermitian_residual(a);
    let max_allowed = tol * scale(a);
    if residual > max_allowed {
        return Err(Error::NonHermitian {
            residual,
            max_allowed,
        });
    }
    let sym = hermitian_part(a);
    let eig = to_faer(&sym)
        .self_adjoint_eigen(faer::Side::Lower)
        .expect("self-adjoint eigendecomposition converges at desk scale");
    // faer returns eigenvalues in nondecreasing order already
    let eigenvalues: Vec<f64> = (0..a.nrows()).map(|i| eig.S()[i].re).collect();
    debug_assert!(eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    Ok(SpectralForm {
        eigenvalues,
        vectors: from_faer(eig.U()),
    })
}

/// Eigenvalues only (ascending) of a Hermitian matrix; the input's lower
/// triangle is trusted.
pub(crate) fn hermitian_eigenvalues_raw(a: &CMatrix) -> Vec<f64> {
    to_faer(a)
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .expect("self-adjoint eigenvalues converge at desk scale")
}

/// Singular values only, descending.
pub(crate) fn singular_values_raw(a: &CMatrix) -> Vec<f64> {
    to_faer(a)
        .singular_values()
        .expect("singular values converge at desk scale")
}

/// Thin SVD with singular values sorted descending.
pub fn svd(a: &CMatrix) -> SvdForm {
    let dec = to_faer(a)
        .thin_svd()
        .expect("SVD converges at desk scale");
    let k = a.nrows().min(a.ncols());
    let singular_values: Vec<f64> = (0..k).map(|i| dec.S()[i].re).collect();
    SvdForm {
        u: from_faer(dec.U()),
        singular_values,
        v: from_faer(dec.V()),
    }
}

/// Polar decomposition of a square matrix via the SVD.
///
/// The partial isometry keeps only singular directions with
/// `sigma > rank_tol * sigma_max`, so `polar(0) = 0` and the isometry is the
/// minimal one with `isometry* . isometry = support(|a|)`.
pub fn polar(a: &CMatrix, rank_tol: f64) -> Result<PolarForm> {
    let n = require_square(a)?;
    let dec = svd(a);
    let cut = rank_tol * dec.max_singular_value();
    let mut isometry = CMatrix::zeros(n, n);
    for (k, &s) in dec.singular_values.iter().enumerate() {
        if s > cut {
            let u = dec.u.column(k);
            let v = dec.v.column(k);
            for i in 0..n {
                for j in 0..n {
                    isometry[(i, j)] += u[i] * v[j].conj();
                }
            }
        }
    }
    let abs = psd_from_svd(&dec.v, &dec.singular_values);
    let abs_left = psd_from_svd(&dec.u, &dec.singular_values);
    Ok(PolarForm {
        isometry,
        abs,
        abs_left,
    })
}

fn psd_from_svd(basis: &CMatrix, sigmas: &[f64]) -> CMatrix {
    let n = basis.nrows();
    let mut m = CMatrix::zeros(n, n);
    for (k, &s) in sigmas.iter().enumerate() {
        if s == 0.0 {
            continue;
        }
        let col = basis.column(k);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] += col[i] * col[j].conj() * c(s, 0.0);
            }
        }
    }
    hermitian_part(&m)
}

/// Functional calculus `f(a)` for PSD Hermitian `a`.
///
/// Eigenvalues within `tol*scale` of zero are snapped to zero before
/// applying `f`: they are numerically indistinguishable from kernel
/// directions, and without the snap `f = sqrt` would turn an epsilon-level
/// eigenvalue into a sqrt(epsilon)-level output error. Eigenvalues below
/// `-tol*scale` raise `NotPsd`.
pub fn fun_calc(a: &CMatrix, f: impl Fn(f64) -> f64, tol: f64) -> Result<CMatrix> {
    let eig = hermitian_eig(a, tol)?;
    let max_allowed = tol * scale(a);
    if eig.min_eigenvalue() < -max_allowed {
        return Err(Error::NotPsd {
            min_eigenvalue: eig.min_eigenvalue(),
            max_allowed,
        });
    }
    Ok(eig.apply(|t| if t <= max_allowed { f(0.0) } else { f(t) }))
}

/// Functional calculus for a general Hermitian matrix (no PSD requirement).
pub fn hermitian_calc(a: &CMatrix, f: impl Fn(f64) -> f64, tol: f64) -> Result<CMatrix> {
    Ok(hermitian_eig(a, tol)?.apply(f))
}

/// The positive part `a_+` of a Hermitian matrix: negative eigenvalues
/// replaced by zero.
pub fn positive_part(a: &CMatrix, tol: f64) -> Result<CMatrix> {
    hermitian_calc(a, |t| t.max(0.0), tol)
}

/// Spectral projection onto eigenvalues above `rank_tol * lambda_max` of a
/// PSD Hermitian matrix. Satisfies `p . a = a` up to rounding.
pub fn support_projection(a: &CMatrix, rank_tol: f64) -> Result<CMatrix> {
    let eig = hermitian_eig(a, DEFAULT_TOL)?;
    let max_allowed = DEFAULT_TOL * scale(a);
    if eig.min_eigenvalue() < -max_allowed {
        return Err(Error::NotPsd {
            min_eigenvalue: eig.min_eigenvalue(),
            max_allowed,
        });
    }
    let cut = rank_tol * eig.max_eigenvalue().max(0.0);
    Ok(eig.apply(|t| if t > cut { 1.0 } else { 0.0 }))
}
