//! The block dilation of a square matrix and its identities.
//!
//! For a with polar decomposition a = v|a| (and |a*| = (a a*)^{1/2}),
//!
//! ```text
//! D(a) = [ |a*|  a  ]
//!        [ a*   |a| ]
//! ```
//!
//! is positive semidefinite, satisfies `|D(a)|_p = 2 |a|_p`, obeys the
//! closed power formula
//!
//! ```text
//! D(a)^k = 2^(k-1) [ |a*|^k        |a*|^(k-1) a ]
//!                  [ a* |a*|^(k-1) |a|^k        ]
//! ```
//!
//! and the functional calculus of (1/2) D(a) is carried by the finite
//! spectral measure built here: one atom per distinct positive eigenvalue t
//! of |a| with projection
//!
//! ```text
//! P_t = 1/2 [ v E_t v*  v E_t   ]
//!           [ E_t v*    v*v E_t ]
//! ```
//!
//! plus a point mass at zero covering the kernel directions.

use crate::error::{Error, Result};
use crate::linalg::{fun_calc, hermitian_eig, polar, PolarForm, DEFAULT_TOL};
use crate::matrix::{
    c, hermitian_part, max_abs_diff, require_square, scale, two_by_two, CMatrix,
};
use crate::report::VerificationReport;
use crate::schatten::{min_eigenvalue, relative_gap, schatten_norm, Exponent};

/// `D(a) = [[|a*|, a], [a*, |a|]]`, a PSD Hermitian 2n x 2n matrix.
pub fn dilate(a: &CMatrix) -> Result<CMatrix> {
    let n = require_square(a)?;
    let pf = polar(a, crate::linalg::default_rank_tol(n, n))?;
    Ok(assemble_dilation(a, &pf))
}

fn assemble_dilation(a: &CMatrix, pf: &PolarForm) -> CMatrix {
    let d = two_by_two(&pf.abs_left, a, &a.adjoint(), &pf.abs);
    // |a*| and |a| are Hermitian by construction and the off-diagonal blocks
    // are exact adjoints, so D is Hermitian up to rounding in the PSD blocks.
    hermitian_part(&d)
}

/// `[[0, x], [x*, 0]]`: Hermitian with eigenvalues +-sigma_i(x), hence
/// `|off_diagonal(x)|_p = 2^(1/p) |x|_p`.
pub fn off_diagonal(x: &CMatrix) -> Result<CMatrix> {
    let n = require_square(x)?;
    let zero = CMatrix::zeros(n, n);
    Ok(two_by_two(&zero, x, &x.adjoint(), &zero))
}

/// The closed form for `D(a)^k`.
pub fn dilation_power(a: &CMatrix, k: u32) -> Result<CMatrix> {
    require_square(a)?;
    if k < 1 {
        return Err(Error::InvalidPower { k });
    }
    let n = a.nrows();
    let pf = polar(a, crate::linalg::default_rank_tol(n, n))?;
    let eig_left = hermitian_eig(&pf.abs_left, DEFAULT_TOL)?;
    let kf = k as i32;
    let left_k = eig_left.apply(|t| t.max(0.0).powi(kf));
    let left_km1 = eig_left.apply(|t| t.max(0.0).powi(kf - 1));
    let eig_right = hermitian_eig(&pf.abs, DEFAULT_TOL)?;
    let right_k = eig_right.apply(|t| t.max(0.0).powi(kf));
    let top_right = &left_km1 * a;
    let prefactor = c(2f64.powi(kf - 1), 0.0);
    Ok(two_by_two(&left_k, &top_right, &top_right.adjoint(), &right_k).scale_complex(prefactor))
}

trait ScaleComplex {
    fn scale_complex(self, z: num_complex::Complex64) -> Self;
}

impl ScaleComplex for CMatrix {
    fn scale_complex(mut self, z: num_complex::Complex64) -> Self {
        for e in self.iter_mut() {
            *e *= z;
        }
        self
    }
}

/// The right-hand side of the dilation calculus identity:
///
/// ```text
/// f((1/2) D(a)) = 1/2 [ f(|a*|)    f(|a*|) v ]
///                     [ v* f(|a*|) f(|a|)    ]
/// ```
///
/// computed from the polar form, never by diagonalizing D(a) itself (tests
/// compare the two routes).
///
/// (1/2) D(a) always has kernel directions (its rank equals rank a <= n),
/// so the identity needs f(0) = 0 regardless of whether a itself is
/// singular. With `require_f0` set, a nonzero f(0) is rejected.
pub fn dilation_calculus(
    a: &CMatrix,
    f: impl Fn(f64) -> f64,
    require_f0: bool,
) -> Result<CMatrix> {
    let n = require_square(a)?;
    if require_f0 {
        let f0 = f(0.0);
        if f0.abs() > 1e-12 {
            return Err(Error::FZeroViolation { f_at_zero: f0 });
        }
    }
    let pf = polar(a, crate::linalg::default_rank_tol(n, n))?;
    let f_left = fun_calc(&pf.abs_left, &f, DEFAULT_TOL)?;
    let f_right = fun_calc(&pf.abs, &f, DEFAULT_TOL)?;
    let top_right = &f_left * &pf.isometry;
    Ok(two_by_two(&f_left, &top_right, &top_right.adjoint(), &f_right).scale(0.5))
}

/// Finite spectral measure of `(1/2) D(a)`: positive atoms plus the point
/// mass at zero.
#[derive(Debug, Clone)]
pub struct DilationSpectralMeasure {
    /// `(eigenvalue, projection)` for each distinct positive eigenvalue of
    /// |a|, eigenvalues ascending.
    pub atoms: Vec<(f64, CMatrix)>,
    /// The delta_0 projection `[[I - vv*/2, -v/2], [-v*/2, I - v*v/2]]`.
    pub zero_atom: CMatrix,
}

impl DilationSpectralMeasure {
    /// All projections including the zero atom.
    pub fn projections(&self) -> Vec<&CMatrix> {
        let mut out: Vec<&CMatrix> = self.atoms.iter().map(|(_, p)| p).collect();
        out.push(&self.zero_atom);
        out
    }

    /// `sum t . P_t` (the zero atom contributes nothing).
    pub fn reconstruct(&self) -> CMatrix {
        let d = self.zero_atom.nrows();
        let mut out = CMatrix::zeros(d, d);
        for (t, proj) in &self.atoms {
            out += proj.scale(*t);
        }
        out
    }

    /// `max_abs(sum P + zero_atom - I)`.
    pub fn completeness_defect(&self) -> f64 {
        let d = self.zero_atom.nrows();
        let mut sum = self.zero_atom.clone();
        for (_, proj) in &self.atoms {
            sum += proj;
        }
        max_abs_diff(&sum, &CMatrix::identity(d, d))
    }
}

/// Builds the spectral measure of `(1/2) D(a)`.
///
/// Eigenvalues of |a| within `rank_tol * sigma_max` of each other merge into
/// one atom (spectral projections are only stable for separated clusters);
/// eigenvalues at most `rank_tol * sigma_max` are kernel directions and are
/// absorbed by the zero atom, so no positive atom ever sits at zero.
pub fn dilation_spectral_measure(
    a: &CMatrix,
    rank_tol: f64,
) -> Result<DilationSpectralMeasure> {
    let n = require_square(a)?;
    let pf = polar(a, rank_tol)?;
    let eig = hermitian_eig(&pf.abs, DEFAULT_TOL)?;
    let cut = rank_tol * eig.max_eigenvalue().max(0.0);

    let mut atoms = Vec::new();
    let mut k = 0;
    while k < n {
        // cluster consecutive eigenvalues with gaps below the cutoff
        let mut end = k + 1;
        while end < n && eig.eigenvalues[end] - eig.eigenvalues[end - 1] <= cut {
            end += 1;
        }
        let mean = eig.eigenvalues[k..end].iter().sum::<f64>() / (end - k) as f64;
        if mean > cut {
            let mut e_proj = CMatrix::zeros(n, n);
            for col in k..end {
                let w = eig.vectors.column(col);
                for i in 0..n {
                    for j in 0..n {
                        e_proj[(i, j)] += w[i] * w[j].conj();
                    }
                }
            }
            let e_proj = hermitian_part(&e_proj);
            let v_e = &pf.isometry * &e_proj;
            let top_left = &v_e * pf.isometry.adjoint();
            let bottom_right = pf.right_support() * &e_proj;
            let proj = two_by_two(&top_left, &v_e, &v_e.adjoint(), &bottom_right).scale(0.5);
            atoms.push((mean, hermitian_part(&proj)));
        }
        k = end;
    }

    let id = CMatrix::identity(n, n);
    let half_v = pf.isometry.scale(0.5);
    let zero_atom = two_by_two(
        &(&id - pf.left_support().scale(0.5)),
        &half_v.scale(-1.0),
        &half_v.adjoint().scale(-1.0),
        &(&id - pf.right_support().scale(0.5)),
    );
    Ok(DilationSpectralMeasure {
        atoms,
        zero_atom: hermitian_part(&zero_atom),
    })
}

/// Checks `|D(a)|_p = 2 |a|_p` and the positivity of D(a).
pub fn dilation_norm_check(a: &CMatrix, p: Exponent) -> Result<VerificationReport> {
    let n = require_square(a)?;
    let d = dilate(a)?;
    let dilation_norm = schatten_norm(&d, p);
    let doubled = 2.0 * schatten_norm(a, p);
    let min_eig = min_eigenvalue(&d);
    let dilation_scale = scale(&d);

    let mut report = VerificationReport::new("doubling");
    report
        .input_int("n", n as i64)
        .input_exponent("p", p)
        .quantity("dilation_norm", dilation_norm)
        .quantity("doubled_norm", doubled)
        .quantity("min_eigenvalue", min_eig)
        .residual("doubling_gap", relative_gap(dilation_norm, doubled), 1e-10)
        .residual(
            "psd_defect",
            (-min_eig).max(0.0) / dilation_scale,
            1e-11,
        );
    Ok(report)
}

/// `max_abs`-normalized defect of `P` being a projection: `max_abs(P^2 - P)`
/// plus the symmetry defect.
pub fn projection_defect(p: &CMatrix) -> f64 {
    let sq = p * p;
    max_abs_diff(&sq, p).max(crate::matrix::hermitian_residual(p))
}
