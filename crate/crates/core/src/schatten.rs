//! Schatten p-norms on matrices, conjugate exponents, trace duality,
//! positivity, norming functionals, and a lower-bound estimator for the
//! amplified (operator-space) norm.
//!
//! The amplified norm of an n x n block matrix x over m x m blocks is
//!
//! ```text
//! |x|_amp = sup { |(a (x) I_m) . x . (b (x) I_m)|_p : |a|_{2p} <= 1, |b|_{2p} <= 1 }
//! ```
//!
//! with a, b ranging over the S_{2p} unit ball of n x n matrices. The sup is
//! nonconvex; `mnorm_estimate` runs multi-restart alternating projected
//! gradient ascent and returns the best certified feasible value, so its
//! result is always a lower bound.

use std::fmt;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{default_rank_tol, svd};
use crate::matrix::{
    all_finite, c, direct_sum, hermitian_part, hermitian_residual, require_same_shape,
    require_square, scale, CMatrix,
};
use crate::sampling::{complex_gaussian, rng_from};

/// An exponent p in [1, inf]; `f64::INFINITY` represents p = inf.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent {
    p: f64,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent {
                reason: format!("p must satisfy 1 <= p <= inf, got {p}"),
            });
        }
        Ok(Self { p })
    }

    pub const ONE: Exponent = Exponent { p: 1.0 };
    pub const TWO: Exponent = Exponent { p: 2.0 };
    pub const INFINITY: Exponent = Exponent { p: f64::INFINITY };

    pub fn value(self) -> f64 {
        self.p
    }

    pub fn is_infinite(self) -> bool {
        self.p.is_infinite()
    }

    /// The conjugate exponent q with 1/p + 1/q = 1.
    pub fn conjugate(self) -> Exponent {
        if self.p == 1.0 {
            Exponent::INFINITY
        } else if self.p.is_infinite() {
            Exponent::ONE
        } else {
            Exponent {
                p: self.p / (self.p - 1.0),
            }
        }
    }

    /// 2^(1/p), the dominating constant at this exponent (1 for p = inf).
    pub fn doubling_constant(self) -> f64 {
        if self.p.is_infinite() {
            1.0
        } else {
            2f64.powf(1.0 / self.p)
        }
    }

    /// Accepts a decimal number or the literal `inf`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(Exponent::INFINITY);
        }
        let p: f64 = t.parse().map_err(|_| Error::InvalidExponent {
            reason: format!("cannot parse exponent from {s:?}"),
        })?;
        Exponent::new(p)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.p)
        }
    }
}

/// The Schatten p-norm `(sum sigma_i^p)^(1/p)`; sigma_max for p = inf.
///
/// The power sum is normalized by sigma_max so large exponents cannot
/// overflow.
pub fn schatten_norm(a: &CMatrix, p: Exponent) -> f64 {
    let sv = crate::linalg::singular_values_raw(a);
    let smax = sv.iter().fold(0.0f64, |acc, s| acc.max(*s));
    if smax == 0.0 || p.is_infinite() {
        return smax;
    }
    let pv = p.value();
    let sum: f64 = sv.iter().map(|s| (s / smax).powf(pv)).sum();
    smax * sum.powf(1.0 / pv)
}

/// The trace pairing `tr(b* a)`: conjugate-linear in `b`, linear in `a`.
pub fn trace_pair(b: &CMatrix, a: &CMatrix) -> Result<Complex64> {
    require_same_shape(b, a)?;
    Ok(b.iter()
        .zip(a.iter())
        .fold(Complex64::ZERO, |acc, (x, y)| acc + x.conj() * y))
}

/// Membership in the PSD cone: Hermitian within `tol * scale` and
/// no eigenvalue below `-tol * scale`. Non-square input is never positive.
pub fn is_positive(a: &CMatrix, tol: f64) -> bool {
    if a.nrows() != a.ncols() || a.is_empty() {
        return false;
    }
    let s = scale(a);
    if hermitian_residual(a) > tol * s {
        return false;
    }
    let eigs = crate::linalg::hermitian_eigenvalues_raw(&hermitian_part(a));
    eigs.iter().all(|&t| t >= -tol * s)
}

/// Min eigenvalue of the Hermitian part; the PSD defect used in reports.
pub fn min_eigenvalue(a: &CMatrix) -> f64 {
    let eigs = crate::linalg::hermitian_eigenvalues_raw(&hermitian_part(a));
    eigs.iter().fold(f64::INFINITY, |acc, &t| acc.min(t))
}

/// The norming functional of `a` at exponent p: the matrix b with
/// `|b|_q = 1` and `tr(b* a) = |a|_p`.
///
/// Construction from the polar decomposition a = v|a|:
///
/// ```text
/// b = v . |a|^(p-1) / |a|_p^(p-1)
/// ```
///
/// For p = 1 this degenerates to b = v (a q = inf functional). p = inf is
/// rejected: its duality is not smooth and is out of scope.
pub fn norming_functional(a: &CMatrix, p: Exponent) -> Result<CMatrix> {
    let n = require_square(a)?;
    if p.is_infinite() {
        return Err(Error::InvalidExponent {
            reason: "norming functional requires p in [1, inf)".into(),
        });
    }
    let dec = svd(a);
    let smax = dec.max_singular_value();
    if smax == 0.0 {
        return Err(Error::ZeroInput);
    }
    let cut = default_rank_tol(n, n) * smax;
    let norm_p = schatten_norm(a, p);
    let mut b = CMatrix::zeros(n, n);
    for (k, &s) in dec.singular_values.iter().enumerate() {
        if s <= cut {
            continue;
        }
        let coeff = c((s / norm_p).powf(p.value() - 1.0), 0.0);
        let u = dec.u.column(k);
        let v = dec.v.column(k);
        for i in 0..n {
            for j in 0..n {
                b[(i, j)] += u[i] * v[j].conj() * coeff;
            }
        }
    }
    Ok(b)
}

/// An n x n block matrix with m x m blocks, stored as one nm x nm matrix.
#[derive(Debug, Clone)]
pub struct AmplifiedElement {
    outer: usize,
    inner: usize,
    mat: CMatrix,
}

impl AmplifiedElement {
    pub fn new(outer: usize, inner: usize, mat: CMatrix) -> Result<Self> {
        let d = outer * inner;
        if mat.nrows() != d || mat.ncols() != d {
            return Err(Error::BlockShape {
                expected: d,
                got: mat.nrows(),
            });
        }
        if !all_finite(&mat) {
            return Err(Error::NonFinite);
        }
        Ok(Self { outer, inner, mat })
    }

    /// Embeds `y` as the single nonzero block at outer position (i, j).
    pub fn single_block(outer: usize, i: usize, j: usize, y: &CMatrix) -> Result<Self> {
        let m = require_square(y)?;
        assert!(i < outer && j < outer, "block index out of range");
        let mut mat = CMatrix::zeros(outer * m, outer * m);
        mat.view_mut((i * m, j * m), (m, m)).copy_from(y);
        Self::new(outer, m, mat)
    }

    pub fn outer(&self) -> usize {
        self.outer
    }

    pub fn inner(&self) -> usize {
        self.inner
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn block(&self, i: usize, j: usize) -> CMatrix {
        crate::matrix::block(&self.mat, i, j, self.inner)
    }
}

/// Knobs for the multi-restart alternating ascent estimators.
#[derive(Debug, Clone)]
pub struct AscentOptions {
    pub restarts: u32,
    pub iters: u32,
    pub seed: u64,
    pub step_tol: f64,
}

impl Default for AscentOptions {
    fn default() -> Self {
        Self {
            restarts: 8,
            iters: 500,
            seed: 0,
            step_tol: 1e-12,
        }
    }
}

/// Result of `mnorm_estimate`: a certified lower bound together with the
/// compression pair that achieves it.
#[derive(Debug, Clone)]
pub struct MnormEstimate {
    pub lower_bound: f64,
    pub witness: (CMatrix, CMatrix),
}

/// The compression matrix `a (+) b*` from the amplification argument. Its
/// S_{2p} norm is at most 2^(1/2p) whenever a, b lie in the S_{2p} unit ball.
pub fn compression_matrix(a: &CMatrix, b: &CMatrix) -> CMatrix {
    direct_sum(a, &b.adjoint())
}

/// Lower-bound estimator for the amplified norm of `x` at exponent p.
///
/// Alternating projected gradient ascent over the two S_{2p} unit balls,
/// restarted from seeded random starts and merged by maximum, so the result
/// is deterministic for a fixed seed and monotone nondecreasing in
/// `restarts`. For outer size 1 the sup degenerates to `|x|_p` and is
/// returned directly.
///
/// Panics if `opts.restarts == 0`; errors for p = inf (the ascent needs the
/// smooth p-power objective).
pub fn mnorm_estimate(
    x: &AmplifiedElement,
    p: Exponent,
    opts: &AscentOptions,
) -> Result<MnormEstimate> {
    let res = alternating_ascent(x, p, opts, |_, _, _| ())?;
    Ok(MnormEstimate {
        lower_bound: res.value,
        witness: (res.a, res.b),
    })
}

pub(crate) struct AscentResult {
    pub value: f64,
    pub a: CMatrix,
    pub b: CMatrix,
}

/// Shared engine behind `mnorm_estimate` and the scaled-radius bound.
/// `on_iterate(a, b, compressed)` fires after every accepted outer iterate.
pub(crate) fn alternating_ascent(
    x: &AmplifiedElement,
    p: Exponent,
    opts: &AscentOptions,
    mut on_iterate: impl FnMut(&CMatrix, &CMatrix, &CMatrix),
) -> Result<AscentResult> {
    assert!(opts.restarts >= 1, "at least one restart is required");
    if p.is_infinite() {
        return Err(Error::InvalidExponent {
            reason: "amplified-norm ascent requires p < inf".into(),
        });
    }
    let n = x.outer();
    if n == 1 {
        // Scalars of modulus one are optimal; the sup is |x|_p itself.
        let one = CMatrix::identity(1, 1);
        let value = schatten_norm(x.mat(), p);
        on_iterate(&one, &one, x.mat());
        return Ok(AscentResult {
            value,
            a: one.clone(),
            b: one,
        });
    }

    let two_p = Exponent::new(2.0 * p.value())?;
    let mut best: Option<AscentResult> = None;
    for restart in 0..opts.restarts {
        let mut rng = rng_from(&[opts.seed, 0x6d6e6f726d, restart as u64]);
        let mut a = random_ball_point(&mut rng, n, two_p);
        let mut b = random_ball_point(&mut rng, n, two_p);
        let mut step_a = 0.5f64;
        let mut step_b = 0.5f64;
        for _ in 0..opts.iters {
            let improved_a = half_step(x, &mut a, &b, p, two_p, true, &mut step_a, opts.step_tol);
            let improved_b = half_step(x, &mut b, &a, p, two_p, false, &mut step_b, opts.step_tol);
            on_iterate(&a, &b, &compressed(x, &a, &b));
            if !improved_a && !improved_b && step_a < opts.step_tol && step_b < opts.step_tol {
                break;
            }
        }
        // the objective is homogeneous, so finishing on the sphere only helps
        let a = normalize_onto_sphere(&a, two_p);
        let b = normalize_onto_sphere(&b, two_p);
        let value = compressed_norm(x, &a, &b, p);
        if best.as_ref().map_or(true, |r| value > r.value) {
            best = Some(AscentResult { value, a, b });
        }
    }
    Ok(best.expect("restarts >= 1"))
}

fn random_ball_point(rng: &mut ChaCha8Rng, n: usize, two_p: Exponent) -> CMatrix {
    let g = complex_gaussian(rng, n, n);
    normalize_onto_sphere(&g, two_p)
}

/// Rescales onto the S_{2p} unit sphere (the objective is homogeneous, so
/// the sup over the ball is attained on the sphere and scaling up never
/// hurts).
fn normalize_onto_sphere(a: &CMatrix, two_p: Exponent) -> CMatrix {
    let norm = schatten_norm(a, two_p);
    if norm == 0.0 {
        return a.clone();
    }
    a.scale(1.0 / norm)
}

/// Metric projection onto the S_{2p} unit ball: project the singular values
/// onto the l_{2p} ball in the same singular basis (exact for unitarily
/// invariant sets). A radial rescale would bias the walk toward the norming
/// direction of the gradient and stall at non-maximal points.
fn project_onto_ball(a: &CMatrix, two_p: Exponent) -> CMatrix {
    let pv = two_p.value();
    let dec = svd(a);
    if dec
        .singular_values
        .iter()
        .map(|s| s.powf(pv))
        .sum::<f64>()
        <= 1.0
    {
        return a.clone();
    }
    let projected = project_power_ball(&dec.singular_values, pv);
    let n = a.nrows();
    let k = projected.len();
    let mut sig = CMatrix::zeros(k, k);
    for (i, &s) in projected.iter().enumerate() {
        sig[(i, i)] = c(s, 0.0);
    }
    let out = &dec.u * sig * dec.v.adjoint();
    debug_assert_eq!(out.nrows(), n);
    out
}

/// Euclidean projection of a nonnegative-clipped vector onto
/// `{z >= 0, sum z^q <= 1}`.
///
/// KKT: the projection solves `z + mu q z^(q-1) = y_i` componentwise for
/// the multiplier mu >= 0 bringing the power sum to 1 (mu = 0 when the
/// clipped vector is already inside). Both levels are monotone; the outer
/// level is bisected and the inner solved by safeguarded Newton.
pub(crate) fn project_power_ball(y: &[f64], q: f64) -> Vec<f64> {
    let clipped: Vec<f64> = y.iter().map(|&t| t.max(0.0)).collect();
    let power_sum = |z: &[f64]| -> f64 { z.iter().map(|&t| t.powf(q)).sum() };
    if power_sum(&clipped) <= 1.0 {
        return clipped;
    }
    let component = |yi: f64, mu: f64| -> f64 {
        if yi <= 0.0 {
            return 0.0;
        }
        let (mut lo, mut hi) = (0.0f64, yi);
        let mut z = yi;
        for _ in 0..40 {
            let zq1 = z.powf(q - 1.0);
            let g = z + mu * q * zq1 - yi;
            if g > 0.0 {
                hi = z;
            } else {
                lo = z;
            }
            let dg = 1.0 + if z > 0.0 { mu * q * (q - 1.0) * zq1 / z } else { 0.0 };
            let mut next = z - g / dg;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - z).abs() <= 1e-16 * yi {
                z = next;
                break;
            }
            z = next;
        }
        z.clamp(0.0, yi)
    };
    let sum_at = |mu: f64| -> f64 {
        clipped
            .iter()
            .map(|&yi| component(yi, mu).powf(q))
            .sum()
    };
    let mut hi = 1.0f64;
    while sum_at(hi) > 1.0 && hi < 1e18 {
        hi *= 2.0;
    }
    let mut lo = 0.0f64;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if sum_at(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // the upper endpoint keeps the result inside the ball
    clipped.iter().map(|&yi| component(yi, hi)).collect()
}

fn amplify(a: &CMatrix, m: usize) -> CMatrix {
    a.kronecker(&CMatrix::identity(m, m))
}

fn compressed(x: &AmplifiedElement, a: &CMatrix, b: &CMatrix) -> CMatrix {
    let m = x.inner();
    amplify(a, m) * x.mat() * amplify(b, m)
}

fn compressed_norm(x: &AmplifiedElement, a: &CMatrix, b: &CMatrix, p: Exponent) -> f64 {
    schatten_norm(&compressed(x, a, b), p)
}

/// One projected-gradient step in the moving factor (the left factor `a`
/// when `moving_is_left`, else the right factor `b`), with a two-way line
/// search: expand the step while it keeps improving, otherwise halve until
/// it does. Returns whether the factor moved.
fn half_step(
    x: &AmplifiedElement,
    moving: &mut CMatrix,
    other: &CMatrix,
    p: Exponent,
    two_p: Exponent,
    moving_is_left: bool,
    step: &mut f64,
    step_tol: f64,
) -> bool {
    let m = x.inner();
    let (current, gradient) = if moving_is_left {
        let fixed = x.mat() * amplify(other, m);
        gradient_left(&fixed, moving, m, p)
    } else {
        let fixed = amplify(other, m) * x.mat();
        gradient_right(&fixed, moving, m, p)
    };
    let gn = gradient.norm();
    if gn == 0.0 {
        return false;
    }
    let dir = gradient.scale(1.0 / gn);
    // evaluates the p-th power of the objective, like `current`
    let eval = |s: f64| -> (CMatrix, f64) {
        let trial = project_onto_ball(&(&*moving + dir.scale(s)), two_p);
        let value = if moving_is_left {
            compressed_norm(x, &trial, other, p)
        } else {
            compressed_norm(x, other, &trial, p)
        };
        (trial, value.powf(p.value()))
    };

    let mut s = (*step).max(step_tol);
    let (mut best_trial, mut best_value) = eval(s);
    if strictly_improved(best_value, current) {
        while s < 1e6 {
            let (trial, value) = eval(2.0 * s);
            if strictly_improved(value, best_value) {
                s *= 2.0;
                best_trial = trial;
                best_value = value;
            } else {
                break;
            }
        }
        *moving = best_trial;
        *step = s;
        return true;
    }
    for _ in 0..60 {
        s *= 0.5;
        if s < step_tol {
            break;
        }
        let (trial, value) = eval(s);
        if strictly_improved(value, current) {
            *moving = trial;
            *step = s;
            return true;
        }
    }
    *step = s.max(0.5 * step_tol);
    false
}

/// Improvement test with a relative margin: bumps at rounding level must not
/// count, or step searches chase noise.
pub(crate) fn strictly_improved(new: f64, old: f64) -> bool {
    new > old + 1e-13 * old.abs().max(0.01)
}

// Objective |(a (x) I_m) . fixed|_p^p and its complex gradient in a.
// With Y = (a (x) I) fixed = U S V*, the differential is
//   d|Y|_p^p = p Re tr(V S^{p-1} U* dY),
// and tr(M (da (x) I)) contracts to the adjoint of the blockwise partial
// trace of M = fixed . V S^{p-1} U*.
fn gradient_left(fixed: &CMatrix, a: &CMatrix, m: usize, p: Exponent) -> (f64, CMatrix) {
    let y = amplify(a, m) * fixed;
    let dec = svd(&y);
    let pv = p.value();
    let value: f64 = dec.singular_values.iter().map(|s| s.powf(pv)).sum();
    let k = dec.singular_values.len();
    let mut sig = CMatrix::zeros(k, k);
    for (i, &s) in dec.singular_values.iter().enumerate() {
        sig[(i, i)] = c(s.powf(pv - 1.0), 0.0);
    }
    let mmat = fixed * &dec.v * sig * dec.u.adjoint();
    (value, partial_trace(&mmat, m).adjoint().scale(pv))
}

// Same objective for the right factor: Y = fixed . (b (x) I_m); the
// contraction lands on M = V S^{p-1} U* . fixed.
fn gradient_right(fixed: &CMatrix, b: &CMatrix, m: usize, p: Exponent) -> (f64, CMatrix) {
    let y = fixed * amplify(b, m);
    let dec = svd(&y);
    let pv = p.value();
    let value: f64 = dec.singular_values.iter().map(|s| s.powf(pv)).sum();
    let k = dec.singular_values.len();
    let mut sig = CMatrix::zeros(k, k);
    for (i, &s) in dec.singular_values.iter().enumerate() {
        sig[(i, i)] = c(s.powf(pv - 1.0), 0.0);
    }
    let mmat = &dec.v * sig * dec.u.adjoint() * fixed;
    (value, partial_trace(&mmat, m).adjoint().scale(pv))
}

/// Blockwise partial trace: the n x n matrix t with
/// `t[i, k] = tr(M[block i, block k])` for m x m blocks.
fn partial_trace(mmat: &CMatrix, m: usize) -> CMatrix {
    let n = mmat.nrows() / m;
    CMatrix::from_fn(n, n, |i, k| {
        let mut acc = Complex64::ZERO;
        for s in 0..m {
            acc += mmat[(i * m + s, k * m + s)];
        }
        acc
    })
}

/// Convenience used by reports: `max_abs`-based relative residual.
pub fn relative_gap(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::diag_real;

    fn paper_pattern_4x4() -> CMatrix {
        // Ones at positions where row and column share parity, the final
        // section's extremal pattern; singular values {2, 2, 0, 0}.
        CMatrix::from_fn(4, 4, |i, j| {
            if i % 2 == j % 2 {
                c(1.0, 0.0)
            } else {
                Complex64::ZERO
            }
        })
    }

    #[test]
    fn dual_exponents() {
        assert_eq!(Exponent::TWO.conjugate().value(), 2.0);
        assert!(Exponent::ONE.conjugate().is_infinite());
        assert_eq!(Exponent::new(3.0).unwrap().conjugate().value(), 1.5);
        assert_eq!(Exponent::INFINITY.conjugate().value(), 1.0);
    }

    #[test]
    fn exponent_validation() {
        assert!(Exponent::new(0.5).is_err());
        assert!(Exponent::new(f64::NAN).is_err());
        assert!(Exponent::parse("inf").unwrap().is_infinite());
        assert!(Exponent::parse("x").is_err());
    }

    #[test]
    fn norm_of_paper_pattern() {
        for p in [1.0, 1.5, 2.0, 3.0, 7.3] {
            let pe = Exponent::new(p).unwrap();
            let expect = 2f64.powf(1.0 + 1.0 / p);
            assert!((schatten_norm(&paper_pattern_4x4(), pe) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn norm_of_two_dim_diagonal() {
        for p in [1.0, 1.5, 2.0, 3.0, 7.3] {
            let pe = Exponent::new(p).unwrap();
            let expect = 2f64.powf(1.0 / p);
            assert!((schatten_norm(&diag_real(&[1.0, 1.0]), pe) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn norm_of_rank_one() {
        // u w* with unit vectors has a single singular value 1.
        let u = CMatrix::from_fn(3, 1, |i, _| if i == 0 { c(0.6, 0.0) } else { c(0.8, 0.0) })
            .normalize();
        let w = CMatrix::from_fn(3, 1, |i, _| c(if i == 2 { 1.0 } else { 0.0 }, 0.0));
        let a = &u * w.adjoint();
        for p in [1.0, 2.0, 7.3] {
            assert!((schatten_norm(&a, Exponent::new(p).unwrap()) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn norm_inf_is_sigma_max() {
        assert_eq!(
            schatten_norm(&diag_real(&[3.0, 4.0]), Exponent::INFINITY),
            4.0
        );
    }

    #[test]
    fn trace_pair_identity() {
        let id = CMatrix::identity(4, 4);
        assert!((trace_pair(&id, &id).unwrap().re - 4.0).abs() < 1e-15);
    }

    #[test]
    fn trace_pair_disjoint_supports() {
        let a = diag_real(&[1.0, 0.0]);
        let b = diag_real(&[0.0, 1.0]);
        assert_eq!(trace_pair(&b, &a).unwrap(), Complex64::ZERO);
    }

    #[test]
    fn trace_pair_shape_mismatch() {
        let a = CMatrix::zeros(2, 2);
        let b = CMatrix::zeros(3, 3);
        assert!(matches!(
            trace_pair(&b, &a),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn positivity_examples() {
        assert!(is_positive(&CMatrix::identity(3, 3), 1e-12));
        let pauli =
            CMatrix::from_fn(2, 2, |i, j| if i != j { c(1.0, 0.0) } else { Complex64::ZERO });
        assert!(!is_positive(&pauli, 1e-12));
        assert!(!is_positive(&CMatrix::zeros(2, 3), 1e-12));
    }

    #[test]
    fn norming_functional_diag_case() {
        let a = diag_real(&[1.0, 1.0]);
        let b = norming_functional(&a, Exponent::TWO).unwrap();
        let expect = diag_real(&[1.0, 1.0]).scale(1.0 / 2f64.sqrt());
        assert!(crate::matrix::max_abs_diff(&b, &expect) < 1e-12);
        let pair = trace_pair(&b, &a).unwrap();
        assert!((pair.re - 2f64.sqrt()).abs() < 1e-12);
        assert!(pair.im.abs() < 1e-14);
    }

    #[test]
    fn norming_functional_rank_one() {
        let mut a = CMatrix::zeros(3, 3);
        a[(0, 2)] = c(1.0, 0.0);
        for p in [1.5, 2.0, 3.0] {
            let b = norming_functional(&a, Exponent::new(p).unwrap()).unwrap();
            assert!(crate::matrix::max_abs_diff(&b, &a) < 1e-12);
            assert!((trace_pair(&b, &a).unwrap().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn norming_functional_rejects_zero() {
        let z = CMatrix::zeros(2, 2);
        assert!(matches!(
            norming_functional(&z, Exponent::TWO),
            Err(Error::ZeroInput)
        ));
    }

    #[test]
    fn amplified_element_shape_checked() {
        assert!(AmplifiedElement::new(2, 2, CMatrix::zeros(4, 4)).is_ok());
        assert!(matches!(
            AmplifiedElement::new(2, 2, CMatrix::zeros(3, 3)),
            Err(Error::BlockShape { .. })
        ));
    }

    #[test]
    fn compression_norm_bound() {
        // |a (+) b*|_{2p}^{2p} = |a|^{2p} + |b|^{2p} <= 2.
        let a = diag_real(&[1.0]);
        let b = diag_real(&[1.0]);
        let comp = compression_matrix(&a, &b);
        for p in [1.0, 2.0, 7.3] {
            let two_p = Exponent::new(2.0 * p).unwrap();
            let bound = 2f64.powf(1.0 / (2.0 * p));
            assert!(schatten_norm(&comp, two_p) <= bound + 1e-12);
        }
    }

    #[test]
    fn mnorm_outer_one_is_exact() {
        let y = diag_real(&[2.0, 0.5]);
        let x = AmplifiedElement::new(1, 2, y.clone()).unwrap();
        let p = Exponent::new(3.0).unwrap();
        let est = mnorm_estimate(&x, p, &AscentOptions::default()).unwrap();
        assert_eq!(est.lower_bound, schatten_norm(&y, p));
    }

    #[test]
    fn power_ball_projection_is_feasible_and_idempotent() {
        for q in [1.16f64, 1.5, 2.0, 6.0, 14.6] {
            let y = vec![1.3, 0.9, 0.2, -0.4, 0.05];
            let z = project_power_ball(&y, q);
            let sum: f64 = z.iter().map(|&t| t.powf(q)).sum();
            assert!(sum <= 1.0 + 1e-12, "q={q}: power sum {sum}");
            assert!(z.iter().all(|&t| t >= 0.0));
            let zz = project_power_ball(&z, q);
            for (a, b) in z.iter().zip(zz.iter()) {
                assert!((a - b).abs() <= 1e-12);
            }
            // interior points are fixed
            let inside = vec![0.1, 0.05];
            assert_eq!(project_power_ball(&inside, q), inside);
        }
    }

    fn fd_directional(f: impl Fn(&CMatrix) -> f64, at: &CMatrix, dir: &CMatrix, t: f64) -> f64 {
        let mut plus = at.clone();
        let mut minus = at.clone();
        for ((ep, em), dv) in plus.iter_mut().zip(minus.iter_mut()).zip(dir.iter()) {
            *ep += dv * c(t, 0.0);
            *em -= dv * c(t, 0.0);
        }
        (f(&plus) - f(&minus)) / (2.0 * t)
    }

    #[test]
    fn analytic_gradients_match_finite_differences() {
        let mut rng = crate::sampling::rng_from(&[4242]);
        let xm = crate::sampling::complex_gaussian(&mut rng, 4, 4);
        let x = AmplifiedElement::new(2, 2, xm).unwrap();
        let a = crate::sampling::complex_gaussian(&mut rng, 2, 2);
        let b = crate::sampling::complex_gaussian(&mut rng, 2, 2);
        let m = 2usize;
        for p in [1.5f64, 2.0, 3.0, 7.3] {
            let pe = Exponent::new(p).unwrap();
            let power_sum = |mat: &CMatrix| -> f64 {
                crate::linalg::singular_values_raw(mat)
                    .iter()
                    .map(|s| s.powf(p))
                    .sum()
            };

            let fixed_l = x.mat() * amplify(&b, m);
            let (value_l, grad_l) = gradient_left(&fixed_l, &a, m, pe);
            let check_l = power_sum(&(amplify(&a, m) * &fixed_l));
            assert!((value_l - check_l).abs() <= 1e-11 * check_l.max(1.0));
            let dir = crate::sampling::complex_gaussian(&mut rng, 2, 2);
            let fd = fd_directional(
                |am| power_sum(&(amplify(am, m) * &fixed_l)),
                &a,
                &dir,
                1e-6,
            );
            let analytic: f64 = grad_l
                .iter()
                .zip(dir.iter())
                .map(|(g, d)| (g.conj() * d).re)
                .sum();
            assert!(
                (fd - analytic).abs() <= 1e-4 * analytic.abs().max(1.0),
                "left gradient p={p}: fd {fd} vs analytic {analytic}"
            );

            let fixed_r = amplify(&a, m) * x.mat();
            let (value_r, grad_r) = gradient_right(&fixed_r, &b, m, pe);
            let check_r = power_sum(&(&fixed_r * amplify(&b, m)));
            assert!((value_r - check_r).abs() <= 1e-11 * check_r.max(1.0));
            let fd_r = fd_directional(
                |bm| power_sum(&(&fixed_r * amplify(bm, m))),
                &b,
                &dir,
                1e-6,
            );
            let analytic_r: f64 = grad_r
                .iter()
                .zip(dir.iter())
                .map(|(g, d)| (g.conj() * d).re)
                .sum();
            assert!(
                (fd_r - analytic_r).abs() <= 1e-4 * analytic_r.abs().max(1.0),
                "right gradient p={p}: fd {fd_r} vs analytic {analytic_r}"
            );
        }
    }
}
