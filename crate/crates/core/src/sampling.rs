//! Deterministic seeded matrix generators.
//!
//! Every generator is a pure function of (kind, n, seed): the stream comes
//! from ChaCha8 keyed by those values, so the same triple always produces
//! the same matrix, independent of call order or thread schedule.

use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::{c, hermitian_part, CMatrix};

/// splitmix64 step, the standard 64-bit mixer.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Mixes a list of words into one 64-bit value; used to derive independent
/// per-case seeds from (seed, suite, case, ...) tuples.
pub fn mix(parts: &[u64]) -> u64 {
    let mut state = 0x243f6a8885a308d3u64;
    let mut acc = 0u64;
    for &p in parts {
        state ^= p;
        acc ^= splitmix64(&mut state);
    }
    acc
}

/// ChaCha8 generator keyed by the mixed parts.
pub fn rng_from(parts: &[u64]) -> ChaCha8Rng {
    let mut state = mix(parts);
    let mut key = [0u8; 32];
    for chunk in key.chunks_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Matrix with independent standard complex Gaussian entries
/// (re, im ~ N(0, 1/2), so E|z|^2 = 1), drawn row-major.
pub fn complex_gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    let mut out = CMatrix::zeros(rows, cols);
    let root_half = 0.5f64.sqrt();
    for i in 0..rows {
        for j in 0..cols {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            out[(i, j)] = c(re * root_half, im * root_half);
        }
    }
    out
}

/// The generator families exposed by the CLI and the verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    /// Dense complex Gaussian.
    Ginibre,
    /// Exactly Hermitian (A = A* holds bitwise).
    Hermitian,
    /// Positive semidefinite Gram matrix.
    Psd,
    /// Rank-deficient product of two thin Gaussian factors, rank ceil(n/2).
    RankDeficient,
}

impl MatrixKind {
    pub const ALL: [MatrixKind; 4] = [
        MatrixKind::Ginibre,
        MatrixKind::Hermitian,
        MatrixKind::Psd,
        MatrixKind::RankDeficient,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MatrixKind::Ginibre => "ginibre",
            MatrixKind::Hermitian => "hermitian",
            MatrixKind::Psd => "psd",
            MatrixKind::RankDeficient => "rankdef",
        }
    }

    fn tag(self) -> u64 {
        match self {
            MatrixKind::Ginibre => 1,
            MatrixKind::Hermitian => 2,
            MatrixKind::Psd => 3,
            MatrixKind::RankDeficient => 4,
        }
    }
}

impl FromStr for MatrixKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ginibre" => Ok(MatrixKind::Ginibre),
            "hermitian" => Ok(MatrixKind::Hermitian),
            "psd" => Ok(MatrixKind::Psd),
            "rankdef" => Ok(MatrixKind::RankDeficient),
            other => Err(Error::InvalidExponent {
                reason: format!("unknown matrix kind {other:?}"),
            }),
        }
    }
}

/// Deterministic n x n matrix of the given kind.
pub fn generate(kind: MatrixKind, n: usize, seed: u64) -> CMatrix {
    assert!(n >= 1, "matrix size must be at least 1");
    let mut rng = rng_from(&[seed, kind.tag(), n as u64]);
    match kind {
        MatrixKind::Ginibre => complex_gaussian(&mut rng, n, n),
        MatrixKind::Hermitian => hermitian_part(&complex_gaussian(&mut rng, n, n)),
        MatrixKind::Psd => {
            let g = complex_gaussian(&mut rng, n, n);
            (&g * g.adjoint()).scale(1.0 / n as f64)
        }
        MatrixKind::RankDeficient => {
            let r = n.div_ceil(2);
            let g1 = complex_gaussian(&mut rng, n, r);
            let g2 = complex_gaussian(&mut rng, n, r);
            &g1 * g2.adjoint()
        }
    }
}
