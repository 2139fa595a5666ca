//! Numerics for the operator-system structure of Schatten p-classes.
//!
//! The crate realizes, at desk scale, the structure theory of the spaces
//! S_p^n of n x n matrices under the Schatten p-norm: the PSD block dilation
//! `D(a) = [[|a*|, a], [a*, |a|]]` with its functional calculus, spectral
//! measure and norm doubling; the modified numerical radius `nu_p` over
//! positive contractive functionals with closed form, brute-force oracle
//! and explicit duality witness; the inequality chain
//! `2^(-1/p) |x|_p <= nu_p(x) <= |x|_p` behind the dominating constant
//! 2^(1/p), including the example showing the constant is sharp; and the
//! parallel/trace duality bookkeeping for block functionals.
//!
//! Everything is deterministic: random inputs come from ChaCha8 generators
//! keyed by explicit seeds, and verification results are emitted as
//! [`report::VerificationReport`] values with canonical JSON encoding.

pub mod dilation;
pub mod duality;
pub mod error;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod radius;
pub mod report;
pub mod sampling;
pub mod schatten;

pub use error::{Error, Result};
pub use matrix::CMatrix;
pub use report::VerificationReport;
pub use schatten::Exponent;
