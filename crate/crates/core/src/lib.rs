//! Conjugate loci of central geodesics in two-step nilpotent Lie groups
//! `N = ℝ^q ⊕ W` with `W ⊂ so(q)`.
//!
//! * [`spectral`]: normal form of a skew matrix `Z = j(Z)` — frequencies,
//!   multiplicities, kernel and an adapted orthonormal frame.
//! * [`algebra`]: trace-orthonormal planes `W`, standard metric algebras, the
//!   bracket and a sampled weak-conjugacy comparator.
//! * [`conjugate`]: conjugate values `2πk/λ`, multiplicities and primitive
//!   values along `exp(tZ)`.
//! * [`jacobi`]: closed-form Jacobi fields vanishing at `0` and the endpoint
//!   matrix whose nullity is the conjugate multiplicity.
//! * [`exact`] and [`genericity`]: rational polynomials, discriminants and
//!   exact membership in the generic sets `A_m`, `O`.
//! * [`grassmann`]: uniform planes, Haar orthogonal matrices and Monte Carlo
//!   density estimates.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod conjugate;
pub mod error;
pub mod exact;
mod fmath;
pub mod genericity;
pub mod grassmann;
pub mod jacobi;
pub mod linalg;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use spectral::{spectral_decompose, SkewMatrix, SpectralData, SpectralTolerances};
