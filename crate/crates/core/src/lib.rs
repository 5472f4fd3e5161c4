//! Exact Weil restriction of polynomially presented spaces along finite free
//! ring extensions.
//!
//! The crate is organised bottom-up:
//!
//! - [`ring`]: exact coefficient fields (prime and small finite fields, the
//!   rationals with an optional p-adic valuation, rational function fields
//!   with the `x`-adic valuation), log-scale norms and sparse multivariate
//!   polynomials.
//! - [`algebra`]: finite free algebras given by structure constants,
//!   multiplication matrices, division-free characteristic polynomials,
//!   integrality and tensor products.
//! - [`weil`]: presentations, the coefficient-ideal restriction, disc
//!   generators, products, base change and the finite-field point oracle.
//! - [`norms`]: spectral values and spectral radii, and the nilpotent witness
//!   for purely inseparable extensions.
//! - [`galois`]: finite group actions on extensions, the induced action on
//!   restrictions, fixed points and descent checks.
//!
//! Everything is exact: there is no floating point anywhere in the crate.

pub mod algebra;
pub mod error;
pub mod galois;
pub mod norms;
pub mod random;
pub mod ring;
pub mod weil;

pub use error::{Error, Result};
