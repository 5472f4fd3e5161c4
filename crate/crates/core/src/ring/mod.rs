//! Exact coefficient fields, log-scale norms and sparse polynomials.

mod dense;
pub mod embed;
pub mod field;
pub mod lognorm;
pub mod parse;
pub mod poly;

pub use embed::FieldEmbedding;
pub use field::{Elem, FieldKind, FieldSpec, RatFn};
pub use lognorm::LogNorm;
pub use poly::{Monomial, Poly};

/// Log-norm of a scalar in a valued field. See [`FieldSpec::lognorm`].
pub fn lognorm_scalar(a: &Elem, field: &FieldSpec) -> crate::Result<LogNorm> {
    field.lognorm(a)
}

/// Gauss norm of a polynomial on a polydisc. See [`Poly::gauss_norm`].
pub fn gauss_norm(p: &Poly, radii: &[LogNorm]) -> crate::Result<LogNorm> {
    p.gauss_norm(radii)
}
