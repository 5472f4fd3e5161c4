//! Finite free algebras over a field: structure constants, multiplication
//! matrices, characteristic polynomials and tensor products.

mod charpoly;
mod element;
mod extension;
mod matrix;

pub use charpoly::berkowitz;
pub use element::AlgebraElement;
pub use extension::{embed_left, embed_right, tensor_product, FiniteFieldModel, FreeExtension, MAX_RANK};
pub use matrix::Matrix;
