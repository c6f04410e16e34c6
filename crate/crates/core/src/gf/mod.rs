//! Exact linear algebra over `F_p` and its small extensions.

pub mod field;
pub mod matrix;
pub mod poly;

pub use field::{Elem, Field, FieldSpec};
pub use matrix::{Echelon, Mat, Solution};
pub use poly::Poly;
