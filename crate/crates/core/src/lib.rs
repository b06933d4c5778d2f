//! Finite-field towers, generalized Möbius transformations between projective
//! space and roots of unity, and the homogeneous permutation polynomials
//! built from them.

pub mod acceptance;
pub mod arith;
pub mod error;
pub mod field;
pub mod gmt;
pub mod hirschfeld;
pub mod linalg;
pub mod permpoly;
pub mod poly;
pub mod projective;
pub mod wire;

pub use error::{Error, Result};
pub use field::{Elem, FieldCtx, FieldSpec, Level, Modulus};
pub use gmt::{GmtContext, InverseRoute, MuElement};
pub use linalg::{Basis, FFMatrix};
pub use poly::UniPoly;
pub use projective::{PgMap, PgVerdict, ProjPoint};
