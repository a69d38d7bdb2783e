//! Exact-arithmetic models of e₇ acting on its 56-dimensional representation,
//! built from the Cayley–Dickson algebras, the Albert algebra H₃(𝕂) and a
//! totally antisymmetric rank-3 tensor ("cube") picture.

pub mod algebra;
pub mod conformal;
pub mod cubie;
pub mod harness;
pub mod io;
pub mod jordan;
pub mod linalg;
pub mod random;
pub mod rational;

pub use algebra::{AlgElem, Algebra};
pub use conformal::{E6Op, E7Elem, FreudVec};
pub use cubie::{Cube, Cubie};
pub use jordan::HermMat;
pub use rational::Rational;
