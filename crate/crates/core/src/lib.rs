//! Exact computations with nilpotent orbits, Springer isomorphisms and
//! optimal `SL_2`-homomorphisms for `GL_n` over prime fields and `Q`.
//!
//! Every algorithm is generic over [`Field`]; the concrete instantiations
//! used in practice are exported below as type aliases.

pub mod enumerate;
pub mod error;
pub mod jordan;
pub mod literal;
pub mod matrix;
pub mod orbits;
pub mod partition;
pub mod scalar;
pub mod sl2;
pub mod springer;
pub mod suites;
pub mod tilting;
pub mod torus;

pub use error::{Error, Result};
pub use jordan::{nilpotent_jordan, NilpotentJordanData};
pub use matrix::{Mat, RankNullspace};
pub use partition::Partition;
pub use scalar::{Field, Fp, Prime, Rational};
pub use torus::Cocharacter;

/// Matrices over `F_p`.
pub type FpMat = Mat<Fp>;
/// Matrices over `Q`.
pub type QMat = Mat<Rational>;
/// Cocharacters recorded over `F_p`.
pub type FpCocharacter = Cocharacter<Fp>;
/// Cocharacters recorded over `Q`.
pub type QCocharacter = Cocharacter<Rational>;
