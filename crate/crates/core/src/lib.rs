//! Exact symbolic algebra for noncommutative polynomials with commutative
//! scalar coefficients: Weyl and constant-commutator algebras, their
//! differential calculus, commutator expansions and quantum lifts of point
//! transformations.

pub mod brackets;
pub mod calculus;
pub mod canon;
pub mod error;
pub mod ncalg;
pub mod poly;
pub mod scalar;
pub mod selftest;

pub use brackets::{CommutativeSymbol, ThetaTable};
pub use calculus::{DerivationSpec, OneForm};
pub use canon::{CanonicalReport, ClassicalPair, InverseSearch, JacobianMatrix, Matrix, PointMap, QuantumPair, Side};
pub use error::{Error, Result};
pub use ncalg::{AlgebraSpec, Factor, Mode, NCPoly, RawTerm, Strategy, Var, WeylLayout, Word};
pub use poly::{Monomial, Poly, Rational};
pub use scalar::{Scalar, ScalarContext};
