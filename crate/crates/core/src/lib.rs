//! Exact piecewise polynomial forms for trivial Lie algebroids over
//! simplicial complexes.
//!
//! The math is generic over a [`Field`]; the aliases below fix it to the
//! arbitrary-precision rationals, which is what every front end uses.

pub mod algebroid;
pub mod cealg;
mod combinat;
pub mod error;
pub mod exactla;
pub mod io;
pub mod mv;
pub mod psforms;
pub mod scalar;
pub mod simplicial;
pub mod sullivan;
pub mod verify;

pub use algebroid::{AlgebroidForm, LocalForm, Section, TensorComplex, TrivialAlgebroid};
pub use cealg::{CEElement, LieAlgebra};
pub use error::{Error, ErrorKind, Result};
pub use exactla::{BettiTable, FiniteComplex, Matrix};
pub use mv::{MVReport, MVSetup};
pub use psforms::{PiecewiseForm, PsBasis, PsComplex};
pub use scalar::Field;
pub use simplicial::{Simplex, SimplicialComplex};
pub use sullivan::{FaceInclusion, Monomial, PolyForm};

/// Arbitrary-precision rational numbers.
pub type Q = num_rational::BigRational;
pub type QMatrix = Matrix<Q>;
pub type QComplex = FiniteComplex<Q>;
pub type QPolyForm = PolyForm<Q>;
pub type QLieAlgebra = LieAlgebra<Q>;
