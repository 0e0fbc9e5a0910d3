//! Exact algebra and numerical flows for the Bogoyavlenskij–Itoh
//! Lotka–Volterra systems and their constant-structure deformations.
//!
//! Everything symbolic runs over exact rationals; [`dynamics`] is the only
//! floating-point module.

pub mod dynamics;
pub mod error;
pub mod exactalg;
pub mod indexsets;
pub mod integrals;
pub mod lax;
pub mod linalg;
pub mod poisson;
pub mod sampler;
pub mod veselov;

pub use error::{Error, Result};
pub use exactalg::{LaurentMatrix, LaurentPoly, Monomial, Poly, Rational, Var};
pub use indexsets::IndexTuple;
pub use integrals::DeformationC;
pub use poisson::{BracketKind, ConstantStructure};
