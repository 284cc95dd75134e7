//! Exact computations with Temperley-Lieb diagrams, Hecke algebras of
//! symmetric groups, parabolic modules and the canonical and dual canonical
//! bases of the spin representation `(C^2)^{(x) n}`.
//!
//! All scalars live in `Z[q, q^-1]` ([`LaurentPoly`]) with arbitrary-precision
//! coefficients, so every identity checked here is checked exactly.

pub mod error;
pub mod hecke;
pub mod barsolver;
pub mod laurent;
pub mod linalg;
pub mod par;
pub mod parabolic;
pub mod quantum;
pub mod spin;
pub mod symgroup;
pub mod tldiagram;
pub mod verify;

pub use error::{Error, Result};
pub use laurent::LaurentPoly;
pub use symgroup::{ParabolicContext, Permutation, Sign, SignString};
pub use tldiagram::{TLDiagram, TLElement};
