//! Exact motivic zeta functions of snc-degenerations.
//!
//! Model data goes in as a combinatorial snc-model ([`sncmodel::SncModel`]);
//! out come the zeta function in normal form, certified pole orders, the
//! essential skeleton with its topology, the monodromy zeta function and a
//! Monodromy Property verdict. [`abelian`] covers the closed-form abelian
//! case and its oracle tables.

pub mod abelian;
pub mod monodromy;
pub mod rational;
pub mod sncmodel;
pub mod vpoly;
pub mod zeta;

pub use rational::Rational;
pub use vpoly::{parse_class, LaurentPoly, MotClass, RatFunc};
pub use zeta::{DenomFactor, GeomTerm, NormalForm, PoleReport, ZetaExpr};
