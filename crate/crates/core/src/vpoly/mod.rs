//! Exact coefficient arithmetic.
//!
//! Grothendieck-ring classes are carried through their virtual Poincaré
//! polynomials in `Z[u, u^-1]`; pole certification works in `Q(v)` with
//! `u = v^b`.

mod class;
mod laurent;
mod ratfunc;

pub use class::{parse_class, parse_class_with, DimensionError, MotClass, ParseError, ParseErrorKind};
pub use laurent::LaurentPoly;
pub use ratfunc::{QPoly, RatFunc};
