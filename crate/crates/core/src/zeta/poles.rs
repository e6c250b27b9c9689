//! Pole orders.
//!
//! The upper order at `q` counts normal-form factors `(1 - L^a T^b)` with
//! `a/b = q`. The lower order is the exact pole order, at the real positive
//! branch, of the function obtained by substituting `u = v^b`: there every
//! factor with ratio `q` has a simple zero at `T = v^{-2a}`, and the lower
//! order is the denominator multiplicity minus the numerator multiplicity.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::tpoly::TPoly;
use super::ZetaExpr;
use crate::rational::{self, Rational};
use crate::vpoly::{LaurentPoly, RatFunc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PoleError {
    #[error("pole {a}/{b} is not in reduced form")]
    NotReduced { a: i64, b: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PoleOrder {
    pub lower: u32,
    pub upper: u32,
}

impl PoleOrder {
    pub fn certified(&self) -> bool {
        self.lower == self.upper
    }
}

struct Specialized {
    /// Root exponent: `T0 = v^root`.
    root: i64,
    num: TPoly,
    /// Denominator factors in `v`: `(1 - v^e T^b, multiplicity)`.
    den: Vec<(TPoly, u32)>,
    upper: u32,
}

fn specialize(x: &ZetaExpr, a: i64, b: i64) -> Result<Option<Specialized>, PoleError> {
    if b <= 0 || a.gcd(&b) != 1 {
        return Err(PoleError::NotReduced { a, b });
    }
    let nf = x.normal_form();
    if nf.is_zero() {
        return Ok(None);
    }
    let q = rational::ratio(a, b);
    let upper = nf
        .denominator
        .iter()
        .filter(|(f, _)| f.pole() == q)
        .map(|(_, m)| *m)
        .sum();
    let num = TPoly(nf.numerator.iter().map(|c| c.poly().inflate(b)).collect());
    let den = nf
        .denominator
        .iter()
        .map(|(f, &m)| (TPoly::monomial(LaurentPoly::one(), 0).mul_factor(2 * b * f.a, f.b as usize), m))
        .collect();
    Ok(Some(Specialized {
        root: -2 * a,
        num,
        den,
        upper,
    }))
}

/// `(lower, upper)` pole orders at `q = a/b`, which must be reduced.
pub fn certify_pole_order(x: &ZetaExpr, a: i64, b: i64) -> Result<PoleOrder, PoleError> {
    let Some(s) = specialize(x, a, b)? else {
        return Ok(PoleOrder { lower: 0, upper: 0 });
    };
    let (num_mult, _) = s.num.root_multiplicity(s.root);
    let den_mult: u32 = s.den.iter().map(|(p, m)| p.root_multiplicity(s.root).0 * m).sum();
    Ok(PoleOrder {
        lower: den_mult.saturating_sub(num_mult),
        upper: s.upper,
    })
}

/// Laurent expansion data at `T0 = v^{-2a}` in `Q(v)` with `u = v^b`:
/// returns `(k, c)` with `F(T) = c (T - T0)^k + ...`, `c != 0`.
/// `k < 0` is a pole of order `-k`. `None` for the zero function.
pub fn pole_leading_coefficient(x: &ZetaExpr, a: i64, b: i64) -> Result<Option<(i64, RatFunc)>, PoleError> {
    let Some(s) = specialize(x, a, b)? else {
        return Ok(None);
    };
    let (num_mult, num_rest) = s.num.root_multiplicity(s.root);
    let mut order = i64::from(num_mult);
    let mut value = RatFunc::from_laurent(&num_rest.eval_monomial(s.root));
    for (p, m) in &s.den {
        let (k, rest) = p.root_multiplicity(s.root);
        order -= i64::from(k * m);
        let v = RatFunc::from_laurent(&rest.eval_monomial(s.root));
        for _ in 0..*m {
            value = &value / &v;
        }
    }
    Ok(Some((order, value)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleEntry {
    #[serde(with = "crate::rational::as_string")]
    pub q: Rational,
    pub upper: u32,
    pub lower: u32,
    pub certified: bool,
}

/// Candidate poles with certified lower bounds, ascending in `q`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PoleReport {
    pub entries: Vec<PoleEntry>,
}

fn to_i64_pair(q: &Rational) -> (i64, i64) {
    use num_traits::ToPrimitive;
    (
        q.numer().to_i64().expect("pole numerator fits i64"),
        q.denom().to_i64().expect("pole denominator fits i64"),
    )
}

impl PoleReport {
    pub fn for_expr(x: &ZetaExpr) -> Self {
        let entries = x
            .candidate_poles()
            .into_iter()
            .map(|(q, upper)| {
                let (a, b) = to_i64_pair(&q);
                let ord = certify_pole_order(x, a, b).expect("candidate poles are reduced");
                debug_assert_eq!(ord.upper, upper);
                PoleEntry {
                    q,
                    upper,
                    lower: ord.lower,
                    certified: ord.certified(),
                }
            })
            .collect();
        Self { entries }
    }

    pub fn get(&self, q: &Rational) -> Option<&PoleEntry> {
        self.entries.iter().find(|e| &e.q == q)
    }

    pub fn as_map(&self) -> BTreeMap<Rational, (u32, u32)> {
        self.entries.iter().map(|e| (e.q.clone(), (e.lower, e.upper))).collect()
    }
}
