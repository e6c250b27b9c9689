//! Rational zeta expressions.
//!
//! A [`ZetaExpr`] is a formal sum of terms `c * T^k * prod (1 - L^a T^b)^-1`
//! with `c` a [`MotClass`]. Its [`NormalForm`] puts everything over the least
//! common multiset of denominator factors and then cancels whole factors
//! `(1 - L^a T^b)` that divide the numerator exactly. Nothing finer than a
//! whole factor is ever cancelled: `1 - T^2` stays `1 - T^2`.

mod poles;
pub(crate) mod tpoly;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg};
use std::sync::OnceLock;

use num_bigint::BigInt;

use crate::rational::{self, Rational};
use crate::vpoly::{LaurentPoly, MotClass};
use tpoly::TPoly;

pub use poles::{certify_pole_order, pole_leading_coefficient, PoleEntry, PoleError, PoleOrder, PoleReport};

/// The factor `1 - L^a T^b` with `b >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DenomFactor {
    pub a: i64,
    pub b: u32,
}

impl DenomFactor {
    pub fn new(a: i64, b: u32) -> Self {
        assert!(b >= 1, "denominator factor needs b >= 1");
        Self { a, b }
    }

    /// The candidate pole `a / b`.
    pub fn pole(&self) -> Rational {
        rational::ratio(self.a, i64::from(self.b))
    }

    fn cmp_ratio(&self, other: &Self) -> Ordering {
        let l = i128::from(self.a) * i128::from(other.b);
        let r = i128::from(other.a) * i128::from(self.b);
        l.cmp(&r)
    }

    pub fn render(&self) -> String {
        format!("(1 - L^{}*T^{})", self.a, self.b)
    }
}

/// Ordered by `(a/b, b, a)`.
impl Ord for DenomFactor {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_ratio(other)
            .then(self.b.cmp(&other.b))
            .then(self.a.cmp(&other.a))
    }
}

impl PartialOrd for DenomFactor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multiset of denominator factors.
pub type FactorMultiset = BTreeMap<DenomFactor, u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeomTerm {
    pub coeff: MotClass,
    pub tpow: u32,
    pub denom: FactorMultiset,
}

impl GeomTerm {
    pub fn new(coeff: MotClass, tpow: u32, factors: impl IntoIterator<Item = DenomFactor>) -> Self {
        let mut denom = FactorMultiset::new();
        for f in factors {
            *denom.entry(f).or_default() += 1;
        }
        Self { coeff, tpow, denom }
    }

    /// Power-series coefficients of `T^0 .. T^depth`.
    fn expand(&self, depth: usize) -> Vec<LaurentPoly> {
        let mut out = vec![LaurentPoly::zero(); depth + 1];
        let k = self.tpow as usize;
        if k > depth || self.coeff.is_zero() {
            return out;
        }
        let mut s = vec![LaurentPoly::zero(); depth + 1 - k];
        s[0] = self.coeff.poly().clone();
        for (f, &m) in &self.denom {
            let b = f.b as usize;
            for _ in 0..m {
                // s <- s / (1 - u^{2a} T^b)
                for j in b..s.len() {
                    let prev = s[j - b].shift(2 * f.a);
                    s[j] += &prev;
                }
            }
        }
        for (j, c) in s.into_iter().enumerate() {
            out[j + k] = c;
        }
        out
    }
}

/// Single-fraction form: `numerator(T) / prod f^m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct NormalForm {
    /// Coefficient of `T^k` at index `k`; no trailing zeros.
    pub numerator: Vec<MotClass>,
    pub denominator: FactorMultiset,
}

impl NormalForm {
    pub fn is_zero(&self) -> bool {
        self.numerator.is_empty()
    }

    /// Reads the normal form back as a sum of terms.
    pub fn to_expr(&self) -> ZetaExpr {
        ZetaExpr::from_terms(
            self.numerator
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| GeomTerm {
                    coeff: c.clone(),
                    tpow: k as u32,
                    denom: self.denominator.clone(),
                }),
        )
    }

    pub fn render_numerator(&self) -> String {
        let parts: Vec<String> = self
            .numerator
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("[{c}]"),
                1 => format!("[{c}]*T"),
                _ => format!("[{c}]*T^{k}"),
            })
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    pub fn render_denominator(&self) -> String {
        self.denominator
            .iter()
            .map(|(f, m)| format!("{}^{m}", f.render()))
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        if self.denominator.is_empty() {
            return f.write_str(&self.render_numerator());
        }
        write!(f, "({}) / ({})", self.render_numerator(), self.render_denominator())
    }
}

/// A zeta function as a formal sum of geometric terms.
///
/// Equality compares normal forms.
#[derive(Clone, Default)]
pub struct ZetaExpr {
    terms: Vec<GeomTerm>,
    normal: OnceLock<NormalForm>,
}

impl ZetaExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = GeomTerm>) -> Self {
        Self {
            terms: terms.into_iter().filter(|t| !t.coeff.is_zero()).collect(),
            normal: OnceLock::new(),
        }
    }

    /// `c * T^k * prod factors^-1`.
    pub fn term(coeff: MotClass, tpow: u32, factors: impl IntoIterator<Item = DenomFactor>) -> Self {
        Self::from_terms([GeomTerm::new(coeff, tpow, factors)])
    }

    pub fn terms(&self) -> &[GeomTerm] {
        &self.terms
    }

    pub fn zadd(&self, other: &ZetaExpr) -> ZetaExpr {
        Self::from_terms(self.terms.iter().chain(&other.terms).cloned())
    }

    pub fn zscale(&self, c: &MotClass) -> ZetaExpr {
        Self::from_terms(self.terms.iter().map(|t| GeomTerm {
            coeff: &t.coeff * c,
            ..t.clone()
        }))
    }

    /// Substitutes `T -> L^m T`.
    pub fn rescale_t(&self, m: i64) -> ZetaExpr {
        Self::from_terms(self.terms.iter().map(|t| GeomTerm {
            coeff: t.coeff.shift(2 * m * i64::from(t.tpow)),
            tpow: t.tpow,
            denom: t
                .denom
                .iter()
                .map(|(f, &k)| (DenomFactor::new(f.a + m * i64::from(f.b), f.b), k))
                .collect(),
        }))
    }

    /// Applies the operator `T d/dT`.
    pub fn t_d_dt(&self) -> ZetaExpr {
        let mut out = Vec::new();
        for t in &self.terms {
            if t.tpow > 0 {
                out.push(GeomTerm {
                    coeff: &t.coeff * &MotClass::integer(t.tpow),
                    ..t.clone()
                });
            }
            for (f, &m) in &t.denom {
                let mut denom = t.denom.clone();
                *denom.entry(*f).or_default() += 1;
                let c = BigInt::from(f.b) * BigInt::from(m);
                out.push(GeomTerm {
                    coeff: MotClass::from_poly(t.coeff.poly().scale(&c).shift(2 * f.a)),
                    tpow: t.tpow + f.b,
                    denom,
                });
            }
        }
        Self::from_terms(out)
    }

    pub fn is_zero(&self) -> bool {
        self.normal_form().is_zero()
    }

    /// Constant term of the power series.
    pub fn constant_term(&self) -> MotClass {
        self.terms
            .iter()
            .filter(|t| t.tpow == 0)
            .fold(MotClass::zero(), |acc, t| &acc + &t.coeff)
    }

    /// Coefficients of `T^1 .. T^depth`, expanding term by term.
    pub fn series_expand(&self, depth: usize) -> Vec<MotClass> {
        let mut acc = vec![LaurentPoly::zero(); depth + 1];
        for t in &self.terms {
            for (a, c) in acc.iter_mut().zip(t.expand(depth)) {
                *a += &c;
            }
        }
        acc.into_iter().skip(1).map(MotClass::from_poly).collect()
    }

    pub fn normal_form(&self) -> &NormalForm {
        self.normal.get_or_init(|| compute_normal_form(&self.terms))
    }

    /// Candidate poles with their upper orders, read off the normal form.
    pub fn candidate_poles(&self) -> BTreeMap<Rational, u32> {
        let mut out = BTreeMap::new();
        for (f, &m) in &self.normal_form().denominator {
            *out.entry(f.pole()).or_default() += m;
        }
        out
    }

    /// Renders the normal form.
    pub fn render(&self) -> String {
        self.normal_form().to_string()
    }

    /// Renders the unreduced sum of terms.
    pub fn render_terms(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|t| {
                let num = match t.tpow {
                    0 => format!("[{}]", t.coeff),
                    1 => format!("[{}]*T", t.coeff),
                    k => format!("[{}]*T^{k}", t.coeff),
                };
                if t.denom.is_empty() {
                    num
                } else {
                    let den: Vec<String> = t.denom.iter().map(|(f, m)| format!("{}^{m}", f.render())).collect();
                    format!("{num} / ({})", den.join("*"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for ZetaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZetaExpr({})", self.render())
    }
}

impl PartialEq for ZetaExpr {
    fn eq(&self, other: &Self) -> bool {
        self.normal_form() == other.normal_form()
    }
}

impl Eq for ZetaExpr {}

impl Add<&ZetaExpr> for &ZetaExpr {
    type Output = ZetaExpr;
    fn add(self, rhs: &ZetaExpr) -> ZetaExpr {
        self.zadd(rhs)
    }
}

impl Neg for &ZetaExpr {
    type Output = ZetaExpr;
    fn neg(self) -> ZetaExpr {
        self.zscale(&MotClass::integer(-1))
    }
}

fn compute_normal_form(terms: &[GeomTerm]) -> NormalForm {
    let mut cover = FactorMultiset::new();
    for t in terms {
        for (f, &m) in &t.denom {
            let slot = cover.entry(*f).or_default();
            *slot = (*slot).max(m);
        }
    }
    let mut num = TPoly::default();
    for t in terms {
        let mut p = TPoly::monomial(t.coeff.poly().clone(), t.tpow as usize);
        for (f, &m) in &cover {
            let have = t.denom.get(f).copied().unwrap_or(0);
            for _ in have..m {
                p = p.mul_factor(2 * f.a, f.b as usize);
            }
        }
        num += &p;
    }
    if num.is_zero() {
        return NormalForm::default();
    }
    // Larger b first: 1 - L^{ka} T^{kb} is a multiple of 1 - L^a T^b, and
    // cancelling the smaller one first can strand the larger.
    let mut order: Vec<DenomFactor> = cover.keys().copied().collect();
    order.sort_by(|x, y| y.b.cmp(&x.b).then(x.cmp(y)));
    loop {
        let mut changed = false;
        for f in &order {
            while cover.get(f).copied().unwrap_or(0) > 0 {
                match num.div_factor(2 * f.a, f.b as usize) {
                    Some(q) => {
                        num = q;
                        let m = cover.get_mut(f).expect("present");
                        *m -= 1;
                        changed = true;
                    }
                    None => break,
                }
            }
        }
        if !changed {
            break;
        }
    }
    cover.retain(|_, m| *m > 0);
    NormalForm {
        numerator: num.0.into_iter().map(MotClass::from_poly).collect(),
        denominator: cover,
    }
}
