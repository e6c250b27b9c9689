//! Zeta functions of abelian varieties.
//!
//! With semi-abelian reduction the coefficient of `T^d` is
//! `[A_k] L^{-ord} d^t`, so the zeta function is an Eulerian sum with a
//! single pole at `0` of order `t + 1`. In the ramified case the coefficients
//! are given as a finite table and checked against the two structural facts
//! relating rows:
//!
//! 1. `ord(m + q e) = ord(m) + c e q`;
//! 2. `[A(md)_k] = d^{t(m)} [A(m)_k]` and `t(md) = t(m)` whenever `d` is
//!    prime to `e / gcd(m, e)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{self, Rational};
use crate::vpoly::{parse_class_with, MotClass, ParseError};
use crate::zeta::{certify_pole_order, DenomFactor, GeomTerm, ZetaExpr};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiAbelianInput {
    /// Class of the special fiber of the Neron model.
    pub class0: MotClass,
    /// Toric rank.
    pub t: u32,
    pub ord: i64,
}

/// Eulerian numbers `A(t, 0..t)`; `sum_d d^t T^d = T A_t(T) / (1 - T)^{t+1}`.
pub fn eulerian_numbers(t: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::from(1)];
    for n in 1..=t as usize {
        let mut next = vec![BigInt::zero(); n];
        for (k, slot) in next.iter_mut().enumerate() {
            let mut v = BigInt::zero();
            if k < row.len() {
                v += &row[k] * (k + 1);
            }
            if k >= 1 {
                v += &row[k - 1] * (n - k);
            }
            *slot = v;
        }
        row = next;
    }
    row
}

/// `class0 L^{-ord} sum_{d >= 1} d^t T^d`.
pub fn zeta_semiabelian(inp: &SemiAbelianInput) -> ZetaExpr {
    let c = inp.class0.shift(-2 * inp.ord);
    let denom = vec![DenomFactor::new(0, 1); inp.t as usize + 1];
    ZetaExpr::from_terms(eulerian_numbers(inp.t).into_iter().enumerate().map(|(k, a)| {
        GeomTerm::new(&c * &MotClass::integer(a), k as u32 + 1, denom.iter().copied())
    }))
}

/// `[G] = [G#] L^u (L - 1)^tau` for a group with toric rank `tau` and
/// unipotent rank `u`.
pub fn chevalley_class(sharp: &MotClass, u_rank: u32, tau: u32) -> MotClass {
    &sharp.shift(2 * i64::from(u_rank)) * &MotClass::gm().pow(tau)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub class: MotClass,
    /// In `(1/e) Z`.
    pub ord: Rational,
    pub t: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianOracleTable {
    pub e: u32,
    /// Base change conductor.
    pub c: Rational,
    pub t_pot: u32,
    pub rows: BTreeMap<u64, TableRow>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableDiagnostic {
    /// Row indices involved.
    pub rows: Vec<u64>,
    pub message: String,
}

impl fmt::Display for TableDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows.iter().map(u64::to_string).collect();
        write!(f, "rows {}: {}", rows.join(","), self.message)
    }
}

fn diag(rows: Vec<u64>, message: impl Into<String>) -> TableDiagnostic {
    TableDiagnostic {
        rows,
        message: message.into(),
    }
}

fn pow_class(d: u64, t: u32) -> MotClass {
    MotClass::integer(BigInt::from(d).pow(t))
}

/// Checks every pair of rows related by one of the two facts.
pub fn validate_oracle_table(tab: &AbelianOracleTable) -> Vec<TableDiagnostic> {
    let mut out = Vec::new();
    if tab.e == 0 {
        out.push(diag(vec![], "e must be positive"));
        return out;
    }
    if tab.c.is_negative() {
        out.push(diag(vec![], "conductor must be nonnegative"));
    }
    let e = u64::from(tab.e);
    let ee = rational::integer(i64::from(tab.e));
    for (&d, row) in &tab.rows {
        if d == 0 {
            out.push(diag(vec![d], "row index must be positive"));
        }
        if !(&row.ord * &ee).is_integer() {
            out.push(diag(vec![d], "ord is not in (1/e)Z"));
        }
        if d % e == 0 && row.t != tab.t_pot {
            out.push(diag(vec![d], "toric rank differs from potential toric rank"));
        }
    }
    let c_e = &tab.c * &ee;
    for (&m, rm) in &tab.rows {
        for (&n, rn) in tab.rows.range(m + 1..) {
            if (n - m) % e == 0 {
                let q = rational::integer(((n - m) / e) as i64);
                if rn.ord != &rm.ord + &c_e * q {
                    out.push(diag(vec![m, n], "ord(m + qe) != ord(m) + c e q"));
                }
            }
            if m >= 1 && n % m == 0 {
                let d = n / m;
                let e_prime = e / m.gcd(&e);
                if d.gcd(&e_prime) == 1 {
                    if rn.t != rm.t {
                        out.push(diag(vec![m, n], "toric rank changes under prime-to-e' base change"));
                    }
                    if rn.class != &pow_class(d, rm.t) * &rm.class {
                        out.push(diag(vec![m, n], "[A(md)] != d^t(m) [A(m)]"));
                    }
                }
            }
        }
    }
    out
}

/// Closed-form parameters for one residue class `g = gcd(n, e)`:
/// `[A(g)_k] = chevalley_class(sharp, u_rank, tau)` with toric rank `tau`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupData {
    pub sharp: MotClass,
    pub u_rank: u32,
    pub tau: u32,
}

/// Builds rows `1..=depth` from per-divisor group data: for `g = gcd(n, e)`,
/// `[A(n)_k] = (n/g)^{tau_g} [A(g)_k]`, `t(n) = tau_g`, and
/// `ord(n) = floor(c r) + c (n - r)` with `r` the residue of `n` in `1..=e`.
/// `groups[&e].tau` must equal `t_pot`.
pub fn table_from_closed_form(
    e: u32,
    c: &Rational,
    groups: &BTreeMap<u32, GroupData>,
    depth: u64,
) -> AbelianOracleTable {
    let ee = u64::from(e);
    let rows = (1..=depth)
        .map(|n| {
            let g = n.gcd(&ee) as u32;
            let data = &groups[&g];
            let base = chevalley_class(&data.sharp, data.u_rank, data.tau);
            let r = (n - 1) % ee + 1;
            let ord = rational::integer((c * rational::integer(r as i64)).floor().to_integer().to_i64().expect("small"))
                + c * rational::integer((n - r) as i64);
            let row = TableRow {
                class: &pow_class(n / u64::from(g), data.tau) * &base,
                ord,
                t: data.tau,
            };
            (n, row)
        })
        .collect();
    AbelianOracleTable {
        e,
        c: c.clone(),
        t_pot: groups[&e].tau,
        rows,
    }
}

/// The rows of a semi-abelian input seen as an `e = 1` table.
pub fn table_from_semiabelian(inp: &SemiAbelianInput, depth: u64) -> AbelianOracleTable {
    let rows = (1..=depth)
        .map(|d| {
            let row = TableRow {
                class: &pow_class(d, inp.t) * &inp.class0,
                ord: rational::integer(inp.ord),
                t: inp.t,
            };
            (d, row)
        })
        .collect();
    AbelianOracleTable {
        e: 1,
        c: rational::integer(0),
        t_pot: inp.t,
        rows,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("missing row {0}")]
    MissingRow(u64),
    #[error("ord of row {0} is not in (1/e)Z")]
    Granularity(u64),
}

/// Coefficients of `T^1 .. T^depth`, `[A(d)_k] L^{-ord(d)}`, as classes in
/// the refined variable `w = u^{1/e}` (so `L = w^{2e}`).
pub fn zeta_truncated(tab: &AbelianOracleTable, depth: u64) -> Result<Vec<MotClass>, TableError> {
    let e = i64::from(tab.e.max(1));
    (1..=depth)
        .map(|d| {
            let row = tab.rows.get(&d).ok_or(TableError::MissingRow(d))?;
            let scaled = &row.ord * rational::integer(e);
            if !scaled.is_integer() {
                return Err(TableError::Granularity(d));
            }
            let k = scaled.to_integer().to_i64().ok_or(TableError::Granularity(d))?;
            Ok(MotClass::from_poly(row.class.poly().inflate(e)).shift(-2 * k))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianVerdict {
    pub pass: bool,
    pub candidate_poles: BTreeMap<Rational, u32>,
    /// `(lower, upper)` at `c`.
    pub order_at_c: (u32, u32),
}

/// Passes iff the only candidate pole is `c`, of order `t_pot + 1`, and the
/// order is certified.
pub fn check_abelian_theorem(z: &ZetaExpr, c: &Rational, t_pot: u32) -> AbelianVerdict {
    let poles = z.candidate_poles();
    let a = c.numer().to_i64().expect("small conductor");
    let b = c.denom().to_i64().expect("small conductor");
    let ord = certify_pole_order(z, a, b).expect("rationals are reduced");
    let want = t_pot + 1;
    let pass = poles.len() == 1 && poles.get(c) == Some(&want) && ord.lower == want && ord.upper == want;
    AbelianVerdict {
        pass,
        candidate_poles: poles,
        order_at_c: (ord.lower, ord.upper),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbelianInput {
    SemiAbelian(SemiAbelianInput),
    Table(AbelianOracleTable),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbelianParseError {
    #[error("{message} at line {line} column {column}")]
    Json { line: usize, column: usize, message: String },
    #[error("class '{text}': {source}")]
    Class { text: String, source: ParseError },
    #[error("invalid rational '{0}'")]
    Rational(String),
    #[error("invalid row index '{0}'")]
    RowIndex(String),
}

impl From<serde_json::Error> for AbelianParseError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        let message = match message.rfind(" at line ") {
            Some(k) => message[..k].to_string(),
            None => message,
        };
        Self::Json {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NumOrText {
    Int(i64),
    Text(String),
}

impl NumOrText {
    fn rational(&self) -> Result<Rational, AbelianParseError> {
        match self {
            Self::Int(n) => Ok(rational::integer(*n)),
            Self::Text(s) => rational::parse(s).map_err(|_| AbelianParseError::Rational(s.clone())),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RawRow {
    class: String,
    ord: NumOrText,
    t: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
enum RawInput {
    Semiabelian {
        class: String,
        t: u32,
        ord: i64,
    },
    Table {
        e: u32,
        c: NumOrText,
        t_pot: u32,
        rows: BTreeMap<String, RawRow>,
    },
}

/// Parses either JSON mode; class strings may use the symbol `n`, bound to
/// `n` when given.
pub fn parse_abelian(text: &str, n: Option<u32>) -> Result<AbelianInput, AbelianParseError> {
    let raw: RawInput = serde_json::from_str(text)?;
    let bindings: BTreeMap<String, BigInt> = n.map(|n| ("n".to_string(), BigInt::from(n))).into_iter().collect();
    let class = |s: &str| {
        parse_class_with(s, &bindings).map_err(|source| AbelianParseError::Class {
            text: s.to_string(),
            source,
        })
    };
    Ok(match raw {
        RawInput::Semiabelian { class: c, t, ord } => AbelianInput::SemiAbelian(SemiAbelianInput {
            class0: class(&c)?,
            t,
            ord,
        }),
        RawInput::Table { e, c, t_pot, rows } => {
            let mut out = BTreeMap::new();
            for (k, r) in rows {
                let d: u64 = k.trim().parse().map_err(|_| AbelianParseError::RowIndex(k.clone()))?;
                out.insert(
                    d,
                    TableRow {
                        class: class(&r.class)?,
                        ord: r.ord.rational()?,
                        t: r.t,
                    },
                );
            }
            AbelianInput::Table(AbelianOracleTable {
                e,
                c: c.rational()?,
                t_pot,
                rows: out,
            })
        }
    })
}

impl AbelianInput {
    pub fn to_json(&self) -> String {
        let raw = match self {
            Self::SemiAbelian(s) => RawInput::Semiabelian {
                class: s.class0.render(),
                t: s.t,
                ord: s.ord,
            },
            Self::Table(t) => RawInput::Table {
                e: t.e,
                c: NumOrText::Text(rational::render(&t.c)),
                t_pot: t.t_pot,
                rows: t
                    .rows
                    .iter()
                    .map(|(d, r)| {
                        (
                            d.to_string(),
                            RawRow {
                                class: r.class.render(),
                                ord: NumOrText::Text(rational::render(&r.ord)),
                                t: r.t,
                            },
                        )
                    })
                    .collect(),
            },
        };
        serde_json::to_string(&raw).expect("inputs serialize")
    }
}
