//! Monodromy zeta function and the Monodromy Property check.
//!
//! The monodromy zeta function is `prod_i (t^{N_i} - 1)^{-chi(E_i^o)}`.
//! Rewriting every `t^d - 1` as `prod_{m | d} Phi_m(t)` gives the exponent
//! `c_m` of each cyclotomic polynomial; `c_m != 0` certifies that primitive
//! `m`-th roots of unity are monodromy eigenvalues. `c_m = 0` proves nothing,
//! since eigenvalues can cancel between cohomological degrees.

use std::collections::BTreeMap;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};
use crate::sncmodel::{ModelError, SncModel};
use crate::zeta::PoleReport;

/// `prod_d (t^d - 1)^{e_d}`, with no zero exponents stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CycloProduct {
    exps: BTreeMap<u64, BigInt>,
}

impl CycloProduct {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_exponents(exps: impl IntoIterator<Item = (u64, BigInt)>) -> Self {
        let mut out = Self::default();
        for (d, e) in exps {
            out.add(d, e);
        }
        out
    }

    fn add(&mut self, d: u64, e: BigInt) {
        assert!(d >= 1, "t^0 - 1 is not a factor");
        let slot = self.exps.entry(d).or_default();
        *slot += e;
        if slot.is_zero() {
            self.exps.remove(&d);
        }
    }

    pub fn exponents(&self) -> &BTreeMap<u64, BigInt> {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// Total degree `sum_d d e_d`.
    pub fn degree(&self) -> BigInt {
        self.exps.iter().map(|(d, e)| BigInt::from(*d) * e).sum()
    }

    /// `c_m = sum_{m | d} e_d`, zeros omitted.
    pub fn cyclotomic_multiplicities(&self) -> BTreeMap<u64, BigInt> {
        let mut out: BTreeMap<u64, BigInt> = BTreeMap::new();
        for (&d, e) in &self.exps {
            for m in divisors(d) {
                *out.entry(m).or_default() += e;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Inverse of [`Self::cyclotomic_multiplicities`]: `e_d = sum_{d | m} mu(m/d) c_m`.
    pub fn from_cyclotomic(c: &BTreeMap<u64, BigInt>) -> Self {
        let mut out = Self::default();
        for (&m, cm) in c {
            for d in divisors(m) {
                let mu = mobius(m / d);
                if mu != 0 {
                    out.add(d, cm * mu);
                }
            }
        }
        out
    }

    /// `m` with `c_m != 0`.
    pub fn certified_eigenvalues(&self) -> Vec<u64> {
        self.cyclotomic_multiplicities().into_keys().collect()
    }

    pub fn render(&self) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        self.exps
            .iter()
            .map(|(d, e)| match *d {
                1 => format!("(t - 1)^{e}"),
                _ => format!("(t^{d} - 1)^{e}"),
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl Mul<&CycloProduct> for &CycloProduct {
    type Output = CycloProduct;
    fn mul(self, rhs: &CycloProduct) -> CycloProduct {
        let mut out = self.clone();
        for (d, e) in &rhs.exps {
            out.add(*d, e.clone());
        }
        out
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = 1;
    while k * k <= n {
        if n.is_multiple_of(k) {
            small.push(k);
            if k * k != n {
                large.push(n / k);
            }
        }
        k += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn mobius(mut n: u64) -> i64 {
    let mut out = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            out = -out;
        }
        p += 1;
    }
    if n > 1 {
        out = -out;
    }
    out
}

/// `e_d = -sum_{N_i = d} chi(E_i^o)`.
pub fn acampo_zeta(m: &SncModel) -> Result<CycloProduct, ModelError> {
    let chi = m.euler_open_strata()?;
    Ok(CycloProduct::from_exponents(
        m.components.iter().map(|c| (c.mult as u64, -chi[&c.id].clone())),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Certified,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MpPole {
    #[serde(with = "crate::rational::as_string")]
    pub q: Rational,
    /// Denominator of `q`; `exp(2 pi i q)` is a primitive `m`-th root of unity.
    pub m: u64,
    #[serde(with = "bigint_number")]
    pub c_m: BigInt,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Predictions {
    #[serde(with = "crate::rational::as_string")]
    pub min_weight: Rational,
    pub eigenvalue: String,
    pub jordan_block_at_least: u32,
}

/// Monodromy Property report. The verdict is `certified` or `inconclusive`;
/// nothing here can refute the property.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MpReport {
    pub poles: Vec<MpPole>,
    pub verdict: Status,
    /// Expected Hodge-theoretic behaviour; not used as evidence.
    pub predictions: Predictions,
}

pub fn check_monodromy_property(m: &SncModel) -> Result<MpReport, ModelError> {
    let z = m.zeta()?;
    let c = acampo_zeta(m)?.cyclotomic_multiplicities();
    let poles: Vec<MpPole> = PoleReport::for_expr(&z)
        .entries
        .into_iter()
        .map(|e| {
            let den = e.q.denom().to_u64().expect("pole denominators are small");
            let c_m = c.get(&den).cloned().unwrap_or_default();
            let status = if c_m.is_zero() {
                Status::Inconclusive
            } else {
                Status::Certified
            };
            MpPole {
                q: e.q,
                m: den,
                c_m,
                status,
            }
        })
        .collect();
    let verdict = if poles.iter().all(|p| p.status == Status::Certified) {
        Status::Certified
    } else {
        Status::Inconclusive
    };
    let w = m.min_weight()?;
    let sk = m.essential_skeleton()?;
    Ok(MpReport {
        poles,
        verdict,
        predictions: Predictions {
            eigenvalue: format!("exp(-2*pi*i*{})", rational::render(&w)),
            min_weight: w,
            jordan_block_at_least: sk.delta + 1,
        },
    })
}

/// `BigInt` as a JSON number; values must fit in `i64`.
mod bigint_number {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        use num_traits::ToPrimitive;
        match n.to_i64() {
            Some(k) => s.serialize_i64(k),
            None => Err(serde::ser::Error::custom("integer out of range")),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        Ok(BigInt::from(i64::deserialize(d)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sncmodel::corpus;

    fn cp(v: &[(u64, i64)]) -> CycloProduct {
        CycloProduct::from_exponents(v.iter().map(|&(d, e)| (d, BigInt::from(e))))
    }

    fn cm(v: &[(u64, i64)]) -> BTreeMap<u64, BigInt> {
        v.iter().map(|&(d, e)| (d, BigInt::from(e))).collect()
    }

    #[test]
    fn multiplicities() {
        assert_eq!(cp(&[(2, -1)]).cyclotomic_multiplicities(), cm(&[(1, -1), (2, -1)]));
        assert_eq!(cp(&[(1, -22), (2, -1)]).cyclotomic_multiplicities(), cm(&[(1, -23), (2, -1)]));
        assert!(cp(&[]).cyclotomic_multiplicities().is_empty());
        assert_eq!(cp(&[(6, 1), (3, -1), (2, -1), (1, 1)]).cyclotomic_multiplicities(), cm(&[(6, 1)]));
    }

    #[test]
    fn mobius_round_trip() {
        let z = cp(&[(12, 2), (3, -5), (1, 7), (4, 1)]);
        assert_eq!(CycloProduct::from_cyclotomic(&z.cyclotomic_multiplicities()), z);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!([1, 2, 4, 6, 30].map(mobius), [1, -1, 0, 1, -1]);
    }

    #[test]
    fn corpus_acampo() {
        let k3 = corpus::load("quartic_k3").unwrap();
        let z = acampo_zeta(&k3).unwrap();
        assert_eq!(z, cp(&[(1, -22), (2, -1)]));
        assert_eq!(z.certified_eigenvalues(), vec![1, 2]);
        let i5 = corpus::kodaira_in(5).unwrap();
        assert!(acampo_zeta(&i5).unwrap().is_one());
        let smooth = corpus::load("trivial_smooth").unwrap();
        assert_eq!(acampo_zeta(&smooth).unwrap(), cp(&[(1, -24)]));
    }

    #[test]
    fn report_for_quartic_k3() {
        let r = check_monodromy_property(&corpus::load("quartic_k3").unwrap()).unwrap();
        assert_eq!(r.verdict, Status::Certified);
        let got: Vec<(String, u64, i64)> = r
            .poles
            .iter()
            .map(|p| (rational::render(&p.q), p.m, p.c_m.to_i64().unwrap()))
            .collect();
        assert_eq!(got, vec![("-1/2".into(), 2, -1), ("0".into(), 1, -23)]);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains(r#"{"q":"-1/2","m":2,"c_m":-1,"status":"certified"}"#), "{json}");
        assert!(json.ends_with(r#""verdict":"certified","predictions":{"min_weight":"1","eigenvalue":"exp(-2*pi*i*1)","jordan_block_at_least":1}}"#), "{json}");
        let back: MpReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn cycle_is_inconclusive() {
        let r = check_monodromy_property(&corpus::kodaira_in(4).unwrap()).unwrap();
        assert_eq!(r.verdict, Status::Inconclusive);
        assert_eq!(r.poles.len(), 1);
        assert_eq!(r.poles[0].status, Status::Inconclusive);
        assert_eq!(r.predictions.jordan_block_at_least, 2);
    }
}
