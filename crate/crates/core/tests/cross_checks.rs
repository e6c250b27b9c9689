use std::collections::BTreeMap;

use motzeta::abelian::{check_abelian_theorem, zeta_semiabelian, SemiAbelianInput};
use motzeta::monodromy::{acampo_zeta, check_monodromy_property, CycloProduct, Status};
use motzeta::rational;
use motzeta::sncmodel::corpus;
use motzeta::sncmodel::random::{random_model, RandomParams};
use motzeta::sncmodel::SncModel;
use motzeta::{MotClass, ZetaExpr};
use num_bigint::BigInt;
use num_traits::{One, Zero};

#[test]
fn cycle_matches_semiabelian_closed_form() {
    for n in 2..=8u32 {
        let m = corpus::kodaira_in(n).unwrap();
        let closed = zeta_semiabelian(&SemiAbelianInput {
            class0: &MotClass::integer(n) * &MotClass::gm(),
            t: 1,
            ord: 0,
        });
        let z = m.zeta().unwrap();
        assert_eq!(z, closed);
        assert!(check_abelian_theorem(&z, &rational::integer(0), 1).pass);
        assert_eq!(m.degeneracy_index().unwrap(), 1);
    }
}

#[test]
fn kodaira_fibers_have_a_unique_pole() {
    for (name, c) in [("kodaira_II", (1, 6)), ("kodaira_III", (1, 4)), ("kodaira_IV", (1, 3)), ("kodaira_I0star", (1, 2))] {
        let z = corpus::load(name).unwrap().zeta().unwrap();
        let v = check_abelian_theorem(&z, &rational::ratio(c.0, c.1), 0);
        assert!(v.pass, "{name}: {v:?}");
    }
    let k3 = corpus::load("quartic_k3").unwrap().zeta().unwrap();
    assert!(!check_abelian_theorem(&k3, &rational::integer(0), 0).pass);
}

#[test]
fn kodaira_two_low_coefficients() {
    // T: only C contributes; T^2: C again plus the double component E1
    let z = corpus::load("kodaira_II").unwrap().zeta().unwrap();
    let s = z.series_expand(2);
    assert_eq!(s[0], motzeta::parse_class("u^2").unwrap());
    assert_eq!(s[1], motzeta::parse_class("3u^2").unwrap());
}

fn blowups(m: &SncModel) -> Vec<SncModel> {
    m.pieces
        .iter()
        .filter(|p| p.index.len() >= 2)
        .map(|p| m.blowup_stratum(&p.id).unwrap())
        .collect()
}

#[test]
fn blowup_invariance() {
    let mut models: Vec<SncModel> = (2..=5).map(|n| corpus::kodaira_in(n).unwrap()).collect();
    models.push(corpus::load("octahedron_typeIII").unwrap());
    for m in models {
        let z = m.zeta().unwrap();
        let chi = m.nearby_euler().unwrap();
        for b in blowups(&m) {
            assert_eq!(b.validate(), vec![], "{}", b.name);
            assert_eq!(b.zeta().unwrap(), z, "{}", b.name);
            assert_eq!(b.nearby_euler().unwrap(), chi);
            assert_eq!(acampo_zeta(&b).unwrap().degree(), -chi.clone());
            assert_eq!(b.degeneracy_index().unwrap(), m.degeneracy_index().unwrap());
            let sk = b.essential_skeleton().unwrap();
            assert_eq!(b.skeleton_homology(&sk).unwrap(), m.skeleton_homology(&m.essential_skeleton().unwrap()).unwrap());
        }
    }
}

#[test]
fn iterated_blowups() {
    let m = corpus::load("octahedron_typeIII").unwrap();
    let once = m.blowup_stratum("t+++").unwrap();
    let twice = once.blowup_stratum("e+x+y").unwrap();
    assert_eq!(twice.validate(), vec![]);
    assert_eq!(twice.zeta().unwrap(), m.zeta().unwrap());
    let thrice = twice.blowup_stratum("e+x+z").unwrap();
    assert_eq!(thrice.validate(), vec![]);
    assert_eq!(thrice.zeta().unwrap(), m.zeta().unwrap());
    assert_eq!(thrice.dual_complex_homology().unwrap(), vec![1, 0, 1]);
    // the exceptional divisors have multiplicities 3 and 2
    let mixed = thrice
        .pieces
        .iter()
        .find(|p| p.index == ["X_t+++", "X_e+x+y"] || p.index == ["X_e+x+y", "X_t+++"])
        .map(|p| p.id.clone())
        .expect("the two exceptional divisors meet");
    assert!(thrice.blowup_stratum(&mixed).is_err());
}

/// Dense integer polynomial product, lowest degree first.
fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic polynomial.
fn div(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() + 1 - b.len()];
    for k in (0..q.len()).rev() {
        let c = rem[k + b.len() - 1].clone();
        for (i, y) in b.iter().enumerate() {
            rem[k + i] -= &c * y;
        }
        q[k] = c;
    }
    assert!(rem.iter().all(Zero::is_zero));
    q
}

fn t_pow_minus_one(d: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); d + 1];
    v[0] = -BigInt::one();
    v[d] = BigInt::one();
    v
}

fn cyclotomic(m: usize) -> Vec<BigInt> {
    let mut p = t_pow_minus_one(m);
    for d in 1..m {
        if m.is_multiple_of(d) {
            p = div(&p, &cyclotomic(d));
        }
    }
    p
}

/// `prod p^e` split into numerator and denominator polynomials.
fn realize(factors: impl IntoIterator<Item = (Vec<BigInt>, i64)>) -> (Vec<BigInt>, Vec<BigInt>) {
    let mut num = vec![BigInt::one()];
    let mut den = vec![BigInt::one()];
    for (p, e) in factors {
        for _ in 0..e.abs() {
            if e > 0 {
                num = mul(&num, &p);
            } else {
                den = mul(&den, &p);
            }
        }
    }
    (num, den)
}

#[test]
fn cyclotomic_rewrite_is_a_polynomial_identity() {
    let mut models: Vec<SncModel> = corpus::NAMES.iter().map(|n| corpus::load(n).unwrap()).collect();
    models.extend((0..40).map(|s| random_model(s, RandomParams::default())));
    for m in models {
        let z = acampo_zeta(&m).unwrap();
        let c = z.cyclotomic_multiplicities();
        let small = |e: &BigInt| i64::try_from(e).unwrap();
        let (n1, d1) = realize(z.exponents().iter().map(|(d, e)| (t_pow_minus_one(*d as usize), small(e))));
        let (n2, d2) = realize(c.iter().map(|(m, e)| (cyclotomic(*m as usize), small(e))));
        assert_eq!(mul(&n1, &d2), mul(&n2, &d1), "{}", m.name);
        assert_eq!(CycloProduct::from_cyclotomic(&c), z);
        assert_eq!(z.degree(), -m.nearby_euler().unwrap());
    }
}

#[test]
fn cyclotomic_multiplicities_are_additive() {
    let a = acampo_zeta(&corpus::load("quartic_k3").unwrap()).unwrap();
    let b = acampo_zeta(&corpus::load("kodaira_II").unwrap()).unwrap();
    let ab = (&a * &b).cyclotomic_multiplicities();
    let mut sum: BTreeMap<u64, BigInt> = a.cyclotomic_multiplicities();
    for (m, c) in b.cyclotomic_multiplicities() {
        *sum.entry(m).or_default() += c;
    }
    sum.retain(|_, c| !c.is_zero());
    assert_eq!(ab, sum);
}

#[test]
fn monodromy_verdicts() {
    let k3 = check_monodromy_property(&corpus::load("quartic_k3").unwrap()).unwrap();
    assert_eq!(k3.verdict, Status::Certified);
    let smooth = check_monodromy_property(&corpus::load("trivial_smooth").unwrap()).unwrap();
    assert_eq!(smooth.verdict, Status::Certified);
    for s in 0..60 {
        let m = random_model(s, RandomParams::default());
        let r = check_monodromy_property(&m).unwrap();
        for p in &r.poles {
            assert_eq!(p.status == Status::Certified, !p.c_m.is_zero());
        }
    }
}

#[test]
fn series_matches_normal_form_on_corpus_and_random_models() {
    let mut models: Vec<SncModel> = corpus::NAMES.iter().map(|n| corpus::load(n).unwrap()).collect();
    models.extend((0..60).map(|s| random_model(s, RandomParams::default())));
    for m in models {
        let z = m.zeta().unwrap();
        let nf: ZetaExpr = z.normal_form().to_expr();
        assert_eq!(z.series_expand(25), nf.series_expand(25), "{}", m.name);
        assert!(z.constant_term().is_zero());
    }
}

#[test]
fn rescaling_shifts_poles_and_coefficients() {
    for name in corpus::NAMES {
        let z = corpus::load(name).unwrap().zeta().unwrap();
        for k in [-3i64, -1, 1, 2] {
            let r = z.rescale_t(k);
            let shifted: BTreeMap<_, _> = z
                .candidate_poles()
                .into_iter()
                .map(|(q, o)| (q + rational::integer(k), o))
                .collect();
            assert_eq!(r.candidate_poles(), shifted);
            let (a, b) = (z.series_expand(15), r.series_expand(15));
            for (d, (x, y)) in a.iter().zip(&b).enumerate() {
                assert_eq!(&x.shift(2 * k * (d as i64 + 1)), y);
            }
            assert_eq!(r.rescale_t(-k), z);
        }
    }
}
