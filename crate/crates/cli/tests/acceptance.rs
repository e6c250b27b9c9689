//! Acceptance suite: one pass/fail line per criterion, exact comparisons
//! throughout. Runs without the libtest harness so the lines always print.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::Instant;

use motzeta::abelian::{
    check_abelian_theorem, table_from_closed_form, table_from_semiabelian, validate_oracle_table,
    zeta_semiabelian, AbelianOracleTable, GroupData, SemiAbelianInput,
};
use motzeta::monodromy::{acampo_zeta, MpReport, Status};
use motzeta::rational::{self, Rational};
use motzeta::sncmodel::random::{random_model, RandomParams};
use motzeta::sncmodel::{corpus, SncModel};
use motzeta::vpoly::parse_class_with;
use motzeta::zeta::certify_pole_order;
use motzeta::{parse_class, LaurentPoly, MotClass, PoleReport};
use motzeta_cli::report::{MonodromyReport, SkeletonReport};
use motzeta_cli::{run, Command, RunConfig};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

type Check = Result<String, String>;
type Criterion = fn() -> Check;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cli_json(command: Command, input: &str) -> Result<String, String> {
    let out = run(&RunConfig::new(command, [input]).json());
    ensure(out.code == 0, || format!("exit {}: {}", out.code, out.stderr))?;
    Ok(out.stdout.trim_end().to_string())
}

fn num_den(q: &Rational) -> (i64, i64) {
    (q.numer().to_i64().unwrap(), q.denom().to_i64().unwrap())
}

fn corpus_models() -> Vec<SncModel> {
    let mut out: Vec<SncModel> = corpus::NAMES.iter().map(|n| corpus::load(n).unwrap()).collect();
    out.extend((2..=8).map(|n| corpus::kodaira_in(n).unwrap()));
    out
}

const RANDOM_MODELS: u64 = 300;

fn random_family() -> Vec<SncModel> {
    (0..RANDOM_MODELS).map(|s| random_model(s, RandomParams::default())).collect()
}

fn family_is_small(m: &SncModel) -> bool {
    m.components.len() <= 5 && m.pieces.iter().all(|p| p.index.len() <= 3)
}

fn criterion_1() -> Check {
    let poles: PoleReport = serde_json::from_str(&cli_json(Command::Poles { q: None }, "quartic_k3.json")?)
        .map_err(|e| e.to_string())?;
    let got: BTreeSet<(Rational, u32, u32)> = poles.entries.iter().map(|e| (e.q.clone(), e.lower, e.upper)).collect();
    let want: BTreeSet<(Rational, u32, u32)> =
        [(rational::integer(0), 1, 1), (rational::ratio(-1, 2), 1, 1)].into_iter().collect();
    ensure(poles.entries.len() == 2 && got == want, || format!("poles {got:?}"))?;

    let sk: SkeletonReport =
        serde_json::from_str(&cli_json(Command::Skeleton, "quartic_k3.json")?).map_err(|e| e.to_string())?;
    ensure(sk.delta == 0 && sk.min_weight == "1", || format!("delta {} min {}", sk.delta, sk.min_weight))?;

    let mp: MpReport =
        serde_json::from_str(&cli_json(Command::CheckMp, "quartic_k3.json")?).map_err(|e| e.to_string())?;
    let by_q: BTreeMap<Rational, (u64, BigInt, Status)> =
        mp.poles.iter().map(|p| (p.q.clone(), (p.m, p.c_m.clone(), p.status))).collect();
    ensure(
        by_q.len() == 2
            && by_q[&rational::integer(0)] == (1, BigInt::from(-23), Status::Certified)
            && by_q[&rational::ratio(-1, 2)] == (2, BigInt::from(-1), Status::Certified)
            && mp.verdict == Status::Certified,
        || format!("check-mp {mp:?}"),
    )?;

    let mono: MonodromyReport =
        serde_json::from_str(&cli_json(Command::Monodromy, "quartic_k3.json")?).map_err(|e| e.to_string())?;
    let c: BTreeMap<u64, i64> = mono.cyclotomic.iter().map(|e| (e.m, e.c)).collect();
    ensure(c == BTreeMap::from([(1, -23), (2, -1)]), || format!("cyclotomic {c:?}"))?;
    Ok("poles {0, -1/2} simple and certified; delta 0, min(omega) 1; c_1 = -23, c_2 = -1".into())
}

fn largest_pole_holds(m: &SncModel) -> Result<(), String> {
    let z = m.zeta().map_err(|e| e.to_string())?;
    let q = rational::integer(1) - m.min_weight().map_err(|e| e.to_string())?;
    let delta = m.degeneracy_index().map_err(|e| e.to_string())?;
    let (a, b) = num_den(&q);
    let ord = certify_pole_order(&z, a, b).map_err(|e| e.to_string())?;
    ensure(ord.lower == delta + 1 && ord.upper == delta + 1, || {
        format!("{}: order ({}, {}) at {q}, delta {delta}", m.name, ord.lower, ord.upper)
    })
}

fn criterion_2() -> Check {
    let corpus = corpus_models();
    let random = random_family();
    ensure(random.iter().all(family_is_small), || "random family exceeds size bounds".into())?;
    for m in corpus.iter().chain(&random) {
        largest_pole_holds(m)?;
    }
    Ok(format!("{} corpus and {} random models", corpus.len(), random.len()))
}

fn criterion_3() -> Check {
    let mut maximal = 0;
    for m in corpus_models().iter().chain(&random_family()) {
        let z = m.zeta().map_err(|e| e.to_string())?;
        let top = m.dim + 1;
        let q = m.largest_pole().map_err(|e| e.to_string())?;
        let delta = m.degeneracy_index().map_err(|e| e.to_string())?;
        for (p, _) in z.candidate_poles() {
            let (a, b) = num_den(&p);
            let ord = certify_pole_order(&z, a, b).map_err(|e| e.to_string())?;
            if ord.upper == top {
                ensure(p == q && delta == m.dim, || format!("{}: order {top} at {p}", m.name))?;
                maximal += 1;
            }
        }
    }
    ensure(maximal > 0, || "no model reaches the maximal order".into())?;
    Ok(format!("{maximal} poles of maximal order, all at 1 - min(omega) with delta = dim"))
}

fn criterion_4() -> Check {
    for n in 2..=8u32 {
        let m = corpus::kodaira_in(n).unwrap();
        let bind = BTreeMap::from([("n".to_string(), BigInt::from(n))]);
        let class0 = parse_class_with("n*(L-1)", &bind).map_err(|e| e.to_string())?;
        let closed = zeta_semiabelian(&SemiAbelianInput { class0, t: 1, ord: 0 });
        let z = m.zeta().map_err(|e| e.to_string())?;
        ensure(z.normal_form() == closed.normal_form(), || format!("I_{n}: {} vs {}", z.render(), closed.render()))?;
        let poles = z.candidate_poles();
        let ord = certify_pole_order(&z, 0, 1).map_err(|e| e.to_string())?;
        ensure(poles == BTreeMap::from([(rational::integer(0), 2)]) && ord.lower == 2, || {
            format!("I_{n}: poles {poles:?}")
        })?;
        ensure(check_abelian_theorem(&z, &rational::integer(0), 1).pass, || format!("I_{n}: abelian check"))?;
        let sk = m.essential_skeleton().map_err(|e| e.to_string())?;
        let h = m.skeleton_homology(&sk).map_err(|e| e.to_string())?;
        ensure(h == vec![1, 1] && sk.delta == 1, || format!("I_{n}: homology {h:?}, delta {}", sk.delta))?;
    }
    Ok("I_2 .. I_8 match n(L-1)T/(1-T)^2; pole 0 of order 2; Betti (1,1); delta 1 = toric rank".into())
}

/// All `(sum k_j N_j, sum k_j nu_j)` over tuples `k_j >= 1` with
/// `sum k_j N_j <= depth`.
fn tuples(data: &[(i64, i64)], depth: i64) -> Vec<(i64, i64)> {
    let Some((&(n, nu), rest)) = data.split_first() else {
        return vec![(0, 0)];
    };
    let mut out = Vec::new();
    for (d, e) in tuples(rest, depth) {
        let mut k = 1;
        while d + k * n <= depth {
            out.push((d + k * n, e + k * nu));
            k += 1;
        }
    }
    out
}

/// Coefficients of `T^1 .. T^depth` straight from the defining sum over
/// pieces and tuples, without any rational-function algebra.
fn direct_series(m: &SncModel, depth: usize) -> Vec<MotClass> {
    let comp: BTreeMap<&str, (i64, i64)> = m.components.iter().map(|c| (c.id.as_str(), (c.mult, c.nu))).collect();
    let mut out = vec![MotClass::zero(); depth];
    let gm = MotClass::gm();
    for p in &m.pieces {
        let data: Vec<(i64, i64)> = p.index.iter().map(|j| comp[j.as_str()]).collect();
        let base = &p.tilde_class * &gm.pow(p.index.len() as u32 - 1);
        for (d, e) in tuples(&data, depth as i64) {
            out[d as usize - 1] += &base.shift(-2 * e);
        }
    }
    out
}

fn criterion_5() -> Check {
    for name in corpus::NAMES {
        let m = corpus::load(name).unwrap();
        let z = m.zeta().map_err(|e| e.to_string())?;
        let termwise = z.series_expand(25);
        let nf = z.normal_form().to_expr().series_expand(25);
        ensure(nf == termwise, || format!("{name}: normal form and terms differ"))?;
        ensure(direct_series(&m, 25) == termwise, || format!("{name}: terms and direct sum differ"))?;
    }
    Ok("all corpus models agree with the direct sum to T^25".into())
}

fn criterion_6() -> Check {
    let mut count = 0;
    for name in corpus::NAMES {
        let z = corpus::load(name).unwrap().zeta().map_err(|e| e.to_string())?;
        for k in [-3i64, -1, 1, 2, 5] {
            let r = z.rescale_t(k);
            let shifted: BTreeMap<Rational, u32> =
                z.candidate_poles().into_iter().map(|(q, o)| (q + rational::integer(k), o)).collect();
            ensure(r.candidate_poles() == shifted, || format!("{name}, m = {k}: poles not shifted"))?;
            for (q, _) in z.candidate_poles() {
                let (a, b) = num_den(&q);
                let (a2, _) = num_den(&(q.clone() + rational::integer(k)));
                let before = certify_pole_order(&z, a, b).map_err(|e| e.to_string())?;
                let after = certify_pole_order(&r, a2, b).map_err(|e| e.to_string())?;
                ensure(before == after, || format!("{name}, m = {k}: order changed at {q}"))?;
            }
            let (s, t) = (z.series_expand(15), r.series_expand(15));
            for (d, (x, y)) in s.iter().zip(&t).enumerate() {
                let lmd = MotClass::lefschetz_pow(k * (d as i64 + 1));
                ensure(&(x * &lmd) == y, || format!("{name}, m = {k}: T^{} coefficient", d + 1))?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} rescalings, poles shift by m, T^d gains L^(md) to depth 15"))
}

fn criterion_7() -> Check {
    let mut models: Vec<SncModel> = (2..=5).map(|n| corpus::kodaira_in(n).unwrap()).collect();
    models.push(corpus::load("kodaira_In").unwrap());
    models.push(corpus::load("octahedron_typeIII").unwrap());
    let mut count = 0;
    for m in &models {
        let z = m.zeta().map_err(|e| e.to_string())?;
        let chi = m.nearby_euler().map_err(|e| e.to_string())?;
        for p in m.pieces.iter().filter(|p| p.index.len() >= 2) {
            let b = m.blowup_stratum(&p.id).map_err(|e| format!("{} along {}: {e}", m.name, p.id))?;
            let bz = b.zeta().map_err(|e| e.to_string())?;
            let bchi = b.nearby_euler().map_err(|e| e.to_string())?;
            let degree = acampo_zeta(&b).map_err(|e| e.to_string())?.degree();
            ensure(bz == z && bchi == chi && degree == -chi.clone(), || b.name.clone())?;
            count += 1;
        }
        ensure(acampo_zeta(m).map_err(|e| e.to_string())?.degree() == -chi.clone(), || m.name.clone())?;
    }
    Ok(format!("{count} blow-ups preserve zeta, chi and sum d e_d = -chi"))
}

fn criterion_8() -> Check {
    let oct = corpus::load("octahedron_typeIII").unwrap();
    let sk = oct.essential_skeleton().map_err(|e| e.to_string())?;
    let pm = oct.pseudo_manifold_check(&sk).map_err(|e| e.to_string())?;
    let h = oct.skeleton_homology(&sk).map_err(|e| e.to_string())?;
    ensure(sk.delta == 2 && pm.closed() && h == vec![1, 0, 1], || format!("octahedron {pm:?} {h:?}"))?;

    let kul = corpus::load("kulikov_typeII").unwrap();
    let ksk = kul.essential_skeleton().map_err(|e| e.to_string())?;
    let kpm = kul.pseudo_manifold_check(&ksk).map_err(|e| e.to_string())?;
    let vertices: BTreeSet<&str> = kul.components.iter().map(|c| c.id.as_str()).collect();
    ensure(
        kpm.is_pseudo_manifold() && kpm.boundary.len() == 2 && kpm.boundary.iter().all(|b| vertices.contains(b.as_str())),
        || format!("interval boundary {:?}", kpm.boundary),
    )?;

    for m in corpus_models() {
        let s = m.essential_skeleton().map_err(|e| e.to_string())?;
        let c = m.pseudo_manifold_check(&s).map_err(|e| e.to_string())?;
        ensure(c.connected, || format!("{}: skeleton not connected", m.name))?;
    }
    Ok("octahedron closed with Betti (1,0,1); interval boundary is two vertices; all skeletons connected".into())
}

fn criterion_9() -> Check {
    for (name, c) in [("kodaira_II", (1, 6)), ("kodaira_III", (1, 4)), ("kodaira_IV", (1, 3)), ("kodaira_I0star", (1, 2))] {
        let m = corpus::load(name).unwrap();
        let want = rational::ratio(c.0, c.1);
        let q = m.largest_pole().map_err(|e| e.to_string())?;
        let w = m.min_weight().map_err(|e| e.to_string())?;
        ensure(q == want && rational::integer(1) - w == want, || format!("{name}: {q}"))?;
        let z = m.zeta().map_err(|e| e.to_string())?;
        ensure(check_abelian_theorem(&z, &want, 0).pass, || format!("{name}: not a unique simple pole"))?;
    }
    Ok("II, III, IV, I0*: c = 1/6, 1/4, 1/3, 1/2".into())
}

fn sharp_classes() -> Vec<MotClass> {
    ["1", "u^2 - 2*u + 1", "u^4 - 4*u^3 + 6*u^2 - 4*u + 1", "3"]
        .iter()
        .map(|s| parse_class(s).unwrap())
        .collect()
}

fn mutation_corpus() -> Vec<AbelianOracleTable> {
    let sharps = sharp_classes();
    let mut tables = Vec::new();
    for e in 1..=6u32 {
        let divisors: Vec<u32> = (1..=e).filter(|g| e % g == 0).collect();
        let ei = i64::from(e);
        for c in [rational::integer(0), rational::ratio(1, ei), rational::ratio(ei + 1, ei), rational::ratio(1, ei * ei)] {
            for v in 0..6usize {
                let groups: BTreeMap<u32, GroupData> = divisors
                    .iter()
                    .enumerate()
                    .map(|(i, &g)| {
                        let data = GroupData {
                            sharp: sharps[(v + 2 * i) % sharps.len()].clone(),
                            u_rank: ((v * (i + 1)) % 2) as u32,
                            tau: ((v + i) % 3) as u32,
                        };
                        (g, data)
                    })
                    .collect();
                tables.push(table_from_closed_form(e, &c, &groups, 4 * u64::from(e) + 6));
            }
        }
    }
    for (class0, t, ord) in [("1", 0, 0), ("u^2 - 1", 1, 0), ("2*u^4 - 4*u^2 + 2", 2, 3), ("u^2 - 2*u + 1", 0, -1)] {
        let inp = SemiAbelianInput {
            class0: parse_class(class0).unwrap(),
            t,
            ord,
        };
        tables.push(table_from_semiabelian(&inp, 12));
    }
    tables
}

fn mutations(tab: &AbelianOracleTable, d: u64) -> Vec<AbelianOracleTable> {
    let e = i64::from(tab.e);
    let mut out = Vec::new();
    let mut push = |f: &dyn Fn(&mut motzeta::abelian::TableRow)| {
        let mut t = tab.clone();
        f(t.rows.get_mut(&d).unwrap());
        out.push(t);
    };
    push(&|r| r.class += &MotClass::one());
    push(&|r| r.class -= &MotClass::one());
    push(&|r| r.class = &r.class * &MotClass::lefschetz());
    push(&|r| r.class += &MotClass::from_poly(LaurentPoly::monomial(1, 1)));
    push(&|r| r.ord += rational::ratio(1, e));
    push(&|r| r.ord -= rational::integer(1));
    push(&|r| r.t += 1);
    if tab.rows[&d].t > 0 {
        push(&|r| r.t -= 1);
    }
    out
}

fn criterion_10() -> Check {
    let tables = mutation_corpus();
    let mut total = 0usize;
    let mut missed = Vec::new();
    for tab in &tables {
        let diags = validate_oracle_table(tab);
        ensure(diags.is_empty(), || format!("closed-form table e = {} rejected: {}", tab.e, diags[0]))?;
        for &d in tab.rows.keys() {
            for bad in mutations(tab, d) {
                total += 1;
                if validate_oracle_table(&bad).is_empty() {
                    missed.push(format!("e = {}, c = {}, row {d}", tab.e, tab.c));
                }
            }
        }
    }
    ensure(missed.is_empty(), || format!("{} of {total} mutations undetected, first: {}", missed.len(), missed[0]))?;
    Ok(format!("{} tables accepted; {total} of {total} single-row mutations detected", tables.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("quartic K3 poles, skeleton, monodromy", criterion_1),
        ("largest pole has order delta + 1", criterion_2),
        ("maximal-order poles", criterion_3),
        ("I_n against the semi-abelian closed form", criterion_4),
        ("series consistency to depth 25", criterion_5),
        ("rescaling identity to depth 15", criterion_6),
        ("blow-up invariance", criterion_7),
        ("skeleton topology", criterion_8),
        ("Kodaira conductors", criterion_9),
        ("oracle-table mutation suite", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.2} s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.2} s)", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
