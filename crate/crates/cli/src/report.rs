//! Report types emitted by the subcommands, with their text renderings.
//!
//! Every report serializes to the JSON schema documented in
//! `docs/schemas.md` and deserializes back to an equal value.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use motzeta::abelian::{
    check_abelian_theorem, validate_oracle_table, zeta_semiabelian, zeta_truncated, AbelianInput, AbelianOracleTable,
};
use motzeta::monodromy::{acampo_zeta, MpReport, Status};
use motzeta::rational::{self, Rational};
use motzeta::sncmodel::{ModelError, SncModel};
use motzeta::{MotClass, PoleReport, ZetaExpr};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

fn small(n: &BigInt) -> Result<i64, String> {
    n.to_i64().ok_or_else(|| format!("integer {n} does not fit in 64 bits"))
}

fn classes(v: &[MotClass]) -> Vec<String> {
    v.iter().map(MotClass::render).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorEntry {
    pub a: i64,
    pub b: u32,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaReport {
    pub model: String,
    pub normal_form: String,
    /// Coefficients of `T^0, T^1, ...` of the numerator.
    pub numerator: Vec<String>,
    /// Factors `(1 - L^a T^b)^multiplicity`, in normal-form order.
    pub denominator: Vec<FactorEntry>,
}

impl ZetaReport {
    pub fn new(model: &SncModel) -> Result<Self, ModelError> {
        let z = model.zeta()?;
        let nf = z.normal_form();
        Ok(Self {
            model: model.name.clone(),
            normal_form: z.render(),
            numerator: classes(&nf.numerator),
            denominator: nf
                .denominator
                .iter()
                .map(|(f, &m)| FactorEntry {
                    a: f.a,
                    b: f.b,
                    multiplicity: m,
                })
                .collect(),
        })
    }

    pub fn text(&self) -> String {
        format!("model: {}\nZ(T) = {}\n", self.model, self.normal_form)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub model: String,
    pub depth: usize,
    /// Coefficients of `T^1 .. T^depth`.
    pub coefficients: Vec<String>,
}

impl SeriesReport {
    pub fn new(model: &SncModel, depth: usize) -> Result<Self, ModelError> {
        Ok(Self {
            model: model.name.clone(),
            depth,
            coefficients: classes(&model.zeta()?.series_expand(depth)),
        })
    }

    pub fn text(&self) -> String {
        let mut out = format!("model: {}\n", self.model);
        for (d, c) in self.coefficients.iter().enumerate() {
            let _ = writeln!(out, "T^{}: {c}", d + 1);
        }
        out
    }
}

/// Pole report of a model, restricted to one `q` when asked.
pub fn poles(model: &SncModel, q: Option<&Rational>) -> Result<PoleReport, ModelError> {
    let z = model.zeta()?;
    let mut report = PoleReport::for_expr(&z);
    if let Some(q) = q {
        report.entries.retain(|e| &e.q == q);
        if report.entries.is_empty() {
            report.entries.push(single_pole(&z, q));
        }
    }
    Ok(report)
}

fn single_pole(z: &ZetaExpr, q: &Rational) -> motzeta::zeta::PoleEntry {
    let a = q.numer().to_i64().expect("small pole");
    let b = q.denom().to_i64().expect("small pole");
    let ord = motzeta::zeta::certify_pole_order(z, a, b).expect("reduced");
    motzeta::zeta::PoleEntry {
        q: q.clone(),
        upper: ord.upper,
        lower: ord.lower,
        certified: ord.certified(),
    }
}

pub fn poles_text(r: &PoleReport) -> String {
    if r.entries.is_empty() {
        return "no poles\n".to_string();
    }
    r.entries
        .iter()
        .map(|e| {
            let status = match (e.upper, e.certified) {
                (0, _) => "not a pole",
                (_, true) => "certified",
                (_, false) => "bounds only",
            };
            format!(
                "q = {}  lower = {}  upper = {}  {status}\n",
                rational::render(&e.q),
                e.lower,
                e.upper
            )
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonReport {
    pub model: String,
    pub vertices: Vec<String>,
    pub faces: Vec<String>,
    pub delta: u32,
    pub min_weight: String,
    /// Weight at every vertex of the dual complex.
    pub weights: BTreeMap<String, String>,
}

impl SkeletonReport {
    pub fn new(model: &SncModel) -> Result<Self, ModelError> {
        let sk = model.essential_skeleton()?;
        Ok(Self {
            model: model.name.clone(),
            vertices: sk.vertices,
            faces: sk.faces,
            delta: sk.delta,
            min_weight: rational::render(&sk.min_weight),
            weights: sk.weights.iter().map(|(k, w)| (k.clone(), rational::render(w))).collect(),
        })
    }

    pub fn text(&self) -> String {
        let weights: Vec<String> = self.weights.iter().map(|(k, w)| format!("{k}={w}")).collect();
        format!(
            "model: {}\nmin(omega) = {}\ndelta = {}\nvertices: {}\nfaces: {}\nweights: {}\n",
            self.model,
            self.min_weight,
            self.delta,
            self.vertices.join(", "),
            self.faces.join(", "),
            weights.join(", ")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceEntry {
    pub id: String,
    pub vertices: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyReport {
    pub model: String,
    /// Rational Betti numbers of the dual complex.
    pub dual_complex_betti: Vec<usize>,
    /// Rational Betti numbers of the essential skeleton.
    pub skeleton_betti: Vec<usize>,
    pub delta: u32,
    pub connected: bool,
    pub pure: bool,
    pub thin: bool,
    pub pseudo_manifold: bool,
    pub closed: bool,
    pub boundary: Vec<String>,
    pub non_pure: Vec<String>,
    pub branching: Vec<String>,
    /// Every face of the dual complex.
    pub faces: Vec<FaceEntry>,
}

impl TopologyReport {
    pub fn new(model: &SncModel) -> Result<Self, ModelError> {
        let sk = model.essential_skeleton()?;
        let pm = model.pseudo_manifold_check(&sk)?;
        Ok(Self {
            model: model.name.clone(),
            dual_complex_betti: model.dual_complex_homology()?,
            skeleton_betti: model.skeleton_homology(&sk)?,
            delta: sk.delta,
            connected: pm.connected,
            pure: pm.pure,
            thin: pm.thin,
            pseudo_manifold: pm.is_pseudo_manifold(),
            closed: pm.closed(),
            boundary: pm.boundary,
            non_pure: pm.non_pure,
            branching: pm.branching,
            faces: model
                .pieces
                .iter()
                .map(|p| FaceEntry {
                    id: p.id.clone(),
                    vertices: p.index.clone(),
                })
                .collect(),
        })
    }

    pub fn text(&self) -> String {
        let join = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        let yes = |b: bool| if b { "yes" } else { "no" };
        let mut out = format!(
            "model: {}\nbetti(dual complex) = ({})\nbetti(skeleton) = ({})\ndelta = {}\npseudo-manifold: {}\nclosed: {}\n",
            self.model,
            join(&self.dual_complex_betti),
            join(&self.skeleton_betti),
            self.delta,
            yes(self.pseudo_manifold),
            yes(self.closed)
        );
        for (label, list) in [("boundary", &self.boundary), ("non-pure", &self.non_pure), ("branching", &self.branching)] {
            if !list.is_empty() {
                let _ = writeln!(out, "{label}: {}", list.join(", "));
            }
        }
        let top = self.faces.iter().map(|f| f.vertices.len()).max().unwrap_or(0);
        for k in 1..=top {
            let _ = writeln!(out, "{}-cells:", k - 1);
            for f in self.faces.iter().filter(|f| f.vertices.len() == k) {
                let _ = writeln!(out, "  {}: {}", f.id, f.vertices.join(" - "));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerEntry {
    pub d: u64,
    pub e: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicEntry {
    pub m: u64,
    pub c: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonodromyReport {
    pub model: String,
    /// `prod (t^d - 1)^e`.
    pub zeta: String,
    pub factors: Vec<PowerEntry>,
    /// Exponent `c_m` of the cyclotomic polynomial `Phi_m`, zeros omitted.
    pub cyclotomic: Vec<CyclotomicEntry>,
    pub degree: i64,
    pub nearby_euler: i64,
    pub euler_open_strata: BTreeMap<String, i64>,
}

impl MonodromyReport {
    pub fn new(model: &SncModel) -> Result<Self, String> {
        let z = acampo_zeta(model).map_err(|e| e.to_string())?;
        let factors = z
            .exponents()
            .iter()
            .map(|(d, e)| Ok(PowerEntry { d: *d, e: small(e)? }))
            .collect::<Result<_, String>>()?;
        let cyclotomic = z
            .cyclotomic_multiplicities()
            .iter()
            .map(|(m, c)| Ok(CyclotomicEntry { m: *m, c: small(c)? }))
            .collect::<Result<_, String>>()?;
        let chi = model.euler_open_strata().map_err(|e| e.to_string())?;
        Ok(Self {
            model: model.name.clone(),
            zeta: z.render(),
            factors,
            cyclotomic,
            degree: small(&z.degree())?,
            nearby_euler: small(&model.nearby_euler().map_err(|e| e.to_string())?)?,
            euler_open_strata: chi
                .iter()
                .map(|(k, v)| Ok((k.clone(), small(v)?)))
                .collect::<Result<_, String>>()?,
        })
    }

    pub fn text(&self) -> String {
        let c: Vec<String> = self.cyclotomic.iter().map(|e| format!("c_{} = {}", e.m, e.c)).collect();
        format!(
            "model: {}\nzeta(t) = {}\ncyclotomic exponents: {}\ndegree = {}\nchi(nearby fiber) = {}\n",
            self.model,
            self.zeta,
            if c.is_empty() { "none".to_string() } else { c.join(", ") },
            self.degree,
            self.nearby_euler
        )
    }
}

pub fn check_mp_text(model: &str, r: &MpReport) -> String {
    let status = |s: Status| match s {
        Status::Certified => "certified",
        Status::Inconclusive => "inconclusive",
    };
    let mut out = format!("model: {model}\n");
    for p in &r.poles {
        let _ = writeln!(
            out,
            "pole q = {}: m = {}, c_m = {}, {}",
            rational::render(&p.q),
            p.m,
            p.c_m,
            status(p.status)
        );
    }
    let _ = writeln!(out, "verdict: {}", status(r.verdict));
    let _ = writeln!(
        out,
        "predicted: eigenvalue {} with a Jordan block of size >= {} (min(omega) = {})",
        r.predictions.eigenvalue,
        r.predictions.jordan_block_at_least,
        rational::render(&r.predictions.min_weight)
    );
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableIssue {
    pub rows: Vec<u64>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub c: String,
    pub t_pot: u32,
    pub pass: bool,
    pub lower: u32,
    pub upper: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianReport {
    pub mode: String,
    pub valid: bool,
    pub diagnostics: Vec<TableIssue>,
    /// Variable of the series coefficients: `u`, or `w` with `u = w^e`.
    pub variable: String,
    /// Coefficients of `T^1 .. T^depth`.
    pub series: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poles: Option<PoleReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<TheoremCheck>,
}

/// Largest `D` with rows `1 ..= D` all present.
fn prefix_depth(tab: &AbelianOracleTable) -> u64 {
    (1..).take_while(|d| tab.rows.contains_key(d)).last().unwrap_or(0)
}

impl AbelianReport {
    pub fn new(input: &AbelianInput, depth: Option<u64>) -> Result<Self, String> {
        match input {
            AbelianInput::SemiAbelian(s) => {
                let z = zeta_semiabelian(s);
                let zero = rational::integer(0);
                let v = check_abelian_theorem(&z, &zero, s.t);
                Ok(Self {
                    mode: "semiabelian".into(),
                    valid: true,
                    diagnostics: vec![],
                    variable: "u".into(),
                    series: classes(&z.series_expand(depth.unwrap_or(10) as usize)),
                    zeta: Some(z.render()),
                    poles: Some(PoleReport::for_expr(&z)),
                    theorem: Some(TheoremCheck {
                        c: rational::render(&zero),
                        t_pot: s.t,
                        pass: v.pass,
                        lower: v.order_at_c.0,
                        upper: v.order_at_c.1,
                    }),
                })
            }
            AbelianInput::Table(tab) => {
                let diagnostics: Vec<TableIssue> = validate_oracle_table(tab)
                    .into_iter()
                    .map(|d| TableIssue {
                        rows: d.rows,
                        message: d.message,
                    })
                    .collect();
                let depth = depth.unwrap_or_else(|| prefix_depth(tab));
                let series = zeta_truncated(tab, depth).map_err(|e| e.to_string())?;
                let variable = if tab.e > 1 { "w" } else { "u" };
                Ok(Self {
                    mode: "table".into(),
                    valid: diagnostics.is_empty(),
                    diagnostics,
                    variable: variable.into(),
                    series: series.iter().map(|c| c.poly().render(variable)).collect(),
                    zeta: None,
                    poles: None,
                    theorem: None,
                })
            }
        }
    }

    pub fn text(&self) -> String {
        let mut out = format!("mode: {}\n", self.mode);
        if self.variable != "u" {
            let _ = writeln!(out, "coefficients in {} = u^(1/e)", self.variable);
        }
        if let Some(z) = &self.zeta {
            let _ = writeln!(out, "Z(T) = {z}");
        }
        if let Some(p) = &self.poles {
            out.push_str(&poles_text(p));
        }
        if let Some(t) = &self.theorem {
            let verdict = if t.pass { "pass" } else { "fail" };
            let _ = writeln!(
                out,
                "unique pole {} of order {}: {verdict} (lower = {}, upper = {})",
                t.c,
                t.t_pot + 1,
                t.lower,
                t.upper
            );
        }
        for d in &self.diagnostics {
            let rows: Vec<String> = d.rows.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "violation (rows {}): {}", rows.join(","), d.message);
        }
        for (d, c) in self.series.iter().enumerate() {
            let _ = writeln!(out, "T^{}: {c}", d + 1);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub input: String,
    pub kind: String,
    pub valid: bool,
    pub diagnostics: Vec<String>,
}

impl ValidateReport {
    pub fn text(&self) -> String {
        let mut out = if self.valid {
            format!("{}: valid {}\n", self.input, self.kind)
        } else {
            format!("{}: invalid {}\n", self.input, self.kind)
        };
        for d in &self.diagnostics {
            let _ = writeln!(out, "  {d}");
        }
        out
    }
}
