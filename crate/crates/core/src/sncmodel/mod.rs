//! Combinatorial snc-models.
//!
//! A model lists the components `E_i` of the special fiber with their
//! multiplicities `N_i` and the coefficients `nu_i` of the volume form, and
//! the connected pieces of every stratum `E_J^o` with the class of the
//! `mu_{N_J}`-cover over that piece.
//!
//! `nu_i` is the coefficient of `E_i` in the divisor of the form viewed as a
//! section of the log relative canonical bundle; it may be negative.
//! Concretely `nu_i = k_i + 1 - N_i` where `k_i` is the coefficient in the
//! ordinary relative canonical divisor.

mod blowup;
mod complex;
pub mod corpus;
pub mod random;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{self, Rational};
use crate::vpoly::MotClass;
use crate::zeta::{DenomFactor, GeomTerm, ZetaExpr};

pub use complex::{PseudoManifoldReport, Skeleton};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub id: String,
    #[serde(rename = "N")]
    pub mult: i64,
    pub nu: i64,
}

/// A connected piece of a stratum `E_J^o`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    pub id: String,
    #[serde(rename = "J")]
    pub index: Vec<String>,
    pub tilde_class: MotClass,
    /// Component `j` to the piece of `J \ {j}` containing this one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facets: Option<BTreeMap<String, String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SncModel {
    pub name: String,
    pub dim: u32,
    pub components: Vec<Component>,
    pub pieces: Vec<Piece>,
}

/// A validation finding about one component or piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub subject: String,
    pub message: String,
}

impl Diagnostic {
    fn new(subject: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            subject: subject.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.subject, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid model: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
    #[error("unknown piece '{0}'")]
    UnknownPiece(String),
    #[error("missing facets for piece '{0}'")]
    MissingFacets(String),
    #[error("inconsistent cover class for component '{0}'")]
    InconsistentCover(String),
    #[error("weight coordinates: {0}")]
    Weight(String),
    #[error("blow-up: {0}")]
    Blowup(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelParseError {
    #[error("{message} at line {line} column {column}")]
    Json { line: usize, column: usize, message: String },
    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),
    #[error("generator {0}")]
    Generator(String),
}

impl From<serde_json::Error> for ModelParseError {
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

/// Parses the model schema, or a generator stub `{"generator": .., "n": ..}`.
/// `n_override` replaces the generator parameter.
pub fn parse_model(text: &str, n_override: Option<u32>) -> Result<SncModel, ModelParseError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if let Some(gen) = value.get("generator") {
        let name = gen
            .as_str()
            .ok_or_else(|| ModelParseError::Generator("name must be a string".into()))?;
        if name != "kodaira_In" {
            return Err(ModelParseError::UnknownGenerator(name.to_string()));
        }
        let n = match n_override {
            Some(n) => n,
            None => {
                let n = value
                    .get("n")
                    .and_then(serde_json::Value::as_u64)
                    .ok_or_else(|| ModelParseError::Generator("needs a nonnegative integer 'n'".into()))?;
                u32::try_from(n).map_err(|_| ModelParseError::Generator("'n' out of range".into()))?
            }
        };
        return corpus::kodaira_in(n).map_err(|e| ModelParseError::Generator(e.to_string()));
    }
    Ok(serde_json::from_str(text)?)
}

/// Resolved indices of a valid model.
pub(crate) struct Indexed<'a> {
    pub model: &'a SncModel,
    pub comp: HashMap<&'a str, usize>,
    pub piece: HashMap<&'a str, usize>,
    /// Sorted component positions of each piece.
    pub index: Vec<Vec<usize>>,
    /// `facet[p][k]`: the piece obtained by dropping `index[p][k]`.
    pub facet: Vec<Vec<Option<usize>>>,
}

impl<'a> Indexed<'a> {
    fn build(model: &'a SncModel) -> Self {
        let comp: HashMap<&str, usize> = model
            .components
            .iter()
            .enumerate()
            .map(|(k, c)| (c.id.as_str(), k))
            .collect();
        let piece: HashMap<&str, usize> = model
            .pieces
            .iter()
            .enumerate()
            .map(|(k, p)| (p.id.as_str(), k))
            .collect();
        let index: Vec<Vec<usize>> = model
            .pieces
            .iter()
            .map(|p| {
                let s: BTreeSet<usize> = p.index.iter().filter_map(|j| comp.get(j.as_str()).copied()).collect();
                s.into_iter().collect()
            })
            .collect();
        let mut by_index: HashMap<&[usize], Vec<usize>> = HashMap::new();
        for (k, j) in index.iter().enumerate() {
            by_index.entry(j.as_slice()).or_default().push(k);
        }
        let facet = model
            .pieces
            .iter()
            .enumerate()
            .map(|(p, piece_data)| {
                let j = &index[p];
                if j.len() < 2 {
                    return Vec::new();
                }
                (0..j.len())
                    .map(|k| {
                        let cid = model.components[j[k]].id.as_str();
                        if let Some(f) = &piece_data.facets {
                            return f.get(cid).and_then(|q| piece.get(q.as_str()).copied());
                        }
                        let rest: Vec<usize> = j.iter().copied().filter(|&x| x != j[k]).collect();
                        match by_index.get(rest.as_slice()).map(Vec::as_slice) {
                            Some([only]) => Some(*only),
                            _ => None,
                        }
                    })
                    .collect()
            })
            .collect();
        Self {
            model,
            comp,
            piece,
            index,
            facet,
        }
    }

    pub fn piece_of(&self, id: &str) -> Result<usize, ModelError> {
        self.piece.get(id).copied().ok_or_else(|| ModelError::UnknownPiece(id.to_string()))
    }

    /// The piece obtained from `p` by dropping component `c`.
    pub fn face(&self, p: usize, c: usize) -> Result<usize, ModelError> {
        self.index[p]
            .iter()
            .position(|&x| x == c)
            .and_then(|k| self.facet[p].get(k).copied().flatten()).ok_or_else(|| ModelError::MissingFacets(self.model.pieces[p].id.clone()))
    }

    /// The piece of `drop`'s complement in `index[p]` containing `p`.
    pub fn face_by(&self, p: usize, drop: &[usize]) -> Result<usize, ModelError> {
        drop.iter().try_fold(p, |q, &c| self.face(q, c))
    }

    pub fn mult(&self, c: usize) -> i64 {
        self.model.components[c].mult
    }

    pub fn nu(&self, c: usize) -> i64 {
        self.model.components[c].nu
    }
}

impl SncModel {
    /// All violated invariants; empty iff the model is valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if self.dim == 0 {
            out.push(Diagnostic::new(&self.name, "dimension must be positive"));
        }
        let mut seen = BTreeSet::new();
        for c in &self.components {
            if !seen.insert(c.id.as_str()) {
                out.push(Diagnostic::new(&c.id, "duplicate component id"));
            }
            if c.mult < 1 {
                out.push(Diagnostic::new(&c.id, "multiplicity must be positive"));
            }
        }
        let mut seen = BTreeSet::new();
        for p in &self.pieces {
            if !seen.insert(p.id.as_str()) {
                out.push(Diagnostic::new(&p.id, "duplicate piece id"));
            }
        }
        let ix = Indexed::build(self);
        let bound = self.dim as usize + 1;
        let mut singletons = vec![0usize; self.components.len()];
        for (k, p) in self.pieces.iter().enumerate() {
            if p.index.is_empty() {
                out.push(Diagnostic::new(&p.id, "empty stratum index"));
                continue;
            }
            for j in &p.index {
                if !ix.comp.contains_key(j.as_str()) {
                    out.push(Diagnostic::new(&p.id, format!("unknown component '{j}'")));
                }
            }
            if ix.index[k].len() != p.index.len() && p.index.iter().all(|j| ix.comp.contains_key(j.as_str())) {
                out.push(Diagnostic::new(&p.id, "repeated component in stratum"));
            }
            if p.index.len() > bound {
                out.push(Diagnostic::new(&p.id, "stratum exceeds dimension bound"));
            }
            if let [c] = ix.index[k][..] {
                singletons[c] += 1;
            }
            let want = i64::from(self.dim) + 1 - p.index.len() as i64;
            if want >= 0 && !p.tilde_class.is_effective_of_dim(want) {
                out.push(Diagnostic::new(&p.id, "class dimension does not match stratum"));
            }
            self.check_facets(&ix, k, &mut out);
        }
        for (c, n) in self.components.iter().zip(&singletons) {
            match n {
                0 => out.push(Diagnostic::new(&c.id, "component has no singleton piece")),
                1 => {}
                _ => out.push(Diagnostic::new(&c.id, "component has several singleton pieces")),
            }
        }
        if !self.components.is_empty() && !self.is_connected(&ix) {
            out.push(Diagnostic::new(&self.name, "dual complex is not connected"));
        }
        if self.components.is_empty() {
            out.push(Diagnostic::new(&self.name, "model has no components"));
        }
        out
    }

    fn check_facets(&self, ix: &Indexed<'_>, k: usize, out: &mut Vec<Diagnostic>) {
        let p = &self.pieces[k];
        let Some(f) = &p.facets else {
            return;
        };
        if p.index.len() < 2 {
            if !f.is_empty() {
                out.push(Diagnostic::new(&p.id, "facets given for a vertex"));
            }
            return;
        }
        let keys: BTreeSet<&str> = f.keys().map(String::as_str).collect();
        let want: BTreeSet<&str> = p.index.iter().map(String::as_str).collect();
        if keys != want {
            out.push(Diagnostic::new(&p.id, "facet keys must match stratum"));
            return;
        }
        for (c, q) in f {
            let Some(&qk) = ix.piece.get(q.as_str()) else {
                out.push(Diagnostic::new(&p.id, format!("unknown facet piece '{q}'")));
                continue;
            };
            let mut rest: BTreeSet<&str> = want.clone();
            rest.remove(c.as_str());
            let got: BTreeSet<&str> = self.pieces[qk].index.iter().map(String::as_str).collect();
            if got != rest {
                out.push(Diagnostic::new(&p.id, format!("facet '{q}' has the wrong index set")));
            }
        }
        // faces of faces must agree
        let j = &ix.index[k];
        if j.len() < 3 {
            return;
        }
        for a in 0..j.len() {
            for b in a + 1..j.len() {
                let ab = ix.facet[k][b].and_then(|q| ix.face(q, j[a]).ok());
                let ba = ix.facet[k][a].and_then(|q| ix.face(q, j[b]).ok());
                if let (Some(x), Some(y)) = (ab, ba) {
                    if x != y {
                        out.push(Diagnostic::new(&p.id, "facet incidences are inconsistent"));
                        return;
                    }
                }
            }
        }
    }

    fn is_connected(&self, ix: &Indexed<'_>) -> bool {
        let n = self.components.len();
        let mut adj = vec![Vec::new(); n];
        for j in &ix.index {
            for w in j.windows(2) {
                adj[w[0]].push(w[1]);
                adj[w[1]].push(w[0]);
            }
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub(crate) fn indexed(&self) -> Result<Indexed<'_>, ModelError> {
        let diags = self.validate();
        if !diags.is_empty() {
            return Err(ModelError::Invalid(diags));
        }
        Ok(Indexed::build(self))
    }

    /// The zeta function
    /// `sum_J [E~_J^o] (L-1)^{|J|-1} prod_{j in J} L^{-nu_j} T^{N_j} / (1 - L^{-nu_j} T^{N_j})`.
    pub fn zeta(&self) -> Result<ZetaExpr, ModelError> {
        let ix = self.indexed()?;
        let gm = MotClass::gm();
        let terms = self.pieces.iter().zip(&ix.index).map(|(p, j)| {
            let nu: i64 = j.iter().map(|&c| ix.nu(c)).sum();
            let tpow: i64 = j.iter().map(|&c| ix.mult(c)).sum();
            let coeff = (&p.tilde_class * &gm.pow(j.len() as u32 - 1)).shift(-2 * nu);
            let factors = j.iter().map(|&c| DenomFactor::new(-ix.nu(c), ix.mult(c) as u32));
            GeomTerm::new(coeff, tpow as u32, factors)
        });
        Ok(ZetaExpr::from_terms(terms))
    }

    /// `min_i nu_i / N_i`.
    fn min_ratio(&self) -> Result<Rational, ModelError> {
        self.indexed()?;
        Ok(self
            .components
            .iter()
            .map(|c| rational::ratio(c.nu, c.mult))
            .min()
            .expect("valid models have components"))
    }

    /// `min(omega) = min_i nu_i / N_i + 1`.
    pub fn min_weight(&self) -> Result<Rational, ModelError> {
        Ok(self.min_ratio()? + rational::integer(1))
    }

    /// `1 - min(omega)`.
    pub fn largest_pole(&self) -> Result<Rational, ModelError> {
        Ok(-self.min_ratio()?)
    }

    /// Value of the weight function at the point of the face of `piece` with
    /// coordinates `w` (`w_j >= 0`, `sum w_j N_j = 1`): `sum w_j nu_j + 1`.
    pub fn weight_at(&self, piece: &str, w: &BTreeMap<String, Rational>) -> Result<Rational, ModelError> {
        let ix = self.indexed()?;
        let p = ix.piece_of(piece)?;
        let keys: BTreeSet<&str> = w.keys().map(String::as_str).collect();
        let want: BTreeSet<&str> = self.pieces[p].index.iter().map(String::as_str).collect();
        if keys != want {
            return Err(ModelError::Weight("coordinates must be indexed by the stratum".into()));
        }
        if w.values().any(Signed::is_negative) {
            return Err(ModelError::Weight("coordinates must be nonnegative".into()));
        }
        let mut total = Rational::zero();
        let mut value = rational::integer(1);
        for (id, x) in w {
            let c = ix.comp[id.as_str()];
            total += x * rational::integer(ix.mult(c));
            value += x * rational::integer(ix.nu(c));
        }
        if total != rational::integer(1) {
            return Err(ModelError::Weight("sum of w_j N_j must be 1".into()));
        }
        Ok(value)
    }

    /// `chi(E_i^o) = chi(E~_i^o) / N_i` for every component.
    pub fn euler_open_strata(&self) -> Result<BTreeMap<String, BigInt>, ModelError> {
        let ix = self.indexed()?;
        let mut out = BTreeMap::new();
        for (p, j) in self.pieces.iter().zip(&ix.index) {
            let [c] = j[..] else {
                continue;
            };
            let (q, r) = p.tilde_class.euler_char().div_rem(&BigInt::from(ix.mult(c)));
            if !r.is_zero() {
                return Err(ModelError::InconsistentCover(self.components[c].id.clone()));
            }
            out.insert(self.components[c].id.clone(), q);
        }
        Ok(out)
    }

    /// `sum_i N_i chi(E_i^o)`.
    pub fn nearby_euler(&self) -> Result<BigInt, ModelError> {
        let chi = self.euler_open_strata()?;
        Ok(self
            .components
            .iter()
            .map(|c| BigInt::from(c.mult) * &chi[&c.id])
            .sum())
    }

    /// `N_J = gcd { N_j : j in J }` of a piece.
    pub fn cover_degree(&self, piece: &str) -> Result<i64, ModelError> {
        let ix = self.indexed()?;
        let p = ix.piece_of(piece)?;
        Ok(ix.index[p].iter().fold(0, |g, &c| g.gcd(&ix.mult(c))))
    }

    pub fn essential_skeleton(&self) -> Result<Skeleton, ModelError> {
        complex::essential_skeleton(self)
    }

    pub fn degeneracy_index(&self) -> Result<u32, ModelError> {
        Ok(self.essential_skeleton()?.delta)
    }

    /// Rational Betti numbers of the whole dual complex.
    pub fn dual_complex_homology(&self) -> Result<Vec<usize>, ModelError> {
        let ix = self.indexed()?;
        complex::betti(&ix, &vec![true; self.pieces.len()])
    }

    /// Rational Betti numbers of the essential skeleton.
    pub fn skeleton_homology(&self, sk: &Skeleton) -> Result<Vec<usize>, ModelError> {
        let ix = self.indexed()?;
        complex::betti(&ix, &complex::mask(&ix, sk))
    }

    pub fn pseudo_manifold_check(&self, sk: &Skeleton) -> Result<PseudoManifoldReport, ModelError> {
        let ix = self.indexed()?;
        complex::pseudo_manifold(&ix, &complex::mask(&ix, sk))
    }

    /// Blows up the closure of the stratum piece `piece`.
    pub fn blowup_stratum(&self, piece: &str) -> Result<SncModel, ModelError> {
        blowup::blowup(self, piece)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("models serialize")
    }
}
