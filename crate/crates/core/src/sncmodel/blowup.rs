//! Blowing up the closure of a stratum piece.
//!
//! Let `P` be a piece of `E_J^o` with `|J| = r >= 2`. The exceptional
//! component `E_0` gets `N_0 = sum N_j` and `nu_0 = sum nu_j`; the blow-up
//! is log crepant, so the log coefficient does not pick up a discrepancy.
//! Every piece `Q` with `J_Q = J + M` lying over `P` is replaced by pieces
//! `{0} + K + M` for `K` a proper subset of `J`, with class
//! `[E~_Q^o] (L-1)^{r-1-|K|}`: over `Q` the exceptional divisor is a
//! `P^{r-1}`-bundle and the new piece is the torus orbit of the coordinate
//! subspace indexed by `K`.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;

use super::{Component, Indexed, ModelError, Piece, SncModel};
use crate::vpoly::MotClass;

fn unsupported() -> ModelError {
    ModelError::Blowup("unsupported: nontrivial cover transport".into())
}

fn fresh(taken: &mut BTreeSet<String>, base: String) -> String {
    let mut id = base;
    while taken.contains(&id) {
        id.push('\'');
    }
    taken.insert(id.clone());
    id
}

pub(super) fn blowup(m: &SncModel, piece: &str) -> Result<SncModel, ModelError> {
    let ix = m.indexed()?;
    let p = ix.piece_of(piece)?;
    let j = ix.index[p].clone();
    let r = j.len();
    if r < 2 {
        return Err(ModelError::Blowup("the stratum must have codimension at least two".into()));
    }
    let n = ix.mult(j[0]);
    if j.iter().any(|&c| ix.mult(c) != n) {
        return Err(unsupported());
    }

    // pieces over P, with their extra components M
    let jset: BTreeSet<usize> = j.iter().copied().collect();
    let mut over: Vec<(usize, Vec<usize>)> = Vec::new();
    for (q, jq) in ix.index.iter().enumerate() {
        if !jset.iter().all(|c| jq.contains(c)) {
            continue;
        }
        let extra: Vec<usize> = jq.iter().copied().filter(|c| !jset.contains(c)).collect();
        if ix.face_by(q, &extra)? == p {
            over.push((q, extra));
        }
    }
    for (_, extra) in &over {
        let nm = extra.iter().fold(0, |g, &c| g.gcd(&ix.mult(c)));
        let (before, after) = if extra.is_empty() {
            (n, n * r as i64)
        } else {
            (n.gcd(&nm), (n * r as i64).gcd(&nm))
        };
        if before != after && !(extra.is_empty() && n == 1) {
            return Err(unsupported());
        }
    }
    let removed: BTreeSet<usize> = over.iter().map(|(q, _)| *q).collect();

    let mut comp_ids: BTreeSet<String> = m.components.iter().map(|c| c.id.clone()).collect();
    let mut piece_ids: BTreeSet<String> = m
        .pieces
        .iter()
        .enumerate()
        .filter(|(k, _)| !removed.contains(k))
        .map(|(_, p)| p.id.clone())
        .collect();
    let e0 = fresh(&mut comp_ids, format!("X_{piece}"));
    let mut components = m.components.clone();
    components.push(Component {
        id: e0.clone(),
        mult: n * r as i64,
        nu: j.iter().map(|&c| ix.nu(c)).sum(),
    });

    let cid = |c: usize| m.components[c].id.clone();
    let mut pieces = Vec::new();
    for (k, piece) in m.pieces.iter().enumerate() {
        if removed.contains(&k) {
            continue;
        }
        pieces.push(Piece {
            facets: explicit_facets(&ix, k),
            ..piece.clone()
        });
    }

    // subsets of J by bit mask; the full mask is excluded
    let subsets: Vec<u32> = (0..(1u32 << r) - 1).collect();
    let members = |mask: u32| -> Vec<usize> { (0..r).filter(|&i| mask & (1 << i) != 0).map(|i| j[i]).collect() };
    let mut new_id: BTreeMap<(usize, u32), String> = BTreeMap::new();
    for (q, _) in &over {
        for &mask in &subsets {
            let kids: Vec<String> = members(mask).into_iter().map(cid).collect();
            let base = format!("{}@{}", m.pieces[*q].id, kids.join("+"));
            new_id.insert((*q, mask), fresh(&mut piece_ids, base));
        }
    }
    let gm = MotClass::gm();
    for (q, extra) in &over {
        for &mask in &subsets {
            let kset = members(mask);
            let mut index: Vec<String> = vec![e0.clone()];
            index.extend(kset.iter().map(|&c| cid(c)));
            index.extend(extra.iter().map(|&c| cid(c)));
            let tilde_class = &m.pieces[*q].tilde_class * &gm.pow((r - 1 - kset.len()) as u32);
            let mut facets = BTreeMap::new();
            if !(kset.is_empty() && extra.is_empty()) {
                let drop: Vec<usize> = j.iter().copied().filter(|c| !kset.contains(c)).collect();
                facets.insert(e0.clone(), m.pieces[ix.face_by(*q, &drop)?].id.clone());
            }
            for (i, &c) in j.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    facets.insert(cid(c), new_id[&(*q, mask & !(1 << i))].clone());
                }
            }
            for &c in extra {
                let below = ix.face(*q, c)?;
                facets.insert(cid(c), new_id[&(below, mask)].clone());
            }
            pieces.push(Piece {
                id: new_id[&(*q, mask)].clone(),
                index,
                tilde_class,
                facets: (!facets.is_empty()).then_some(facets),
            });
        }
    }
    Ok(SncModel {
        name: format!("{} blown up along {piece}", m.name),
        dim: m.dim,
        components,
        pieces,
    })
}

fn explicit_facets(ix: &Indexed<'_>, k: usize) -> Option<BTreeMap<String, String>> {
    let j = &ix.index[k];
    if j.len() < 2 {
        return None;
    }
    let m = ix.model;
    j.iter()
        .zip(&ix.facet[k])
        .map(|(&c, f)| f.map(|q| (m.components[c].id.clone(), m.pieces[q].id.clone())))
        .collect()
}
