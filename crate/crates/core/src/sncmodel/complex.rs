//! The dual complex as a Delta-complex: one face per stratum piece.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{Indexed, ModelError, SncModel};
use crate::rational::{self, Rational};

/// Faces of the dual complex on which the weight function is minimal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    /// Component ids, in model order.
    pub vertices: Vec<String>,
    /// Piece ids, in model order; closed under taking faces.
    pub faces: Vec<String>,
    /// Degeneracy index: largest face dimension.
    pub delta: u32,
    pub min_weight: Rational,
    /// Weight `nu_i / N_i + 1` at every vertex of the dual complex.
    pub weights: BTreeMap<String, Rational>,
}

pub(super) fn essential_skeleton(m: &SncModel) -> Result<Skeleton, ModelError> {
    let ix = m.indexed()?;
    let ratio: Vec<Rational> = m.components.iter().map(|c| rational::ratio(c.nu, c.mult)).collect();
    let min = ratio.iter().min().expect("valid models have components").clone();
    let on = |c: usize| ratio[c] == min;
    let vertices = m
        .components
        .iter()
        .enumerate()
        .filter(|&(c, _)| on(c))
        .map(|(_, c)| c.id.clone())
        .collect();
    let mut faces = Vec::new();
    let mut delta = 0;
    for (p, j) in m.pieces.iter().zip(&ix.index) {
        if j.iter().all(|&c| on(c)) {
            faces.push(p.id.clone());
            delta = delta.max(j.len() as u32 - 1);
        }
    }
    let one = rational::integer(1);
    let weights = m
        .components
        .iter()
        .zip(&ratio)
        .map(|(c, r)| (c.id.clone(), r + &one))
        .collect();
    Ok(Skeleton {
        vertices,
        faces,
        delta,
        min_weight: min + one,
        weights,
    })
}

pub(super) fn mask(ix: &Indexed<'_>, sk: &Skeleton) -> Vec<bool> {
    let mut out = vec![false; ix.index.len()];
    for f in &sk.faces {
        if let Some(&p) = ix.piece.get(f.as_str()) {
            out[p] = true;
        }
    }
    out
}

/// Rank over `Q` by Gaussian elimination.
fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let inv = Rational::one() / &rows[r][col];
        let pivot_row: Vec<Rational> = rows[r].iter().map(|x| x * &inv).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        rows[r] = pivot_row;
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Cells of the masked subcomplex grouped by dimension.
fn cells(ix: &Indexed<'_>, on: &[bool]) -> Vec<Vec<usize>> {
    let top = (0..on.len()).filter(|&p| on[p]).map(|p| ix.index[p].len()).max().unwrap_or(0);
    let mut out = vec![Vec::new(); top];
    for p in (0..on.len()).filter(|&p| on[p]) {
        out[ix.index[p].len() - 1].push(p);
    }
    out
}

/// Betti numbers `b_0 .. b_top`; boundary signs follow model component order.
pub(super) fn betti(ix: &Indexed<'_>, on: &[bool]) -> Result<Vec<usize>, ModelError> {
    let cells = cells(ix, on);
    let mut ranks = vec![0usize; cells.len() + 1];
    for k in 1..cells.len() {
        let pos: BTreeMap<usize, usize> = cells[k - 1].iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut rows = Vec::with_capacity(cells[k].len());
        for &p in &cells[k] {
            let mut row = vec![Rational::zero(); cells[k - 1].len()];
            for (i, f) in ix.facet[p].iter().enumerate() {
                let f = f.ok_or_else(|| ModelError::MissingFacets(ix.model.pieces[p].id.clone()))?;
                let sign = if i % 2 == 0 { 1 } else { -1 };
                row[pos[&f]] += rational::integer(sign);
            }
            rows.push(row);
        }
        ranks[k] = rank(rows);
    }
    Ok((0..cells.len())
        .map(|k| cells[k].len() - ranks[k] - ranks[k + 1])
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoManifoldReport {
    pub connected: bool,
    /// Every face lies in a face of top dimension.
    pub pure: bool,
    /// Every codimension-one face lies in at most two top faces.
    pub thin: bool,
    /// Codimension-one faces lying in exactly one top face.
    pub boundary: Vec<String>,
    /// Faces not contained in any top face.
    pub non_pure: Vec<String>,
    /// Codimension-one faces lying in more than two top faces.
    pub branching: Vec<String>,
}

impl PseudoManifoldReport {
    pub fn is_pseudo_manifold(&self) -> bool {
        self.connected && self.pure && self.thin
    }

    pub fn closed(&self) -> bool {
        self.is_pseudo_manifold() && self.boundary.is_empty()
    }
}

pub(super) fn pseudo_manifold(ix: &Indexed<'_>, on: &[bool]) -> Result<PseudoManifoldReport, ModelError> {
    let cells = cells(ix, on);
    let ids = |ps: Vec<usize>| ps.into_iter().map(|p| ix.model.pieces[p].id.clone()).collect::<Vec<_>>();

    let vertices = cells.first().cloned().unwrap_or_default();
    let mut parent: BTreeMap<usize, usize> = vertices.iter().map(|&v| (v, v)).collect();
    fn find(parent: &mut BTreeMap<usize, usize>, x: usize) -> usize {
        let mut r = x;
        while parent[&r] != r {
            r = parent[&r];
        }
        parent.insert(x, r);
        r
    }
    if let Some(edges) = cells.get(1) {
        for &e in edges {
            let a = ix.face(e, ix.index[e][1])?;
            let b = ix.face(e, ix.index[e][0])?;
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent.insert(ra, rb);
        }
    }
    let roots: std::collections::BTreeSet<usize> = vertices.iter().map(|&v| find(&mut parent, v)).collect();
    let connected = roots.len() == 1;

    let mut covered = vec![false; on.len()];
    let mut stack: Vec<usize> = cells.last().cloned().unwrap_or_default();
    while let Some(p) = stack.pop() {
        if covered[p] {
            continue;
        }
        covered[p] = true;
        for f in &ix.facet[p] {
            stack.push(f.ok_or_else(|| ModelError::MissingFacets(ix.model.pieces[p].id.clone()))?);
        }
    }
    let non_pure: Vec<usize> = (0..on.len()).filter(|&p| on[p] && !covered[p]).collect();

    let mut boundary = Vec::new();
    let mut branching = Vec::new();
    if cells.len() >= 2 {
        let mut count: BTreeMap<usize, usize> = cells[cells.len() - 2].iter().map(|&p| (p, 0)).collect();
        for &t in &cells[cells.len() - 1] {
            for f in ix.facet[t].iter().flatten() {
                *count.get_mut(f).expect("faces of skeleton faces are in the skeleton") += 1;
            }
        }
        for (p, n) in count {
            match n {
                1 => boundary.push(p),
                0 | 2 => {}
                _ => branching.push(p),
            }
        }
    }
    Ok(PseudoManifoldReport {
        connected,
        pure: non_pure.is_empty(),
        thin: branching.is_empty(),
        boundary: ids(boundary),
        non_pure: ids(non_pure),
        branching: ids(branching),
    })
}
