//! Seeded random valid models for property testing.
//!
//! The dual complex is a connected simplicial complex on at most five
//! vertices with faces of size at most `min(3, dim + 1)`. Components are
//! sorted into a few types `(N, nu)` with pairwise distinct ratios
//! `nu / N`, and every class has positive leading coefficient and the
//! dimension of its stratum, as for honest varieties. Two constraints mirror
//! geometry that the random classes cannot encode:
//!
//! * components with equal ratio `nu / N` have equal `(N, nu)`;
//! * a face of size `dim + 1` whose vertices all share one ratio only
//!   occurs at the minimal ratio.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Component, Piece, SncModel};
use crate::rational::{self, Rational};
use crate::vpoly::{LaurentPoly, MotClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomParams {
    pub max_components: usize,
    pub max_face: usize,
}

impl Default for RandomParams {
    fn default() -> Self {
        Self {
            max_components: 5,
            max_face: 3,
        }
    }
}

fn effective_class(rng: &mut ChaCha8Rng, dim: i64, divisor: i64) -> MotClass {
    let mut terms: Vec<(i64, i64)> = (0..2 * dim).map(|k| (k, rng.gen_range(-3..=3))).collect();
    terms.push((2 * dim, rng.gen_range(1..=3)));
    let mut p = LaurentPoly::from_terms(terms);
    let chi = p.eval_one();
    let r = chi.mod_floor(&BigInt::from(divisor));
    if dim == 0 {
        // a finite set of points: leading coefficient is the whole class
        let c = chi - &r + BigInt::from(divisor);
        return MotClass::from_poly(LaurentPoly::constant(c));
    }
    p -= &LaurentPoly::constant(r);
    MotClass::from_poly(p)
}

/// A valid model drawn from the family above, determined by `seed`.
pub fn random_model(seed: u64, params: RandomParams) -> SncModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim: u32 = rng.gen_range(1..=2);
    let max_face = params.max_face.min(dim as usize + 1);
    let n = rng.gen_range(1..=params.max_components.max(1));

    let ntypes = rng.gen_range(1..=n.min(3));
    let mut types: Vec<(i64, i64)> = Vec::new();
    let mut ratios: BTreeSet<Rational> = BTreeSet::new();
    while types.len() < ntypes {
        let mult = rng.gen_range(1..=4);
        let nu = rng.gen_range(-2..=3);
        if ratios.insert(rational::ratio(nu, mult)) {
            types.push((mult, nu));
        }
    }
    let min_type = (0..ntypes)
        .min_by_key(|&t| rational::ratio(types[t].1, types[t].0))
        .expect("at least one type");
    let mut of: Vec<usize> = (0..n).map(|_| rng.gen_range(0..ntypes)).collect();
    let top = dim as usize + 1;
    let allowed = |of: &[usize], face: &[usize]| {
        face.len() < top || face.iter().any(|&v| of[v] != of[face[0]]) || of[face[0]] == min_type
    };
    let mut faces: BTreeSet<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    if max_face >= 2 {
        // spanning tree, then extra edges
        for v in 1..n {
            let w = rng.gen_range(0..v);
            if !allowed(&of, &[w, v]) {
                of[v] = min_type;
            }
            faces.insert(vec![w, v]);
        }
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_bool(0.4) && allowed(&of, &[a, b]) {
                    faces.insert(vec![a, b]);
                }
            }
        }
    }
    if max_face >= 3 {
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let all = [vec![a, b], vec![a, c], vec![b, c]].iter().all(|e| faces.contains(e));
                    if all && rng.gen_bool(0.6) && allowed(&of, &[a, b, c]) {
                        faces.insert(vec![a, b, c]);
                    }
                }
            }
        }
    }

    let components: Vec<Component> = (0..n)
        .map(|i| Component {
            id: format!("E{i}"),
            mult: types[of[i]].0,
            nu: types[of[i]].1,
        })
        .collect();

    let pieces = faces
        .iter()
        .map(|face| {
            let ids: Vec<String> = face.iter().map(|&v| components[v].id.clone()).collect();
            let cover = face.iter().fold(0i64, |g, &v| g.gcd(&components[v].mult));
            let divisor = if face.len() == 1 { cover } else { 1 };
            Piece {
                id: format!("P{}", face.iter().map(ToString::to_string).collect::<Vec<_>>().join("_")),
                index: ids,
                tilde_class: effective_class(&mut rng, i64::from(dim) + 1 - face.len() as i64, divisor),
                facets: None,
            }
        })
        .collect();
    SncModel {
        name: format!("random_{seed}"),
        dim,
        components,
        pieces,
    }
}
