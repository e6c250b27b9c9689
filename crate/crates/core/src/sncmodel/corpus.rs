//! Bundled example models and the `I_n` generator.

use thiserror::Error;

use super::{parse_model, Component, ModelParseError, Piece, SncModel};
use crate::vpoly::MotClass;

pub const NAMES: [&str; 9] = [
    "quartic_k3",
    "kodaira_In",
    "kodaira_II",
    "kodaira_III",
    "kodaira_IV",
    "kodaira_I0star",
    "octahedron_typeIII",
    "kulikov_typeII",
    "trivial_smooth",
];

/// JSON text of a bundled model.
pub fn source(name: &str) -> Option<&'static str> {
    Some(match name {
        "quartic_k3" => include_str!("../../corpus/quartic_k3.json"),
        "kodaira_In" => include_str!("../../corpus/kodaira_In.json"),
        "kodaira_II" => include_str!("../../corpus/kodaira_II.json"),
        "kodaira_III" => include_str!("../../corpus/kodaira_III.json"),
        "kodaira_IV" => include_str!("../../corpus/kodaira_IV.json"),
        "kodaira_I0star" => include_str!("../../corpus/kodaira_I0star.json"),
        "octahedron_typeIII" => include_str!("../../corpus/octahedron_typeIII.json"),
        "kulikov_typeII" => include_str!("../../corpus/kulikov_typeII.json"),
        "trivial_smooth" => include_str!("../../corpus/trivial_smooth.json"),
        _ => return None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("no bundled model named '{0}'")]
    Unknown(String),
    #[error(transparent)]
    Parse(#[from] ModelParseError),
}

pub fn load(name: &str) -> Result<SncModel, CorpusError> {
    let text = source(name).ok_or_else(|| CorpusError::Unknown(name.to_string()))?;
    Ok(parse_model(text, None)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("kodaira_In needs n >= 2, got {0}")]
pub struct GeneratorError(pub u32);

/// The Neron `n`-gon: `n` rational curves `C_i` (open parts `G_m`) meeting
/// in a cycle, all with `N = 1` and `nu = 0`.
pub fn kodaira_in(n: u32) -> Result<SncModel, GeneratorError> {
    if n < 2 {
        return Err(GeneratorError(n));
    }
    let c = |i: u32| format!("C{}", i % n);
    let v = |i: u32| format!("v{}", i % n);
    let components = (0..n).map(|i| Component { id: c(i), mult: 1, nu: 0 }).collect();
    let mut pieces: Vec<Piece> = (0..n)
        .map(|i| Piece {
            id: v(i),
            index: vec![c(i)],
            tilde_class: MotClass::gm(),
            facets: None,
        })
        .collect();
    pieces.extend((0..n).map(|i| Piece {
        id: format!("e{i}"),
        index: vec![c(i), c(i + 1)],
        tilde_class: MotClass::one(),
        facets: Some([(c(i), v(i + 1)), (c(i + 1), v(i))].into()),
    }));
    Ok(SncModel {
        name: format!("kodaira_I{n}"),
        dim: 1,
        components,
        pieces,
    })
}
