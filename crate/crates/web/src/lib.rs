//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export takes and returns JSON text. The plain Rust functions in
//! [`api`] hold the logic so they can be tested natively; the
//! `wasm_bindgen` wrappers only convert errors.

use wasm_bindgen::prelude::*;

pub mod api {
    use std::collections::BTreeMap;

    use motzeta::monodromy::{acampo_zeta, check_monodromy_property, MpReport};
    use motzeta::rational;
    use motzeta::sncmodel::random::{random_model, RandomParams};
    use motzeta::sncmodel::{corpus, parse_model, SncModel};
    use motzeta::PoleReport;
    use serde::Serialize;

    #[derive(Debug, Serialize)]
    pub struct Face {
        pub id: String,
        pub vertices: Vec<String>,
        pub class: String,
        pub in_skeleton: bool,
    }

    #[derive(Debug, Serialize)]
    pub struct Analysis {
        pub name: String,
        pub dim: u32,
        pub zeta: String,
        pub poles: PoleReport,
        pub min_weight: String,
        pub delta: u32,
        pub weights: BTreeMap<String, String>,
        pub dual_complex_betti: Vec<usize>,
        pub skeleton_betti: Vec<usize>,
        pub closed_pseudo_manifold: bool,
        pub monodromy_zeta: String,
        pub monodromy: MpReport,
        pub faces: Vec<Face>,
    }

    fn load(model_json: &str) -> Result<SncModel, String> {
        let m = parse_model(model_json, None).map_err(|e| e.to_string())?;
        let diags = m.validate();
        if diags.is_empty() {
            Ok(m)
        } else {
            Err(diags.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"))
        }
    }

    pub fn analysis(m: &SncModel) -> Result<Analysis, String> {
        let err = |e: motzeta::sncmodel::ModelError| e.to_string();
        let z = m.zeta().map_err(err)?;
        let sk = m.essential_skeleton().map_err(err)?;
        let pm = m.pseudo_manifold_check(&sk).map_err(err)?;
        let on: std::collections::BTreeSet<&str> = sk.faces.iter().map(String::as_str).collect();
        Ok(Analysis {
            name: m.name.clone(),
            dim: m.dim,
            zeta: z.render(),
            poles: PoleReport::for_expr(&z),
            min_weight: rational::render(&sk.min_weight),
            delta: sk.delta,
            weights: sk.weights.iter().map(|(k, w)| (k.clone(), rational::render(w))).collect(),
            dual_complex_betti: m.dual_complex_homology().map_err(err)?,
            skeleton_betti: m.skeleton_homology(&sk).map_err(err)?,
            closed_pseudo_manifold: pm.closed(),
            monodromy_zeta: acampo_zeta(m).map_err(err)?.render(),
            monodromy: check_monodromy_property(m).map_err(err)?,
            faces: m
                .pieces
                .iter()
                .map(|p| Face {
                    id: p.id.clone(),
                    vertices: p.index.clone(),
                    class: p.tilde_class.render(),
                    in_skeleton: on.contains(p.id.as_str()),
                })
                .collect(),
        })
    }

    /// Zeta function, poles, skeleton, topology and monodromy of a model.
    pub fn analyze(model_json: &str) -> Result<String, String> {
        let a = analysis(&load(model_json)?)?;
        Ok(serde_json::to_string(&a).expect("analysis serializes"))
    }

    /// The model obtained by blowing up the closure of `piece`.
    pub fn blowup(model_json: &str, piece: &str) -> Result<String, String> {
        let b = load(model_json)?.blowup_stratum(piece).map_err(|e| e.to_string())?;
        Ok(b.to_json())
    }

    /// The `I_n` cycle of rational curves.
    pub fn cycle(n: u32) -> Result<String, String> {
        Ok(corpus::kodaira_in(n).map_err(|e| e.to_string())?.to_json())
    }

    /// A seeded random valid model.
    pub fn random(seed: u64) -> String {
        random_model(seed, RandomParams::default()).to_json()
    }

    pub fn corpus_names() -> String {
        serde_json::to_string(&corpus::NAMES).expect("names serialize")
    }

    pub fn corpus_model(name: &str) -> Result<String, String> {
        Ok(corpus::load(name).map_err(|e| e.to_string())?.to_json())
    }
}

#[wasm_bindgen]
pub fn analyze(model_json: &str) -> Result<String, JsError> {
    api::analyze(model_json).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn blowup(model_json: &str, piece: &str) -> Result<String, JsError> {
    api::blowup(model_json, piece).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn cycle(n: u32) -> Result<String, JsError> {
    api::cycle(n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn random(seed: u32) -> String {
    api::random(u64::from(seed))
}

#[wasm_bindgen]
pub fn corpus_names() -> String {
    api::corpus_names()
}

#[wasm_bindgen]
pub fn corpus_model(name: &str) -> Result<String, JsError> {
    api::corpus_model(name).map_err(|e| JsError::new(&e))
}
