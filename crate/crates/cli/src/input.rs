//! Resolving input arguments to JSON sources.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use motzeta::sncmodel::corpus;

/// Environment variable naming a directory searched before the bundled corpus.
pub const CORPUS_ENV: &str = "MOTZETA_CORPUS";

/// One resolved input: a display label and its JSON text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Source {
    pub label: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub label: String,
    pub message: String,
}

fn read(path: &Path) -> Result<Source, InputError> {
    let label = path.display().to_string();
    fs::read_to_string(path)
        .map(|text| Source {
            label: label.clone(),
            text,
        })
        .map_err(|e| InputError {
            label,
            message: e.to_string(),
        })
}

fn json_files(dir: &Path) -> Result<Vec<PathBuf>, InputError> {
    let err = |e: std::io::Error| InputError {
        label: dir.display().to_string(),
        message: e.to_string(),
    };
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(err)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

/// Resolves one argument: `-` for standard input, an existing file, every `*.json` file of an
/// existing directory (sorted by path), a file in the corpus override
/// directory, or a bundled corpus model. A `.json` suffix on corpus names is
/// optional.
pub fn resolve(arg: &str, corpus_dir: Option<&Path>) -> Vec<Result<Source, InputError>> {
    if arg == "-" {
        let mut text = String::new();
        return vec![std::io::stdin()
            .read_to_string(&mut text)
            .map(|_| Source {
                label: "<stdin>".to_string(),
                text,
            })
            .map_err(|e| InputError {
                label: "<stdin>".to_string(),
                message: e.to_string(),
            })];
    }
    let path = Path::new(arg);
    if path.is_dir() {
        return match json_files(path) {
            Ok(files) => files.iter().map(|p| read(p)).collect(),
            Err(e) => vec![Err(e)],
        };
    }
    if path.is_file() || path.exists() {
        return vec![read(path)];
    }
    let name = arg.strip_suffix(".json").unwrap_or(arg);
    if let Some(dir) = corpus_dir {
        let candidate = dir.join(format!("{name}.json"));
        if candidate.is_file() {
            return vec![read(&candidate)];
        }
    }
    match corpus::source(name) {
        Some(text) => vec![Ok(Source {
            label: name.to_string(),
            text: text.to_string(),
        })],
        None => vec![Err(InputError {
            label: arg.to_string(),
            message: "no such file or corpus model".to_string(),
        })],
    }
}
