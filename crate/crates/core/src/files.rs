//! Reading and writing graphs and ontologies on disk.

use std::fs;
use std::path::{Path, PathBuf};

use crate::graph::{load_ontology, parse_ntriples, serialize_ntriples, FormatSidecar, Graph, Ontology, OntologyError, ParseError};

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{}:{}: {}", .source.line, .source.column, .source.message)]
    Parse { path: PathBuf, source: ParseError },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{path}: {source}")]
    Ontology { path: PathBuf, source: OntologyError },
}

pub fn read_graph(path: &Path) -> Result<Graph, FileError> {
    let text = fs::read_to_string(path).map_err(|source| FileError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_ntriples(&text).map_err(|source| FileError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_graph(path: &Path, g: &Graph) -> Result<(), FileError> {
    fs::write(path, serialize_ntriples(g)).map_err(|source| FileError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// `dir/ontology.nt` pairs with `dir/ontology.formats.json`.
pub fn sidecar_path(ontology: &Path) -> PathBuf {
    let stem = ontology.file_stem().and_then(|s| s.to_str()).unwrap_or("ontology");
    ontology.with_file_name(format!("{stem}.formats.json"))
}

pub fn read_sidecar(path: &Path) -> Result<FormatSidecar, FileError> {
    let text = fs::read_to_string(path).map_err(|source| FileError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| FileError::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads the schema graph and, when present, its format sidecar (explicit
/// path or the conventional sibling file).
pub fn read_ontology(path: &Path, formats: Option<&Path>) -> Result<(Graph, Ontology), FileError> {
    let g = read_graph(path)?;
    let wrap = |source| FileError::Ontology {
        path: path.to_path_buf(),
        source,
    };
    let mut o = load_ontology(&g).map_err(wrap)?;
    let sidecar = match formats {
        Some(p) => Some(read_sidecar(p)?),
        None => {
            let p = sidecar_path(path);
            if p.is_file() {
                Some(read_sidecar(&p)?)
            } else {
                None
            }
        }
    };
    if let Some(sc) = sidecar {
        o = o.with_formats(&sc).map_err(wrap)?;
    }
    for w in o.warnings() {
        log::warn!("{}: {w}", path.display());
    }
    Ok((g, o))
}
