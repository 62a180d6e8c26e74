use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{
    check_shading, emit_json_records, emit_text_documents, shade_namespaces, split_reference,
    GenError, SplitConfig,
};
use crate::alignment::ShadingMap;
use crate::graph::{serialize_ntriples, FormatSidecar, Graph, Iri, Ontology};
use crate::quality::StageIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceFormat {
    Rdf,
    Json,
    Text,
}

impl fmt::Display for SourceFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SourceFormat::Rdf => "rdf",
            SourceFormat::Json => "json",
            SourceFormat::Text => "text",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceEntry {
    pub path: PathBuf,
    pub format: SourceFormat,
    pub stage: u32,
    pub shading: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageEntry {
    pub stage: u32,
    pub entities: Vec<Iri>,
}

/// Ground-truth description of a benchmark instance. Paths are relative
/// to the manifest's directory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub ontology: PathBuf,
    pub seed: PathBuf,
    pub sources: Vec<SourceEntry>,
    pub reference: PathBuf,
    pub stages: Vec<StageEntry>,
    pub expected_matches: PathBuf,
    pub verified_entities: Vec<PathBuf>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, thiserror::Error)]
pub enum ManifestError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("manifest {path}: {message}")]
    Invalid { path: PathBuf, message: String },
    #[error(transparent)]
    Generate(#[from] GenError),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ManifestError + '_ {
    move |source| ManifestError::Io {
        path: path.to_path_buf(),
        source,
    }
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Manifest, ManifestError> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        let mut m: Manifest = serde_json::from_str(&text).map_err(|e| ManifestError::Invalid {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        m.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        m.validate().map_err(|message| ManifestError::Invalid {
            path: path.to_path_buf(),
            message,
        })?;
        Ok(m)
    }

    fn validate(&self) -> Result<(), String> {
        for s in &self.sources {
            if s.stage == 0 {
                return Err(format!("source {} has stage 0, reserved for the seed", s.path.display()));
            }
        }
        let stages: BTreeSet<u32> = self.stages.iter().map(|s| s.stage).collect();
        if stages.len() != self.stages.len() {
            return Err("stage listed twice".to_string());
        }
        Ok(())
    }

    pub fn resolve(&self, rel: &Path) -> PathBuf {
        if rel.is_absolute() {
            rel.to_path_buf()
        } else {
            self.base_dir.join(rel)
        }
    }

    /// Highest stage number cited by the stage list or any source.
    pub fn max_stage(&self) -> u32 {
        let from_stages = self.stages.iter().map(|s| s.stage).max().unwrap_or(0);
        let from_sources = self.sources.iter().map(|s| s.stage).max().unwrap_or(0);
        from_stages.max(from_sources)
    }

    pub fn stage_index(&self) -> StageIndex {
        let mut idx = StageIndex::from_stage_lists(
            self.stages.iter().map(|s| (s.stage, s.entities.clone())),
        );
        idx.stages = self.max_stage();
        idx
    }

    /// Inverse shading rules of every source.
    pub fn shading_map(&self) -> ShadingMap {
        let mut map = ShadingMap::default();
        for s in &self.sources {
            for (reference, shaded) in &s.shading {
                map.add_prefix_rule(reference, shaded);
            }
        }
        map
    }

    /// RDF sources in stage order.
    pub fn rdf_sources(&self) -> Vec<&SourceEntry> {
        let mut v: Vec<&SourceEntry> = self
            .sources
            .iter()
            .filter(|s| s.format == SourceFormat::Rdf)
            .collect();
        v.sort_by_key(|s| s.stage);
        v
    }

    pub fn write(&self, path: &Path) -> Result<(), ManifestError> {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        fs::write(path, text).map_err(io_err(path))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExpectedMatch {
    pub kind: String,
    pub id1: Iri,
    pub id2: Iri,
}

/// In-memory view of what [`generate`] wrote.
#[derive(Debug, Clone)]
pub struct GeneratedBenchmark {
    pub manifest: Manifest,
    pub seed: Graph,
    /// Shaded source graphs, stage order.
    pub sources: Vec<Graph>,
    pub reference: Graph,
    pub shading: ShadingMap,
    pub expected_matches: Vec<ExpectedMatch>,
}

fn write_file(dir: &Path, name: &str, content: &str) -> Result<PathBuf, ManifestError> {
    let path = dir.join(name);
    fs::write(&path, content).map_err(io_err(&path))?;
    Ok(PathBuf::from(name))
}

fn jsonl<T: Serialize>(items: &[T]) -> String {
    let mut out = String::new();
    for item in items {
        out.push_str(&serde_json::to_string(item).expect("record serializes"));
        out.push('\n');
    }
    out
}

fn kind_of(reference: &Graph, e: &Iri) -> String {
    reference
        .asserted_types(e)
        .into_iter()
        .next()
        .map_or_else(|| "Entity".to_string(), |c| c.local_name().to_string())
}

/// Splits `reference`, shades and renders the sources, and writes the
/// benchmark instance plus `manifest.json` into `out_dir`.
pub fn generate(
    reference: &Graph,
    ontology_graph: &Graph,
    sidecar: Option<&FormatSidecar>,
    o: &Ontology,
    cfg: &SplitConfig,
    formats: &[SourceFormat],
    out_dir: &Path,
) -> Result<GeneratedBenchmark, ManifestError> {
    check_shading(cfg)?;
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let splits = split_reference(reference, o, cfg)?;
    let reachable = splits.reference();

    let ontology = write_file(out_dir, "ontology.nt", &serialize_ntriples(ontology_graph))?;
    if let Some(sc) = sidecar {
        let mut text = serde_json::to_string_pretty(sc).expect("sidecar serializes");
        text.push('\n');
        write_file(out_dir, "ontology.formats.json", &text)?;
    }
    let seed_graph = splits.graphs[0].clone();
    let seed = write_file(out_dir, "seed.nt", &serialize_ntriples(&seed_graph))?;
    let reference_path = write_file(out_dir, "reference.nt", &serialize_ntriples(&reachable))?;

    let mut sources = Vec::new();
    let mut shaded_graphs = Vec::new();
    let mut shading = ShadingMap::default();
    let mut verified_entities = Vec::new();
    for (i, split) in splits.graphs.iter().enumerate().skip(1) {
        let prefix_map = cfg.prefix_map(i);
        let (shaded, inverse) = shade_namespaces(split, &prefix_map)?;
        shading.extend(&inverse);
        for format in formats {
            let (name, content) = match format {
                SourceFormat::Rdf => (format!("source_{i}.nt"), serialize_ntriples(&shaded)),
                SourceFormat::Json => (
                    format!("source_{i}.json.jsonl"),
                    jsonl(&emit_json_records(&shaded, o, &cfg.root_class)),
                ),
                SourceFormat::Text => (
                    format!("source_{i}.text.jsonl"),
                    jsonl(&emit_text_documents(&shaded, o, &cfg.root_class, cfg.abstract_property.as_ref())?),
                ),
            };
            sources.push(SourceEntry {
                path: write_file(out_dir, &name, &content)?,
                format: *format,
                stage: i as u32,
                shading: prefix_map.clone(),
            });
        }
        let mut listing = String::new();
        for e in shaded.entities() {
            listing.push_str(e.as_str());
            listing.push('\n');
        }
        verified_entities.push(write_file(out_dir, &format!("verified_entities_{i}.txt"), &listing)?);
        shaded_graphs.push(shaded);
    }

    // artifact 0 is the seed (reference IRIs), artifact i the shaded source i
    let artifacts: Vec<BTreeMap<Iri, Iri>> = std::iter::once(&seed_graph)
        .chain(shaded_graphs.iter())
        .map(|g| {
            g.entities()
                .into_iter()
                .map(|e| (shading.unshade(&e).unwrap_or_else(|| e.clone()), e))
                .collect()
        })
        .collect();
    let mut expected = Vec::new();
    for a in 0..artifacts.len() {
        for b in a + 1..artifacts.len() {
            for (r, id1) in &artifacts[a] {
                if let Some(id2) = artifacts[b].get(r) {
                    expected.push(ExpectedMatch {
                        kind: kind_of(&reachable, r),
                        id1: id1.clone(),
                        id2: id2.clone(),
                    });
                }
            }
        }
    }
    expected.sort();
    let mut tsv = String::new();
    for m in &expected {
        tsv.push_str(&format!("{}\t{}\t{}\n", m.kind, m.id1, m.id2));
    }
    let expected_matches = write_file(out_dir, "expected_matches.tsv", &tsv)?;

    let mut by_stage: BTreeMap<u32, Vec<Iri>> = (0..cfg.num_splits as u32).map(|s| (s, Vec::new())).collect();
    for (e, s) in &splits.stages.earliest {
        by_stage.entry(*s).or_default().push(e.clone());
    }
    let manifest = Manifest {
        ontology,
        seed,
        sources,
        reference: reference_path,
        stages: by_stage
            .into_iter()
            .map(|(stage, entities)| StageEntry { stage, entities })
            .collect(),
        expected_matches,
        verified_entities,
        base_dir: out_dir.to_path_buf(),
    };
    manifest.write(&out_dir.join("manifest.json"))?;
    Ok(GeneratedBenchmark {
        manifest,
        seed: seed_graph,
        sources: shaded_graphs,
        reference: reachable,
        shading,
        expected_matches: expected,
    })
}

/// Reads `type<TAB>id1<TAB>id2` lines.
pub fn read_expected_matches(text: &str) -> Result<Vec<ExpectedMatch>, String> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let cols: Vec<&str> = line.split('\t').collect();
            let [kind, a, b] = cols[..] else {
                return Err(format!("line {}: expected 3 columns", i + 1));
            };
            let parse = |s: &str| Iri::new(s).map_err(|e| format!("line {}: {e}", i + 1));
            Ok(ExpectedMatch {
                kind: kind.to_string(),
                id1: parse(a)?,
                id2: parse(b)?,
            })
        })
        .collect()
}
