//! Benchmark generation from a reference KG: root-entity splits with
//! controlled overlap, namespace shading, JSON and text renderings, and the
//! manifest that drives evaluation.
//!
//! Randomness comes from ChaCha8 keyed with the 64-bit seed in
//! little-endian order in the first eight key bytes (remaining key bytes
//! and the nonce are zero). Shuffling is a descending Fisher–Yates pass
//! drawing each index by rejection sampling over `next_u64`, so any
//! ChaCha8 implementation reproduces the same permutation.

mod json;
mod manifest;

use std::collections::{BTreeMap, BTreeSet};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::alignment::ShadingMap;
use crate::graph::{Graph, Iri, Ontology, Term, Triple};
use crate::quality::StageIndex;

pub use json::{emit_json_records, emit_text_documents, json_to_triples, TextDocument};
pub use manifest::{
    generate, read_expected_matches, ExpectedMatch, GeneratedBenchmark, Manifest, ManifestError, SourceEntry, SourceFormat,
    StageEntry,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitConfig {
    /// Seed plus sources.
    pub num_splits: usize,
    pub root_class: Iri,
    pub overlap_fraction: f64,
    pub rng_seed: u64,
    /// Namespace of reference entity IRIs, rewritten by shading.
    pub entity_namespace: String,
    /// One shaded namespace per source split; empty disables shading.
    pub shading_prefixes: Vec<String>,
    pub abstract_property: Option<Iri>,
}

impl SplitConfig {
    pub fn new(root_class: Iri, entity_namespace: impl Into<String>) -> Self {
        SplitConfig {
            num_splits: 4,
            root_class,
            overlap_fraction: 0.05,
            rng_seed: 0,
            entity_namespace: entity_namespace.into(),
            shading_prefixes: Vec::new(),
            abstract_property: None,
        }
    }

    /// `reference prefix -> shaded prefix` for split `i` (0 is the seed).
    pub fn prefix_map(&self, split: usize) -> BTreeMap<String, String> {
        match split.checked_sub(1).and_then(|i| self.shading_prefixes.get(i)) {
            Some(shaded) => BTreeMap::from([(self.entity_namespace.clone(), shaded.clone())]),
            None => BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GenError {
    #[error("need at least 2 splits, got {0}")]
    TooFewSplits(usize),
    #[error("overlap fraction {0} outside [0, 1)")]
    OverlapRange(f64),
    #[error("root class {0} has no instances")]
    RootClassAbsent(Iri),
    #[error("{roots} root entities cannot fill {splits} splits")]
    TooFewRoots { roots: usize, splits: usize },
    #[error("split {split} has {base} roots but must donate {needed} overlap copies")]
    OverlapInfeasible { split: usize, base: usize, needed: usize },
    #[error("expected {expected} shading prefixes, got {got}")]
    ShadingCount { expected: usize, got: usize },
    #[error("shading prefixes must be pairwise distinct")]
    DuplicatePrefix,
    #[error("IRI {0} matches more than one shading prefix")]
    AmbiguousPrefix(Iri),
    #[error("abstract property not configured")]
    NoAbstractProperty,
    #[error("shaded IRI invalid: {0}")]
    BadShadedIri(String),
}

/// ChaCha8 stream keyed by the seed bytes.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Uniform integer in `0..=bound` by rejection sampling.
pub(crate) fn uniform_inclusive(rng: &mut impl RngCore, bound: u64) -> u64 {
    if bound == u64::MAX {
        return rng.next_u64();
    }
    let range = bound + 1;
    let zone = u64::MAX - (u64::MAX % range + 1) % range;
    loop {
        let v = rng.next_u64();
        if v <= zone {
            return v % range;
        }
    }
}

pub fn shuffle<T>(items: &mut [T], rng: &mut impl RngCore) {
    for i in (1..items.len()).rev() {
        let j = uniform_inclusive(rng, i as u64) as usize;
        items.swap(i, j);
    }
}

/// Result of splitting: per-split graphs (unshaded) and their bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct Splits {
    pub graphs: Vec<Graph>,
    /// Root entities per split, base roots first.
    pub roots: Vec<Vec<Iri>>,
    pub stages: StageIndex,
}

impl Splits {
    /// The reachable reference: union of all split graphs.
    pub fn reference(&self) -> Graph {
        self.graphs.iter().fold(Graph::new(), |acc, g| acc.union(g))
    }
}

fn ceil_fraction(f: f64, n: usize) -> usize {
    let v = f * n as f64;
    let r = v.round();
    // values within float noise of an integer are not bumped up
    if (v - r).abs() < 1e-9 {
        r as usize
    } else {
        v.ceil() as usize
    }
}

/// Root triples plus the literal and type triples of every entity the root
/// references.
fn root_subgraph<'a>(reference: &'a Graph, root: &Iri, out: &mut Vec<&'a Triple>) {
    for t in reference.with_subject(root) {
        out.push(t);
        if let Some(o) = t.entity_object() {
            out.extend(
                reference
                    .with_subject(o)
                    .iter()
                    .filter(|u| u.is_type_assertion() || matches!(u.object, Term::Literal(_))),
            );
        }
    }
}

pub fn split_reference(
    reference: &Graph,
    o: &Ontology,
    cfg: &SplitConfig,
) -> Result<Splits, GenError> {
    let k = cfg.num_splits;
    if k < 2 {
        return Err(GenError::TooFewSplits(k));
    }
    if !(0.0..1.0).contains(&cfg.overlap_fraction) {
        return Err(GenError::OverlapRange(cfg.overlap_fraction));
    }
    let mut roots: Vec<Iri> = reference
        .subjects()
        .filter(|s| {
            reference
                .asserted_types(s)
                .iter()
                .any(|c| o.is_subclass_of(c, &cfg.root_class))
        })
        .cloned()
        .collect();
    if roots.is_empty() {
        return Err(GenError::RootClassAbsent(cfg.root_class.clone()));
    }
    if roots.len() < k {
        return Err(GenError::TooFewRoots {
            roots: roots.len(),
            splits: k,
        });
    }
    let mut rng = rng_from_seed(cfg.rng_seed);
    shuffle(&mut roots, &mut rng);

    let n = roots.len();
    let bases: Vec<Vec<Iri>> = (0..k)
        .map(|i| roots[i * n / k..(i + 1) * n / k].to_vec())
        .collect();
    let mut members = bases.clone();
    for (i, base) in bases.iter().enumerate() {
        let per_target = ceil_fraction(cfg.overlap_fraction, base.len());
        let needed = per_target * (k - 1 - i);
        if needed > base.len() {
            return Err(GenError::OverlapInfeasible {
                split: i,
                base: base.len(),
                needed,
            });
        }
        for (offset, j) in (i + 1..k).enumerate() {
            let chunk = &base[offset * per_target..(offset + 1) * per_target];
            members[j].extend(chunk.iter().cloned());
        }
    }

    let mut graphs = Vec::with_capacity(k);
    let mut earliest: BTreeMap<Iri, u32> = BTreeMap::new();
    for (stage, split_roots) in members.iter().enumerate() {
        let mut triples = Vec::new();
        for r in split_roots {
            root_subgraph(reference, r, &mut triples);
        }
        let g: Graph = triples.into_iter().cloned().collect();
        for e in g.entities() {
            earliest.entry(e).or_insert(stage as u32);
        }
        graphs.push(g);
    }
    Ok(Splits {
        graphs,
        roots: members,
        stages: StageIndex {
            stages: (k - 1) as u32,
            earliest,
        },
    })
}

/// Rewrites entity IRIs (subjects and non-type IRI objects) by prefix
/// substitution. Predicates, classes and literals are untouched.
pub fn shade_namespaces(
    g: &Graph,
    prefix_map: &BTreeMap<String, String>,
) -> Result<(Graph, ShadingMap), GenError> {
    let mut map = ShadingMap::default();
    if prefix_map.is_empty() {
        return Ok((g.clone(), map));
    }
    let mut cache: BTreeMap<Iri, Iri> = BTreeMap::new();
    let mut rewrite = |iri: &Iri| -> Result<Iri, GenError> {
        if let Some(done) = cache.get(iri) {
            return Ok(done.clone());
        }
        let mut hits = prefix_map
            .iter()
            .filter(|(from, _)| iri.as_str().starts_with(from.as_str()));
        let out = match (hits.next(), hits.next()) {
            (Some(_), Some(_)) => return Err(GenError::AmbiguousPrefix(iri.clone())),
            (Some((from, to)), None) => {
                let shaded = format!("{to}{}", &iri.as_str()[from.len()..]);
                Iri::new(&shaded).map_err(|_| GenError::BadShadedIri(shaded))?
            }
            _ => iri.clone(),
        };
        cache.insert(iri.clone(), out.clone());
        Ok(out)
    };
    let mut triples = Vec::with_capacity(g.len());
    for t in g {
        let subject = rewrite(&t.subject)?;
        let object = match (&t.object, t.is_type_assertion()) {
            (Term::Iri(o), false) => Term::Iri(rewrite(o)?),
            _ => t.object.clone(),
        };
        triples.push(Triple::new(subject, t.predicate.clone(), object));
    }
    for (from, to) in &cache {
        if from != to {
            map.insert(to.clone(), from.clone());
        }
    }
    for (reference_prefix, shaded_prefix) in prefix_map {
        map.add_prefix_rule(reference_prefix, shaded_prefix);
    }
    Ok((triples.into_iter().collect(), map))
}

/// Maps shaded entity IRIs back to reference IRIs; unknown IRIs stay.
pub fn unshade_graph(g: &Graph, shading: &ShadingMap) -> Graph {
    let back = |iri: &Iri| shading.unshade(iri).unwrap_or_else(|| iri.clone());
    g.iter()
        .map(|t| {
            let object = match (&t.object, t.is_type_assertion()) {
                (Term::Iri(o), false) => Term::Iri(back(o)),
                _ => t.object.clone(),
            };
            Triple::new(back(&t.subject), t.predicate.clone(), object)
        })
        .collect()
}

/// Checks shading configuration against the split count.
pub(crate) fn check_shading(cfg: &SplitConfig) -> Result<(), GenError> {
    if cfg.shading_prefixes.is_empty() {
        return Ok(());
    }
    if cfg.shading_prefixes.len() != cfg.num_splits - 1 {
        return Err(GenError::ShadingCount {
            expected: cfg.num_splits - 1,
            got: cfg.shading_prefixes.len(),
        });
    }
    let distinct: BTreeSet<&String> = cfg.shading_prefixes.iter().collect();
    if distinct.len() != cfg.shading_prefixes.len() {
        return Err(GenError::DuplicatePrefix);
    }
    Ok(())
}
