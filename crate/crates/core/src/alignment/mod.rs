//! Entity alignment between a produced KG and a reference KG, literal
//! equivalence, and the three-condition triple matcher.
//!
//! Matchers sit behind [`EntityMatcher`] so evaluation and the baseline
//! pipeline can swap strategies. The label matcher scores normalized labels
//! with the trigram Dice coefficient; see [`label_similarity`].

mod label;
mod literal;
mod matching;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{types_of, Graph, Iri, Ontology};

pub use label::{label_similarity, normalize_label, trigrams};
pub use literal::literal_equivalent;
pub use matching::{match_triple, matched_sets, MatchedSets};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    ExactIri,
    GoldProvenance,
    LabelSimilarity,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::ExactIri => "exact-iri",
            Strategy::GoldProvenance => "gold-provenance",
            Strategy::LabelSimilarity => "label-similarity",
        })
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact-iri" | "exact" => Ok(Strategy::ExactIri),
            "gold-provenance" | "gold" => Ok(Strategy::GoldProvenance),
            "label-similarity" | "label" => Ok(Strategy::LabelSimilarity),
            other => Err(format!("unknown alignment strategy `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignmentConfig {
    pub strategy: Strategy,
    pub label_threshold: f64,
    pub numeric_rel_tolerance: f64,
    pub date_formats: Vec<String>,
    /// Score `skos:altLabel` values alongside `rdfs:label`.
    pub use_alt_labels: bool,
}

impl Default for AlignmentConfig {
    fn default() -> Self {
        AlignmentConfig {
            strategy: Strategy::LabelSimilarity,
            label_threshold: 0.9,
            numeric_rel_tolerance: 1e-9,
            date_formats: ["%Y-%m-%d", "%d.%m.%Y", "%m/%d/%Y", "%Y/%m/%d", "%d %B %Y", "%B %d, %Y"]
                .into_iter()
                .map(String::from)
                .collect(),
            use_alt_labels: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlignError {
    #[error("label threshold {0} outside [0, 1]")]
    Threshold(f64),
    #[error("gold-provenance alignment requires a shading map")]
    MissingShading,
}

impl AlignmentConfig {
    pub fn validate(&self) -> Result<(), AlignError> {
        if !(0.0..=1.0).contains(&self.label_threshold) {
            return Err(AlignError::Threshold(self.label_threshold));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentPair {
    pub produced: Iri,
    pub reference: Iri,
    pub score: f64,
    pub provenance: String,
}

/// `A_n`: a many-to-many set of scored correspondences.
#[derive(Debug, Clone, Default)]
pub struct AlignmentRelation {
    pairs: BTreeMap<(Iri, Iri), (f64, String)>,
    by_produced: HashMap<Iri, Vec<Iri>>,
    by_reference: HashMap<Iri, Vec<Iri>>,
    /// Produced entities skipped because they carry no label.
    pub unlabeled: BTreeSet<Iri>,
}

impl FromIterator<AlignmentPair> for AlignmentRelation {
    fn from_iter<I: IntoIterator<Item = AlignmentPair>>(iter: I) -> Self {
        let mut rel = AlignmentRelation::default();
        for p in iter {
            rel.insert(p);
        }
        rel
    }
}

impl AlignmentRelation {
    /// Inserts a pair; a repeated pair keeps the higher score.
    pub fn insert(&mut self, pair: AlignmentPair) {
        let score = pair.score.clamp(0.0, 1.0);
        let key = (pair.produced.clone(), pair.reference.clone());
        match self.pairs.get_mut(&key) {
            Some(existing) => {
                if score > existing.0 {
                    *existing = (score, pair.provenance);
                }
            }
            None => {
                self.by_produced
                    .entry(pair.produced.clone())
                    .or_default()
                    .push(pair.reference.clone());
                self.by_reference
                    .entry(pair.reference)
                    .or_default()
                    .push(pair.produced);
                self.pairs.insert(key, (score, pair.provenance));
            }
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, produced: &Iri, reference: &Iri) -> bool {
        self.pairs.contains_key(&(produced.clone(), reference.clone()))
    }

    pub fn score(&self, produced: &Iri, reference: &Iri) -> Option<f64> {
        self.pairs
            .get(&(produced.clone(), reference.clone()))
            .map(|(s, _)| *s)
    }

    pub fn references_of(&self, produced: &Iri) -> &[Iri] {
        self.by_produced.get(produced).map_or(&[], Vec::as_slice)
    }

    pub fn produced_of(&self, reference: &Iri) -> &[Iri] {
        self.by_reference.get(reference).map_or(&[], Vec::as_slice)
    }

    /// Reference entities with at least one aligned produced entity.
    pub fn aligned_references(&self) -> impl Iterator<Item = &Iri> {
        self.by_reference.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = AlignmentPair> + '_ {
        self.pairs.iter().map(|((p, r), (s, prov))| AlignmentPair {
            produced: p.clone(),
            reference: r.clone(),
            score: *s,
            provenance: prov.clone(),
        })
    }

    /// One reference per produced entity: highest score, then smallest
    /// reference IRI. Diagnostics only; metrics use the full relation.
    pub fn best_per_produced(&self) -> BTreeMap<Iri, Iri> {
        let mut out: BTreeMap<Iri, (f64, Iri)> = BTreeMap::new();
        for ((p, r), (s, _)) in &self.pairs {
            match out.get(p) {
                Some((best, _)) if *best >= *s => {}
                _ => {
                    out.insert(p.clone(), (*s, r.clone()));
                }
            }
        }
        out.into_iter().map(|(p, (_, r))| (p, r)).collect()
    }

    /// Sorted TSV: `produced<TAB>reference<TAB>score<TAB>provenance`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for ((p, r), (s, prov)) in &self.pairs {
            out.push_str(&format!("{p}\t{r}\t{s}\t{prov}\n"));
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self, String> {
        let mut rel = AlignmentRelation::default();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() < 2 {
                return Err(format!("line {}: expected at least two columns", i + 1));
            }
            let produced = Iri::new(cols[0]).map_err(|e| format!("line {}: {e}", i + 1))?;
            let reference = Iri::new(cols[1]).map_err(|e| format!("line {}: {e}", i + 1))?;
            let score = match cols.get(2) {
                Some(s) => s
                    .parse::<f64>()
                    .map_err(|e| format!("line {}: {e}", i + 1))?,
                None => 1.0,
            };
            let provenance = cols.get(3).unwrap_or(&"tsv").to_string();
            rel.insert(AlignmentPair {
                produced,
                reference,
                score,
                provenance,
            });
        }
        Ok(rel)
    }
}

/// Maps shaded entity IRIs back to reference IRIs, either explicitly or by
/// namespace prefix substitution.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ShadingMap {
    explicit: BTreeMap<Iri, Iri>,
    /// (shaded prefix, reference prefix)
    prefixes: Vec<(String, String)>,
}

impl ShadingMap {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Iri, Iri)>) -> Self {
        ShadingMap {
            explicit: pairs.into_iter().collect(),
            prefixes: Vec::new(),
        }
    }

    /// Adds the inverse of a `reference prefix -> shaded prefix` rule.
    pub fn add_prefix_rule(&mut self, reference_prefix: &str, shaded_prefix: &str) {
        self.prefixes
            .push((shaded_prefix.to_string(), reference_prefix.to_string()));
        // longest shaded prefix first
        self.prefixes.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.cmp(b)));
    }

    pub fn insert(&mut self, shaded: Iri, reference: Iri) {
        self.explicit.insert(shaded, reference);
    }

    pub fn explicit(&self) -> &BTreeMap<Iri, Iri> {
        &self.explicit
    }

    pub fn extend(&mut self, other: &ShadingMap) {
        self.explicit
            .extend(other.explicit.iter().map(|(a, b)| (a.clone(), b.clone())));
        for (shaded, reference) in &other.prefixes {
            self.add_prefix_rule(reference, shaded);
        }
    }

    /// Reference IRI for a shaded IRI, `None` if no rule applies.
    pub fn unshade(&self, iri: &Iri) -> Option<Iri> {
        if let Some(r) = self.explicit.get(iri) {
            return Some(r.clone());
        }
        self.prefixes.iter().find_map(|(shaded, reference)| {
            iri.as_str()
                .strip_prefix(shaded.as_str())
                .and_then(|rest| Iri::new(format!("{reference}{rest}")).ok())
        })
    }
}

pub trait EntityMatcher: Send + Sync {
    fn name(&self) -> &'static str;
    fn align(&self, produced: &Graph, reference: &Graph) -> AlignmentRelation;
}

pub struct ExactIriMatcher;

impl EntityMatcher for ExactIriMatcher {
    fn name(&self) -> &'static str {
        "exact-iri"
    }

    fn align(&self, produced: &Graph, reference: &Graph) -> AlignmentRelation {
        let reference_entities = reference.entities();
        produced
            .entities()
            .into_iter()
            .filter(|e| reference_entities.contains(e))
            .map(|e| AlignmentPair {
                produced: e.clone(),
                reference: e,
                score: 1.0,
                provenance: self.name().to_string(),
            })
            .collect()
    }
}

/// Gold alignment from the generator's shading records: shaded IRIs map
/// back through the shading map, unshaded IRIs map to themselves.
pub struct ProvenanceMatcher<'a> {
    pub shading: &'a ShadingMap,
}

impl EntityMatcher for ProvenanceMatcher<'_> {
    fn name(&self) -> &'static str {
        "gold-provenance"
    }

    fn align(&self, produced: &Graph, reference: &Graph) -> AlignmentRelation {
        let reference_entities = reference.entities();
        produced
            .entities()
            .into_iter()
            .filter_map(|e| {
                let r = self.shading.unshade(&e).unwrap_or_else(|| e.clone());
                reference_entities.contains(&r).then(|| AlignmentPair {
                    produced: e,
                    reference: r,
                    score: 1.0,
                    provenance: self.name().to_string(),
                })
            })
            .collect()
    }
}

pub struct LabelMatcher<'a> {
    pub ontology: &'a Ontology,
    pub threshold: f64,
    pub use_alt_labels: bool,
}

struct LabelIndex {
    entities: Vec<Iri>,
    types: Vec<BTreeSet<Iri>>,
    labels: Vec<Vec<(String, usize)>>, // (normalized, trigram count)
    exact: HashMap<String, Vec<usize>>,
    grams: HashMap<String, Vec<(usize, usize)>>, // trigram -> (entity, label)
}

impl LabelIndex {
    fn build(g: &Graph, o: &Ontology, alt: bool) -> Self {
        let mut idx = LabelIndex {
            entities: Vec::new(),
            types: Vec::new(),
            labels: Vec::new(),
            exact: HashMap::new(),
            grams: HashMap::new(),
        };
        for e in g.entities() {
            let labels = normalized_labels(g, &e, alt);
            if labels.is_empty() {
                continue;
            }
            let id = idx.entities.len();
            let mut entry = Vec::new();
            for (li, label) in labels.into_iter().enumerate() {
                let grams = trigrams(&label);
                for gram in &grams {
                    idx.grams.entry(gram.clone()).or_default().push((id, li));
                }
                idx.exact.entry(label.clone()).or_default().push(id);
                entry.push((label, grams.len()));
            }
            idx.types.push(types_of(g, &e, o));
            idx.entities.push(e);
            idx.labels.push(entry);
        }
        idx
    }
}

fn normalized_labels(g: &Graph, e: &Iri, alt: bool) -> Vec<String> {
    let set: BTreeSet<String> = g
        .labels(e, alt)
        .into_iter()
        .map(normalize_label)
        .filter(|l| !l.is_empty())
        .collect();
    set.into_iter().collect()
}

impl LabelMatcher<'_> {
    /// Candidate `(reference entity, score)` pairs for one produced entity,
    /// before type filtering.
    fn score_candidates(&self, labels: &[String], idx: &LabelIndex) -> HashMap<usize, f64> {
        let mut best: HashMap<usize, f64> = HashMap::new();
        let mut bump = |id: usize, s: f64| {
            let slot = best.entry(id).or_insert(s);
            if s > *slot {
                *slot = s;
            }
        };
        if self.threshold <= 0.0 {
            for (id, entry) in idx.labels.iter().enumerate() {
                for label in labels {
                    for (other, _) in entry {
                        bump(id, label_similarity(label, other));
                    }
                }
            }
            return best;
        }
        for label in labels {
            for &id in idx.exact.get(label).into_iter().flatten() {
                bump(id, 1.0);
            }
            let grams = trigrams(label);
            let mut shared: HashMap<(usize, usize), usize> = HashMap::new();
            for gram in &grams {
                for &key in idx.grams.get(gram).into_iter().flatten() {
                    *shared.entry(key).or_default() += 1;
                }
            }
            for ((id, li), n) in shared {
                let s = label::dice(n, grams.len(), idx.labels[id][li].1);
                bump(id, s);
            }
        }
        best
    }
}

impl EntityMatcher for LabelMatcher<'_> {
    fn name(&self) -> &'static str {
        "label-similarity"
    }

    fn align(&self, produced: &Graph, reference: &Graph) -> AlignmentRelation {
        let idx = LabelIndex::build(reference, self.ontology, self.use_alt_labels);
        let entities: Vec<Iri> = produced.entities().into_iter().collect();
        let results: Vec<(Iri, Vec<(usize, f64)>)> = entities
            .par_iter()
            .map(|e| {
                let labels = normalized_labels(produced, e, self.use_alt_labels);
                if labels.is_empty() {
                    return (e.clone(), Vec::new());
                }
                let types = types_of(produced, e, self.ontology);
                let mut hits: Vec<(usize, f64)> = self
                    .score_candidates(&labels, &idx)
                    .into_iter()
                    .filter(|&(id, s)| s >= self.threshold && compatible(self.ontology, &types, &idx.types[id]))
                    .collect();
                hits.sort_by_key(|h| h.0);
                (e.clone(), hits)
            })
            .collect();
        let mut rel = AlignmentRelation::default();
        for (e, hits) in results {
            if produced.labels(&e, self.use_alt_labels).is_empty() {
                rel.unlabeled.insert(e.clone());
            }
            for (id, score) in hits {
                rel.insert(AlignmentPair {
                    produced: e.clone(),
                    reference: idx.entities[id].clone(),
                    score,
                    provenance: self.name().to_string(),
                });
            }
        }
        rel
    }
}

/// Untyped entities are compatible with everything; otherwise the union of
/// both type sets must not contain a disjoint pair.
pub(crate) fn compatible(o: &Ontology, a: &BTreeSet<Iri>, b: &BTreeSet<Iri>) -> bool {
    if a.is_empty() || b.is_empty() {
        return true;
    }
    !a.iter().any(|x| b.iter().any(|y| o.are_disjoint(x, y)))
}

/// Builds `A_n` with the configured strategy.
pub fn align_entities(
    produced: &Graph,
    reference: &Graph,
    cfg: &AlignmentConfig,
    ontology: &Ontology,
    shading: Option<&ShadingMap>,
) -> Result<AlignmentRelation, AlignError> {
    cfg.validate()?;
    let rel = match cfg.strategy {
        Strategy::ExactIri => ExactIriMatcher.align(produced, reference),
        Strategy::GoldProvenance => {
            let shading = shading.ok_or(AlignError::MissingShading)?;
            ProvenanceMatcher { shading }.align(produced, reference)
        }
        Strategy::LabelSimilarity => LabelMatcher {
            ontology,
            threshold: cfg.label_threshold,
            use_alt_labels: cfg.use_alt_labels,
        }
        .align(produced, reference),
    };
    if !rel.unlabeled.is_empty() {
        log::debug!("{} produced entities without labels stay unmatched", rel.unlabeled.len());
    }
    Ok(rel)
}
