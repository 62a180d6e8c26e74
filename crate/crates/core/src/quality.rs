//! Reference-based coverage and correctness, the duplicate rate, and
//! source-based coverage.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::alignment::{matched_sets, AlignmentConfig, AlignmentRelation};
use crate::graph::{types_of, Graph, Iri, Ontology};

/// A ratio that keeps its parts so 0/0 stays distinguishable from 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Fraction {
    pub num: usize,
    pub den: usize,
}

impl Fraction {
    pub fn new(num: usize, den: usize) -> Self {
        Fraction { num, den }
    }

    /// `None` when the denominator is zero.
    pub fn value(self) -> Option<f64> {
        (self.den > 0).then(|| self.num as f64 / self.den as f64)
    }
}

/// Earliest stage at which each reference entity appears; the seed is
/// stage 0.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageIndex {
    pub stages: u32,
    pub earliest: BTreeMap<Iri, u32>,
}

impl StageIndex {
    pub fn from_stage_lists(lists: impl IntoIterator<Item = (u32, Vec<Iri>)>) -> Self {
        let mut idx = StageIndex::default();
        for (stage, entities) in lists {
            idx.stages = idx.stages.max(stage);
            for e in entities {
                idx.earliest
                    .entry(e)
                    .and_modify(|s| *s = (*s).min(stage))
                    .or_insert(stage);
            }
        }
        idx
    }

    pub fn stage_of(&self, e: &Iri) -> Option<u32> {
        self.earliest.get(e).copied()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScopeError {
    #[error("stage {requested} exceeds the {available} stages in the manifest")]
    StageOutOfRange { requested: u32, available: u32 },
    #[error("stage must be at least 1")]
    ZeroStage,
}

/// Evaluation-restricted entity and triple sets for one stage.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvalScope {
    pub stage: u32,
    pub produced_entities: BTreeSet<Iri>,
    pub produced_triples: Graph,
    pub reference_entities: BTreeSet<Iri>,
    pub reference_triples: Graph,
}

/// Builds the stage-`stage` scope. `seed_alignment` relates seed entities to
/// reference entities and decides which reference content the seed already
/// covers.
#[allow(clippy::too_many_arguments)]
pub fn build_scope(
    seed: &Graph,
    produced: &Graph,
    reference: &Graph,
    stages: &StageIndex,
    stage: u32,
    seed_alignment: &AlignmentRelation,
    cfg: &AlignmentConfig,
    o: &Ontology,
) -> Result<EvalScope, ScopeError> {
    if stage == 0 {
        return Err(ScopeError::ZeroStage);
    }
    if stage > stages.stages {
        return Err(ScopeError::StageOutOfRange {
            requested: stage,
            available: stages.stages,
        });
    }
    let seed_entities = seed.entities();
    let produced_entities = produced
        .entities()
        .into_iter()
        .filter(|e| !seed_entities.contains(e))
        .collect();
    let produced_triples = produced.difference(seed);

    let in_stage = |e: &Iri| stages.stage_of(e).is_some_and(|s| s <= stage);
    let stage_reference: Graph = reference
        .iter()
        .filter(|t| in_stage(&t.subject))
        .cloned()
        .collect();
    let seed_covered = matched_sets(seed, &stage_reference, seed_alignment, cfg, o).reference;
    let reference_entities = reference
        .entities()
        .into_iter()
        .filter(|r| in_stage(r) && seed_alignment.produced_of(r).is_empty())
        .collect();
    let reference_triples = stage_reference.difference(&seed_covered);
    Ok(EvalScope {
        stage,
        produced_entities,
        produced_triples,
        reference_entities,
        reference_triples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct QualityScores {
    pub cov_e: Fraction,
    pub cov_t: Fraction,
    pub corr_e: Fraction,
    pub corr_t: Fraction,
    pub dup_rate: Fraction,
}

impl QualityScores {
    pub fn f1_e(&self) -> Option<f64> {
        f1(self.cov_e.value(), self.corr_e.value())
    }

    pub fn f1_t(&self) -> Option<f64> {
        f1(self.cov_t.value(), self.corr_t.value())
    }

    /// 0 for an empty produced graph.
    pub fn dup_rate_value(&self) -> f64 {
        self.dup_rate.value().unwrap_or(0.0)
    }
}

/// Harmonic mean of coverage and correctness; 0 if either is 0.
pub fn f1(cov: Option<f64>, corr: Option<f64>) -> Option<f64> {
    let (c, p) = (cov?, corr?);
    if c == 0.0 || p == 0.0 {
        Some(0.0)
    } else {
        Some(2.0 * c * p / (c + p))
    }
}

/// Type-correct alignment pairs: every asserted reference type appears in
/// the closed produced types.
fn typed_pairs<'a>(
    produced: &'a Graph,
    reference: &'a Graph,
    a: &'a AlignmentRelation,
    o: &'a Ontology,
) -> impl Iterator<Item = (Iri, Iri)> + 'a {
    let mut cache: BTreeMap<Iri, BTreeSet<Iri>> = BTreeMap::new();
    a.iter().filter_map(move |p| {
        let closed = cache
            .entry(p.produced.clone())
            .or_insert_with(|| types_of(produced, &p.produced, o));
        reference
            .asserted_types(&p.reference)
            .is_subset(closed)
            .then_some((p.produced, p.reference))
    })
}

/// `Cov_E`: share of reference eval entities with a type-correct aligned
/// produced entity.
pub fn entity_coverage(
    scope: &EvalScope,
    produced: &Graph,
    reference: &Graph,
    a: &AlignmentRelation,
    o: &Ontology,
) -> Fraction {
    let covered: BTreeSet<Iri> = typed_pairs(produced, reference, a, o)
        .map(|(_, r)| r)
        .filter(|r| scope.reference_entities.contains(r))
        .collect();
    Fraction::new(covered.len(), scope.reference_entities.len())
}

/// `Cov_T`: share of reference eval triples matched by any produced triple.
pub fn fact_coverage(
    scope: &EvalScope,
    produced: &Graph,
    a: &AlignmentRelation,
    cfg: &AlignmentConfig,
    o: &Ontology,
) -> Fraction {
    let m = matched_sets(produced, &scope.reference_triples, a, cfg, o);
    Fraction::new(m.reference.len(), scope.reference_triples.len())
}

/// `Crct_E`: distinct reference eval entities reached by type-correct
/// produced eval entities, over all produced eval entities.
///
/// A produced entity aligned to several references still counts once, so
/// the numerator is the smaller of the two distinct counts.
pub fn entity_correctness(
    scope: &EvalScope,
    produced: &Graph,
    reference: &Graph,
    a: &AlignmentRelation,
    o: &Ontology,
) -> Fraction {
    let mut refs = BTreeSet::new();
    let mut prods = BTreeSet::new();
    for (e, r) in typed_pairs(produced, reference, a, o) {
        if scope.produced_entities.contains(&e) && scope.reference_entities.contains(&r) {
            refs.insert(r);
            prods.insert(e);
        }
    }
    Fraction::new(refs.len().min(prods.len()), scope.produced_entities.len())
}

/// `Crct_T`: distinct matched reference eval triples over produced eval
/// triples.
pub fn fact_correctness(
    scope: &EvalScope,
    a: &AlignmentRelation,
    cfg: &AlignmentConfig,
    o: &Ontology,
) -> Fraction {
    let m = matched_sets(&scope.produced_triples, &scope.reference_triples, a, cfg, o);
    Fraction::new(
        m.reference.len().min(m.produced.len()),
        scope.produced_triples.len(),
    )
}

/// `Σ_r max(0, |Dup(r)| − 1) / |E(KG_n)|`.
pub fn duplicate_rate(produced: &Graph, a: &AlignmentRelation) -> Fraction {
    let entities = produced.entities();
    let surplus: usize = a
        .aligned_references()
        .map(|r| {
            let n = a
                .produced_of(r)
                .iter()
                .filter(|e| entities.contains(*e))
                .count();
            n.saturating_sub(1)
        })
        .sum();
    Fraction::new(surplus, entities.len())
}

/// Share of source triples with a matching produced triple.
pub fn source_coverage(
    produced: &Graph,
    source: &Graph,
    a: &AlignmentRelation,
    cfg: &AlignmentConfig,
    o: &Ontology,
) -> Fraction {
    let m = matched_sets(produced, source, a, cfg, o);
    Fraction::new(m.reference.len(), source.len())
}

pub fn quality_scores(
    scope: &EvalScope,
    produced: &Graph,
    reference: &Graph,
    a: &AlignmentRelation,
    cfg: &AlignmentConfig,
    o: &Ontology,
) -> QualityScores {
    let ((cov_e, corr_e), (cov_t, corr_t)) = rayon::join(
        || {
            (
                entity_coverage(scope, produced, reference, a, o),
                entity_correctness(scope, produced, reference, a, o),
            )
        },
        || {
            (
                fact_coverage(scope, produced, a, cfg, o),
                fact_correctness(scope, a, cfg, o),
            )
        },
    );
    QualityScores {
        cov_e,
        cov_t,
        corr_e,
        corr_t,
        dup_rate: duplicate_rate(produced, a),
    }
}
