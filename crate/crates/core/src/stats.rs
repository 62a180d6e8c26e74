//! Structural graph statistics and task-level precision/recall.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::graph::{types_of, Graph, Ontology};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StatsRecord {
    pub fact_count: usize,
    pub entity_count: usize,
    /// Distinct predicates, `rdf:type` excluded.
    pub relation_count: usize,
    /// Distinct predicates, `rdf:type` included.
    pub relation_count_incl_type: usize,
    pub type_count: usize,
    pub untyped_count: usize,
    pub density: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_s: Option<f64>,
}

pub fn graph_stats(g: &Graph, o: &Ontology) -> StatsRecord {
    let entities = g.entities();
    let mut predicates = BTreeSet::new();
    let mut classes = BTreeSet::new();
    let mut links = 0usize;
    for t in g {
        predicates.insert(&t.predicate);
        if t.is_type_assertion() {
            if let Some(c) = t.object.as_iri() {
                classes.insert(c);
            }
        } else if t.entity_object().is_some() {
            links += 1;
        }
    }
    let has_type = g.iter().any(|t| t.is_type_assertion());
    let n = entities.len();
    let density = if n < 2 {
        0.0
    } else {
        links as f64 / (n as f64 * (n as f64 - 1.0))
    };
    StatsRecord {
        fact_count: g.len(),
        entity_count: n,
        relation_count: predicates.len() - usize::from(has_type),
        relation_count_incl_type: predicates.len(),
        type_count: classes.len(),
        untyped_count: entities
            .iter()
            .filter(|e| types_of(g, e, o).is_empty())
            .count(),
        density,
        duration_s: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PrecisionRecall {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
}

fn normalized<T: Ord + Clone>(pairs: &[(T, T)]) -> BTreeSet<(T, T)> {
    pairs
        .iter()
        .map(|(a, b)| {
            if a <= b {
                (a.clone(), b.clone())
            } else {
                (b.clone(), a.clone())
            }
        })
        .collect()
}

/// Precision and recall over unordered pairs. Empty prediction leaves
/// precision undefined; empty gold leaves recall undefined.
pub fn precision_recall<T: Ord + Clone>(gold: &[(T, T)], predicted: &[(T, T)]) -> PrecisionRecall {
    let (g, p) = (normalized(gold), normalized(predicted));
    let hit = g.intersection(&p).count() as f64;
    PrecisionRecall {
        precision: (!p.is_empty()).then(|| hit / p.len() as f64),
        recall: (!g.is_empty()).then(|| hit / g.len() as f64),
    }
}
