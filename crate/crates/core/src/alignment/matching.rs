use std::collections::HashSet;

use rayon::prelude::*;

use super::{literal_equivalent, AlignmentConfig, AlignmentRelation};
use crate::graph::{Graph, Iri, Ontology, Term, Triple};

/// Three-condition triple match: aligned subjects, equal canonical
/// predicates, and aligned or equivalent objects.
///
/// `rdf:type` objects are classes, so they match when equal or declared
/// equivalent rather than through the entity alignment.
pub fn match_triple(
    tn: &Triple,
    tr: &Triple,
    a: &AlignmentRelation,
    cfg: &AlignmentConfig,
    o: &Ontology,
) -> bool {
    a.contains(&tn.subject, &tr.subject)
        && o.canonical_property(&tn.predicate) == o.canonical_property(&tr.predicate)
        && objects_match(tn, tr, a, cfg, o)
}

fn objects_match(
    tn: &Triple,
    tr: &Triple,
    a: &AlignmentRelation,
    cfg: &AlignmentConfig,
    o: &Ontology,
) -> bool {
    match (&tn.object, &tr.object) {
        (Term::Iri(x), Term::Iri(y)) => {
            if tn.is_type_assertion() {
                same_class(o, x, y)
            } else {
                a.contains(x, y)
            }
        }
        (Term::Literal(x), Term::Literal(y)) => literal_equivalent(x, y, cfg),
        _ => false,
    }
}

fn same_class(o: &Ontology, x: &Iri, y: &Iri) -> bool {
    x == y || (o.is_subclass_of(x, y) && o.is_subclass_of(y, x))
}

/// Matched reference triples `T_R^A` and matched produced triples.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MatchedSets {
    pub reference: Graph,
    pub produced: Graph,
}

/// Candidate pairs are generated only from the aligned subject and the
/// predicate's equivalence group, so the cost is proportional to the
/// number of plausible pairs rather than `|T_n| * |T_R|`.
pub fn matched_sets(
    produced: &Graph,
    reference: &Graph,
    a: &AlignmentRelation,
    cfg: &AlignmentConfig,
    o: &Ontology,
) -> MatchedSets {
    let hits: Vec<(&Triple, Vec<&Triple>)> = produced
        .iter()
        .collect::<Vec<_>>()
        .par_iter()
        .filter_map(|tn| {
            let group = o.property_group(&tn.predicate);
            let mut found = Vec::new();
            for r in a.references_of(&tn.subject) {
                for q in &group {
                    for tr in reference.with_subject_predicate(r, q) {
                        if objects_match(tn, tr, a, cfg, o) {
                            found.push(tr);
                        }
                    }
                }
            }
            (!found.is_empty()).then_some((*tn, found))
        })
        .collect();
    let mut matched_reference: HashSet<&Triple> = HashSet::new();
    let mut matched_produced = Vec::with_capacity(hits.len());
    for (tn, trs) in hits {
        matched_produced.push(tn.clone());
        matched_reference.extend(trs);
    }
    MatchedSets {
        reference: matched_reference.into_iter().cloned().collect(),
        produced: matched_produced.into_iter().collect(),
    }
}
