//! Ontology-violation ratios of a produced KG. No reference graph needed.

mod xsd;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::graph::{types_of, Graph, Iri, Ontology, PropertyKind, Term, Triple};
use crate::quality::Fraction;

pub use xsd::{validate_lexical, Validity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ViolationKind {
    #[serde(rename = "O_DT")]
    Disjointness,
    #[serde(rename = "O_D")]
    Domain,
    #[serde(rename = "O_R")]
    Range,
    #[serde(rename = "O_RD")]
    Direction,
    #[serde(rename = "O_LT")]
    Datatype,
    #[serde(rename = "O_LF")]
    Format,
    #[serde(rename = "max_cardinality")]
    MaxCardinality,
}

/// One violated axiom, attached to a triple or to an entity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub kind: ViolationKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entity: Option<Iri>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triple: Option<String>,
    pub axiom: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConsistencyScores {
    pub o_dt: Fraction,
    pub o_d: Fraction,
    pub o_r: Fraction,
    pub o_rd: Fraction,
    pub o_lt: Fraction,
    pub o_lf: Fraction,
}

impl ConsistencyScores {
    /// The six ratios in reporting order.
    pub fn ratios(&self) -> [(&'static str, Fraction); 6] {
        [
            ("O_DT", self.o_dt),
            ("O_D", self.o_d),
            ("O_R", self.o_r),
            ("O_RD", self.o_rd),
            ("O_LT", self.o_lt),
            ("O_LF", self.o_lf),
        ]
    }

    /// `C_i = 1 − O_i`; `None` where the ratio is undefined.
    pub fn compliance(&self) -> [Option<f64>; 6] {
        self.ratios().map(|(_, f)| f.value().map(|v| 1.0 - v))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub scores: ConsistencyScores,
    pub findings: Vec<Finding>,
    /// Subjects exceeding a declared maxCardinality; diagnostic only.
    pub max_cardinality_violations: usize,
    pub warnings: Vec<String>,
}

fn show(t: &Triple) -> String {
    t.to_string()
}

/// `O_DT`: entities whose closed types contain a disjoint pair.
pub fn disjointness_violations(g: &Graph, o: &Ontology) -> Fraction {
    check_disjointness(g, o, &mut Vec::new())
}

fn check_disjointness(g: &Graph, o: &Ontology, findings: &mut Vec<Finding>) -> Fraction {
    let entities = g.entities();
    let mut bad = 0;
    for e in &entities {
        let types = types_of(g, e, o);
        if let Some((a, b)) = first_disjoint_pair(o, &types) {
            bad += 1;
            findings.push(Finding {
                kind: ViolationKind::Disjointness,
                entity: Some(e.clone()),
                triple: None,
                axiom: format!("{a} owl:disjointWith {b}"),
            });
        }
    }
    Fraction::new(bad, entities.len())
}

fn first_disjoint_pair<'a>(o: &Ontology, types: &'a BTreeSet<Iri>) -> Option<(&'a Iri, &'a Iri)> {
    let v: Vec<&Iri> = types.iter().collect();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if o.are_disjoint(v[i], v[j]) {
                return Some((v[i], v[j]));
            }
        }
    }
    None
}

/// `(O_D, O_R)` over `|T(g)|`: relation triples with an asserted endpoint
/// type disjoint from the declared domain or range.
pub fn domain_range_violations(g: &Graph, o: &Ontology) -> (Fraction, Fraction) {
    let mut f = Vec::new();
    (check_domain(g, o, &mut f), check_range(g, o, &mut f))
}

struct RelationTriple<'a> {
    triple: &'a Triple,
    object: &'a Iri,
    domain: Option<&'a Iri>,
    range: Option<&'a Iri>,
}

fn relation_triples<'a>(g: &'a Graph, o: &'a Ontology) -> impl Iterator<Item = RelationTriple<'a>> {
    g.iter().filter_map(move |t| {
        let object = t.entity_object()?;
        let spec = o.property(&t.predicate)?;
        (spec.kind == PropertyKind::Relation).then_some(RelationTriple {
            triple: t,
            object,
            domain: spec.domain.as_ref(),
            range: spec.range.as_ref(),
        })
    })
}

fn check_domain(g: &Graph, o: &Ontology, findings: &mut Vec<Finding>) -> Fraction {
    let mut bad = 0;
    for rt in relation_triples(g, o) {
        let Some(dom) = rt.domain else { continue };
        if let Some(c) = g.asserted_types(&rt.triple.subject).iter().find(|c| o.are_disjoint(c, dom)) {
            bad += 1;
            findings.push(Finding {
                kind: ViolationKind::Domain,
                entity: None,
                triple: Some(show(rt.triple)),
                axiom: format!("subject type {c} disjoint with domain {dom}"),
            });
        }
    }
    Fraction::new(bad, g.len())
}

fn check_range(g: &Graph, o: &Ontology, findings: &mut Vec<Finding>) -> Fraction {
    let mut bad = 0;
    for rt in relation_triples(g, o) {
        let Some(range) = rt.range else { continue };
        if let Some(c) = g.asserted_types(rt.object).iter().find(|c| o.are_disjoint(c, range)) {
            bad += 1;
            findings.push(Finding {
                kind: ViolationKind::Range,
                entity: None,
                triple: Some(show(rt.triple)),
                axiom: format!("object type {c} disjoint with range {range}"),
            });
        }
    }
    Fraction::new(bad, g.len())
}

/// `O_RD` over `|T(g)|`: some subject type is subsumed by the range and
/// some object type by the domain, while the triple does not also satisfy
/// the declared direction.
pub fn relation_direction_violations(g: &Graph, o: &Ontology) -> Fraction {
    check_direction(g, o, &mut Vec::new())
}

fn check_direction(g: &Graph, o: &Ontology, findings: &mut Vec<Finding>) -> Fraction {
    let mut bad = 0;
    for rt in relation_triples(g, o) {
        let (Some(dom), Some(range)) = (rt.domain, rt.range) else {
            continue;
        };
        let ts = g.asserted_types(&rt.triple.subject);
        let to = g.asserted_types(rt.object);
        let under = |types: &BTreeSet<Iri>, c: &Iri| types.iter().any(|t| o.is_subclass_of(t, c));
        let inverted = under(&ts, range) && under(&to, dom);
        let forward = under(&ts, dom) && under(&to, range);
        if inverted && !forward {
            bad += 1;
            findings.push(Finding {
                kind: ViolationKind::Direction,
                entity: None,
                triple: Some(show(rt.triple)),
                axiom: format!("{} declared {dom} -> {range}", rt.triple.predicate),
            });
        }
    }
    Fraction::new(bad, g.len())
}

/// `(O_LT, O_LF)` over literal-valued triples.
pub fn literal_violations(g: &Graph, o: &Ontology) -> (Fraction, Fraction) {
    let (lt, lf, _) = check_literals(g, o, &mut Vec::new());
    (lt, lf)
}

fn check_literals(
    g: &Graph,
    o: &Ontology,
    findings: &mut Vec<Finding>,
) -> (Fraction, Fraction, BTreeSet<Iri>) {
    let mut total = 0;
    let (mut bad_type, mut bad_format) = (0, 0);
    let mut unchecked = BTreeSet::new();
    for t in g {
        let Term::Literal(lit) = &t.object else {
            continue;
        };
        total += 1;
        let spec = o.property(&t.predicate);
        if let Some(dt) = spec.and_then(|s| s.datatype.as_ref()) {
            match validate_lexical(lit.lexical(), dt) {
                Validity::Invalid => {
                    bad_type += 1;
                    findings.push(Finding {
                        kind: ViolationKind::Datatype,
                        entity: None,
                        triple: Some(show(t)),
                        axiom: format!("{} has datatype {dt}", t.predicate),
                    });
                }
                Validity::Unchecked => {
                    unchecked.insert(dt.clone());
                }
                Validity::Valid => {}
            }
        }
        if let Some(re) = o.format_pattern(&t.predicate) {
            if !re.is_match(lit.lexical()) {
                bad_format += 1;
                findings.push(Finding {
                    kind: ViolationKind::Format,
                    entity: None,
                    triple: Some(show(t)),
                    axiom: format!("{} has format {}", t.predicate, re.as_str()),
                });
            }
        }
    }
    (
        Fraction::new(bad_type, total),
        Fraction::new(bad_format, total),
        unchecked,
    )
}

fn check_cardinality(g: &Graph, o: &Ontology, findings: &mut Vec<Finding>) -> usize {
    let mut counts: BTreeMap<(&Iri, Iri), usize> = BTreeMap::new();
    for t in g {
        if o.max_cardinality(&t.predicate).is_some() {
            *counts
                .entry((&t.subject, o.canonical_property(&t.predicate)))
                .or_default() += 1;
        }
    }
    let mut bad = 0;
    for ((s, p), n) in counts {
        let limit = o.max_cardinality(&p).unwrap_or(u32::MAX) as usize;
        if n > limit {
            bad += 1;
            findings.push(Finding {
                kind: ViolationKind::MaxCardinality,
                entity: Some(s.clone()),
                triple: None,
                axiom: format!("{p} maxCardinality {limit}, found {n}"),
            });
        }
    }
    bad
}

/// All six ratios plus findings and the cardinality diagnostic.
pub fn check_consistency(g: &Graph, o: &Ontology) -> ConsistencyReport {
    let mut findings = Vec::new();
    let o_dt = check_disjointness(g, o, &mut findings);
    let o_d = check_domain(g, o, &mut findings);
    let o_r = check_range(g, o, &mut findings);
    let o_rd = check_direction(g, o, &mut findings);
    let (o_lt, o_lf, unchecked) = check_literals(g, o, &mut findings);
    let max_cardinality_violations = check_cardinality(g, o, &mut findings);
    let warnings = unchecked
        .into_iter()
        .map(|dt| format!("no validator for datatype {dt}; values accepted"))
        .collect::<Vec<_>>();
    for w in &warnings {
        log::warn!("{w}");
    }
    ConsistencyReport {
        scores: ConsistencyScores {
            o_dt,
            o_d,
            o_r,
            o_rd,
            o_lt,
            o_lf,
        },
        findings,
        max_cardinality_violations,
        warnings,
    }
}
