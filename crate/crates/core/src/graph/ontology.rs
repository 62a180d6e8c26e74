//! Target ontology `O = (C, P)` loaded from OWL/RDFS/SKOS triples.
//!
//! Only the axioms the evaluator needs are recognized: class and property
//! declarations, domain/range, `owl:disjointWith`, `rdfs:subClassOf`,
//! class/property equivalence, and `owl:maxCardinality` asserted directly on
//! a property (`<p> owl:maxCardinality "1"`), since restriction classes
//! would require blank nodes. Literal format patterns are not expressible
//! in the vocabulary and come from a JSON sidecar ([`FormatSidecar`]).

use std::collections::{BTreeMap, BTreeSet};

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::{vocab, Graph, Iri, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PropertyKind {
    Relation,
    Attribute,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertySpec {
    pub iri: Iri,
    pub kind: PropertyKind,
    pub domain: Option<Iri>,
    pub range: Option<Iri>,
    pub datatype: Option<Iri>,
    pub format: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OntologyError {
    #[error("subclass cycle through {0}")]
    CyclicSubclass(Iri),
    #[error("disjointness axiom cites undeclared class {0}")]
    UndeclaredDisjointClass(Iri),
    #[error("property {0} is declared both as relation and as attribute")]
    ConflictingKind(Iri),
    #[error("invalid maxCardinality `{value}` on {property}")]
    InvalidCardinality { property: Iri, value: String },
    #[error("invalid format pattern for {property}: {message}")]
    InvalidFormat { property: Iri, message: String },
}

/// Literal format patterns keyed by property IRI.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormatSidecar {
    #[serde(default)]
    pub formats: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Default)]
pub struct Ontology {
    classes: BTreeSet<Iri>,
    properties: BTreeMap<Iri, PropertySpec>,
    disjoint_pairs: BTreeSet<(Iri, Iri)>,
    subclass: BTreeMap<Iri, BTreeSet<Iri>>,
    equivalent_classes: BTreeSet<(Iri, Iri)>,
    equivalent_properties: BTreeSet<(Iri, Iri)>,
    max_cardinality: BTreeMap<Iri, u32>,
    ancestors: BTreeMap<Iri, BTreeSet<Iri>>,
    canonical: BTreeMap<Iri, Iri>,
    aliases: BTreeMap<Iri, Vec<Iri>>,
    patterns: BTreeMap<Iri, Regex>,
    warnings: Vec<String>,
}

impl Ontology {
    pub fn builder() -> OntologyBuilder {
        OntologyBuilder::default()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty() && self.properties.is_empty()
    }

    pub fn classes(&self) -> &BTreeSet<Iri> {
        &self.classes
    }

    pub fn properties(&self) -> impl Iterator<Item = &PropertySpec> {
        self.properties.values()
    }

    pub fn property(&self, p: &Iri) -> Option<&PropertySpec> {
        self.properties.get(p).or_else(|| {
            let canonical = self.canonical.get(p)?;
            self.aliases
                .get(canonical)?
                .iter()
                .find_map(|alias| self.properties.get(alias))
        })
    }

    pub fn disjoint_pairs(&self) -> &BTreeSet<(Iri, Iri)> {
        &self.disjoint_pairs
    }

    pub fn equivalent_properties(&self) -> &BTreeSet<(Iri, Iri)> {
        &self.equivalent_properties
    }

    pub fn equivalent_classes(&self) -> &BTreeSet<(Iri, Iri)> {
        &self.equivalent_classes
    }

    pub fn direct_superclasses(&self, c: &Iri) -> impl Iterator<Item = &Iri> {
        self.subclass.get(c).into_iter().flatten()
    }

    pub fn max_cardinality(&self, p: &Iri) -> Option<u32> {
        self.max_cardinality
            .get(p)
            .or_else(|| self.max_cardinality.get(&self.canonical_property(p)))
            .copied()
    }

    pub fn max_cardinalities(&self) -> &BTreeMap<Iri, u32> {
        &self.max_cardinality
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Reflexive, transitive superclasses of `c`, equivalences included.
    pub fn ancestors(&self, c: &Iri) -> BTreeSet<Iri> {
        self.ancestors
            .get(c)
            .cloned()
            .unwrap_or_else(|| BTreeSet::from([c.clone()]))
    }

    pub fn is_subclass_of(&self, sub: &Iri, sup: &Iri) -> bool {
        sub == sup
            || self
                .ancestors
                .get(sub)
                .is_some_and(|anc| anc.contains(sup))
    }

    pub fn close_types(&self, asserted: BTreeSet<Iri>) -> BTreeSet<Iri> {
        let mut out = BTreeSet::new();
        for c in asserted {
            match self.ancestors.get(&c) {
                Some(anc) => out.extend(anc.iter().cloned()),
                None => {
                    out.insert(c);
                }
            }
        }
        out
    }

    /// Declared disjointness, inherited through the subclass hierarchy.
    pub fn are_disjoint(&self, a: &Iri, b: &Iri) -> bool {
        if self.disjoint_pairs.is_empty() {
            return false;
        }
        let (anc_a, anc_b) = (self.ancestors(a), self.ancestors(b));
        anc_a.iter().any(|x| {
            anc_b
                .iter()
                .any(|y| self.disjoint_pairs.contains(&ordered(x.clone(), y.clone())))
        })
    }

    /// True if the set contains two mutually disjoint classes.
    pub fn has_disjoint_pair(&self, types: &BTreeSet<Iri>) -> bool {
        if self.disjoint_pairs.is_empty() {
            return false;
        }
        let v: Vec<&Iri> = types.iter().collect();
        (0..v.len()).any(|i| (i + 1..v.len()).any(|j| self.are_disjoint(v[i], v[j])))
    }

    /// Representative of `p`'s `owl:equivalentProperty` class (smallest IRI).
    pub fn canonical_property(&self, p: &Iri) -> Iri {
        self.canonical.get(p).cloned().unwrap_or_else(|| p.clone())
    }

    /// All IRIs equivalent to `p`, including `p`.
    pub fn property_group(&self, p: &Iri) -> Vec<Iri> {
        match self.canonical.get(p) {
            Some(c) => self.aliases.get(c).cloned().unwrap_or_else(|| vec![p.clone()]),
            None => vec![p.clone()],
        }
    }

    pub fn format_pattern(&self, p: &Iri) -> Option<&Regex> {
        self.patterns
            .get(p)
            .or_else(|| self.patterns.get(&self.canonical_property(p)))
    }

    /// Attaches literal format patterns. Unknown properties are added as
    /// attributes without domain.
    pub fn with_formats(mut self, sidecar: &FormatSidecar) -> Result<Self, OntologyError> {
        for (key, pattern) in &sidecar.formats {
            let property = Iri::new(key).map_err(|e| OntologyError::InvalidFormat {
                property: Iri::from_static("urn:invalid"),
                message: e.to_string(),
            })?;
            let regex = compile_format(&property, pattern)?;
            self.properties
                .entry(property.clone())
                .or_insert_with(|| PropertySpec {
                    iri: property.clone(),
                    kind: PropertyKind::Attribute,
                    domain: None,
                    range: None,
                    datatype: None,
                    format: None,
                })
                .format = Some(pattern.clone());
            self.patterns.insert(property, regex);
        }
        Ok(self)
    }
}

fn compile_format(property: &Iri, pattern: &str) -> Result<Regex, OntologyError> {
    Regex::new(&format!("^(?:{pattern})$")).map_err(|e| OntologyError::InvalidFormat {
        property: property.clone(),
        message: e.to_string(),
    })
}

fn ordered(a: Iri, b: Iri) -> (Iri, Iri) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Default, Clone)]
struct PendingProperty {
    declared: Option<PropertyKind>,
    domain: Option<Iri>,
    range: Option<Iri>,
    datatype: Option<Iri>,
    format: Option<String>,
}

#[derive(Debug, Default, Clone)]
pub struct OntologyBuilder {
    classes: BTreeSet<Iri>,
    properties: BTreeMap<Iri, PendingProperty>,
    disjoint: Vec<(Iri, Iri)>,
    subclass: Vec<(Iri, Iri)>,
    equivalent_classes: Vec<(Iri, Iri)>,
    equivalent_properties: Vec<(Iri, Iri)>,
    max_cardinality: BTreeMap<Iri, u32>,
    warnings: Vec<String>,
    conflicts: Vec<Iri>,
}

impl OntologyBuilder {
    pub fn class(mut self, c: Iri) -> Self {
        self.classes.insert(c);
        self
    }

    pub fn subclass(mut self, sub: Iri, sup: Iri) -> Self {
        self.subclass.push((sub, sup));
        self
    }

    pub fn disjoint(mut self, a: Iri, b: Iri) -> Self {
        self.disjoint.push((a, b));
        self
    }

    pub fn equivalent_classes(mut self, a: Iri, b: Iri) -> Self {
        self.equivalent_classes.push((a, b));
        self
    }

    pub fn equivalent_properties(mut self, a: Iri, b: Iri) -> Self {
        self.equivalent_properties.push((a, b));
        self
    }

    pub fn relation(mut self, p: Iri, domain: Option<Iri>, range: Option<Iri>) -> Self {
        let spec = self.properties.entry(p).or_default();
        spec.declared = Some(PropertyKind::Relation);
        spec.domain = domain.or(spec.domain.take());
        spec.range = range.or(spec.range.take());
        self
    }

    pub fn attribute(mut self, p: Iri, domain: Option<Iri>, datatype: Option<Iri>) -> Self {
        let spec = self.properties.entry(p).or_default();
        spec.declared = Some(PropertyKind::Attribute);
        spec.domain = domain.or(spec.domain.take());
        spec.datatype = datatype.or(spec.datatype.take());
        self
    }

    pub fn format(mut self, p: Iri, pattern: impl Into<String>) -> Self {
        self.properties.entry(p).or_default().format = Some(pattern.into());
        self
    }

    pub fn max_cardinality(mut self, p: Iri, n: u32) -> Self {
        self.max_cardinality.insert(p, n);
        self
    }

    fn declare_kind(&mut self, p: Iri, kind: PropertyKind) {
        let spec = self.properties.entry(p.clone()).or_default();
        match spec.declared {
            Some(existing) if existing != kind => self.conflicts.push(p),
            _ => spec.declared = Some(kind),
        }
    }

    pub fn build(self) -> Result<Ontology, OntologyError> {
        let OntologyBuilder {
            mut classes,
            properties,
            disjoint,
            subclass,
            equivalent_classes,
            equivalent_properties,
            max_cardinality,
            mut warnings,
            conflicts,
        } = self;
        if let Some(p) = conflicts.into_iter().next() {
            return Err(OntologyError::ConflictingKind(p));
        }

        let mut specs = BTreeMap::new();
        let mut patterns = BTreeMap::new();
        for (iri, pending) in properties {
            let kind = match (pending.declared, &pending.datatype, &pending.range) {
                (Some(PropertyKind::Relation), Some(_), _) => {
                    return Err(OntologyError::ConflictingKind(iri))
                }
                (Some(PropertyKind::Attribute), _, Some(_)) => {
                    return Err(OntologyError::ConflictingKind(iri))
                }
                (Some(kind), _, _) => kind,
                (None, Some(_), _) => PropertyKind::Attribute,
                (None, None, _) => PropertyKind::Relation,
            };
            for class in pending.domain.iter().chain(pending.range.iter()) {
                if classes.insert(class.clone()) {
                    warnings.push(format!("class {class} used by {iri} was not declared"));
                }
            }
            if let Some(pattern) = &pending.format {
                patterns.insert(iri.clone(), compile_format(&iri, pattern)?);
            }
            specs.insert(
                iri.clone(),
                PropertySpec {
                    iri,
                    kind,
                    domain: pending.domain,
                    range: pending.range,
                    datatype: pending.datatype,
                    format: pending.format,
                },
            );
        }

        for (sub, sup) in &subclass {
            classes.insert(sub.clone());
            classes.insert(sup.clone());
        }
        for (a, b) in &equivalent_classes {
            classes.insert(a.clone());
            classes.insert(b.clone());
        }

        let mut disjoint_pairs = BTreeSet::new();
        for (a, b) in disjoint {
            for c in [&a, &b] {
                if !classes.contains(c) {
                    return Err(OntologyError::UndeclaredDisjointClass(c.clone()));
                }
            }
            disjoint_pairs.insert(ordered(a, b));
        }

        let mut direct: BTreeMap<Iri, BTreeSet<Iri>> = BTreeMap::new();
        for (sub, sup) in &subclass {
            if sub != sup {
                direct.entry(sub.clone()).or_default().insert(sup.clone());
            }
        }
        detect_cycle(&direct)?;

        // Equivalence adds edges both ways; it never counts as a cycle.
        let mut edges = direct.clone();
        for (a, b) in &equivalent_classes {
            edges.entry(a.clone()).or_default().insert(b.clone());
            edges.entry(b.clone()).or_default().insert(a.clone());
        }
        let mut ancestors = BTreeMap::new();
        for c in &classes {
            let mut seen = BTreeSet::from([c.clone()]);
            let mut stack = vec![c.clone()];
            while let Some(x) = stack.pop() {
                for y in edges.get(&x).into_iter().flatten() {
                    if seen.insert(y.clone()) {
                        stack.push(y.clone());
                    }
                }
            }
            ancestors.insert(c.clone(), seen);
        }

        let (canonical, aliases) = property_classes(&equivalent_properties);

        Ok(Ontology {
            classes,
            properties: specs,
            disjoint_pairs,
            subclass: direct,
            equivalent_classes: equivalent_classes.into_iter().map(|(a, b)| ordered(a, b)).collect(),
            equivalent_properties: equivalent_properties
                .into_iter()
                .map(|(a, b)| ordered(a, b))
                .collect(),
            max_cardinality,
            ancestors,
            canonical,
            aliases,
            patterns,
            warnings,
        })
    }
}

fn detect_cycle(direct: &BTreeMap<Iri, BTreeSet<Iri>>) -> Result<(), OntologyError> {
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state: BTreeMap<&Iri, u8> = BTreeMap::new();
    for start in direct.keys() {
        if state.get(start).copied().unwrap_or(0) != 0 {
            continue;
        }
        let mut stack: Vec<(&Iri, Vec<&Iri>)> =
            vec![(start, direct[start].iter().collect())];
        state.insert(start, 1);
        while let Some((node, pending)) = stack.last_mut() {
            match pending.pop() {
                Some(next) => match state.get(next).copied().unwrap_or(0) {
                    1 => return Err(OntologyError::CyclicSubclass(next.clone())),
                    0 => {
                        state.insert(next, 1);
                        let children = direct.get(next).map(|s| s.iter().collect()).unwrap_or_default();
                        stack.push((next, children));
                    }
                    _ => {}
                },
                None => {
                    state.insert(node, 2);
                    stack.pop();
                }
            }
        }
    }
    Ok(())
}

type PropertyClasses = (BTreeMap<Iri, Iri>, BTreeMap<Iri, Vec<Iri>>);

fn property_classes(pairs: &[(Iri, Iri)]) -> PropertyClasses {
    let mut adjacency: BTreeMap<&Iri, Vec<&Iri>> = BTreeMap::new();
    for (a, b) in pairs {
        adjacency.entry(a).or_default().push(b);
        adjacency.entry(b).or_default().push(a);
    }
    let mut canonical = BTreeMap::new();
    let mut aliases = BTreeMap::new();
    for start in adjacency.keys() {
        if canonical.contains_key(*start) {
            continue;
        }
        let mut members = BTreeSet::from([(*start).clone()]);
        let mut stack = vec![*start];
        while let Some(x) = stack.pop() {
            for y in &adjacency[x] {
                if members.insert((*y).clone()) {
                    stack.push(y);
                }
            }
        }
        let rep = members.iter().next().cloned().expect("non-empty");
        for m in &members {
            canonical.insert(m.clone(), rep.clone());
        }
        aliases.insert(rep, members.into_iter().collect());
    }
    (canonical, aliases)
}

/// Reads an ontology from schema triples. Triples outside the recognized
/// vocabulary are skipped and reported in [`Ontology::warnings`].
pub fn load_ontology(g: &Graph) -> Result<Ontology, OntologyError> {
    let rdf_type = vocab::rdf::type_();
    let mut b = Ontology::builder();
    let mut warnings = Vec::new();
    for t in g {
        let p = &t.predicate;
        let obj_iri = t.object.as_iri();
        if *p == rdf_type {
            let Some(class) = obj_iri else {
                warnings.push(format!("ignored literal rdf:type on {}", t.subject));
                continue;
            };
            if *class == vocab::owl::class() || *class == vocab::rdfs::class() {
                b.classes.insert(t.subject.clone());
            } else if *class == vocab::owl::object_property() {
                b.declare_kind(t.subject.clone(), PropertyKind::Relation);
            } else if *class == vocab::owl::datatype_property() {
                b.declare_kind(t.subject.clone(), PropertyKind::Attribute);
            } else if *class == vocab::rdf::property() {
                b.properties.entry(t.subject.clone()).or_default();
            } else if *class != vocab::owl::ontology() {
                warnings.push(format!("ignored type {class} on {}", t.subject));
            }
        } else if *p == vocab::rdfs::domain() {
            if let Some(c) = obj_iri {
                b.properties.entry(t.subject.clone()).or_default().domain = Some(c.clone());
            }
        } else if *p == vocab::rdfs::range() {
            if let Some(c) = obj_iri {
                let spec = b.properties.entry(t.subject.clone()).or_default();
                if c.as_str().starts_with(vocab::xsd::NS)
                    || c.as_str() == format!("{}Literal", vocab::rdfs::NS)
                {
                    spec.datatype = Some(c.clone());
                } else {
                    spec.range = Some(c.clone());
                }
            }
        } else if *p == vocab::owl::disjoint_with() {
            if let Some(c) = obj_iri {
                b.disjoint.push((t.subject.clone(), c.clone()));
            }
        } else if *p == vocab::rdfs::sub_class_of() {
            if let Some(c) = obj_iri {
                b.subclass.push((t.subject.clone(), c.clone()));
            }
        } else if *p == vocab::owl::equivalent_class() {
            if let Some(c) = obj_iri {
                b.equivalent_classes.push((t.subject.clone(), c.clone()));
            }
        } else if *p == vocab::owl::equivalent_property() {
            if let Some(q) = obj_iri {
                b.equivalent_properties.push((t.subject.clone(), q.clone()));
            }
        } else if *p == vocab::owl::max_cardinality() {
            let raw = match &t.object {
                Term::Literal(l) => l.lexical().trim().to_string(),
                Term::Iri(i) => i.to_string(),
            };
            match raw.parse::<u32>() {
                Ok(n) if n > 0 => {
                    b.max_cardinality.insert(t.subject.clone(), n);
                }
                _ => {
                    return Err(OntologyError::InvalidCardinality {
                        property: t.subject.clone(),
                        value: raw,
                    })
                }
            }
        } else if *p == vocab::rdfs::label()
            || *p == vocab::rdfs::comment()
            || *p == vocab::skos::alt_label()
        {
            // annotations on schema terms
        } else {
            warnings.push(format!("ignored triple {} {} ...", t.subject, t.predicate));
        }
    }
    b.warnings = warnings;
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_ntriples, Triple};

    fn iri(s: &str) -> Iri {
        Iri::new(format!("http://x/{s}")).unwrap()
    }

    fn decl(g: &mut Vec<Triple>, s: &str, p: Iri, o: Iri) {
        g.push(Triple::new(iri(s), p, o));
    }

    #[test]
    fn three_classes_one_disjoint_pair() {
        let mut t = Vec::new();
        for c in ["Film", "Person", "Company"] {
            decl(&mut t, c, vocab::rdf::type_(), vocab::owl::class());
        }
        decl(&mut t, "Film", vocab::owl::disjoint_with(), iri("Person"));
        let o = load_ontology(&t.into_iter().collect()).unwrap();
        assert_eq!(o.classes().len(), 3);
        assert_eq!(o.disjoint_pairs().len(), 1);
        assert!(o.are_disjoint(&iri("Person"), &iri("Film")));
        assert!(!o.are_disjoint(&iri("Company"), &iri("Film")));
    }

    #[test]
    fn empty_graph_gives_empty_ontology() {
        let o = load_ontology(&Graph::new()).unwrap();
        assert!(o.is_empty());
        assert!(o.warnings().is_empty());
    }

    #[test]
    fn subclass_cycle_rejected() {
        let mut t = Vec::new();
        decl(&mut t, "A", vocab::rdfs::sub_class_of(), iri("B"));
        decl(&mut t, "B", vocab::rdfs::sub_class_of(), iri("A"));
        let err = load_ontology(&t.into_iter().collect()).unwrap_err();
        assert!(matches!(err, OntologyError::CyclicSubclass(_)));
    }

    #[test]
    fn undeclared_disjoint_class_rejected() {
        let mut t = Vec::new();
        decl(&mut t, "Film", vocab::rdf::type_(), vocab::owl::class());
        decl(&mut t, "Film", vocab::owl::disjoint_with(), iri("Ghost"));
        let err = load_ontology(&t.into_iter().collect()).unwrap_err();
        assert_eq!(err, OntologyError::UndeclaredDisjointClass(iri("Ghost")));
    }

    #[test]
    fn properties_and_inherited_disjointness() {
        let doc = r#"
<http://x/Film> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://www.w3.org/2002/07/owl#Class> .
<http://x/Person> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://www.w3.org/2002/07/owl#Class> .
<http://x/Actor> <http://www.w3.org/2000/01/rdf-schema#subClassOf> <http://x/Person> .
<http://x/Film> <http://www.w3.org/2002/07/owl#disjointWith> <http://x/Person> .
<http://x/director> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://www.w3.org/2002/07/owl#ObjectProperty> .
<http://x/director> <http://www.w3.org/2000/01/rdf-schema#domain> <http://x/Film> .
<http://x/director> <http://www.w3.org/2000/01/rdf-schema#range> <http://x/Person> .
<http://x/runtime> <http://www.w3.org/2000/01/rdf-schema#range> <http://www.w3.org/2001/XMLSchema#double> .
<http://x/runtime> <http://www.w3.org/2002/07/owl#maxCardinality> "1"^^<http://www.w3.org/2001/XMLSchema#nonNegativeInteger> .
<http://x/starring> <http://www.w3.org/2002/07/owl#equivalentProperty> <http://x/actor> .
<http://x/x> <http://x/unknown> "y" .
"#;
        let o = load_ontology(&parse_ntriples(doc).unwrap()).unwrap();
        assert!(o.are_disjoint(&iri("Actor"), &iri("Film")));
        assert!(o.is_subclass_of(&iri("Actor"), &iri("Person")));
        let dir = o.property(&iri("director")).unwrap();
        assert_eq!(dir.kind, PropertyKind::Relation);
        assert_eq!(dir.domain, Some(iri("Film")));
        let rt = o.property(&iri("runtime")).unwrap();
        assert_eq!(rt.kind, PropertyKind::Attribute);
        assert_eq!(rt.datatype, Some(vocab::xsd::double()));
        assert_eq!(o.max_cardinality(&iri("runtime")), Some(1));
        assert_eq!(o.canonical_property(&iri("starring")), iri("actor"));
        assert_eq!(o.property_group(&iri("actor")).len(), 2);
        assert_eq!(o.warnings().len(), 1);
    }

    #[test]
    fn type_closure() {
        let o = Ontology::builder()
            .class(iri("Person"))
            .subclass(iri("Actor"), iri("Person"))
            .equivalent_classes(iri("Person"), iri("Human"))
            .build()
            .unwrap();
        let closed = o.close_types(BTreeSet::from([iri("Actor")]));
        assert_eq!(
            closed,
            BTreeSet::from([iri("Actor"), iri("Person"), iri("Human")])
        );
        assert!(o.close_types(BTreeSet::new()).is_empty());
    }

    #[test]
    fn format_sidecar() {
        let o = Ontology::builder().build().unwrap();
        let sidecar = FormatSidecar {
            formats: BTreeMap::from([("http://x/year".to_string(), r"\d{4}".to_string())]),
        };
        let o = o.with_formats(&sidecar).unwrap();
        let re = o.format_pattern(&iri("year")).unwrap();
        assert!(re.is_match("1997"));
        assert!(!re.is_match("1997-01"));
    }
}
