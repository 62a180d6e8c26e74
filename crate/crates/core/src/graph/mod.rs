//! RDF data model: IRIs, literals, triples and immutable graphs.
//!
//! A [`Graph`] stores its triples sorted and deduplicated, which gives
//! set semantics, cheap subject lookups via binary search, and linear-time
//! set operations by merging.

mod ntriples;
mod ontology;
pub mod vocab;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

pub use ntriples::{parse_ntriples, serialize_ntriples, ParseError};
pub use ontology::{load_ontology, FormatSidecar, Ontology, OntologyError, PropertyKind, PropertySpec};

/// An absolute IRI. Cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Iri(Arc<str>);

impl TryFrom<String> for Iri {
    type Error = IriError;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        Iri::new(value)
    }
}

impl From<Iri> for String {
    fn from(iri: Iri) -> String {
        iri.as_str().to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IriError {
    #[error("empty IRI")]
    Empty,
    #[error("IRI `{0}` contains whitespace or angle brackets")]
    IllegalChar(String),
    #[error("IRI `{0}` has no scheme")]
    NoScheme(String),
}

impl Iri {
    pub fn new(value: impl AsRef<str>) -> Result<Self, IriError> {
        let value = value.as_ref();
        if value.is_empty() {
            return Err(IriError::Empty);
        }
        if value
            .chars()
            .any(|c| c.is_whitespace() || c == '<' || c == '>' || c == '"')
        {
            return Err(IriError::IllegalChar(value.to_string()));
        }
        match value.find(':') {
            Some(i) if i > 0 => Ok(Iri(Arc::from(value))),
            _ => Err(IriError::NoScheme(value.to_string())),
        }
    }

    /// Builds an IRI from a compile-time constant known to be valid.
    pub(crate) fn from_static(value: &'static str) -> Self {
        debug_assert!(Iri::new(value).is_ok(), "{value}");
        Iri(Arc::from(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The fragment or last path segment.
    pub fn local_name(&self) -> &str {
        let s = self.as_str();
        match s.rfind(['#', '/', ':']) {
            Some(i) if i + 1 < s.len() => &s[i + 1..],
            _ => s,
        }
    }
}

impl fmt::Debug for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// N-Triples syntax.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&ntriples::write_term(self))
    }
}

/// One N-Triples statement, without the trailing newline.
impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} .",
            ntriples::write_iri(&self.subject),
            ntriples::write_iri(&self.predicate),
            self.object
        )
    }
}

impl std::str::FromStr for Iri {
    type Err = IriError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Iri::new(s)
    }
}

/// A typed literal. Plain literals carry `xsd:string`, language-tagged ones
/// carry `rdf:langString`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    lexical: Arc<str>,
    datatype: Iri,
    language: Option<Arc<str>>,
}

impl Literal {
    pub fn string(lexical: impl AsRef<str>) -> Self {
        Literal {
            lexical: Arc::from(lexical.as_ref()),
            datatype: vocab::xsd::string(),
            language: None,
        }
    }

    pub fn typed(lexical: impl AsRef<str>, datatype: Iri) -> Self {
        Literal {
            lexical: Arc::from(lexical.as_ref()),
            datatype,
            language: None,
        }
    }

    pub fn lang(lexical: impl AsRef<str>, tag: impl AsRef<str>) -> Self {
        Literal {
            lexical: Arc::from(lexical.as_ref()),
            datatype: vocab::rdf::lang_string(),
            language: Some(Arc::from(tag.as_ref())),
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }
}

/// Object position of a triple.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(Iri),
    Literal(Literal),
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            Term::Literal(_) => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            Term::Iri(_) => None,
        }
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<Literal> for Term {
    fn from(lit: Literal) -> Self {
        Term::Literal(lit)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Iri,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Iri, predicate: Iri, object: impl Into<Term>) -> Self {
        Triple {
            subject,
            predicate,
            object: object.into(),
        }
    }

    /// Object is an entity: an IRI that is not the class of an `rdf:type` triple.
    pub fn entity_object(&self) -> Option<&Iri> {
        if self.predicate == vocab::rdf::type_() {
            return None;
        }
        self.object.as_iri()
    }

    pub fn is_type_assertion(&self) -> bool {
        self.predicate == vocab::rdf::type_()
    }
}

/// Immutable set of triples.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    triples: Vec<Triple>,
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut triples: Vec<Triple> = iter.into_iter().collect();
        triples.sort_unstable();
        triples.dedup();
        Graph { triples }
    }
}

impl<'a> IntoIterator for &'a Graph {
    type Item = &'a Triple;
    type IntoIter = std::slice::Iter<'a, Triple>;
    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

impl Graph {
    pub fn new() -> Self {
        Graph::default()
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Triple> {
        self.triples.iter()
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.triples.binary_search(t).is_ok()
    }

    /// All triples with the given subject, in sorted order.
    pub fn with_subject(&self, subject: &Iri) -> &[Triple] {
        let lo = self
            .triples
            .partition_point(|t| t.subject.cmp(subject) == Ordering::Less);
        let hi = lo + self.triples[lo..].partition_point(|t| &t.subject == subject);
        &self.triples[lo..hi]
    }

    pub fn with_subject_predicate(&self, subject: &Iri, predicate: &Iri) -> &[Triple] {
        let block = self.with_subject(subject);
        let lo = block.partition_point(|t| t.predicate.cmp(predicate) == Ordering::Less);
        let hi = lo + block[lo..].partition_point(|t| &t.predicate == predicate);
        &block[lo..hi]
    }

    /// Distinct subjects in sorted order.
    pub fn subjects(&self) -> impl Iterator<Item = &Iri> {
        let mut last: Option<&Iri> = None;
        self.triples.iter().filter_map(move |t| {
            if last == Some(&t.subject) {
                None
            } else {
                last = Some(&t.subject);
                Some(&t.subject)
            }
        })
    }

    /// `E(g)`: subjects plus IRI objects of non-type predicates.
    pub fn entities(&self) -> BTreeSet<Iri> {
        let mut out: BTreeSet<Iri> = self.subjects().cloned().collect();
        out.extend(self.triples.iter().filter_map(|t| t.entity_object().cloned()));
        out
    }

    /// Asserted `rdf:type` objects of `e`, without closure.
    pub fn asserted_types(&self, e: &Iri) -> BTreeSet<Iri> {
        self.with_subject_predicate(e, &vocab::rdf::type_())
            .iter()
            .filter_map(|t| t.object.as_iri().cloned())
            .collect()
    }

    /// Asserted types for every subject that has one.
    pub fn type_map(&self) -> BTreeMap<Iri, BTreeSet<Iri>> {
        let rdf_type = vocab::rdf::type_();
        let mut out: BTreeMap<Iri, BTreeSet<Iri>> = BTreeMap::new();
        for t in self.triples.iter().filter(|t| t.predicate == rdf_type) {
            if let Term::Iri(class) = &t.object {
                out.entry(t.subject.clone()).or_default().insert(class.clone());
            }
        }
        out
    }

    /// Label-like literals (`rdfs:label`, optionally `skos:altLabel`) of `e`.
    pub fn labels(&self, e: &Iri, include_alt: bool) -> Vec<&str> {
        let label = vocab::rdfs::label();
        let alt = vocab::skos::alt_label();
        self.with_subject(e)
            .iter()
            .filter(|t| t.predicate == label || (include_alt && t.predicate == alt))
            .filter_map(|t| t.object.as_literal().map(Literal::lexical))
            .collect()
    }

    pub fn difference(&self, other: &Graph) -> Graph {
        Graph {
            triples: merge_filter(&self.triples, &other.triples, false),
        }
    }

    pub fn intersection(&self, other: &Graph) -> Graph {
        Graph {
            triples: merge_filter(&self.triples, &other.triples, true),
        }
    }

    pub fn union(&self, other: &Graph) -> Graph {
        let mut triples = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.triples, &other.triples);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => {
                    triples.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    triples.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    triples.push(a[i].clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        triples.extend_from_slice(&a[i..]);
        triples.extend_from_slice(&b[j..]);
        Graph { triples }
    }

    pub fn into_triples(self) -> Vec<Triple> {
        self.triples
    }
}

/// Keeps elements of `a` that are (`keep_common`) or are not in `b`.
fn merge_filter(a: &[Triple], b: &[Triple], keep_common: bool) -> Vec<Triple> {
    let mut out = Vec::new();
    let mut j = 0;
    for t in a {
        while j < b.len() && b[j] < *t {
            j += 1;
        }
        let common = j < b.len() && b[j] == *t;
        if common == keep_common {
            out.push(t.clone());
        }
    }
    out
}

/// `T(a) \ T(b)`.
pub fn graph_difference(a: &Graph, b: &Graph) -> Graph {
    a.difference(b)
}

/// Asserted types of `e` closed upward under the ontology's subclass and
/// class-equivalence axioms.
pub fn types_of(g: &Graph, e: &Iri, o: &Ontology) -> BTreeSet<Iri> {
    o.close_types(g.asserted_types(e))
}
