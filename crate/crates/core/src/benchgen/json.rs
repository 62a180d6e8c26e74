use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::GenError;
use crate::graph::{vocab, Graph, Iri, Literal, Ontology, Term, Triple};

fn roots_of<'a>(g: &'a Graph, o: &'a Ontology, root_class: &'a Iri) -> impl Iterator<Item = &'a Iri> {
    g.subjects().filter(move |s| {
        g.asserted_types(s)
            .iter()
            .any(|c| o.is_subclass_of(c, root_class))
    })
}

fn push(map: &mut Map<String, Value>, key: &str, value: Value) {
    match map.get_mut(key) {
        None => {
            map.insert(key.to_string(), value);
        }
        Some(Value::Array(items)) => items.push(value),
        Some(existing) => {
            let first = existing.take();
            *existing = Value::Array(vec![first, value]);
        }
    }
}

fn label_key(is_root: bool) -> &'static str {
    if is_root {
        "title"
    } else {
        "name"
    }
}

/// Literal-valued properties of `e`, with the label under `title`/`name`.
fn literal_fields(g: &Graph, e: &Iri, is_root: bool, map: &mut Map<String, Value>) {
    let label = vocab::rdfs::label();
    for t in g.with_subject(e) {
        if let Term::Literal(lit) = &t.object {
            let key = if t.predicate == label {
                label_key(is_root)
            } else {
                t.predicate.local_name()
            };
            push(map, key, Value::String(lit.lexical().to_string()));
        }
    }
    if !map.contains_key(label_key(is_root)) {
        map.insert("id".into(), Value::String(e.local_name().to_string()));
    }
}

/// One nested record per root entity. Keys are property local names;
/// referenced entities are inlined one level deep; repeated keys become
/// arrays; `rdf:type` is omitted.
pub fn emit_json_records(g: &Graph, o: &Ontology, root_class: &Iri) -> Vec<Value> {
    roots_of(g, o, root_class)
        .map(|root| {
            let mut doc = Map::new();
            literal_fields(g, root, true, &mut doc);
            if doc.contains_key("id") {
                log::warn!("root {root} has no label; emitted with generated id");
            }
            for t in g.with_subject(root) {
                if let Some(target) = t.entity_object() {
                    let mut nested = Map::new();
                    literal_fields(g, target, false, &mut nested);
                    push(&mut doc, t.predicate.local_name(), Value::Object(nested));
                }
            }
            Value::Object(doc)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TextDocument {
    pub id: String,
    pub text: String,
}

/// One document per root carrying a non-empty abstract.
pub fn emit_text_documents(
    g: &Graph,
    o: &Ontology,
    root_class: &Iri,
    abstract_property: Option<&Iri>,
) -> Result<Vec<TextDocument>, GenError> {
    let prop = abstract_property.ok_or(GenError::NoAbstractProperty)?;
    let mut docs = Vec::new();
    for root in roots_of(g, o, root_class) {
        let text = g
            .with_subject_predicate(root, prop)
            .iter()
            .filter_map(|t| t.object.as_literal())
            .map(Literal::lexical)
            .find(|s| !s.trim().is_empty());
        match text {
            Some(text) => docs.push(TextDocument {
                id: root.to_string(),
                text: text.to_string(),
            }),
            None => log::warn!("root {root} has no abstract; skipped"),
        }
    }
    Ok(docs)
}

fn slug(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_alphanumeric() { c } else { '_' })
        .collect()
}

/// Generic record-to-triple mapping: keys resolve to ontology properties by
/// local name (falling back to `property_ns`), `title`/`name` become
/// `rdfs:label`, nested objects become linked entities minted under
/// `entity_ns` from their label.
pub fn json_to_triples(doc: &Value, o: &Ontology, entity_ns: &str, property_ns: &str) -> Graph {
    let mut out = Vec::new();
    if let Value::Object(map) = doc {
        map_entity(map, o, entity_ns, property_ns, &mut out);
    }
    out.into_iter().collect()
}

fn map_entity(
    map: &Map<String, Value>,
    o: &Ontology,
    entity_ns: &str,
    property_ns: &str,
    out: &mut Vec<Triple>,
) -> Option<Iri> {
    let name = ["title", "name", "id"]
        .iter()
        .find_map(|k| map.get(*k).and_then(Value::as_str))?;
    let subject = Iri::new(format!("{entity_ns}{}", slug(name))).ok()?;
    for (key, value) in map {
        let predicate = match key.as_str() {
            "title" | "name" => vocab::rdfs::label(),
            "id" => continue,
            "altLabel" => vocab::skos::alt_label(),
            other => match o.properties().find(|p| p.iri.local_name() == other) {
                Some(spec) => spec.iri.clone(),
                None => match Iri::new(format!("{property_ns}{other}")) {
                    Ok(p) => p,
                    Err(_) => continue,
                },
            },
        };
        let values: Vec<&Value> = match value {
            Value::Array(items) => items.iter().collect(),
            v => vec![v],
        };
        for v in values {
            match v {
                Value::Object(nested) => {
                    if let Some(target) = map_entity(nested, o, entity_ns, property_ns, out) {
                        out.push(Triple::new(subject.clone(), predicate.clone(), target));
                    }
                }
                Value::String(s) => out.push(Triple::new(subject.clone(), predicate.clone(), Literal::string(s))),
                Value::Null => {}
                other => out.push(Triple::new(
                    subject.clone(),
                    predicate.clone(),
                    Literal::string(other.to_string()),
                )),
            }
        }
    }
    Some(subject)
}
