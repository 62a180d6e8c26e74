//! Brute-force reference evaluator and random-world generator.
//!
//! The evaluator restates every metric as a direct set computation over
//! explicit tables (class closure, literal value classes, datatype and
//! format validity) and never calls the library's metric code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use kgie_core::alignment::{AlignmentPair, AlignmentRelation};
use kgie_core::benchgen::rng_from_seed;
use kgie_core::graph::{vocab, Graph, Iri, Literal, Ontology, Term, Triple};
use kgie_core::quality::{Fraction, StageIndex};
use rand_chacha::ChaCha8Rng;
use rand_core::RngCore;

pub const NS: &str = "http://t.example/";

pub fn t(local: &str) -> Iri {
    Iri::new(format!("{NS}{local}")).unwrap()
}

pub fn r(local: &str) -> Iri {
    Iri::new(format!("http://ref.example/{local}")).unwrap()
}

pub fn n(local: &str) -> Iri {
    Iri::new(format!("http://out.example/{local}")).unwrap()
}

/// Film ≡ Work, Actor ⊑ Person; the three groups are pairwise disjoint.
pub fn ontology() -> Ontology {
    let xsd = |s: &str| Iri::new(format!("{}{s}", vocab::xsd::NS)).unwrap();
    Ontology::builder()
        .class(t("Film"))
        .class(t("Work"))
        .class(t("Person"))
        .class(t("Actor"))
        .class(t("Company"))
        .equivalent_classes(t("Film"), t("Work"))
        .subclass(t("Actor"), t("Person"))
        .disjoint(t("Film"), t("Person"))
        .disjoint(t("Film"), t("Company"))
        .disjoint(t("Person"), t("Company"))
        .relation(t("director"), Some(t("Film")), Some(t("Person")))
        .relation(t("starring"), Some(t("Film")), Some(t("Actor")))
        .relation(t("stars"), Some(t("Film")), Some(t("Actor")))
        .equivalent_properties(t("starring"), t("stars"))
        .relation(t("company"), Some(t("Film")), Some(t("Company")))
        .attribute(t("runtime"), Some(t("Film")), Some(xsd("integer")))
        .attribute(t("released"), Some(t("Film")), Some(xsd("date")))
        .attribute(t("name"), Some(t("Person")), Some(xsd("string")))
        .format(t("released"), r"\d{4}-\d{2}-\d{2}")
        .build()
        .unwrap()
}

fn local(i: &Iri) -> &str {
    i.as_str().strip_prefix(NS).unwrap_or("")
}

fn closure(c: &Iri) -> BTreeSet<String> {
    let names: &[&str] = match local(c) {
        "Film" | "Work" => &["Film", "Work"],
        "Actor" => &["Actor", "Person"],
        "Person" => &["Person"],
        "Company" => &["Company"],
        _ => return BTreeSet::from([c.as_str().to_string()]),
    };
    names.iter().map(|s| format!("{NS}{s}")).collect()
}

fn group(c: &str) -> Option<char> {
    match c.strip_prefix(NS)? {
        "Film" | "Work" => Some('F'),
        "Person" | "Actor" => Some('P'),
        "Company" => Some('C'),
        _ => None,
    }
}

fn disjoint(a: &str, b: &str) -> bool {
    matches!((group(a), group(b)), (Some(x), Some(y)) if x != y)
}

/// Literal lexical forms with value class, datatype validity and format
/// validity for their property.
const LITERALS: [(&str, &str, &str, bool, bool); 12] = [
    ("runtime", "90", "n90", true, true),
    ("runtime", "90.0", "n90", false, true),
    ("runtime", "120", "n120", true, true),
    ("runtime", "2h 15m", "x1", false, true),
    ("released", "2001-02-03", "d1", true, true),
    ("released", "03.02.2001", "d1", false, false),
    ("released", "2010-07-08", "d2", true, true),
    ("released", "2001-13-45", "x2", false, true),
    ("name", "Alice Smith", "s1", true, true),
    ("name", "alice   smith", "s1", true, true),
    ("name", "Bob", "s2", true, true),
    ("name", "\"Bob\"", "s2", true, true),
];

fn literal_class(lit: &Literal) -> String {
    LITERALS
        .iter()
        .find(|row| row.1 == lit.lexical())
        .map(|row| row.2.to_string())
        .unwrap_or_else(|| format!("lex:{}", lit.lexical()))
}

fn literal_validity(p: &Iri, lit: &Literal) -> (bool, bool) {
    LITERALS
        .iter()
        .find(|row| local(p) == row.0 && row.1 == lit.lexical())
        .map(|row| (row.3, row.4))
        .unwrap_or((true, true))
}

pub fn entities(g: &Graph) -> BTreeSet<Iri> {
    let mut out = BTreeSet::new();
    for tr in g {
        out.insert(tr.subject.clone());
        if tr.predicate != vocab::rdf::type_() {
            if let Term::Iri(o) = &tr.object {
                out.insert(o.clone());
            }
        }
    }
    out
}

fn asserted(g: &Graph, e: &Iri) -> BTreeSet<String> {
    g.iter()
        .filter(|tr| &tr.subject == e && tr.predicate == vocab::rdf::type_())
        .filter_map(|tr| tr.object.as_iri().map(|c| c.as_str().to_string()))
        .collect()
}

fn closed(g: &Graph, e: &Iri) -> BTreeSet<String> {
    asserted(g, e)
        .iter()
        .flat_map(|c| closure(&Iri::new(c).unwrap()))
        .collect()
}

fn canon(p: &Iri) -> String {
    if local(p) == "stars" {
        format!("{NS}starring")
    } else {
        p.as_str().to_string()
    }
}

pub fn matches(tn: &Triple, tr: &Triple, a: &BTreeSet<(Iri, Iri)>) -> bool {
    if !a.contains(&(tn.subject.clone(), tr.subject.clone())) || canon(&tn.predicate) != canon(&tr.predicate) {
        return false;
    }
    match (&tn.object, &tr.object) {
        (Term::Iri(x), Term::Iri(y)) if tn.predicate == vocab::rdf::type_() => {
            x == y || (closure(x).contains(y.as_str()) && closure(y).contains(x.as_str()))
        }
        (Term::Iri(x), Term::Iri(y)) => a.contains(&(x.clone(), y.clone())),
        (Term::Literal(x), Term::Literal(y)) => literal_class(x) == literal_class(y),
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expected {
    pub cov_e: Fraction,
    pub cov_t: Fraction,
    pub corr_e: Fraction,
    pub corr_t: Fraction,
    pub dup_rate: Fraction,
    pub o_dt: Fraction,
    pub o_d: Fraction,
    pub o_r: Fraction,
    pub o_rd: Fraction,
    pub o_lt: Fraction,
    pub o_lf: Fraction,
}

pub struct World {
    pub seed: Graph,
    pub reference: Graph,
    pub produced: Graph,
    pub stage_of: BTreeMap<Iri, u32>,
    pub stages: u32,
    pub alignment: BTreeSet<(Iri, Iri)>,
    pub seed_alignment: BTreeSet<(Iri, Iri)>,
}

impl World {
    pub fn stage_index(&self) -> StageIndex {
        let mut by: BTreeMap<u32, Vec<Iri>> = (0..=self.stages).map(|s| (s, Vec::new())).collect();
        for (e, s) in &self.stage_of {
            by.entry(*s).or_default().push(e.clone());
        }
        StageIndex::from_stage_lists(by)
    }

    pub fn relation(pairs: &BTreeSet<(Iri, Iri)>) -> AlignmentRelation {
        pairs
            .iter()
            .map(|(p, r)| AlignmentPair {
                produced: p.clone(),
                reference: r.clone(),
                score: 1.0,
                provenance: "fixture".into(),
            })
            .collect()
    }

    /// Every metric by enumeration, for stage `stage`.
    pub fn expected(&self, stage: u32) -> Expected {
        let a = &self.alignment;
        let seed_e = entities(&self.seed);
        let prod_e = entities(&self.produced);
        let pe: BTreeSet<Iri> = prod_e.difference(&seed_e).cloned().collect();
        let pt: Vec<&Triple> = self.produced.iter().filter(|x| !self.seed.contains(x)).collect();
        let in_stage = |e: &Iri| self.stage_of.get(e).is_some_and(|s| *s <= stage);
        let re: BTreeSet<Iri> = entities(&self.reference)
            .into_iter()
            .filter(|x| in_stage(x) && !self.seed_alignment.iter().any(|(_, y)| y == x))
            .collect();
        let rt: Vec<&Triple> = self
            .reference
            .iter()
            .filter(|x| in_stage(&x.subject))
            .filter(|x| !self.seed.iter().any(|s| matches(s, x, &self.seed_alignment)))
            .collect();

        let type_ok = |e: &Iri, x: &Iri| asserted(&self.reference, x).is_subset(&closed(&self.produced, e));
        let covered = re
            .iter()
            .filter(|x| a.iter().any(|(e, y)| y == *x && prod_e.contains(e) && type_ok(e, x)))
            .count();
        let mut refs = BTreeSet::new();
        let mut prods = BTreeSet::new();
        for (e, x) in a {
            if pe.contains(e) && re.contains(x) && type_ok(e, x) {
                refs.insert(x.clone());
                prods.insert(e.clone());
            }
        }
        let cov_t = rt
            .iter()
            .filter(|x| self.produced.iter().any(|y| matches(y, x, a)))
            .count();
        let m_ref = rt.iter().filter(|x| pt.iter().any(|y| matches(y, x, a))).count();
        let m_prod = pt.iter().filter(|y| rt.iter().any(|x| matches(y, x, a))).count();
        let mut dup = 0;
        for x in a.iter().map(|(_, y)| y).collect::<BTreeSet<_>>() {
            let k = a.iter().filter(|(e, y)| y == x && prod_e.contains(e)).count();
            dup += k.saturating_sub(1);
        }

        let g = &self.produced;
        let o_dt = prod_e
            .iter()
            .filter(|e| {
                let c = closed(g, e);
                c.iter().any(|x| c.iter().any(|y| disjoint(x, y)))
            })
            .count();
        let spec = |p: &Iri| -> Option<(&'static str, &'static str)> {
            match local(p) {
                "director" => Some(("Film", "Person")),
                "starring" | "stars" => Some(("Film", "Actor")),
                "company" => Some(("Film", "Company")),
                _ => None,
            }
        };
        let (mut od, mut or, mut ord) = (0, 0, 0);
        let (mut lits, mut lt, mut lf) = (0, 0, 0);
        for x in g {
            match &x.object {
                Term::Literal(l) => {
                    lits += 1;
                    let (tv, fv) = literal_validity(&x.predicate, l);
                    lt += usize::from(!tv);
                    lf += usize::from(!fv);
                }
                Term::Iri(obj) if x.predicate != vocab::rdf::type_() => {
                    let Some((dom, range)) = spec(&x.predicate) else { continue };
                    let (dom, range) = (format!("{NS}{dom}"), format!("{NS}{range}"));
                    let ts = asserted(g, &x.subject);
                    let to = asserted(g, obj);
                    od += usize::from(ts.iter().any(|c| disjoint(c, &dom)));
                    or += usize::from(to.iter().any(|c| disjoint(c, &range)));
                    let under = |types: &BTreeSet<String>, c: &str| {
                        types.iter().any(|t| closure(&Iri::new(t).unwrap()).contains(c))
                    };
                    let inverted = under(&ts, &range) && under(&to, &dom);
                    let forward = under(&ts, &dom) && under(&to, &range);
                    ord += usize::from(inverted && !forward);
                }
                _ => {}
            }
        }
        Expected {
            cov_e: Fraction::new(covered, re.len()),
            cov_t: Fraction::new(cov_t, rt.len()),
            corr_e: Fraction::new(refs.len().min(prods.len()), pe.len()),
            corr_t: Fraction::new(m_ref.min(m_prod), pt.len()),
            dup_rate: Fraction::new(dup, prod_e.len()),
            o_dt: Fraction::new(o_dt, prod_e.len()),
            o_d: Fraction::new(od, g.len()),
            o_r: Fraction::new(or, g.len()),
            o_rd: Fraction::new(ord, g.len()),
            o_lt: Fraction::new(lt, lits),
            o_lf: Fraction::new(lf, lits),
        }
    }
}

pub struct Dice(ChaCha8Rng);

impl Dice {
    pub fn new(seed: u64) -> Self {
        Dice(rng_from_seed(seed))
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.0.next_u64() % n as u64) as usize
    }

    pub fn chance(&mut self, percent: usize) -> bool {
        self.below(100) < percent
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len())]
    }
}

fn lit(s: &str) -> Literal {
    Literal::string(s)
}

/// A reference KG of at most 12 entities, a seed taken from stage 0, a
/// perturbed produced KG (renamed, duplicated, mistyped, inverted and
/// spurious content) and its alignment. At most 20 produced entities.
pub fn random_world(seed: u64) -> World {
    let mut d = Dice::new(seed);
    let ty = vocab::rdf::type_();
    let label = vocab::rdfs::label();
    let nf = 1 + d.below(4);
    let np = 1 + d.below(5);
    let nc = d.below(3);
    let films: Vec<Iri> = (0..nf).map(|i| r(&format!("f{i}"))).collect();
    let persons: Vec<Iri> = (0..np).map(|i| r(&format!("p{i}"))).collect();
    let companies: Vec<Iri> = (0..nc).map(|i| r(&format!("c{i}"))).collect();

    let mut reference = Vec::new();
    for (i, f) in films.iter().enumerate() {
        if d.chance(90) {
            reference.push(Triple::new(f.clone(), ty.clone(), t(d.pick(&["Film", "Work"]))));
        }
        reference.push(Triple::new(f.clone(), label.clone(), lit(&format!("Film {i}"))));
        reference.push(Triple::new(f.clone(), t("director"), d.pick(&persons).clone()));
        if d.chance(70) {
            reference.push(Triple::new(f.clone(), t(d.pick(&["starring", "stars"])), d.pick(&persons).clone()));
        }
        if !companies.is_empty() && d.chance(60) {
            reference.push(Triple::new(f.clone(), t("company"), d.pick(&companies).clone()));
        }
        for p in ["runtime", "released"] {
            if d.chance(70) {
                let rows: Vec<_> = LITERALS.iter().filter(|row| row.0 == p && row.3).collect();
                reference.push(Triple::new(f.clone(), t(p), lit(d.pick(&rows).1)));
            }
        }
    }
    for (i, p) in persons.iter().enumerate() {
        if d.chance(85) {
            reference.push(Triple::new(p.clone(), ty.clone(), t(d.pick(&["Person", "Actor"]))));
        }
        reference.push(Triple::new(p.clone(), label.clone(), lit(&format!("Person {i}"))));
        if d.chance(50) {
            reference.push(Triple::new(p.clone(), t("name"), lit(d.pick(&["Alice Smith", "Bob"]))));
        }
    }
    for (i, c) in companies.iter().enumerate() {
        reference.push(Triple::new(c.clone(), ty.clone(), t("Company")));
        reference.push(Triple::new(c.clone(), label.clone(), lit(&format!("Company {i}"))));
    }
    let reference: Graph = reference.into_iter().collect();

    let stages = 1 + d.below(3) as u32;
    let all: Vec<Iri> = entities(&reference).into_iter().collect();
    let stage_of: BTreeMap<Iri, u32> = all
        .iter()
        .map(|e| (e.clone(), d.below(stages as usize + 1) as u32))
        .collect();
    let seed: Graph = reference
        .iter()
        .filter(|x| stage_of[&x.subject] == 0)
        .cloned()
        .collect();
    let seed_alignment: BTreeSet<(Iri, Iri)> = entities(&seed).into_iter().map(|e| (e.clone(), e)).collect();

    // produced names: identity for some, renamed for others
    let mut names: BTreeMap<Iri, Iri> = BTreeMap::new();
    for e in &all {
        let fresh = n(e.as_str().rsplit('/').next().unwrap());
        let name = if seed_alignment.iter().any(|(x, _)| x == e) || d.chance(30) {
            e.clone()
        } else {
            fresh
        };
        names.insert(e.clone(), name);
    }
    let rename = |e: &Iri, names: &BTreeMap<Iri, Iri>| names.get(e).cloned().unwrap_or_else(|| e.clone());
    let mut produced: Vec<Triple> = seed.iter().cloned().collect();
    for x in reference.iter().filter(|x| stage_of[&x.subject] > 0) {
        if !d.chance(80) {
            continue;
        }
        let s = rename(&x.subject, &names);
        let mut p = x.predicate.clone();
        let mut o = match (&x.object, x.is_type_assertion()) {
            (Term::Iri(i), false) => Term::Iri(rename(i, &names)),
            _ => x.object.clone(),
        };
        match d.below(10) {
            0 => {
                if let Term::Literal(l) = &o {
                    let prop = local(&x.predicate).to_string();
                    let rows: Vec<_> = LITERALS.iter().filter(|row| row.0 == prop).collect();
                    if !rows.is_empty() {
                        o = Term::Literal(lit(d.pick(&rows).1));
                    } else {
                        o = Term::Literal(lit(&format!("{} x", l.lexical())));
                    }
                }
            }
            1 if local(&p) == "starring" || local(&p) == "stars" => {
                p = t(if local(&p) == "starring" { "stars" } else { "starring" });
            }
            2 if x.is_type_assertion() => {
                o = Term::Iri(t(d.pick(&["Film", "Work", "Person", "Actor", "Company"])));
            }
            3 if x.entity_object().is_some() => {
                o = Term::Iri(rename(d.pick(&all), &names));
            }
            _ => {}
        }
        produced.push(Triple::new(s, p, o));
    }
    // inverted relation
    if d.chance(40) && !films.is_empty() {
        let f = rename(d.pick(&films), &names);
        let p = rename(d.pick(&persons), &names);
        produced.push(Triple::new(p, t("director"), f));
    }
    // extra literal with an invalid lexical form
    if d.chance(40) {
        let f = rename(d.pick(&films), &names);
        produced.push(Triple::new(f, t("runtime"), lit(d.pick(&["2h 15m", "90.0"]))));
    }
    let mut alignment: BTreeSet<(Iri, Iri)> = names.iter().map(|(r, p)| (p.clone(), r.clone())).collect();
    // duplicates: clones aligned to the same reference entity
    for i in 0..d.below(3) {
        let target = d.pick(&all).clone();
        let dup = n(&format!("dup{i}"));
        let src = rename(&target, &names);
        let copied: Vec<Triple> = produced
            .iter()
            .filter(|x| x.subject == src)
            .map(|x| Triple::new(dup.clone(), x.predicate.clone(), x.object.clone()))
            .collect();
        if copied.is_empty() {
            produced.push(Triple::new(dup.clone(), label.clone(), lit("dup")));
        }
        produced.extend(copied);
        alignment.insert((dup, target));
    }
    // spurious unaligned entity, sometimes dually typed
    if d.chance(50) {
        let junk = n("junk");
        produced.push(Triple::new(junk.clone(), ty.clone(), t("Film")));
        if d.chance(50) {
            produced.push(Triple::new(junk.clone(), ty.clone(), t("Person")));
        }
        produced.push(Triple::new(junk, t("director"), rename(d.pick(&persons), &names)));
    }
    // one produced entity aligned to two references
    if d.chance(30) && all.len() > 1 {
        let a0 = rename(&all[0], &names);
        alignment.insert((a0, all[1].clone()));
    }
    let produced: Graph = produced.into_iter().collect();
    let prod_e = entities(&produced);
    let alignment = alignment.into_iter().filter(|(p, _)| prod_e.contains(p)).collect();
    World {
        seed,
        reference,
        produced,
        stage_of,
        stages,
        alignment,
        seed_alignment,
    }
}

/// Scores `world` with the library at every stage and diffs against the
/// enumeration above.
pub fn compare_world(seed: u64) -> Result<(), String> {
    use kgie_core::alignment::AlignmentConfig;
    use kgie_core::consistency::check_consistency;
    use kgie_core::quality::{build_scope, quality_scores};

    let w = random_world(seed);
    let o = ontology();
    let cfg = AlignmentConfig::default();
    let idx = w.stage_index();
    let a = World::relation(&w.alignment);
    let sa = World::relation(&w.seed_alignment);
    let c = check_consistency(&w.produced, &o).scores;
    for stage in 1..=w.stages {
        let scope = build_scope(&w.seed, &w.produced, &w.reference, &idx, stage, &sa, &cfg, &o)
            .map_err(|e| format!("world {seed}: {e}"))?;
        let q = quality_scores(&scope, &w.produced, &w.reference, &a, &cfg, &o);
        let got = Expected {
            cov_e: q.cov_e,
            cov_t: q.cov_t,
            corr_e: q.corr_e,
            corr_t: q.corr_t,
            dup_rate: q.dup_rate,
            o_dt: c.o_dt,
            o_d: c.o_d,
            o_r: c.o_r,
            o_rd: c.o_rd,
            o_lt: c.o_lt,
            o_lf: c.o_lf,
        };
        let want = w.expected(stage);
        if got != want {
            return Err(format!("world {seed} stage {stage}:\n  library {got:?}\n  oracle  {want:?}"));
        }
    }
    Ok(())
}
