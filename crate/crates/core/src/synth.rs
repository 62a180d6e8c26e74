//! Deterministic synthetic movie knowledge graph with a small ontology of
//! films, persons and companies. Used for fixtures, benchmarks and the
//! generator round-trip tests.

use std::collections::{BTreeMap, BTreeSet};

use rand_core::RngCore;
use serde::{Deserialize, Serialize};

use crate::benchgen::{rng_from_seed, shuffle, uniform_inclusive};
use crate::graph::{vocab, FormatSidecar, Graph, Iri, Literal, Ontology, OntologyError, Triple};

pub const ONTOLOGY_NS: &str = "http://kgi.example.org/ontology/";
pub const RESOURCE_NS: &str = "http://kgi.example.org/resource/";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub films: usize,
    pub persons: usize,
    pub companies: usize,
    pub rng_seed: u64,
    /// Exact number of distinct triples to emit; `None` keeps every
    /// generated fact.
    pub target_facts: Option<usize>,
}

impl SynthConfig {
    /// Shape of the shipped seed fixture: 2,793 entities, 16,417 facts.
    pub fn seed_1k() -> Self {
        SynthConfig {
            films: 250,
            persons: 2423,
            companies: 120,
            rng_seed: 1,
            target_facts: Some(16_417),
        }
    }

    /// Small instance used by the end-to-end benchmark tests.
    pub fn films(films: usize, rng_seed: u64) -> Self {
        SynthConfig {
            films,
            persons: films * 4,
            companies: (films / 4).max(2),
            rng_seed,
            target_facts: None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SynthError {
    #[error("cannot name {requested} {kind} entities; at most {available} distinct labels")]
    TooManyEntities {
        kind: &'static str,
        requested: usize,
        available: usize,
    },
    #[error("at least one film is required to anchor persons and companies")]
    NoFilms,
    #[error("target of {target} facts is outside the attainable range {min}..={max}")]
    Target { target: usize, min: usize, max: usize },
    #[error(transparent)]
    Ontology(#[from] OntologyError),
}

#[derive(Debug, Clone)]
pub struct MovieKg {
    pub ontology_graph: Graph,
    pub formats: FormatSidecar,
    pub data: Graph,
}

impl MovieKg {
    pub fn ontology(&self) -> Result<Ontology, OntologyError> {
        crate::graph::load_ontology(&self.ontology_graph)?.with_formats(&self.formats)
    }
}

pub fn ont(local: &str) -> Iri {
    Iri::new(format!("{ONTOLOGY_NS}{local}")).expect("ontology IRI")
}

fn res(label: &str) -> Iri {
    let slug: String = label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    Iri::new(format!("{RESOURCE_NS}{slug}")).expect("resource IRI")
}

const FILM_PERSON: [&str; 7] = [
    "director",
    "producer",
    "starring",
    "writer",
    "musicComposer",
    "cinematography",
    "editing",
];
const FILM_COMPANY: [&str; 2] = ["distributor", "productionCompany"];

/// `(property, domain, xsd datatype)`
const ATTRIBUTES: [(&str, &str, &str); 13] = [
    ("runtime", "Film", "double"),
    ("releaseDate", "Film", "date"),
    ("budget", "Film", "double"),
    ("gross", "Film", "double"),
    ("country", "Film", "string"),
    ("language", "Film", "string"),
    ("abstract", "Film", "string"),
    ("birthDate", "Person", "date"),
    ("birthName", "Person", "string"),
    ("activeYearsStartYear", "Person", "gYear"),
    ("nationality", "Person", "string"),
    ("foundingYear", "Company", "gYear"),
    ("location", "Company", "string"),
];

const FORMATS: [(&str, &str); 6] = [
    ("runtime", r"\d+\.\d+"),
    ("releaseDate", r"\d{4}-\d{2}-\d{2}"),
    ("birthDate", r"\d{4}-\d{2}-\d{2}"),
    ("activeYearsStartYear", r"\d{4}"),
    ("foundingYear", r"\d{4}"),
    ("budget", r"\d+\.\d+"),
];

/// Schema triples and literal formats of the movie ontology.
pub fn movie_ontology() -> (Graph, FormatSidecar) {
    let ty = vocab::rdf::type_();
    let mut t = vec![Triple::new(
        Iri::new(ONTOLOGY_NS.trim_end_matches('/')).expect("ontology IRI"),
        ty.clone(),
        vocab::owl::ontology(),
    )];
    let classes = ["Film", "Person", "Company"];
    for c in classes {
        t.push(Triple::new(ont(c), ty.clone(), vocab::owl::class()));
        t.push(Triple::new(ont(c), vocab::rdfs::label(), Literal::string(c)));
    }
    for (i, a) in classes.iter().enumerate() {
        for b in &classes[i + 1..] {
            t.push(Triple::new(ont(a), vocab::owl::disjoint_with(), ont(b)));
        }
    }
    let relations = FILM_PERSON
        .iter()
        .map(|p| (p, "Person"))
        .chain(FILM_COMPANY.iter().map(|p| (p, "Company")));
    for (p, range) in relations {
        t.push(Triple::new(ont(p), ty.clone(), vocab::owl::object_property()));
        t.push(Triple::new(ont(p), vocab::rdfs::domain(), ont("Film")));
        t.push(Triple::new(ont(p), vocab::rdfs::range(), ont(range)));
    }
    for (p, domain, dt) in ATTRIBUTES {
        t.push(Triple::new(ont(p), ty.clone(), vocab::owl::datatype_property()));
        t.push(Triple::new(ont(p), vocab::rdfs::domain(), ont(domain)));
        t.push(Triple::new(
            ont(p),
            vocab::rdfs::range(),
            Iri::new(format!("{}{dt}", vocab::xsd::NS)).expect("xsd IRI"),
        ));
    }
    t.push(Triple::new(
        ont("runtime"),
        vocab::owl::max_cardinality(),
        Literal::typed("1", vocab::xsd::non_negative_integer()),
    ));
    let formats = FORMATS
        .iter()
        .map(|(p, re)| (ont(p).to_string(), re.to_string()))
        .collect();
    (t.into_iter().collect(), FormatSidecar { formats })
}

const TITLE_ADJECTIVES: [&str; 30] = [
    "Silent", "Crimson", "Hollow", "Burning", "Frozen", "Golden", "Broken", "Hidden", "Restless", "Savage",
    "Distant", "Electric", "Gentle", "Midnight", "Painted", "Quiet", "Scarlet", "Twisted", "Wandering", "Velvet",
    "Bitter", "Cobalt", "Endless", "Fragile", "Lonely", "Northern", "Radiant", "Sunken", "Wicked", "Iron",
];
const TITLE_NOUNS: [&str; 30] = [
    "Harbor", "Empire", "Garden", "Frontier", "Lantern", "Orchard", "Canyon", "Mirror", "Voyage", "Kingdom",
    "Lighthouse", "Meadow", "Circus", "Desert", "Fortress", "Island", "Jungle", "Monsoon", "Prophet", "Quarry",
    "Railway", "Summit", "Tempest", "Valley", "Whisper", "Citadel", "Blizzard", "Comet", "Dynasty", "Horizon",
];
const FIRST_NAMES: [&str; 60] = [
    "Adrian", "Beatrice", "Cedric", "Delphine", "Emmett", "Felicity", "Gideon", "Harriet", "Ignatius", "Josephine",
    "Kasimir", "Leonora", "Maximilian", "Nadia", "Oswald", "Penelope", "Quentin", "Rosalind", "Sebastian", "Theodora",
    "Ulysses", "Valentina", "Wolfgang", "Xiomara", "Yannick", "Zenobia", "Ambrose", "Bernadette", "Cornelius", "Dorothea",
    "Ezekiel", "Florentina", "Gustav", "Henrietta", "Isidore", "Jacqueline", "Leopold", "Marguerite", "Nikolai", "Octavia",
    "Percival", "Rosamund", "Solomon", "Tabitha", "Urban", "Vivienne", "Winifred", "Yusuf", "Zachariah", "Anastasia",
    "Balthazar", "Clementine", "Desmond", "Evangeline", "Ferdinand", "Genevieve", "Horatio", "Imogen", "Jasper", "Katarina",
];
const LAST_NAMES: [&str; 60] = [
    "Abernathy", "Blackwood", "Castellano", "Delacroix", "Eriksson", "Fairweather", "Gallagher", "Hawthorne", "Ingersoll",
    "Jablonski", "Kowalczyk", "Lindqvist", "Montgomery", "Nakamura", "Okonkwo", "Pemberton", "Quigley", "Rasmussen",
    "Santangelo", "Thornbury", "Underwood", "Valdivia", "Whitacre", "Yamamoto", "Zielinski", "Achterberg", "Brightwater",
    "Cunningham", "Dunleavy", "Esposito", "Fitzgerald", "Grimaldi", "Holloway", "Iglesias", "Jorgensen", "Kirkpatrick",
    "Lombardi", "Mcallister", "Nightingale", "Oyelaran", "Petrovic", "Quarshie", "Rutherford", "Sorensen", "Tolliver",
    "Umberger", "Vasquez", "Wetherby", "Xenakis", "Yablonsky", "Zimmerman", "Ashcombe", "Bellweather", "Carmichael",
    "Dragomir", "Ellsworth", "Fontaine", "Goldberg", "Hargreaves", "Ivanova",
];
const COMPANY_WORDS: [&str; 40] = [
    "Apex", "Beacon", "Cascade", "Driftwood", "Ember", "Falcon", "Granite", "Hemlock", "Indigo", "Juniper",
    "Kestrel", "Lodestar", "Mosaic", "Nimbus", "Obsidian", "Pinnacle", "Quasar", "Redwood", "Sapphire", "Thunderbird",
    "Umbra", "Vanguard", "Willow", "Xenon", "Yarrow", "Zephyr", "Aurora", "Bramble", "Cinder", "Dovetail",
    "Evergreen", "Foxglove", "Gryphon", "Harbinger", "Ironclad", "Jubilee", "Keystone", "Lynx", "Meridian", "Nocturne",
];
const COMPANY_SUFFIXES: [&str; 4] = ["Pictures", "Studios", "Entertainment", "Filmworks"];
const COUNTRIES: [&str; 8] = [
    "United States", "United Kingdom", "France", "Germany", "Japan", "India", "Italy", "Canada",
];
const LANGUAGES: [&str; 6] = ["English", "French", "German", "Japanese", "Hindi", "Italian"];
const GENRES: [&str; 6] = ["drama", "comedy", "thriller", "western", "musical", "science fiction"];
const CITIES: [&str; 6] = ["Los Angeles", "London", "Paris", "Berlin", "Tokyo", "Mumbai"];

fn pick<'a>(rng: &mut impl RngCore, items: &'a [&'a str]) -> &'a str {
    items[uniform_inclusive(rng, items.len() as u64 - 1) as usize]
}

fn range(rng: &mut impl RngCore, lo: u64, hi: u64) -> u64 {
    lo + uniform_inclusive(rng, hi - lo)
}

fn labels(
    kind: &'static str,
    n: usize,
    parts: &[&[&str]],
    rng: &mut impl RngCore,
) -> Result<Vec<String>, SynthError> {
    let mut all: Vec<String> = vec![String::new()];
    for words in parts {
        all = all
            .iter()
            .flat_map(|prefix| {
                words.iter().map(move |w| {
                    if prefix.is_empty() {
                        w.to_string()
                    } else {
                        format!("{prefix} {w}")
                    }
                })
            })
            .collect();
    }
    if n > all.len() {
        return Err(SynthError::TooManyEntities {
            kind,
            requested: n,
            available: all.len(),
        });
    }
    shuffle(&mut all, rng);
    all.truncate(n);
    Ok(all)
}

fn typed(lexical: String, dt: &str) -> Literal {
    Literal::typed(lexical, Iri::new(format!("{}{dt}", vocab::xsd::NS)).expect("xsd IRI"))
}

fn date(rng: &mut impl RngCore, years: (u64, u64)) -> Literal {
    let y = range(rng, years.0, years.1);
    let m = range(rng, 1, 12);
    let d = range(rng, 1, 28);
    typed(format!("{y:04}-{m:02}-{d:02}"), "date")
}

/// Generates the movie KG. Every entity carries a type and a label; every
/// person and company is referenced by at least one film.
pub fn synthesize(cfg: &SynthConfig) -> Result<MovieKg, SynthError> {
    if cfg.films == 0 && cfg.persons + cfg.companies > 0 {
        return Err(SynthError::NoFilms);
    }
    let (ontology_graph, formats) = movie_ontology();
    let mut rng = rng_from_seed(cfg.rng_seed);
    let ty = vocab::rdf::type_();
    let label = vocab::rdfs::label();

    let film_names = labels("film", cfg.films, &[&["The"], &TITLE_ADJECTIVES, &TITLE_NOUNS], &mut rng)?;
    let person_names = labels("person", cfg.persons, &[&FIRST_NAMES, &LAST_NAMES], &mut rng)?;
    let company_names = labels("company", cfg.companies, &[&COMPANY_WORDS, &COMPANY_SUFFIXES], &mut rng)?;
    let films: Vec<Iri> = film_names.iter().map(|l| res(l)).collect();
    let persons: Vec<Iri> = person_names.iter().map(|l| res(l)).collect();
    let companies: Vec<Iri> = company_names.iter().map(|l| res(l)).collect();

    let mut mandatory: BTreeSet<Triple> = BTreeSet::new();
    for (class, iris, names) in [
        ("Film", &films, &film_names),
        ("Person", &persons, &person_names),
        ("Company", &companies, &company_names),
    ] {
        for (e, name) in iris.iter().zip(names) {
            mandatory.insert(Triple::new(e.clone(), ty.clone(), ont(class)));
            mandatory.insert(Triple::new(e.clone(), label.clone(), Literal::string(name)));
        }
    }
    let last_film = cfg.films.saturating_sub(1) as u64;
    for p in &persons {
        let f = &films[uniform_inclusive(&mut rng, last_film) as usize];
        mandatory.insert(Triple::new(f.clone(), ont(pick(&mut rng, &FILM_PERSON)), p.clone()));
    }
    for c in &companies {
        let f = &films[uniform_inclusive(&mut rng, last_film) as usize];
        mandatory.insert(Triple::new(f.clone(), ont(pick(&mut rng, &FILM_COMPANY)), c.clone()));
    }

    let mut pool: BTreeSet<Triple> = BTreeSet::new();
    for (f, title) in films.iter().zip(&film_names) {
        let year = range(&mut rng, 1950, 2020);
        let minutes = range(&mut rng, 80, 190);
        let add = |pool: &mut BTreeSet<Triple>, p: &str, lit: Literal| {
            pool.insert(Triple::new(f.clone(), ont(p), lit));
        };
        add(&mut pool, "runtime", typed(format!("{}.0", minutes * 60), "double"));
        add(&mut pool, "releaseDate", date(&mut rng, (year, year)));
        add(&mut pool, "budget", typed(format!("{}000000.0", range(&mut rng, 1, 250)), "double"));
        add(&mut pool, "gross", typed(format!("{}00000.0", range(&mut rng, 5, 9000)), "double"));
        add(&mut pool, "country", Literal::string(pick(&mut rng, &COUNTRIES)));
        add(&mut pool, "language", Literal::string(pick(&mut rng, &LANGUAGES)));
        let genre = pick(&mut rng, &GENRES);
        add(&mut pool, "abstract", Literal::string(format!("{title} is a {year} {genre} film.")));
        pool.insert(Triple::new(
            f.clone(),
            vocab::skos::alt_label(),
            Literal::string(format!("{title} ({year} film)")),
        ));
        if !persons.is_empty() {
            for _ in 0..8 {
                let p = &persons[uniform_inclusive(&mut rng, persons.len() as u64 - 1) as usize];
                pool.insert(Triple::new(f.clone(), ont(pick(&mut rng, &FILM_PERSON)), p.clone()));
            }
        }
        if !companies.is_empty() {
            let c = &companies[uniform_inclusive(&mut rng, companies.len() as u64 - 1) as usize];
            pool.insert(Triple::new(f.clone(), ont(pick(&mut rng, &FILM_COMPANY)), c.clone()));
        }
    }
    for (p, name) in persons.iter().zip(&person_names) {
        let born = range(&mut rng, 1900, 1995);
        let add = |pool: &mut BTreeSet<Triple>, prop: &str, lit: Literal| {
            pool.insert(Triple::new(p.clone(), ont(prop), lit));
        };
        add(&mut pool, "birthDate", date(&mut rng, (born, born)));
        let middle = pick(&mut rng, &FIRST_NAMES);
        let (first, last) = name.split_once(' ').expect("two-part person name");
        add(&mut pool, "birthName", Literal::string(format!("{first} {middle} {last}")));
        add(&mut pool, "activeYearsStartYear", typed(format!("{}", born + range(&mut rng, 16, 40)), "gYear"));
        add(&mut pool, "nationality", Literal::string(pick(&mut rng, &COUNTRIES)));
    }
    for c in &companies {
        pool.insert(Triple::new(
            c.clone(),
            ont("foundingYear"),
            typed(format!("{}", range(&mut rng, 1900, 2010)), "gYear"),
        ));
        pool.insert(Triple::new(c.clone(), ont("location"), Literal::string(pick(&mut rng, &CITIES))));
    }
    let mut pool: Vec<Triple> = pool.difference(&mandatory).cloned().collect();

    let data: Graph = match cfg.target_facts {
        None => mandatory.into_iter().chain(pool).collect(),
        Some(target) => {
            shuffle(&mut pool, &mut rng);
            let mut seen: BTreeSet<Iri> = mandatory.iter().map(|t| t.predicate.clone()).collect();
            let (mut first, mut rest) = (Vec::new(), Vec::new());
            for t in pool {
                if seen.insert(t.predicate.clone()) {
                    first.push(t);
                } else {
                    rest.push(t);
                }
            }
            let min = mandatory.len() + first.len();
            let max = min + rest.len();
            if !(min..=max).contains(&target) {
                return Err(SynthError::Target { target, min, max });
            }
            rest.truncate(target - min);
            mandatory.into_iter().chain(first).chain(rest).collect()
        }
    };
    Ok(MovieKg {
        ontology_graph,
        formats,
        data,
    })
}

/// Predicate histogram, handy for fixture diagnostics.
pub fn predicate_counts(g: &Graph) -> BTreeMap<Iri, usize> {
    let mut out = BTreeMap::new();
    for t in g {
        *out.entry(t.predicate.clone()).or_default() += 1;
    }
    out
}
