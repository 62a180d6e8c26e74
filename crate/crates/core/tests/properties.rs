mod common;

use std::collections::BTreeMap;

use kgie_core::alignment::AlignmentConfig;
use kgie_core::consistency::check_consistency;
use kgie_core::graph::{parse_ntriples, serialize_ntriples, vocab, Graph, Iri, Literal, Term, Triple};
use kgie_core::quality::{build_scope, quality_scores};
use kgie_core::stats::graph_stats;
use proptest::prelude::*;

fn iri_strategy() -> impl Strategy<Value = Iri> {
    "[a-z]{1,6}(/[A-Za-z0-9_%-]{0,5})?".prop_map(|s| Iri::new(format!("http://p.example/{s}")).unwrap())
}

fn literal_strategy() -> impl Strategy<Value = Literal> {
    prop_oneof![
        any::<String>().prop_map(Literal::string),
        ("[ -~\\t\\n\"\\\\]{0,12}", "[a-z]{2}(-[A-Z]{2})?").prop_map(|(s, l)| Literal::lang(s, l)),
        (-1000i64..1000).prop_map(|n| Literal::typed(n.to_string(), vocab::xsd::integer())),
    ]
}

fn triple_strategy() -> impl Strategy<Value = Triple> {
    (
        iri_strategy(),
        iri_strategy(),
        prop_oneof![
            iri_strategy().prop_map(Term::Iri),
            literal_strategy().prop_map(Term::Literal)
        ],
    )
        .prop_map(|(s, p, o)| Triple::new(s, p, o))
}

fn graph_strategy() -> impl Strategy<Value = Graph> {
    prop::collection::vec(triple_strategy(), 0..40).prop_map(|v| v.into_iter().collect())
}

fn rename(g: &Graph, map: &BTreeMap<Iri, Iri>) -> Graph {
    let f = |i: &Iri| map.get(i).cloned().unwrap_or_else(|| i.clone());
    g.iter()
        .map(|t| {
            let o = match (&t.object, t.is_type_assertion()) {
                (Term::Iri(i), false) => Term::Iri(f(i)),
                (o, _) => o.clone(),
            };
            Triple::new(f(&t.subject), t.predicate.clone(), o)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ntriples_round_trip(g in graph_strategy()) {
        let text = serialize_ntriples(&g);
        let back = parse_ntriples(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(serialize_ntriples(&back), text);
    }

    #[test]
    fn stats_ignore_entity_names(seed in 0u64..10_000) {
        let w = common::random_world(seed);
        let o = common::ontology();
        let map: BTreeMap<Iri, Iri> = common::entities(&w.produced)
            .into_iter()
            .enumerate()
            .map(|(i, e)| (e, Iri::new(format!("http://renamed.example/{}", 999 - i)).unwrap()))
            .collect();
        let a = graph_stats(&w.produced, &o);
        let b = graph_stats(&rename(&w.produced, &map), &o);
        prop_assert_eq!(a, b);
        let ca = check_consistency(&w.produced, &o).scores;
        let cb = check_consistency(&rename(&w.produced, &map), &o).scores;
        prop_assert_eq!(ca, cb);
    }

    #[test]
    fn ratios_are_well_formed(seed in 0u64..10_000) {
        let w = common::random_world(seed);
        for stage in 1..=w.stages {
            let e = w.expected(stage);
            for f in [e.cov_e, e.cov_t, e.corr_e, e.corr_t, e.dup_rate, e.o_dt, e.o_d, e.o_r, e.o_rd, e.o_lt, e.o_lf] {
                prop_assert!(f.num <= f.den, "{f:?}");
                if let Some(v) = f.value() {
                    prop_assert!((0.0..=1.0).contains(&v));
                }
            }
        }
    }

    #[test]
    fn dropping_produced_triples_never_raises_coverage(seed in 0u64..10_000, keep in prop::collection::vec(any::<bool>(), 64)) {
        let w = common::random_world(seed);
        let o = common::ontology();
        let cfg = AlignmentConfig::default();
        let idx = w.stage_index();
        let a = common::World::relation(&w.alignment);
        let sa = common::World::relation(&w.seed_alignment);
        let thinned: Graph = w
            .produced
            .iter()
            .enumerate()
            .filter(|(i, _)| keep[i % keep.len()])
            .map(|(_, t)| t.clone())
            .collect();
        for stage in 1..=w.stages {
            let full = build_scope(&w.seed, &w.produced, &w.reference, &idx, stage, &sa, &cfg, &o).unwrap();
            let part = build_scope(&w.seed, &thinned, &w.reference, &idx, stage, &sa, &cfg, &o).unwrap();
            prop_assert_eq!(&full.reference_triples, &part.reference_triples);
            let qf = quality_scores(&full, &w.produced, &w.reference, &a, &cfg, &o);
            let qp = quality_scores(&part, &thinned, &w.reference, &a, &cfg, &o);
            prop_assert!(qp.cov_t.num <= qf.cov_t.num);
            prop_assert!(qp.cov_e.num <= qf.cov_e.num);
        }
    }
}
