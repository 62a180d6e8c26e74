//! Vocabulary IRIs recognized by the ontology loader and the validators.

macro_rules! terms {
    ($ns:literal; $($fn_name:ident => $local:literal),* $(,)?) => {
        pub const NS: &str = $ns;
        $(
            pub fn $fn_name() -> $crate::graph::Iri {
                static CELL: std::sync::LazyLock<$crate::graph::Iri> =
                    std::sync::LazyLock::new(|| $crate::graph::Iri::from_static(concat!($ns, $local)));
                CELL.clone()
            }
        )*
    };
}

pub mod rdf {
    terms!("http://www.w3.org/1999/02/22-rdf-syntax-ns#";
        type_ => "type",
        lang_string => "langString",
        property => "Property",
    );
}

pub mod rdfs {
    terms!("http://www.w3.org/2000/01/rdf-schema#";
        label => "label",
        sub_class_of => "subClassOf",
        domain => "domain",
        range => "range",
        class => "Class",
        comment => "comment",
    );
}

pub mod owl {
    terms!("http://www.w3.org/2002/07/owl#";
        class => "Class",
        object_property => "ObjectProperty",
        datatype_property => "DatatypeProperty",
        disjoint_with => "disjointWith",
        equivalent_class => "equivalentClass",
        equivalent_property => "equivalentProperty",
        max_cardinality => "maxCardinality",
        ontology => "Ontology",
    );
}

pub mod skos {
    terms!("http://www.w3.org/2004/02/skos/core#";
        alt_label => "altLabel",
    );
}

pub mod xsd {
    terms!("http://www.w3.org/2001/XMLSchema#";
        string => "string",
        integer => "integer",
        non_negative_integer => "nonNegativeInteger",
        double => "double",
        decimal => "decimal",
        date => "date",
        g_year => "gYear",
        boolean => "boolean",
    );
}
