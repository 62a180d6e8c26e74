//! Evaluation toolkit for incremental knowledge-graph integration
//! pipelines: alignment-based coverage and correctness, ontology
//! consistency, weighted ranking, benchmark generation and a baseline RDF
//! integration pipeline.

pub mod alignment;
pub mod benchgen;
pub mod consistency;
pub mod files;
pub mod graph;
pub mod pipeline;
pub mod quality;
pub mod ranking;
pub mod report;
pub mod stats;
pub mod synth;

pub use alignment::{AlignmentConfig, AlignmentRelation, ShadingMap, Strategy};
pub use graph::{Graph, Iri, Literal, Ontology, Term, Triple};
pub use quality::{Fraction, QualityScores};
pub use ranking::GroupScores;
pub use report::EvaluationReport;
