use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

/// Evaluate incremental knowledge-graph integration pipelines.
#[derive(Parser, Debug)]
#[command(name = "kgie", version, about)]
struct Cli {
    /// Increase log verbosity (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a deterministic synthetic movie KG with its ontology.
    Synth(SynthArgs),
    /// Split a reference KG into a seed and shaded sources.
    Generate(GenerateArgs),
    /// Run the baseline RDF integration pipeline.
    Pipeline(PipelineArgs),
    /// Score produced KGs against a benchmark manifest.
    Evaluate(EvaluateArgs),
    /// Check a KG against an ontology and list violations.
    Validate(ValidateArgs),
    /// Rank pipelines under every weight vector of a grid.
    Rank(RankArgs),
    /// Render reports as a table, CSV or JSON.
    Render(RenderArgs),
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[arg(long)]
    out_dir: PathBuf,
    /// Shape of the shipped 1k seed fixture.
    #[arg(long, conflicts_with_all = ["films", "persons", "companies", "target_facts"])]
    seed_1k: bool,
    #[arg(long, default_value_t = 100)]
    films: usize,
    #[arg(long)]
    persons: Option<usize>,
    #[arg(long)]
    companies: Option<usize>,
    #[arg(long, default_value_t = 1)]
    rng_seed: u64,
    #[arg(long)]
    target_facts: Option<usize>,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long)]
    reference: PathBuf,
    #[arg(long)]
    ontology: PathBuf,
    /// Format sidecar; defaults to `<ontology stem>.formats.json` when present.
    #[arg(long)]
    formats: Option<PathBuf>,
    #[arg(long)]
    root_class: String,
    /// Namespace of reference entity IRIs.
    #[arg(long)]
    entity_namespace: String,
    #[arg(long, default_value_t = 4)]
    splits: usize,
    #[arg(long, default_value_t = 0.05)]
    overlap: f64,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Shaded namespace per source split (repeat once per source).
    #[arg(long = "shading-prefix")]
    shading_prefixes: Vec<String>,
    #[arg(long, conflicts_with = "shading_prefixes")]
    no_shading: bool,
    #[arg(long)]
    abstract_property: Option<String>,
    /// Source renderings: rdf, json, text.
    #[arg(long = "format", value_delimiter = ',', default_value = "rdf")]
    formats_out: Vec<String>,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args, Debug)]
struct PipelineArgs {
    #[arg(long)]
    seed: PathBuf,
    #[arg(long = "source", required = true)]
    sources: Vec<PathBuf>,
    #[arg(long)]
    ontology: PathBuf,
    #[arg(long)]
    formats: Option<PathBuf>,
    #[arg(long, default_value_t = 0.95)]
    threshold: f64,
    /// Let source values win single-valued conflicts.
    #[arg(long)]
    prefer_source: bool,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Produced KG per stage, in stage order starting at stage 1.
    #[arg(long = "result", required = true)]
    results: Vec<PathBuf>,
    /// Stage of a single result (defaults to its position).
    #[arg(long)]
    stage: Option<u32>,
    #[arg(long, default_value = "pipeline")]
    pipeline_id: String,
    /// exact-iri, gold-provenance or label-similarity.
    #[arg(long, default_value = "gold-provenance")]
    strategy: String,
    #[arg(long, default_value_t = 0.9)]
    threshold: f64,
    /// Pipeline run log supplying per-stage durations.
    #[arg(long)]
    run_log: Option<PathBuf>,
    /// Also compute source-based coverage against each stage's RDF source.
    #[arg(long)]
    source_coverage: bool,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    ontology: PathBuf,
    #[arg(long)]
    formats: Option<PathBuf>,
    /// Write the full report as JSON here instead of a summary on stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RankArgs {
    /// Evaluation reports; the highest stage per pipeline is ranked.
    #[arg(long = "report")]
    reports: Vec<PathBuf>,
    /// CSV with columns pipeline,cov,corr,cons.
    #[arg(long, conflicts_with = "reports")]
    groups: Option<PathBuf>,
    /// Grid step as a decimal or fraction (0.1 or 1/10).
    #[arg(long, default_value = "1/10")]
    step: String,
    /// Round group scores to 3 decimals before ranking.
    #[arg(long)]
    quantize_paper: bool,
    #[arg(long, default_value = "table")]
    format: String,
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[arg(required = true)]
    reports: Vec<PathBuf>,
    #[arg(long, default_value = "table")]
    format: String,
}

fn init_threads() {
    if let Some(n) = std::env::var("KGIE_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("KGIE_THREADS ignored: {e}");
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    init_threads();
    let result = match cli.command {
        Command::Synth(a) => commands::synth(a),
        Command::Generate(a) => commands::generate(a),
        Command::Pipeline(a) => commands::pipeline(a),
        Command::Evaluate(a) => commands::evaluate(a),
        Command::Validate(a) => commands::validate(a),
        Command::Rank(a) => commands::rank(a),
        Command::Render(a) => commands::render(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
