use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use kgie_core::alignment::{AlignmentConfig, Strategy};
use kgie_core::benchgen::{self, Manifest, ManifestError, SourceFormat, SplitConfig};
use kgie_core::consistency::check_consistency;
use kgie_core::files::{read_graph, read_ontology, read_sidecar, sidecar_path, write_graph, FileError};
use kgie_core::graph::Iri;
use kgie_core::pipeline::{run_pipeline, PipelineConfig, StageRun};
use kgie_core::quality::ScopeError;
use kgie_core::ranking::{harmonic_mean, parse_step, rank_ranges, weight_grid, GroupScores};
use kgie_core::report::{
    evaluate as evaluate_stage, render_ranking, render_reports, Benchmark, EvalError, EvalRequest, EvaluationReport,
    RankRow, RenderFormat,
};
use kgie_core::synth::{synthesize, SynthConfig};

use crate::{EvaluateArgs, GenerateArgs, PipelineArgs, RankArgs, RenderArgs, SynthArgs, ValidateArgs};

/// A manifest-level inconsistency discovered by the CLI itself.
#[derive(Debug)]
pub struct StageMismatch(String);

impl std::fmt::Display for StageMismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for StageMismatch {}

/// 2 for manifest or stage problems, 1 for everything else (parse errors,
/// unreadable inputs, bad arguments).
pub fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.is::<ManifestError>() || cause.is::<ScopeError>() || cause.is::<StageMismatch>() {
            return 2;
        }
        if let Some(EvalError::Scope(_)) = cause.downcast_ref::<EvalError>() {
            return 2;
        }
    }
    1
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn iri(s: &str) -> Result<Iri> {
    Iri::new(s).map_err(|e| anyhow!("`{s}`: {e}"))
}

pub fn synth(a: SynthArgs) -> Result<()> {
    let cfg = if a.seed_1k {
        SynthConfig::seed_1k()
    } else {
        let base = SynthConfig::films(a.films, a.rng_seed);
        SynthConfig {
            persons: a.persons.unwrap_or(base.persons),
            companies: a.companies.unwrap_or(base.companies),
            target_facts: a.target_facts,
            ..base
        }
    };
    let kg = synthesize(&cfg)?;
    fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    let ontology = a.out_dir.join("ontology.nt");
    write_graph(&ontology, &kg.ontology_graph)?;
    let mut formats = serde_json::to_string_pretty(&kg.formats)?;
    formats.push('\n');
    write_text(&sidecar_path(&ontology), &formats)?;
    write_graph(&a.out_dir.join("kg.nt"), &kg.data)?;
    println!("{} triples written to {}", kg.data.len(), a.out_dir.join("kg.nt").display());
    Ok(())
}

pub fn generate(a: GenerateArgs) -> Result<()> {
    let (ontology_graph, o) = read_ontology(&a.ontology, a.formats.as_deref())?;
    let sidecar = match &a.formats {
        Some(p) => Some(read_sidecar(p)?),
        None => {
            let p = sidecar_path(&a.ontology);
            p.is_file().then(|| read_sidecar(&p)).transpose()?
        }
    };
    let reference = read_graph(&a.reference)?;
    let mut cfg = SplitConfig::new(iri(&a.root_class)?, a.entity_namespace.clone());
    cfg.num_splits = a.splits;
    cfg.overlap_fraction = a.overlap;
    cfg.rng_seed = a.rng_seed;
    cfg.abstract_property = a.abstract_property.as_deref().map(iri).transpose()?;
    cfg.shading_prefixes = if a.no_shading {
        Vec::new()
    } else if a.shading_prefixes.is_empty() {
        (1..a.splits)
            .map(|i| format!("http://source{i}.example.org/resource/"))
            .collect()
    } else {
        a.shading_prefixes.clone()
    };
    let formats = a
        .formats_out
        .iter()
        .map(|f| {
            serde_json::from_value::<SourceFormat>(serde_json::Value::String(f.clone()))
                .map_err(|_| anyhow!("unknown source format `{f}` (expected rdf, json or text)"))
        })
        .collect::<Result<Vec<_>>>()?;
    let out = benchgen::generate(&reference, &ontology_graph, sidecar.as_ref(), &o, &cfg, &formats, &a.out_dir)?;
    println!(
        "seed {} triples, {} sources, {} expected matches; manifest {}",
        out.seed.len(),
        out.sources.len(),
        out.expected_matches.len(),
        a.out_dir.join("manifest.json").display()
    );
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct RunLog {
    threshold: f64,
    prefer_source: bool,
    stages: Vec<StageRun>,
}

pub fn pipeline(a: PipelineArgs) -> Result<()> {
    let (_, o) = read_ontology(&a.ontology, a.formats.as_deref())?;
    let seed = read_graph(&a.seed)?;
    let sources = a
        .sources
        .iter()
        .map(|p| read_graph(p))
        .collect::<Result<Vec<_>, FileError>>()?;
    let cfg = PipelineConfig {
        threshold: a.threshold,
        prefer_source: a.prefer_source,
        ..Default::default()
    };
    fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    let runs = run_pipeline(&seed, &sources, &cfg, &o);
    let mut stages = Vec::new();
    for (g, run) in runs {
        let path = a.out_dir.join(format!("kg_{}.nt", run.stage));
        write_graph(&path, &g)?;
        println!("{}: {} triples", path.display(), g.len());
        stages.push(run);
    }
    let log = RunLog {
        threshold: a.threshold,
        prefer_source: a.prefer_source,
        stages,
    };
    let mut text = serde_json::to_string_pretty(&log)?;
    text.push('\n');
    write_text(&a.out_dir.join("run_log.json"), &text)
}

/// Reads a graph named by the manifest; a missing file is a manifest error.
fn manifest_graph(m: &Manifest, rel: &Path) -> Result<kgie_core::Graph> {
    let path = m.resolve(rel);
    match read_graph(&path) {
        Err(FileError::Io { path, source }) => Err(ManifestError::Io { path, source }.into()),
        other => Ok(other?),
    }
}

pub fn evaluate(a: EvaluateArgs) -> Result<()> {
    let strategy: Strategy = a.strategy.parse().map_err(|e: String| anyhow!(e))?;
    let cfg = AlignmentConfig {
        strategy,
        label_threshold: a.threshold,
        ..Default::default()
    };
    let m = Manifest::load(&a.manifest)?;
    let ontology_path = m.resolve(&m.ontology);
    if !ontology_path.is_file() {
        return Err(StageMismatch(format!("ontology file {} not found", ontology_path.display())).into());
    }
    let (_, o) = read_ontology(&ontology_path, None)?;
    let seed = manifest_graph(&m, &m.seed)?;
    let reference = manifest_graph(&m, &m.reference)?;
    let stages = m.stage_index();
    let shading = m.shading_map();
    let bench = Benchmark {
        seed: &seed,
        reference: &reference,
        stages: &stages,
        shading: Some(&shading),
        ontology: &o,
    };
    if a.stage.is_some() && a.results.len() != 1 {
        bail!("--stage applies to a single --result");
    }
    if a.results.len() as u32 > m.max_stage() {
        return Err(StageMismatch(format!(
            "{} results given but the manifest has {} stages",
            a.results.len(),
            m.max_stage()
        ))
        .into());
    }
    let durations: Vec<StageRun> = match &a.run_log {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str::<RunLog>(&text)
                .with_context(|| format!("parsing {}", p.display()))?
                .stages
        }
        None => Vec::new(),
    };
    fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    for (i, path) in a.results.iter().enumerate() {
        let stage = a.stage.unwrap_or(i as u32 + 1);
        let produced = read_graph(path)?;
        let source = if a.source_coverage {
            m.rdf_sources()
                .into_iter()
                .find(|s| s.stage == stage)
                .map(|s| manifest_graph(&m, &s.path))
                .transpose()?
        } else {
            None
        };
        let duration_s = durations.iter().find(|r| r.stage == stage as usize).map(|r| r.duration_s);
        let req = EvalRequest {
            pipeline: &a.pipeline_id,
            stage,
            produced: &produced,
            source: source.as_ref(),
            duration_s,
        };
        let report = evaluate_stage(&bench, &req, &cfg)?;
        let out = a.out_dir.join(format!("{}_stage{stage}.json", a.pipeline_id));
        write_text(&out, &report.to_json_pretty())?;
        println!("{}", out.display());
    }
    Ok(())
}

pub fn validate(a: ValidateArgs) -> Result<()> {
    let (_, o) = read_ontology(&a.ontology, a.formats.as_deref())?;
    let g = read_graph(&a.graph)?;
    let report = check_consistency(&g, &o);
    if let Some(out) = &a.out {
        let mut text = serde_json::to_string_pretty(&report)?;
        text.push('\n');
        write_text(out, &text)?;
    }
    for (name, f) in report.scores.ratios() {
        let value = f.value().map_or_else(|| "n/a".to_string(), |v| format!("{v:.3}"));
        println!("{name:<5} {value:>6}  ({}/{})", f.num, f.den);
    }
    println!("max_cardinality {}", report.max_cardinality_violations);
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn load_report(path: &PathBuf) -> Result<EvaluationReport> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing report {}", path.display()))
}

fn read_groups_csv(path: &Path) -> Result<Vec<(String, GroupScores)>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        let [name, cov, corr, cons] = cells[..] else {
            bail!("{}:{}: expected 4 columns", path.display(), n + 1);
        };
        let num = |s: &str| {
            s.parse::<f64>()
                .with_context(|| format!("{}:{}: bad number `{s}`", path.display(), n + 1))
        };
        out.push((
            name.to_string(),
            GroupScores {
                coverage: num(cov)?,
                correctness: num(corr)?,
                consistency: num(cons)?,
            },
        ));
    }
    Ok(out)
}

pub fn rank(a: RankArgs) -> Result<()> {
    let format: RenderFormat = a.format.parse().map_err(|e: String| anyhow!(e))?;
    let mut pipelines: Vec<(String, GroupScores)> = match &a.groups {
        Some(p) => read_groups_csv(p)?,
        None => {
            if a.reports.is_empty() {
                bail!("give --report files or --groups");
            }
            let mut latest: BTreeMap<String, EvaluationReport> = BTreeMap::new();
            for p in &a.reports {
                let r = load_report(p)?;
                match latest.get(&r.pipeline) {
                    Some(prev) if prev.stage >= r.stage => {}
                    _ => {
                        latest.insert(r.pipeline.clone(), r);
                    }
                }
            }
            latest
                .into_values()
                .map(|r| {
                    let g = r
                        .groups
                        .ok_or_else(|| anyhow!("pipeline {} has undefined group scores", r.pipeline))?;
                    Ok((r.pipeline, g))
                })
                .collect::<Result<_>>()?
        }
    };
    if a.quantize_paper {
        for (_, g) in &mut pipelines {
            *g = g.quantized(3);
        }
    }
    let grid = weight_grid(3, parse_step(&a.step)?)?;
    let groups: Vec<GroupScores> = pipelines.iter().map(|(_, g)| *g).collect();
    let ranges = rank_ranges(&groups, &grid)?;
    let rows = pipelines
        .into_iter()
        .zip(ranges)
        .map(|((pipeline, groups), (rank_min, rank_max))| {
            Ok(RankRow {
                pipeline,
                h_mean: harmonic_mean(&groups.as_array())?,
                groups,
                rank_min,
                rank_max,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    log::info!("ranked {} pipelines over {} weight vectors", rows.len(), grid.len());
    print!("{}", render_ranking(&rows, format));
    Ok(())
}

pub fn render(a: RenderArgs) -> Result<()> {
    let format: RenderFormat = a.format.parse().map_err(|e: String| anyhow!(e))?;
    let reports = a.reports.iter().map(load_report).collect::<Result<Vec<_>>>()?;
    print!("{}", render_reports(&reports, format)?);
    Ok(())
}
