//! Per-stage evaluation reports and their table/CSV/JSON renderings.

use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::alignment::{align_entities, AlignError, AlignmentConfig, ShadingMap, Strategy};
use crate::benchgen::unshade_graph;
use crate::consistency::{check_consistency, ConsistencyScores};
use crate::graph::{Graph, Ontology};
use crate::quality::{build_scope, quality_scores, source_coverage, Fraction, QualityScores, ScopeError, StageIndex};
use crate::ranking::{group_scores, GroupScores};
use crate::stats::{graph_stats, StatsRecord};

pub const REPORT_SCHEMA: &str = "kgi-report/1";

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error(transparent)]
    Align(#[from] AlignError),
    #[error(transparent)]
    Scope(#[from] ScopeError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counts {
    pub cov_e: Fraction,
    pub cov_t: Fraction,
    pub corr_e: Fraction,
    pub corr_t: Fraction,
    pub dup_rate: Fraction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageSection {
    pub cov_e: Option<f64>,
    pub cov_t: Option<f64>,
    #[serde(default)]
    pub source_cov: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectnessSection {
    pub corr_e: Option<f64>,
    pub corr_t: Option<f64>,
    pub f1_e: Option<f64>,
    pub f1_t: Option<f64>,
    pub dup_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Compliance {
    pub c_dt: Option<f64>,
    pub c_d: Option<f64>,
    pub c_r: Option<f64>,
    pub c_rd: Option<f64>,
    pub c_lt: Option<f64>,
    pub c_lf: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencySection {
    pub o_dt: Option<f64>,
    pub o_d: Option<f64>,
    pub o_r: Option<f64>,
    pub o_rd: Option<f64>,
    pub o_lt: Option<f64>,
    pub o_lf: Option<f64>,
    pub compliance: Compliance,
    pub max_cardinality_violations: usize,
    pub warnings: Vec<String>,
}

impl ConsistencySection {
    fn from_scores(s: &ConsistencyScores, max_cardinality_violations: usize, warnings: Vec<String>) -> Self {
        let [c_dt, c_d, c_r, c_rd, c_lt, c_lf] = s.compliance();
        ConsistencySection {
            o_dt: s.o_dt.value(),
            o_d: s.o_d.value(),
            o_r: s.o_r.value(),
            o_rd: s.o_rd.value(),
            o_lt: s.o_lt.value(),
            o_lf: s.o_lf.value(),
            compliance: Compliance {
                c_dt,
                c_d,
                c_r,
                c_rd,
                c_lt,
                c_lf,
            },
            max_cardinality_violations,
            warnings,
        }
    }

    pub fn compliance_values(&self) -> [Option<f64>; 6] {
        let c = &self.compliance;
        [c.c_dt, c.c_d, c.c_r, c.c_rd, c.c_lt, c.c_lf]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub strategy: Strategy,
    pub label_threshold: f64,
    pub numeric_rel_tolerance: f64,
    pub seed_alignment: Strategy,
    pub tool_version: String,
}

/// Non-reproducible diagnostics. Excluded when comparing reports.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunLog {
    pub evaluated_at: Option<String>,
    pub eval_seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub schema: String,
    pub pipeline: String,
    pub stage: u32,
    pub stats: StatsRecord,
    pub coverage: CoverageSection,
    pub correctness: CorrectnessSection,
    pub consistency: ConsistencySection,
    pub groups: Option<GroupScores>,
    pub counts: Counts,
    pub duration_s: Option<f64>,
    pub config: ConfigEcho,
    #[serde(default)]
    pub log: RunLog,
}

impl EvaluationReport {
    /// 1 − duplicate rate followed by the six compliance values.
    pub fn consistency_members(&self) -> [Option<f64>; 7] {
        let c = self.consistency.compliance_values();
        [Some(1.0 - self.correctness.dup_rate), c[0], c[1], c[2], c[3], c[4], c[5]]
    }

    pub fn to_json_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Everything fixed by the benchmark instance.
pub struct Benchmark<'a> {
    pub seed: &'a Graph,
    pub reference: &'a Graph,
    pub stages: &'a StageIndex,
    pub shading: Option<&'a ShadingMap>,
    pub ontology: &'a Ontology,
}

pub struct EvalRequest<'a> {
    pub pipeline: &'a str,
    pub stage: u32,
    pub produced: &'a Graph,
    /// Source graph of this stage for source-based coverage.
    pub source: Option<&'a Graph>,
    pub duration_s: Option<f64>,
}

/// Aligns, scopes and scores one produced KG.
pub fn evaluate(bench: &Benchmark<'_>, req: &EvalRequest<'_>, cfg: &AlignmentConfig) -> Result<EvaluationReport, EvalError> {
    let start = Instant::now();
    let o = bench.ontology;
    let seed_strategy = if bench.shading.is_some() {
        Strategy::GoldProvenance
    } else {
        cfg.strategy
    };
    let seed_cfg = AlignmentConfig {
        strategy: seed_strategy,
        ..cfg.clone()
    };
    let seed_alignment = align_entities(bench.seed, bench.reference, &seed_cfg, o, bench.shading)?;
    let alignment = align_entities(req.produced, bench.reference, cfg, o, bench.shading)?;
    let scope = build_scope(
        bench.seed,
        req.produced,
        bench.reference,
        bench.stages,
        req.stage,
        &seed_alignment,
        cfg,
        o,
    )?;
    let q: QualityScores = quality_scores(&scope, req.produced, bench.reference, &alignment, cfg, o);
    let source_cov = match req.source {
        Some(source) => {
            let source = match bench.shading {
                Some(shading) => unshade_graph(source, shading),
                None => source.clone(),
            };
            let a = align_entities(req.produced, &source, &seed_cfg, o, bench.shading)?;
            source_coverage(req.produced, &source, &a, cfg, o).value()
        }
        None => None,
    };
    let consistency = check_consistency(req.produced, o);
    let groups = group_scores(&q, &consistency.scores).ok();
    let mut stats = graph_stats(req.produced, o);
    stats.duration_s = req.duration_s;
    let evaluated_at = chrono::DateTime::<chrono::Utc>::from(std::time::SystemTime::now()).to_rfc3339();
    Ok(EvaluationReport {
        schema: REPORT_SCHEMA.to_string(),
        pipeline: req.pipeline.to_string(),
        stage: req.stage,
        stats,
        coverage: CoverageSection {
            cov_e: q.cov_e.value(),
            cov_t: q.cov_t.value(),
            source_cov,
        },
        correctness: CorrectnessSection {
            corr_e: q.corr_e.value(),
            corr_t: q.corr_t.value(),
            f1_e: q.f1_e(),
            f1_t: q.f1_t(),
            dup_rate: q.dup_rate_value(),
        },
        consistency: ConsistencySection::from_scores(
            &consistency.scores,
            consistency.max_cardinality_violations,
            consistency.warnings,
        ),
        groups,
        counts: Counts {
            cov_e: q.cov_e,
            cov_t: q.cov_t,
            corr_e: q.corr_e,
            corr_t: q.corr_t,
            dup_rate: q.dup_rate,
        },
        duration_s: req.duration_s,
        config: ConfigEcho {
            strategy: cfg.strategy,
            label_threshold: cfg.label_threshold,
            numeric_rel_tolerance: cfg.numeric_rel_tolerance,
            seed_alignment: seed_strategy,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        },
        log: RunLog {
            evaluated_at: Some(evaluated_at),
            eval_seconds: Some(start.elapsed().as_secs_f64()),
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RenderFormat {
    Table,
    Csv,
    Json,
}

impl std::str::FromStr for RenderFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(RenderFormat::Table),
            "csv" => Ok(RenderFormat::Csv),
            "json" => Ok(RenderFormat::Json),
            other => Err(format!("unknown format `{other}` (expected table, csv or json)")),
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum RenderError {
    #[error("report {index} has schema `{found}`, expected `{REPORT_SCHEMA}`")]
    Schema { index: usize, found: String },
}

/// Quality columns in Table-2 order. The `O_*` columns carry compliance
/// values (1 − violation ratio), so higher is better throughout.
pub const QUALITY_COLUMNS: [&str; 13] = [
    "Cov_E", "Corr_E", "F1_E", "Cov_T", "Corr_T", "F1_T", "1-DR", "O_DT", "O_D", "O_R", "O_RD", "O_LT", "O_LF",
];

pub const RANK_COLUMNS: [&str; 7] = ["pipeline", "cov", "corr", "cons", "h_mean", "rank_min", "rank_max"];

fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

fn quality_row(r: &EvaluationReport) -> [Option<f64>; 13] {
    let c = r.consistency.compliance_values();
    [
        r.coverage.cov_e,
        r.correctness.corr_e,
        r.correctness.f1_e,
        r.coverage.cov_t,
        r.correctness.corr_t,
        r.correctness.f1_t,
        Some(1.0 - r.correctness.dup_rate),
        c[0],
        c[1],
        c[2],
        c[3],
        c[4],
        c[5],
    ]
}

/// A generic text grid: header plus rows of cells, rendered in one of the
/// output formats.
struct Grid {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

enum Cell {
    Text(String),
    Int(usize),
    Num(Option<f64>),
}

impl Cell {
    fn text(&self, missing: &str) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(n) => n.to_string(),
            Cell::Num(Some(x)) => format!("{:.3}", round3(*x)),
            Cell::Num(None) => missing.to_string(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Text(s) => serde_json::Value::String(s.clone()),
            Cell::Int(n) => serde_json::Value::from(*n),
            Cell::Num(Some(x)) => serde_json::Value::from(round3(*x)),
            Cell::Num(None) => serde_json::Value::Null,
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Grid {
    fn render(&self, format: RenderFormat) -> String {
        match format {
            RenderFormat::Csv => {
                let mut out = self.header.iter().map(|h| csv_field(h)).collect::<Vec<_>>().join(",");
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(|c| csv_field(&c.text(""))).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                out
            }
            RenderFormat::Json => {
                let rows: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj = self
                            .header
                            .iter()
                            .zip(row)
                            .map(|(h, c)| (h.clone(), c.json()))
                            .collect::<serde_json::Map<_, _>>();
                        serde_json::Value::Object(obj)
                    })
                    .collect();
                let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
                s.push('\n');
                s
            }
            RenderFormat::Table => {
                let cells: Vec<Vec<String>> = self
                    .rows
                    .iter()
                    .map(|row| row.iter().map(|c| c.text("n/a")).collect())
                    .collect();
                let widths: Vec<usize> = self
                    .header
                    .iter()
                    .enumerate()
                    .map(|(i, h)| cells.iter().map(|r| r[i].len()).chain([h.len()]).max().unwrap_or(0))
                    .collect();
                let mut out = String::new();
                let line = |out: &mut String, items: &[String]| {
                    let padded: Vec<String> = items
                        .iter()
                        .zip(&widths)
                        .enumerate()
                        .map(|(i, (s, w))| if i == 0 { format!("{s:<w$}") } else { format!("{s:>w$}") })
                        .collect();
                    let _ = writeln!(out, "{}", padded.join("  ").trim_end());
                };
                line(&mut out, &self.header);
                let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
                line(&mut out, &rule);
                for row in &cells {
                    line(&mut out, row);
                }
                out
            }
        }
    }
}

/// One row per report, sorted by pipeline id then stage.
pub fn render_reports(reports: &[EvaluationReport], format: RenderFormat) -> Result<String, RenderError> {
    for (index, r) in reports.iter().enumerate() {
        if r.schema != REPORT_SCHEMA {
            return Err(RenderError::Schema {
                index,
                found: r.schema.clone(),
            });
        }
    }
    let mut sorted: Vec<&EvaluationReport> = reports.iter().collect();
    sorted.sort_by(|a, b| a.pipeline.cmp(&b.pipeline).then(a.stage.cmp(&b.stage)));
    let mut header = vec!["pipeline".to_string(), "stage".to_string()];
    header.extend(QUALITY_COLUMNS.iter().map(|c| c.to_string()));
    let rows = sorted
        .iter()
        .map(|r| {
            let mut row = vec![Cell::Text(r.pipeline.clone()), Cell::Int(r.stage as usize)];
            row.extend(quality_row(r).into_iter().map(Cell::Num));
            row
        })
        .collect();
    Ok(Grid { header, rows }.render(format))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankRow {
    pub pipeline: String,
    pub groups: GroupScores,
    pub h_mean: f64,
    pub rank_min: usize,
    pub rank_max: usize,
}

pub fn render_ranking(rows: &[RankRow], format: RenderFormat) -> String {
    let header = RANK_COLUMNS.iter().map(|c| c.to_string()).collect();
    let rows = rows
        .iter()
        .map(|r| {
            vec![
                Cell::Text(r.pipeline.clone()),
                Cell::Num(Some(r.groups.coverage)),
                Cell::Num(Some(r.groups.correctness)),
                Cell::Num(Some(r.groups.consistency)),
                Cell::Num(Some(r.h_mean)),
                Cell::Int(r.rank_min),
                Cell::Int(r.rank_max),
            ]
        })
        .collect();
    Grid { header, rows }.render(format)
}
