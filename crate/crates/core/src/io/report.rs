//! The single structured report document produced by an analysis run:
//! PGF summaries, scores, category aggregates, graphs, cliques, personas,
//! and mixture plans, under one schema version, with the run manifest
//! echoed for reproducibility.

use serde::{Deserialize, Serialize};

use crate::aggregate::{CategoryAggregate, MalleabilityScore, TransferScore};
use crate::error::{Error, Result};
use crate::graph::{Clique, EdgeSign, TransferGraph};
use crate::model::{AnalysisConfig, TaskSet, TaskSpec};
use crate::personas::PersonaAnalysis;
use crate::selection::MixturePlan;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// What produced a report: inputs, effective configuration, and tool
/// version. The timestamp is opt-in so that reruns stay byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub input_paths: Vec<String>,
    pub tasks_path: Option<String>,
    pub output_dir: String,
    pub ceiling: String,
    pub targets: Vec<String>,
    pub config: AnalysisConfig<f64>,
    pub timestamp: Option<String>,
    pub tool_version: String,
}

impl RunManifest {
    pub fn new(subcommand: &str) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            input_paths: Vec::new(),
            tasks_path: None,
            output_dir: String::new(),
            ceiling: "fixed:100".to_string(),
            targets: Vec::new(),
            config: AnalysisConfig::default(),
            timestamp: None,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScorePair {
    pub positive: f64,
    pub negative: f64,
}

/// A transfer-graph edge with ids resolved, for the report document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeExport {
    pub source: String,
    pub target: String,
    pub weight: f64,
    pub sign: EdgeSign,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphExport {
    pub percentile: f64,
    pub seed_policy: String,
    pub edges: Vec<EdgeExport>,
}

impl GraphExport {
    pub fn from_graph(graph: &TransferGraph<f64>, task_set: &TaskSet) -> Self {
        Self {
            percentile: graph.percentile,
            seed_policy: graph.seed_policy.clone(),
            edges: graph
                .edges
                .iter()
                .map(|e| EdgeExport {
                    source: task_set.id(e.source).to_string(),
                    target: task_set.id(e.target).to_string(),
                    weight: e.weight,
                    sign: e.sign,
                })
                .collect(),
        }
    }
}

/// Everything computed for one model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelReport {
    pub model_id: String,
    pub seeds: Vec<i64>,
    pub pgf_mean: Vec<Vec<f64>>,
    pub pgf_std: Vec<Vec<f64>>,
    /// Scores computed on the seed-mean PGF matrix.
    pub transfer_scores: Vec<TransferScore<f64>>,
    pub malleability_scores: Vec<MalleabilityScore<f64>>,
    pub transfer_average: ScorePair,
    pub malleability_average: ScorePair,
    pub category_perceptual: Vec<CategoryAggregate<f64>>,
    pub category_granularity: Vec<CategoryAggregate<f64>>,
    pub graph: GraphExport,
    pub cliques_positive: Vec<Clique<f64>>,
    pub cliques_negative: Vec<Clique<f64>>,
    pub warnings: Vec<String>,
}

/// A mixture plan tagged with the model whose PGF summary produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixturePlanEntry {
    pub model_id: String,
    pub plan: MixturePlan<f64>,
}

/// The full analysis report document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub manifest: RunManifest,
    pub tasks: Vec<TaskSpec>,
    pub models: Vec<ModelReport>,
    pub personas: PersonaAnalysis<f64>,
    pub mixture_plans: Vec<MixturePlanEntry>,
    pub ingest_warnings: Vec<String>,
}

impl AnalysisReport {
    /// A schema-valid document with no analysis products.
    pub fn empty(manifest: RunManifest) -> Self {
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            manifest,
            tasks: Vec::new(),
            models: Vec::new(),
            personas: PersonaAnalysis {
                reports: Vec::new(),
                models: Vec::new(),
                single_model: false,
                warnings: Vec::new(),
            },
            mixture_plans: Vec::new(),
            ingest_warnings: Vec::new(),
        }
    }
}

/// Serialize the report with stable key order and a trailing newline.
pub fn export_report_json(report: &AnalysisReport) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("report serializes");
    out.push('\n');
    out
}

/// Parse and schema-check a report document.
pub fn parse_report_json(text: &str) -> Result<AnalysisReport> {
    let report: AnalysisReport = serde_json::from_str(text)?;
    if report.schema_version != REPORT_SCHEMA_VERSION {
        return Err(Error::UnsupportedSchemaVersion {
            found: report.schema_version,
            supported: REPORT_SCHEMA_VERSION,
        });
    }
    Ok(report)
}
