//! End-to-end orchestration: records in, full analysis report plus
//! exportable per-model products out. The CLI is a thin wrapper around
//! [`analyze`].

use std::collections::BTreeMap;

use crate::aggregate::{
    category_aggregate, malleability_all, model_average_malleability,
    model_average_transferability, transferability_all, CategoryAxis,
};
use crate::error::Result;
use crate::graph::{build_graph, find_cliques_with_options, EdgeSign};
use crate::io::{
    AnalysisReport, GraphExport, MixturePlanEntry, ModelReport, RunManifest, ScorePair,
    REPORT_SCHEMA_VERSION,
};
use crate::model::{assemble_matrices, CeilingMode};
use crate::personas::classify_personas;
use crate::pgf::{pgf_matrix, pgf_summary, PgfWarning};
use crate::scalar::Scalar;
use crate::{
    AnalysisConfig, CeilingSpec, EvalRecord, PgfMatrix, PgfSummary, ScoreTable, TaskSet,
    TransferGraph,
};

/// Knobs of one analysis run.
#[derive(Debug, Clone, Default)]
pub struct AnalyzeOptions {
    pub ceiling: CeilingSpec,
    pub config: AnalysisConfig,
    /// Targets to produce mixture plans for (per model).
    pub targets: Vec<String>,
    /// List non-maximal cliques too.
    pub all_cliques: bool,
}

/// Everything an analysis run produces: the report document plus the
/// per-model summaries and graphs that feed the heatmap/DOT/SVG exports.
#[derive(Debug, Clone)]
pub struct AnalysisProducts {
    pub report: AnalysisReport,
    pub summaries: Vec<PgfSummary>,
    pub graphs: Vec<TransferGraph>,
}

fn describe_warning<S: Scalar>(w: &PgfWarning<S>, seed: i64, task_set: &TaskSet) -> String {
    match w {
        PgfWarning::NearCeiling {
            source,
            target,
            gap,
        } => format!(
            "seed {seed}: near-ceiling gap {gap} for ({} -> {})",
            task_set.id(*source),
            task_set.id(*target)
        ),
        PgfWarning::ZeroGapBestObserved { target } => format!(
            "seed {seed}: column {} has zero headroom under the best-observed ceiling",
            task_set.id(*target)
        ),
    }
}

/// Run the full pipeline over one batch of records.
pub fn analyze(
    records: &[EvalRecord],
    task_set: &TaskSet,
    options: &AnalyzeOptions,
    manifest: RunManifest,
) -> Result<AnalysisProducts> {
    options.config.validate()?;
    options.ceiling.validate()?;

    let assembly = assemble_matrices(records, task_set)?;
    let mut by_model: BTreeMap<String, Vec<PgfMatrix>> = BTreeMap::new();
    for acc in &assembly.matrices {
        let pgf = pgf_matrix(acc, task_set, &options.ceiling, &options.config);
        by_model.entry(acc.model_id.clone()).or_default().push(pgf);
    }

    let mut models = Vec::new();
    let mut summaries = Vec::new();
    let mut graphs = Vec::new();
    let mut score_tables: Vec<ScoreTable> = Vec::new();
    let mut mixture_plans = Vec::new();

    for (model_id, per_seed) in &by_model {
        let summary = pgf_summary(per_seed)?;
        let n = task_set.len();

        // seed-mean matrix: the point estimate that scores, graphs, and
        // cliques are reported on
        let mut mean_ceiling = vec![0.0f64; n];
        for m in per_seed {
            for j in 0..n {
                mean_ceiling[j] += m.ceiling_used[j] / per_seed.len() as f64;
            }
        }
        let mean_pgf = PgfMatrix {
            model_id: model_id.clone(),
            seed: 0,
            values: summary.mean.clone(),
            ceiling_used: mean_ceiling,
            warnings: Vec::new(),
        };

        let transfer_scores = transferability_all(&mean_pgf, task_set, &options.config)?;
        let malleability_scores = malleability_all(&mean_pgf, task_set, &options.config)?;
        let (tp, tn) = model_average_transferability(&transfer_scores)?;
        let (mp, mn) = model_average_malleability(&malleability_scores)?;

        for m in per_seed {
            score_tables.push(ScoreTable {
                model_id: model_id.clone(),
                seed: m.seed,
                transfer: transferability_all(m, task_set, &options.config)?,
                malleability: malleability_all(m, task_set, &options.config)?,
            });
        }

        let graph = build_graph(&summary, task_set, &options.config);
        let cliques_positive = find_cliques_with_options(
            per_seed,
            task_set,
            EdgeSign::Positive,
            &options.config,
            options.all_cliques,
        )?;
        let cliques_negative = find_cliques_with_options(
            per_seed,
            task_set,
            EdgeSign::Negative,
            &options.config,
            options.all_cliques,
        )?;

        for target in &options.targets {
            let plan =
                crate::selection::recommend_mixture(&summary, task_set, target, &options.config)?;
            mixture_plans.push(MixturePlanEntry {
                model_id: model_id.clone(),
                plan,
            });
        }

        let mut warnings: Vec<String> = per_seed
            .iter()
            .flat_map(|m| {
                m.warnings
                    .iter()
                    .map(|w| describe_warning(w, m.seed, task_set))
                    .collect::<Vec<_>>()
            })
            .collect();
        warnings.sort();
        warnings.dedup();

        models.push(ModelReport {
            model_id: model_id.clone(),
            seeds: per_seed.iter().map(|m| m.seed).collect(),
            pgf_mean: summary.mean.clone(),
            pgf_std: summary.std.clone(),
            transfer_scores,
            malleability_scores,
            transfer_average: ScorePair {
                positive: tp,
                negative: tn,
            },
            malleability_average: ScorePair {
                positive: mp,
                negative: mn,
            },
            category_perceptual: category_aggregate(
                per_seed,
                task_set,
                CategoryAxis::PerceptualLevel,
            )?,
            category_granularity: category_aggregate(
                per_seed,
                task_set,
                CategoryAxis::Granularity,
            )?,
            graph: GraphExport::from_graph(&graph, task_set),
            cliques_positive,
            cliques_negative,
            warnings,
        });
        summaries.push(summary);
        graphs.push(graph);
    }

    let personas = classify_personas(&score_tables, task_set, &options.config)?;

    let report = AnalysisReport {
        schema_version: REPORT_SCHEMA_VERSION,
        manifest,
        tasks: task_set.tasks().to_vec(),
        models,
        personas,
        mixture_plans,
        ingest_warnings: assembly.warnings.iter().map(|w| w.to_string()).collect(),
    };
    Ok(AnalysisProducts {
        report,
        summaries,
        graphs,
    })
}

/// Ceiling flag rendering used in manifests ("fixed:100", "best").
pub fn describe_ceiling(spec: &CeilingSpec) -> String {
    match spec.mode {
        CeilingMode::Fixed => format!("fixed:{}", spec.fixed_value),
        CeilingMode::BestObserved => "best".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeSign;
    use crate::synth::{PlantedClique, PlantedStructure};
    use crate::TaskSet;

    fn structure(model_id: &str, scale: f64) -> PlantedStructure<f64> {
        let task_set = TaskSet::blink();
        let n = task_set.len();
        let mut effects = vec![vec![0.0; n]; n];
        for (i, row) in effects.iter_mut().enumerate() {
            row[i] = 0.8;
        }
        let clique: Vec<usize> = [
            "relative_depth",
            "relative_reflectance",
            "visual_correspondence",
        ]
        .iter()
        .map(|id| task_set.index_of(id).unwrap())
        .collect();
        for &i in &clique {
            for &j in &clique {
                if i != j {
                    effects[i][j] = 0.35 * scale;
                }
            }
        }
        PlantedStructure {
            model_id: model_id.to_string(),
            task_set: task_set.clone(),
            baseline: (0..n).map(|j| 35.0 + j as f64).collect(),
            ceiling: vec![100.0; n],
            effects,
            planted_cliques: vec![PlantedClique {
                members: vec![
                    "relative_depth".into(),
                    "relative_reflectance".into(),
                    "visual_correspondence".into(),
                ],
                sign: EdgeSign::Positive,
            }],
            planted_personas: vec![],
            noise_std: 0.0,
            questions: vec![0; n],
            seeds: vec![1, 2],
            rng_seed: 11,
        }
    }

    #[test]
    fn pipeline_runs_end_to_end_on_synthetic_data() {
        let task_set = TaskSet::blink();
        let mut records = Vec::new();
        for (model, scale) in [("m-small", 0.9), ("m-large", 1.1)] {
            records.extend(structure(model, scale).generate().unwrap().records);
        }
        let options = AnalyzeOptions {
            targets: vec!["relative_depth".into()],
            ..Default::default()
        };
        let products = analyze(&records, &task_set, &options, RunManifest::new("analyze")).unwrap();
        assert_eq!(products.report.models.len(), 2);
        assert_eq!(products.report.mixture_plans.len(), 2);
        assert_eq!(products.report.personas.models.len(), 2);
        // planted clique appears inside some maximal positive clique
        for model in &products.report.models {
            let found = model.cliques_positive.iter().any(|c| {
                [
                    "relative_depth",
                    "relative_reflectance",
                    "visual_correspondence",
                ]
                .iter()
                .all(|id| c.members.iter().any(|m| m == id))
            });
            assert!(found, "clique missing for {}", model.model_id);
        }
    }

    #[test]
    fn analysis_is_deterministic() {
        let task_set = TaskSet::blink();
        let records = structure("m", 1.0).generate().unwrap().records;
        let options = AnalyzeOptions::default();
        let a = analyze(&records, &task_set, &options, RunManifest::new("analyze")).unwrap();
        let b = analyze(&records, &task_set, &options, RunManifest::new("analyze")).unwrap();
        assert_eq!(
            crate::io::export_report_json(&a.report),
            crate::io::export_report_json(&b.report)
        );
    }
}
