//! Cross-task transfer analytics for finetuned models.
//!
//! Given per-(model, seed) evaluation accuracies — one baseline row plus
//! one row per finetuning source task — this crate computes perfection-gap
//! -factor matrices, transferability and malleability scores, category
//! aggregates, significance-tested task cliques, task personas, percentile
//! transfer graphs, and PGF-guided data-mixture recommendations. A
//! planted-structure synthetic generator doubles as the pipeline's own
//! ground-truth oracle.
//!
//! The numeric core is generic over the scalar type (`f32`/`f64`, see
//! [`scalar::Scalar`]); the aliases below fix `f64`, which is what the I/O
//! layer and the CLI use.

// index loops over (source, target) matrix cells read better than iterator
// chains here
#![allow(clippy::needless_range_loop)]

pub mod aggregate;
pub mod error;
pub mod graph;
pub mod io;
pub mod model;
pub mod personas;
pub mod pgf;
pub mod pipeline;
pub mod scalar;
pub mod selection;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
pub use model::{Granularity, PerceptualLevel, Source, TaskSet, TaskSpec};
pub use scalar::Scalar;

pub type EvalRecord = model::EvalRecord<f64>;
pub type AccuracyMatrix = model::AccuracyMatrix<f64>;
pub type Assembly = model::Assembly<f64>;
pub type CeilingSpec = model::CeilingSpec<f64>;
pub type AnalysisConfig = model::AnalysisConfig<f64>;
pub type SelectionStrategy = model::SelectionStrategy<f64>;

pub type PgfMatrix = pgf::PgfMatrix<f64>;
pub type PgfSummary = pgf::PgfSummary<f64>;
pub type PgfWarning = pgf::PgfWarning<f64>;

pub type TransferScore = aggregate::TransferScore<f64>;
pub type MalleabilityScore = aggregate::MalleabilityScore<f64>;
pub type CategoryAggregate = aggregate::CategoryAggregate<f64>;

pub type TestResult = stats::TestResult<f64>;
pub type CosineMatrix = stats::CosineMatrix<f64>;

pub type TransferGraph = graph::TransferGraph<f64>;
pub type TransferEdge = graph::TransferEdge<f64>;
pub type Clique = graph::Clique<f64>;

pub type ScoreTable = personas::ScoreTable<f64>;
pub type PersonaReport = personas::PersonaReport<f64>;
pub type PersonaAnalysis = personas::PersonaAnalysis<f64>;

pub type MixturePlan = selection::MixturePlan<f64>;
pub type PlanComparison = selection::PlanComparison<f64>;

pub type PlantedStructure = synth::PlantedStructure<f64>;
pub type GeneratedData = synth::GeneratedData<f64>;
