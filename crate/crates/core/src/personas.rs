//! Task personas: sources that consistently help (donors) or hurt
//! (pirates) other tasks, and targets that readily absorb (sponges) or
//! suffer from (sieves) finetuning on other tasks.
//!
//! All four criteria are strict greater-than comparisons on nonnegative
//! magnitudes: donors/sponges compare the positive score, pirates/sieves
//! the magnitude of the negative score, each against the model average of
//! the same quantity. A task earns a persona only when the criterion holds
//! in every model present.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::aggregate::{MalleabilityScore, TransferScore};
use crate::error::{Error, Result};
use crate::model::{AnalysisConfig, TaskSet};
use crate::scalar::Scalar;
use crate::stats::{unpaired_t_test, Sidedness, TTestVariant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Persona {
    Donor,
    Pirate,
    Sponge,
    Sieve,
}

impl Persona {
    pub const ALL: [Persona; 4] = [Self::Donor, Self::Pirate, Self::Sponge, Self::Sieve];

    pub fn label(self) -> &'static str {
        match self {
            Self::Donor => "donor",
            Self::Pirate => "pirate",
            Self::Sponge => "sponge",
            Self::Sieve => "sieve",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "donor" => Some(Self::Donor),
            "pirate" => Some(Self::Pirate),
            "sponge" => Some(Self::Sponge),
            "sieve" => Some(Self::Sieve),
            _ => None,
        }
    }
}

/// Scores of every task for one (model, seed) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreTable<S> {
    pub model_id: String,
    pub seed: i64,
    pub transfer: Vec<TransferScore<S>>,
    pub malleability: Vec<MalleabilityScore<S>>,
}

/// Evaluation of one (task, persona) candidate across models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersonaReport<S> {
    pub task_id: String,
    pub persona: Persona,
    /// Models in which the task's mean-over-seeds magnitude strictly
    /// exceeds the model-average magnitude.
    pub models_satisfied: Vec<String>,
    /// True iff satisfied in every model present.
    pub consistent: bool,
    /// Per-model one-sided Welch t-test of the task's per-seed scores
    /// against the pooled per-seed scores of all other tasks. Absent when
    /// a model has fewer than two seeds or the test degenerates.
    pub p_values: BTreeMap<String, S>,
    /// True iff a p-value exists for every model and all are below alpha.
    pub significant: bool,
}

/// Full persona classification output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersonaAnalysis<S> {
    /// One report per (task, persona), tasks in task-set order and
    /// personas in [`Persona::ALL`] order.
    pub reports: Vec<PersonaReport<S>>,
    pub models: Vec<String>,
    /// True when only one model is present, in which case consistency
    /// degenerates to that single model.
    pub single_model: bool,
    pub warnings: Vec<String>,
}

fn magnitude<S: Scalar>(table: &ScoreTable<S>, task: usize, persona: Persona) -> S {
    match persona {
        Persona::Donor => table.transfer[task].positive,
        Persona::Pirate => -table.transfer[task].negative,
        Persona::Sponge => table.malleability[task].positive,
        Persona::Sieve => -table.malleability[task].negative,
    }
}

/// Classify every task against every persona.
///
/// `tables` holds one [`ScoreTable`] per (model, seed) pair; all models
/// must share the task set. The model average includes the candidate task
/// itself.
pub fn classify_personas<S: Scalar>(
    tables: &[ScoreTable<S>],
    task_set: &TaskSet,
    config: &AnalysisConfig<S>,
) -> Result<PersonaAnalysis<S>> {
    let n = task_set.len();
    for t in tables {
        if t.transfer.len() != n || t.malleability.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "score table for model {:?} seed {} does not cover {n} tasks",
                t.model_id, t.seed
            )));
        }
    }
    let mut by_model: BTreeMap<&str, Vec<&ScoreTable<S>>> = BTreeMap::new();
    for t in tables {
        by_model.entry(&t.model_id).or_default().push(t);
    }
    if by_model.is_empty() {
        return Err(Error::MissingModel);
    }
    let models: Vec<String> = by_model.keys().map(|m| m.to_string()).collect();

    let mut warnings = Vec::new();
    let seed_counts: Vec<usize> = by_model.values().map(|v| v.len()).collect();
    if seed_counts.iter().any(|&c| c != seed_counts[0]) {
        warnings.push(format!(
            "seed counts differ across models: {:?}",
            by_model
                .iter()
                .map(|(m, v)| format!("{m}={}", v.len()))
                .collect::<Vec<_>>()
        ));
    }

    let mut reports = Vec::with_capacity(n * Persona::ALL.len());
    for task in 0..n {
        for persona in Persona::ALL {
            let mut models_satisfied = Vec::new();
            let mut p_values = BTreeMap::new();
            for (model, seeds) in &by_model {
                let per_seed: Vec<S> = seeds.iter().map(|t| magnitude(t, task, persona)).collect();
                let seed_count = S::from_count(per_seed.len());
                let task_mean = per_seed.iter().fold(S::zero(), |a, &b| a + b) / seed_count;

                let mut avg_sum = S::zero();
                for t in seeds.iter() {
                    for other in 0..n {
                        avg_sum = avg_sum + magnitude(t, other, persona);
                    }
                }
                let model_avg = avg_sum / (seed_count * S::from_count(n));
                if task_mean > model_avg {
                    models_satisfied.push(model.to_string());
                }

                if per_seed.len() >= 2 {
                    let mut others = Vec::with_capacity((n - 1) * seeds.len());
                    for t in seeds.iter() {
                        for other in 0..n {
                            if other != task {
                                others.push(magnitude(t, other, persona));
                            }
                        }
                    }
                    match unpaired_t_test(
                        &per_seed,
                        &others,
                        TTestVariant::Welch,
                        Sidedness::OneSidedGreater,
                    ) {
                        Ok(test) => {
                            p_values.insert(model.to_string(), test.p_value);
                        }
                        Err(Error::ZeroVarianceBoth) | Err(Error::InsufficientSamples(..)) => {
                            warnings.push(format!(
                                "significance test degenerate for task {:?} persona {} in \
                                 model {model:?}",
                                task_set.id(task),
                                persona.label()
                            ));
                        }
                        Err(e) => return Err(e),
                    }
                } else {
                    warnings.push(format!(
                        "model {model:?} has one seed; significance test skipped"
                    ));
                }
            }
            let consistent = models_satisfied.len() == models.len();
            let significant =
                p_values.len() == models.len() && p_values.values().all(|p| *p < config.alpha);
            reports.push(PersonaReport {
                task_id: task_set.id(task).to_string(),
                persona,
                models_satisfied,
                consistent,
                p_values,
                significant,
            });
        }
    }
    warnings.sort();
    warnings.dedup();

    Ok(PersonaAnalysis {
        reports,
        single_model: models.len() == 1,
        models,
        warnings,
    })
}
