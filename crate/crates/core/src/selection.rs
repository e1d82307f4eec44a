//! PGF-informed data-mixture recommendation for a target task with no
//! training data of its own: pick the sources that transfer best into the
//! target, above a configurable threshold.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AnalysisConfig, SelectionStrategy, TaskSet};
use crate::pgf::PgfSummary;
use crate::scalar::Scalar;

/// Which thresholding strategy produced a plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyKind {
    AbsoluteThreshold,
    ColumnPercentile,
}

/// A source task rejected by the threshold, with its mean PGF toward the
/// target for the record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcludedSource<S> {
    pub task_id: String,
    pub mean_pgf: S,
    pub reason: String,
}

/// Recommended training mixture for one target task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixturePlan<S> {
    pub target_task: String,
    /// (source task, weight); uniform weights summing to 1. Empty when no
    /// source clears the threshold.
    pub selected_sources: Vec<(String, S)>,
    pub threshold_used: S,
    pub strategy: StrategyKind,
    pub excluded: Vec<ExcludedSource<S>>,
}

impl<S> MixturePlan<S> {
    /// True when no source cleared the threshold; the `excluded` list then
    /// carries the reason for every candidate.
    pub fn is_empty(&self) -> bool {
        self.selected_sources.is_empty()
    }
}

/// Linear-interpolation percentile of a sorted slice, q in [0, 100].
fn percentile_of_sorted<S: Scalar>(sorted: &[S], q: S) -> S {
    debug_assert!(!sorted.is_empty());
    if sorted.len() == 1 {
        return sorted[0];
    }
    let hundred = S::from_f64_lossy(100.0);
    let rank = q / hundred * S::from_count(sorted.len() - 1);
    let lo = rank.floor().to_usize().unwrap_or(0).min(sorted.len() - 1);
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = rank - rank.floor();
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// Recommend a uniform-weight mixture of source tasks for `target`, based
/// on the seed-mean PGF column toward it (diagonal excluded).
///
/// When nothing clears the threshold the plan comes back with an empty
/// selection rather than an error; every candidate is then listed in
/// `excluded` with its mean PGF.
pub fn recommend_mixture<S: Scalar>(
    summary: &PgfSummary<S>,
    task_set: &TaskSet,
    target: &str,
    config: &AnalysisConfig<S>,
) -> Result<MixturePlan<S>> {
    let target_idx = task_set
        .index_of(target)
        .ok_or_else(|| Error::UnknownTaskId(target.to_string()))?;
    if summary.n_tasks() != task_set.len() {
        return Err(Error::DimensionMismatch(format!(
            "summary has {} tasks, task set has {}",
            summary.n_tasks(),
            task_set.len()
        )));
    }

    let column: Vec<(usize, S)> = (0..task_set.len())
        .filter(|&i| i != target_idx)
        .map(|i| (i, summary.mean[i][target_idx]))
        .collect();

    let (threshold, strategy) = match config.selection {
        SelectionStrategy::AbsoluteThreshold(t) => (t, StrategyKind::AbsoluteThreshold),
        SelectionStrategy::ColumnPercentile(q) => {
            let mut positives: Vec<S> = column
                .iter()
                .map(|&(_, v)| v)
                .filter(|v| *v > S::zero())
                .collect();
            positives.sort_by(|a, b| a.partial_cmp(b).expect("PGF means must not be NaN"));
            let threshold = if positives.is_empty() {
                S::zero()
            } else {
                percentile_of_sorted(&positives, q)
            };
            (threshold, StrategyKind::ColumnPercentile)
        }
    };

    let mut selected = Vec::new();
    let mut excluded = Vec::new();
    for &(i, v) in &column {
        if v > threshold {
            selected.push(task_set.id(i).to_string());
        } else {
            excluded.push(ExcludedSource {
                task_id: task_set.id(i).to_string(),
                mean_pgf: v,
                reason: format!("mean PGF {v} not above threshold {threshold}"),
            });
        }
    }

    let weight = if selected.is_empty() {
        S::zero()
    } else {
        S::one() / S::from_count(selected.len())
    };
    Ok(MixturePlan {
        target_task: task_set.id(target_idx).to_string(),
        selected_sources: selected.into_iter().map(|id| (id, weight)).collect(),
        threshold_used: threshold,
        strategy,
        excluded,
    })
}

/// Where a mixture-trained model landed relative to the baseline (lower
/// bound) and direct finetuning on the target (upper bound).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixtureOutcome {
    BelowBaseline,
    BetweenBounds,
    ExceedsDirect,
}

/// Classification of an externally measured mixture run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanComparison<S> {
    pub target_task: String,
    pub outcome: MixtureOutcome,
    pub baseline_accuracy: S,
    pub direct_finetune_accuracy: S,
    pub mixture_accuracy: S,
    pub gain_over_baseline: S,
}

/// Classify a measured mixture accuracy against the baseline and
/// direct-finetuning bounds. Training on the mixture happens elsewhere;
/// this only orders the supplied outcomes.
pub fn compare_plans<S: Scalar>(
    plan: &MixturePlan<S>,
    baseline_acc: S,
    direct_ft_acc: S,
    mixture_acc: S,
) -> Result<PlanComparison<S>> {
    let hundred = S::from_f64_lossy(100.0);
    for (name, v) in [
        ("baseline", baseline_acc),
        ("direct finetune", direct_ft_acc),
        ("mixture", mixture_acc),
    ] {
        if !(v >= S::zero() && v <= hundred) {
            return Err(Error::InvalidConfig(format!(
                "{name} accuracy {v} outside [0, 100]"
            )));
        }
    }
    let outcome = if mixture_acc < baseline_acc {
        MixtureOutcome::BelowBaseline
    } else if mixture_acc > direct_ft_acc {
        MixtureOutcome::ExceedsDirect
    } else {
        MixtureOutcome::BetweenBounds
    };
    Ok(PlanComparison {
        target_task: plan.target_task.clone(),
        outcome,
        baseline_accuracy: baseline_acc,
        direct_finetune_accuracy: direct_ft_acc,
        mixture_accuracy: mixture_acc,
        gain_over_baseline: mixture_acc - baseline_acc,
    })
}
