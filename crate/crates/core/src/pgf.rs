//! Perfection Gap Factor: the ratio of a finetuned model's accuracy gain on
//! a target task to the remaining headroom below that task's ceiling.
//!
//! The ratio is reported exactly as computed — never clamped. Positive
//! values are capped below 1 by construction; negative values can reach
//! -(m - 1) on an m-question task, so the positive and negative ranges are
//! deliberately not mirror images.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AccuracyMatrix, AnalysisConfig, CeilingMode, CeilingSpec, TaskSet};
use crate::scalar::Scalar;

/// Non-fatal observation attached to a computed PGF matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PgfWarning<S> {
    /// ceiling - baseline for this cell is below the configured warning
    /// gap, so the ratio is hypersensitive to accuracy noise.
    NearCeiling {
        source: usize,
        target: usize,
        gap: S,
    },
    /// Under the best-observed ceiling the whole column has zero headroom:
    /// the denominator degenerates to epsilon. Entries are still computed.
    ZeroGapBestObserved { target: usize },
}

/// PGF values for one (model, seed) accuracy matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PgfMatrix<S> {
    pub model_id: String,
    pub seed: i64,
    /// `values[i][j]` is the PGF from source task i to target task j.
    pub values: Vec<Vec<S>>,
    /// Effective ceiling per target column.
    pub ceiling_used: Vec<S>,
    pub warnings: Vec<PgfWarning<S>>,
}

impl<S: Scalar> PgfMatrix<S> {
    pub fn n_tasks(&self) -> usize {
        self.values.len()
    }
}

/// Elementwise mean and population standard deviation over seeds, for one
/// model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PgfSummary<S> {
    pub model_id: String,
    pub mean: Vec<Vec<S>>,
    pub std: Vec<Vec<S>>,
    pub seed_count: usize,
}

impl<S: Scalar> PgfSummary<S> {
    pub fn n_tasks(&self) -> usize {
        self.mean.len()
    }
}

/// The PGF ratio for a single cell: (finetuned - baseline) / (ceiling -
/// baseline + epsilon). Total on valid inputs; no clamping.
pub fn pgf_cell<S: Scalar>(baseline: S, finetuned: S, ceiling: S, epsilon: S) -> S {
    (finetuned - baseline) / (ceiling - baseline + epsilon)
}

/// Analytic lower bound of the PGF on a task with `m` questions and ceiling
/// 100: -(m - 1). The accuracy grid has spacing 100/m, so the highest
/// baseline strictly below the ceiling is 100(1 - 1/m) and the worst drop
/// is to zero.
pub fn pgf_min_bound<S: Scalar>(m: u32) -> Result<S> {
    if m == 0 {
        return Err(Error::InvalidQuestionCount);
    }
    Ok(-(S::from_u32(m - 1).expect("m fits in scalar")))
}

/// Compute the PGF matrix for one (model, seed) accuracy matrix under the
/// given ceiling specification.
///
/// Under [`CeilingMode::BestObserved`] the ceiling of column j is the
/// maximum of the baseline and every finetuned entry in that column,
/// taken within this single (model, seed) matrix.
pub fn pgf_matrix<S: Scalar>(
    acc: &AccuracyMatrix<S>,
    task_set: &TaskSet,
    ceiling: &CeilingSpec<S>,
    config: &AnalysisConfig<S>,
) -> PgfMatrix<S> {
    let n = acc.n_tasks();
    debug_assert_eq!(n, task_set.len());
    let mut ceiling_used = Vec::with_capacity(n);
    let mut warnings = Vec::new();

    for j in 0..n {
        let u = if let Some(over) = ceiling.per_task_override.get(task_set.id(j)) {
            *over
        } else {
            match ceiling.mode {
                CeilingMode::Fixed => ceiling.fixed_value,
                CeilingMode::BestObserved => {
                    let mut best = acc.baseline[j];
                    for row in &acc.finetuned {
                        if row[j] > best {
                            best = row[j];
                        }
                    }
                    best
                }
            }
        };
        if ceiling.mode == CeilingMode::BestObserved && u == acc.baseline[j] {
            warnings.push(PgfWarning::ZeroGapBestObserved { target: j });
        }
        ceiling_used.push(u);
    }

    let mut values = vec![vec![S::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            values[i][j] = pgf_cell(
                acc.baseline[j],
                acc.finetuned[i][j],
                ceiling_used[j],
                config.epsilon,
            );
            let gap = ceiling_used[j] - acc.baseline[j];
            if gap < config.min_gap_warn {
                warnings.push(PgfWarning::NearCeiling {
                    source: i,
                    target: j,
                    gap,
                });
            }
        }
    }

    PgfMatrix {
        model_id: acc.model_id.clone(),
        seed: acc.seed,
        values,
        ceiling_used,
        warnings,
    }
}

/// Elementwise mean and population standard deviation across the seed
/// matrices of a single model.
pub fn pgf_summary<S: Scalar>(matrices: &[PgfMatrix<S>]) -> Result<PgfSummary<S>> {
    let first = matrices
        .first()
        .ok_or(Error::EmptyInput("no PGF matrices"))?;
    let n = first.n_tasks();
    for m in matrices {
        if m.model_id != first.model_id {
            return Err(Error::MixedModels(
                first.model_id.clone(),
                m.model_id.clone(),
            ));
        }
        if m.n_tasks() != n || m.values.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "PGF matrix for seed {} does not match {n} tasks",
                m.seed
            )));
        }
    }

    let count = S::from_count(matrices.len());
    let mut mean = vec![vec![S::zero(); n]; n];
    let mut std = vec![vec![S::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut sum = S::zero();
            for m in matrices {
                sum = sum + m.values[i][j];
            }
            let mu = sum / count;
            let mut var = S::zero();
            for m in matrices {
                let d = m.values[i][j] - mu;
                var = var + d * d;
            }
            mean[i][j] = mu;
            std[i][j] = (var / count).sqrt();
        }
    }
    Ok(PgfSummary {
        model_id: first.model_id.clone(),
        mean,
        std,
        seed_count: matrices.len(),
    })
}
