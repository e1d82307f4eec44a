//! Transferability and malleability scores, model-level averages, and
//! category-level (perceptual level / granularity) aggregates.
//!
//! Both score families weight a same-sign sum by (1 - e^(-k/N)) / k where
//! k is the count of same-sign entries: broad, consistent transfer scores
//! higher than a single large outlier of equal total mass. Entries that are
//! exactly zero count toward neither side, and an empty side scores 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AnalysisConfig, Granularity, PerceptualLevel, TaskSet};
use crate::pgf::PgfMatrix;
use crate::scalar::Scalar;

/// Row scores: how a source task moves every target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferScore<S> {
    pub task_id: String,
    /// Weighted sum of positive PGF entries; 0 when none.
    pub positive: S,
    /// Weighted sum of negative PGF entries; 0 when none.
    pub negative: S,
    pub positive_count: usize,
    pub negative_count: usize,
}

/// Column scores: how strongly a target task is moved by finetuning on
/// other tasks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MalleabilityScore<S> {
    pub task_id: String,
    pub positive: S,
    pub negative: S,
    pub positive_count: usize,
    pub negative_count: usize,
}

fn breadth_weighted<S: Scalar>(sum: S, count: usize, n: usize) -> S {
    if count == 0 {
        return S::zero();
    }
    let k = S::from_count(count);
    let nf = S::from_count(n);
    (S::one() - (-k / nf).exp()) / k * sum
}

fn signed_parts<S: Scalar>(entries: impl Iterator<Item = S>) -> (S, usize, S, usize) {
    let mut pos_sum = S::zero();
    let mut pos_count = 0usize;
    let mut neg_sum = S::zero();
    let mut neg_count = 0usize;
    for v in entries {
        if v > S::zero() {
            pos_sum = pos_sum + v;
            pos_count += 1;
        } else if v < S::zero() {
            neg_sum = neg_sum + v;
            neg_count += 1;
        }
    }
    (pos_sum, pos_count, neg_sum, neg_count)
}

/// Transferability of source task `i`: breadth-weighted sums of the
/// positive and negative PGF entries along row `i`.
pub fn transferability<S: Scalar>(
    pgf: &PgfMatrix<S>,
    task_set: &TaskSet,
    i: usize,
    config: &AnalysisConfig<S>,
) -> Result<TransferScore<S>> {
    let n = pgf.n_tasks();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    let (pos, p, neg, nn) = signed_parts(
        pgf.values[i]
            .iter()
            .enumerate()
            .filter(|(j, _)| config.include_diagonal_in_scores || *j != i)
            .map(|(_, v)| *v),
    );
    Ok(TransferScore {
        task_id: task_set.id(i).to_string(),
        positive: breadth_weighted(pos, p, n),
        negative: breadth_weighted(neg, nn, n),
        positive_count: p,
        negative_count: nn,
    })
}

/// Malleability of target task `j`: the column-wise analogue of
/// [`transferability`].
pub fn malleability<S: Scalar>(
    pgf: &PgfMatrix<S>,
    task_set: &TaskSet,
    j: usize,
    config: &AnalysisConfig<S>,
) -> Result<MalleabilityScore<S>> {
    let n = pgf.n_tasks();
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    let (pos, p, neg, nn) = signed_parts(
        pgf.values
            .iter()
            .enumerate()
            .filter(|(i, _)| config.include_diagonal_in_scores || *i != j)
            .map(|(_, row)| row[j]),
    );
    Ok(MalleabilityScore {
        task_id: task_set.id(j).to_string(),
        positive: breadth_weighted(pos, p, n),
        negative: breadth_weighted(neg, nn, n),
        positive_count: p,
        negative_count: nn,
    })
}

/// Scores for every task of one PGF matrix.
pub fn transferability_all<S: Scalar>(
    pgf: &PgfMatrix<S>,
    task_set: &TaskSet,
    config: &AnalysisConfig<S>,
) -> Result<Vec<TransferScore<S>>> {
    (0..pgf.n_tasks())
        .map(|i| transferability(pgf, task_set, i, config))
        .collect()
}

pub fn malleability_all<S: Scalar>(
    pgf: &PgfMatrix<S>,
    task_set: &TaskSet,
    config: &AnalysisConfig<S>,
) -> Result<Vec<MalleabilityScore<S>>> {
    (0..pgf.n_tasks())
        .map(|j| malleability(pgf, task_set, j, config))
        .collect()
}

/// Arithmetic means of the positive and of the negative fields across all
/// tasks of one model.
pub fn model_average_transferability<S: Scalar>(scores: &[TransferScore<S>]) -> Result<(S, S)> {
    if scores.is_empty() {
        return Err(Error::EmptyInput("no transfer scores"));
    }
    let n = S::from_count(scores.len());
    let mut pos = S::zero();
    let mut neg = S::zero();
    for s in scores {
        pos = pos + s.positive;
        neg = neg + s.negative;
    }
    Ok((pos / n, neg / n))
}

/// Arithmetic means of the positive and negative malleability fields.
pub fn model_average_malleability<S: Scalar>(scores: &[MalleabilityScore<S>]) -> Result<(S, S)> {
    if scores.is_empty() {
        return Err(Error::EmptyInput("no malleability scores"));
    }
    let n = S::from_count(scores.len());
    let mut pos = S::zero();
    let mut neg = S::zero();
    for s in scores {
        pos = pos + s.positive;
        neg = neg + s.negative;
    }
    Ok((pos / n, neg / n))
}

/// The classification axis used for category aggregation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CategoryAxis {
    PerceptualLevel,
    Granularity,
}

impl CategoryAxis {
    pub fn labels(self) -> &'static [&'static str] {
        match self {
            Self::PerceptualLevel => &["low", "mid", "high"],
            Self::Granularity => &["pixel", "crop", "image"],
        }
    }

    fn category_index(self, task_set: &TaskSet, task: usize) -> usize {
        match self {
            Self::PerceptualLevel => {
                let level = task_set.task(task).perceptual_level;
                PerceptualLevel::ALL
                    .iter()
                    .position(|&l| l == level)
                    .unwrap()
            }
            Self::Granularity => {
                let gran = task_set.task(task).granularity;
                Granularity::ALL.iter().position(|&g| g == gran).unwrap()
            }
        }
    }
}

/// Mean positive and mean negative PGF between an ordered pair of task
/// categories, pooled over seeds and over every (source task, target task)
/// pair in the category pair. Self-transfer diagonal cells are excluded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryAggregate<S> {
    pub axis: CategoryAxis,
    pub source_category: String,
    pub target_category: String,
    /// Mean over strictly positive entries; 0 when there are none.
    pub positive_mean: S,
    /// Mean over strictly negative entries; 0 when there are none.
    pub negative_mean: S,
    /// Number of (source, target) task pairs contributing per seed.
    pub pair_count: usize,
    pub seed_count: usize,
}

/// Category-level aggregation over the per-seed PGF matrices of one model.
/// All (seed, task pair) samples for a category pair are pooled into one
/// mean per sign, which matches a mean-of-means when every seed covers
/// every pair and stays robust when it does not.
pub fn category_aggregate<S: Scalar>(
    pgf_per_seed: &[PgfMatrix<S>],
    task_set: &TaskSet,
    axis: CategoryAxis,
) -> Result<Vec<CategoryAggregate<S>>> {
    let first = pgf_per_seed
        .first()
        .ok_or(Error::EmptyInput("no PGF matrices"))?;
    let n = task_set.len();
    for m in pgf_per_seed {
        if m.n_tasks() != n {
            return Err(Error::DimensionMismatch(format!(
                "PGF matrix for seed {} has {} tasks, task set has {n}",
                m.seed,
                m.n_tasks()
            )));
        }
    }
    let _ = first;
    let labels = axis.labels();
    let k = labels.len();
    let categories: Vec<usize> = (0..n).map(|t| axis.category_index(task_set, t)).collect();

    let mut out = Vec::with_capacity(k * k);
    for sc in 0..k {
        for tc in 0..k {
            let mut pairs = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if i != j && categories[i] == sc && categories[j] == tc {
                        pairs.push((i, j));
                    }
                }
            }
            let mut pos_sum = S::zero();
            let mut pos_count = 0usize;
            let mut neg_sum = S::zero();
            let mut neg_count = 0usize;
            for m in pgf_per_seed {
                for &(i, j) in &pairs {
                    let v = m.values[i][j];
                    if v > S::zero() {
                        pos_sum = pos_sum + v;
                        pos_count += 1;
                    } else if v < S::zero() {
                        neg_sum = neg_sum + v;
                        neg_count += 1;
                    }
                }
            }
            let positive_mean = if pos_count == 0 {
                S::zero()
            } else {
                pos_sum / S::from_count(pos_count)
            };
            let negative_mean = if neg_count == 0 {
                S::zero()
            } else {
                neg_sum / S::from_count(neg_count)
            };
            out.push(CategoryAggregate {
                axis,
                source_category: labels[sc].to_string(),
                target_category: labels[tc].to_string(),
                positive_mean,
                negative_mean,
                pair_count: pairs.len(),
                seed_count: pgf_per_seed.len(),
            });
        }
    }
    Ok(out)
}
