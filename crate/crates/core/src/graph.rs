//! Percentile-thresholded transfer graphs and sign-consistent task cliques
//! with Wilcoxon stability tests.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AnalysisConfig, TaskSet};
use crate::pgf::{pgf_summary, PgfMatrix, PgfSummary};
use crate::scalar::Scalar;
use crate::stats::{wilcoxon_signed_rank, Sidedness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeSign {
    Positive,
    Negative,
}

/// One directed edge of the transfer graph, indices into the task set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferEdge<S> {
    pub source: usize,
    pub target: usize,
    /// Seed-mean PGF of the cell.
    pub weight: S,
    pub sign: EdgeSign,
}

/// Directed graph over tasks retaining, per sign class, the strongest
/// `percentile` percent of off-diagonal seed-mean PGF edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferGraph<S> {
    pub model_id: String,
    pub n_tasks: usize,
    pub percentile: S,
    /// How seeds were reduced to one weight per edge.
    pub seed_policy: String,
    /// Sorted by (source, target).
    pub edges: Vec<TransferEdge<S>>,
}

/// Number of edges retained from a sign class of `class_size` cells at the
/// given percentile: ceil(percentile% of the class), so any non-empty class
/// keeps at least one edge. The tiny slack keeps exact multiples from
/// spilling over due to binary rounding.
fn retained_count(percentile: f64, class_size: usize) -> usize {
    if class_size == 0 {
        return 0;
    }
    let raw = percentile / 100.0 * class_size as f64;
    ((raw - 1e-9).ceil().max(1.0) as usize).min(class_size)
}

/// Build the transfer graph from a seed-mean PGF summary.
///
/// Off-diagonal cells are split by strict sign; within each class edges are
/// ranked by |weight| descending (ties broken by ascending (source, target))
/// and the top ceil(percentile%) are kept. Output edges are sorted by
/// (source, target), which makes the result independent of ranking order.
pub fn build_graph<S: Scalar>(
    summary: &PgfSummary<S>,
    task_set: &TaskSet,
    config: &AnalysisConfig<S>,
) -> TransferGraph<S> {
    let n = task_set.len();
    debug_assert_eq!(summary.n_tasks(), n);
    let mut positive = Vec::new();
    let mut negative = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let w = summary.mean[i][j];
            if w > S::zero() {
                positive.push((i, j, w));
            } else if w < S::zero() {
                negative.push((i, j, w));
            }
        }
    }

    let percentile = config.edge_percentile.to_f64().unwrap_or(0.0);
    let mut edges = Vec::new();
    for (class, sign) in [
        (&mut positive, EdgeSign::Positive),
        (&mut negative, EdgeSign::Negative),
    ] {
        class.sort_by(|a, b| {
            b.2.abs()
                .partial_cmp(&a.2.abs())
                .expect("PGF means must not be NaN")
                .then_with(|| (a.0, a.1).cmp(&(b.0, b.1)))
        });
        let keep = retained_count(percentile, class.len());
        for &(source, target, weight) in class.iter().take(keep) {
            edges.push(TransferEdge {
                source,
                target,
                weight,
                sign,
            });
        }
    }
    edges.sort_by_key(|e| (e.source, e.target));

    TransferGraph {
        model_id: summary.model_id.clone(),
        n_tasks: n,
        percentile: config.edge_percentile,
        seed_policy: format!("mean over {} seed(s)", summary.seed_count),
        edges,
    }
}

/// A sign-consistent set of tasks: every ordered pair of distinct members
/// has seed-mean PGF of the clique's sign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clique<S> {
    /// Member task ids, sorted.
    pub members: Vec<String>,
    pub sign: EdgeSign,
    pub maximal: bool,
    /// Stability p-value: one-sample Wilcoxon signed-rank against 0, one
    /// sided in the clique's sign direction, over all per-seed
    /// per-ordered-pair PGF samples inside the clique.
    pub p_value: S,
    pub significant: bool,
    /// Seed-mean PGF per ordered member pair.
    pub per_pair_stats: Vec<((String, String), S)>,
}

fn consistency_adjacency<S: Scalar>(mean: &[Vec<S>], sign: EdgeSign) -> Vec<u32> {
    let n = mean.len();
    let keeps = |v: S| match sign {
        EdgeSign::Positive => v > S::zero(),
        EdgeSign::Negative => v < S::zero(),
    };
    let mut adj = vec![0u32; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if keeps(mean[i][j]) && keeps(mean[j][i]) {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    adj
}

/// Bron-Kerbosch with pivoting over bitmask vertex sets.
fn bron_kerbosch(adj: &[u32], r: u32, p: u32, x: u32, out: &mut Vec<u32>) {
    if p == 0 && x == 0 {
        if r.count_ones() >= 2 {
            out.push(r);
        }
        return;
    }
    // pivot: vertex of p | x covering the most candidates
    let mut pivot = usize::MAX;
    let mut best = -1i32;
    let mut px = p | x;
    while px != 0 {
        let u = px.trailing_zeros() as usize;
        px &= px - 1;
        let covered = (p & adj[u]).count_ones() as i32;
        if covered > best {
            best = covered;
            pivot = u;
        }
    }
    let mut candidates = p & !adj[pivot];
    let mut p = p;
    let mut x = x;
    while candidates != 0 {
        let v = candidates.trailing_zeros() as usize;
        let bit = 1u32 << v;
        candidates &= candidates - 1;
        bron_kerbosch(adj, r | bit, p & adj[v], x & adj[v], out);
        p &= !bit;
        x |= bit;
    }
}

fn mask_members(mask: u32, task_set: &TaskSet) -> Vec<String> {
    let mut ids: Vec<String> = (0..task_set.len())
        .filter(|&i| mask & (1 << i) != 0)
        .map(|i| task_set.id(i).to_string())
        .collect();
    ids.sort();
    ids
}

/// Enumerate every clique (not only maximal ones) of the consistency graph
/// with at least two members.
fn all_cliques(adj: &[u32], n: usize) -> Vec<u32> {
    fn extend(adj: &[u32], mask: u32, last: usize, n: usize, out: &mut Vec<u32>) {
        for v in (last + 1)..n {
            let bit = 1u32 << v;
            if adj[v] & mask == mask {
                let next = mask | bit;
                out.push(next);
                extend(adj, next, v, n, out);
            }
        }
    }
    let mut out = Vec::new();
    for i in 0..n {
        extend(adj, 1 << i, i, n, &mut out);
    }
    out.retain(|m| m.count_ones() >= 2);
    out
}

fn is_maximal(adj: &[u32], mask: u32, n: usize) -> bool {
    for v in 0..n {
        let bit = 1u32 << v;
        if mask & bit == 0 && adj[v] & mask == mask {
            return false;
        }
    }
    true
}

/// Find sign-consistent task cliques on the seed-mean PGF matrix and test
/// each one's stability across seeds.
///
/// Returns maximal cliques of size >= 2 by default; with
/// `include_non_maximal` every clique is listed and tagged by its
/// `maximal` flag. Sorted by (size desc, p asc, members).
pub fn find_cliques<S: Scalar>(
    pgf_per_seed: &[PgfMatrix<S>],
    task_set: &TaskSet,
    sign: EdgeSign,
    config: &AnalysisConfig<S>,
) -> Result<Vec<Clique<S>>> {
    find_cliques_with_options(pgf_per_seed, task_set, sign, config, false)
}

pub fn find_cliques_with_options<S: Scalar>(
    pgf_per_seed: &[PgfMatrix<S>],
    task_set: &TaskSet,
    sign: EdgeSign,
    config: &AnalysisConfig<S>,
    include_non_maximal: bool,
) -> Result<Vec<Clique<S>>> {
    let n = task_set.len();
    if n > 32 {
        return Err(Error::DimensionMismatch(format!(
            "clique enumeration supports at most 32 tasks (got {n})"
        )));
    }
    let summary = pgf_summary(pgf_per_seed)?;
    if summary.n_tasks() != n {
        return Err(Error::DimensionMismatch(format!(
            "PGF matrices have {} tasks, task set has {n}",
            summary.n_tasks()
        )));
    }
    let adj = consistency_adjacency(&summary.mean, sign);

    let masks = if include_non_maximal {
        all_cliques(&adj, n)
    } else {
        let mut out = Vec::new();
        let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        bron_kerbosch(&adj, 0, full, 0, &mut out);
        out
    };

    let mut cliques = Vec::with_capacity(masks.len());
    for mask in masks {
        let indices: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let mut samples = Vec::new();
        let mut per_pair_stats = Vec::new();
        for &i in &indices {
            for &j in &indices {
                if i == j {
                    continue;
                }
                for m in pgf_per_seed {
                    samples.push(m.values[i][j]);
                }
                per_pair_stats.push((
                    (task_set.id(i).to_string(), task_set.id(j).to_string()),
                    summary.mean[i][j],
                ));
            }
        }
        let sidedness = match sign {
            EdgeSign::Positive => Sidedness::OneSidedGreater,
            EdgeSign::Negative => Sidedness::OneSidedLess,
        };
        let test = wilcoxon_signed_rank(&samples, S::zero(), sidedness)?;
        cliques.push(Clique {
            members: mask_members(mask, task_set),
            sign,
            maximal: is_maximal(&adj, mask, n),
            p_value: test.p_value,
            significant: test.p_value < config.alpha,
            per_pair_stats,
        });
    }

    cliques.sort_by(|a, b| {
        b.members
            .len()
            .cmp(&a.members.len())
            .then_with(|| {
                a.p_value
                    .partial_cmp(&b.p_value)
                    .expect("p-values must not be NaN")
            })
            .then_with(|| a.members.cmp(&b.members))
    });
    Ok(cliques)
}

/// Exhaustive reference enumeration: checks every subset of size >= 2 for
/// the sign condition and keeps the maximal ones. Test oracle for
/// [`find_cliques`]; quadratic in 2^N, so capped at N = 16.
pub fn brute_force_cliques<S: Scalar>(mean: &[Vec<S>], sign: EdgeSign) -> Result<Vec<Vec<usize>>> {
    let n = mean.len();
    if n > 16 {
        return Err(Error::TooLarge(n));
    }
    let keeps = |v: S| match sign {
        EdgeSign::Positive => v > S::zero(),
        EdgeSign::Negative => v < S::zero(),
    };
    let mut valid = Vec::new();
    'subset: for mask in 0u32..(1 << n) {
        if mask.count_ones() < 2 {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        for &i in &members {
            for &j in &members {
                if i != j && !keeps(mean[i][j]) {
                    continue 'subset;
                }
            }
        }
        valid.push(mask);
    }
    let maximal: Vec<u32> = valid
        .iter()
        .copied()
        .filter(|&m| !valid.iter().any(|&other| other != m && other & m == m))
        .collect();
    let mut out: Vec<Vec<usize>> = maximal
        .into_iter()
        .map(|m| (0..n).filter(|&i| m & (1 << i) != 0).collect())
        .collect();
    out.sort();
    Ok(out)
}
