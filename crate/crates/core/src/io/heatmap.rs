//! Delimited-text export of a PGF summary: an (N+1) x (N+1) grid with task
//! abbreviations on both axes.

use super::fmt_fixed;
use crate::model::TaskSet;
use crate::pgf::PgfSummary;

/// Render the seed-mean PGF matrix as CSV. Rows are source tasks, columns
/// target tasks, in task-set order. Cells carry the mean at 4 decimals,
/// with a `±std` suffix when `include_std` is set.
pub fn export_heatmap_csv(
    summary: &PgfSummary<f64>,
    task_set: &TaskSet,
    include_std: bool,
) -> String {
    let n = task_set.len();
    debug_assert_eq!(summary.n_tasks(), n);
    let mut out = String::new();
    for j in 0..n {
        out.push(',');
        out.push_str(task_set.abbreviation(j));
    }
    out.push('\n');
    for i in 0..n {
        out.push_str(task_set.abbreviation(i));
        for j in 0..n {
            out.push(',');
            out.push_str(&fmt_fixed(summary.mean[i][j], 4));
            if include_std {
                out.push('±');
                out.push_str(&fmt_fixed(summary.std[i][j], 4));
            }
        }
        out.push('\n');
    }
    out
}
