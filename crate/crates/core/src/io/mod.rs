//! Byte-exact ingest and export: record files in; heatmaps, graphs, and
//! reports out.
//!
//! Every export here is deterministic: identical inputs produce identical
//! bytes, so outputs can be frozen as golden files. Numbers are pinned to
//! fixed decimal widths (4 for PGF values, 3 for edge labels) and negative
//! zero is normalized away.

mod dot;
mod heatmap;
mod records;
mod report;
mod svg;

pub use dot::export_dot;
pub use heatmap::export_heatmap_csv;
pub use records::{
    parse_records, parse_records_csv, parse_records_json, parse_tasks_csv, write_records_csv,
    write_records_json, RecordFile, RecordFormat, RECORD_SCHEMA_VERSION,
};
pub use report::{
    export_report_json, parse_report_json, AnalysisReport, EdgeExport, GraphExport,
    MixturePlanEntry, ModelReport, RunManifest, ScorePair, REPORT_SCHEMA_VERSION,
};
pub use svg::{export_svg_heatmap, ColorScale};

/// Fixed-width decimal formatting with negative zero folded to zero.
pub(crate) fn fmt_fixed(value: f64, decimals: usize) -> String {
    let s = format!("{value:.decimals$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}
