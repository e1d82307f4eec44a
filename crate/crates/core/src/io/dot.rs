//! Graphviz DOT export of a transfer graph.

use super::fmt_fixed;
use crate::graph::{EdgeSign, TransferGraph};
use crate::model::TaskSet;

/// Render a transfer graph as a directed DOT document. Nodes are labeled
/// by abbreviation; positive edges are solid, negative dashed, each with
/// its weight at 3 decimals. Nodes and edges come out sorted by
/// abbreviation, so the bytes do not depend on task input order.
pub fn export_dot(graph: &TransferGraph<f64>, task_set: &TaskSet) -> String {
    debug_assert_eq!(graph.n_tasks, task_set.len());
    let mut out = String::from("digraph transfer {\n  rankdir=LR;\n  node [shape=ellipse];\n");

    let mut nodes: Vec<&str> = (0..task_set.len())
        .map(|i| task_set.abbreviation(i))
        .collect();
    nodes.sort_unstable();
    for node in nodes {
        out.push_str(&format!("  \"{node}\";\n"));
    }

    let mut edges: Vec<(String, String, f64, EdgeSign)> = graph
        .edges
        .iter()
        .map(|e| {
            (
                task_set.abbreviation(e.source).to_string(),
                task_set.abbreviation(e.target).to_string(),
                e.weight,
                e.sign,
            )
        })
        .collect();
    edges.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    for (src, tgt, weight, sign) in edges {
        let style = match sign {
            EdgeSign::Positive => "solid",
            EdgeSign::Negative => "dashed",
        };
        out.push_str(&format!(
            "  \"{src}\" -> \"{tgt}\" [label=\"{}\" style={style}];\n",
            fmt_fixed(weight, 3)
        ));
    }
    out.push_str("}\n");
    out
}
