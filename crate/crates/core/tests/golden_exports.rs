//! Frozen-byte golden files for the deterministic exporters, plus the
//! bit-exact serialization contract of the data types.

use pgflab_core::io::{export_svg_heatmap, ColorScale};
use pgflab_core::model::{Granularity, PerceptualLevel, TaskSpec};
use pgflab_core::pgf::PgfSummary;
use pgflab_core::{AccuracyMatrix, TaskSet};

#[test]
fn svg_heatmap_matches_golden_bytes() {
    let set = TaskSet::new(vec![
        TaskSpec::new("rd", "RD", PerceptualLevel::Low, Granularity::Pixel),
        TaskSpec::new("vs", "VS", PerceptualLevel::High, Granularity::Image),
        TaskSpec::new("cn", "CN", PerceptualLevel::High, Granularity::Image),
    ])
    .unwrap();
    let summary = PgfSummary {
        model_id: "m".into(),
        mean: vec![
            vec![0.8, 0.25, -0.1],
            vec![0.05, 0.0, -0.4],
            vec![-0.2, 0.3, 0.6],
        ],
        std: vec![vec![0.0; 3]; 3],
        seed_count: 2,
    };
    let svg = export_svg_heatmap(&summary, &set, &ColorScale::default());
    let golden = include_str!("golden/heatmap_3x3.svg");
    assert_eq!(svg, golden);
}

#[test]
fn accuracy_matrix_serialization_is_bit_exact() {
    let matrix = AccuracyMatrix {
        model_id: "m".into(),
        seed: 3,
        baseline: vec![52.5, 1.0 / 3.0 * 100.0, 99.999999999999],
        finetuned: vec![
            vec![90.1, 0.1 + 0.2, 33.333333333333336],
            vec![0.0, 100.0, 2.5000000000000004],
            vec![7.7, 17.0, 49.99999999999999],
        ],
        questions: vec![200, 40, 0],
    };
    let json = serde_json::to_string(&matrix).unwrap();
    let parsed: AccuracyMatrix = serde_json::from_str(&json).unwrap();
    assert_eq!(matrix, parsed);
    for (a, b) in matrix.baseline.iter().zip(&parsed.baseline) {
        assert_eq!(a.to_bits(), b.to_bits());
    }
    for (ra, rb) in matrix.finetuned.iter().zip(&parsed.finetuned) {
        for (a, b) in ra.iter().zip(rb) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
