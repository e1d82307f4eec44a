//! Self-contained SVG heatmap of a PGF summary with a diverging color
//! scale anchored at zero.

use super::fmt_fixed;
use crate::model::TaskSet;
use crate::pgf::PgfSummary;

const CELL: usize = 36;
const MARGIN_LEFT: usize = 64;
const MARGIN_TOP: usize = 56;
const MARGIN_BOTTOM: usize = 16;
const BAR_GAP: usize = 24;
const BAR_WIDTH: usize = 16;
const BAR_LABELS: usize = 64;

/// Diverging color scale endpoints; zero is always white.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColorScale {
    pub negative: [u8; 3],
    pub positive: [u8; 3],
}

impl Default for ColorScale {
    fn default() -> Self {
        // blue for negative transfer, red for positive
        Self {
            negative: [33, 102, 172],
            positive: [178, 24, 43],
        }
    }
}

impl ColorScale {
    /// Map a value to a color given the symmetric range [-range, range].
    fn color(&self, value: f64, range: f64) -> [u8; 3] {
        let t = (value / range).clamp(-1.0, 1.0);
        let end = if t >= 0.0 {
            self.positive
        } else {
            self.negative
        };
        let a = t.abs();
        let mut rgb = [0u8; 3];
        for (out, &e) in rgb.iter_mut().zip(&end) {
            *out = (255.0 + (f64::from(e) - 255.0) * a).round() as u8;
        }
        rgb
    }
}

fn rgb(c: [u8; 3]) -> String {
    format!("rgb({},{},{})", c[0], c[1], c[2])
}

/// Render the seed-mean PGF matrix as a standalone SVG document: an N x N
/// colored grid with axis labels and a color bar. The scale is symmetric
/// around zero with half-range max(|min|, |max|), so equal magnitudes of
/// either sign get equal visual weight.
pub fn export_svg_heatmap(
    summary: &PgfSummary<f64>,
    task_set: &TaskSet,
    scale: &ColorScale,
) -> String {
    let n = task_set.len();
    debug_assert_eq!(summary.n_tasks(), n);
    let mut range = 0.0f64;
    for row in &summary.mean {
        for &v in row {
            range = range.max(v.abs());
        }
    }
    if range == 0.0 {
        range = 1.0;
    }

    let grid = n * CELL;
    let width = MARGIN_LEFT + grid + BAR_GAP + BAR_WIDTH + BAR_LABELS;
    let height = MARGIN_TOP + grid + MARGIN_BOTTOM;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n"
    ));
    out.push_str(&format!(
        "  <defs>\n    <linearGradient id=\"diverging\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">\n      \
         <stop offset=\"0%\" stop-color=\"{}\"/>\n      \
         <stop offset=\"50%\" stop-color=\"rgb(255,255,255)\"/>\n      \
         <stop offset=\"100%\" stop-color=\"{}\"/>\n    </linearGradient>\n  </defs>\n",
        rgb(scale.negative),
        rgb(scale.positive)
    ));
    out.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n"
    ));

    // column labels (targets) and row labels (sources)
    for j in 0..n {
        let x = MARGIN_LEFT + j * CELL + CELL / 2;
        out.push_str(&format!(
            "  <text x=\"{x}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" \
             text-anchor=\"middle\">{}</text>\n",
            MARGIN_TOP - 8,
            task_set.abbreviation(j)
        ));
    }
    for i in 0..n {
        let y = MARGIN_TOP + i * CELL + CELL / 2 + 4;
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{y}\" font-family=\"monospace\" font-size=\"12\" \
             text-anchor=\"end\">{}</text>\n",
            MARGIN_LEFT - 8,
            task_set.abbreviation(i)
        ));
    }

    for i in 0..n {
        for j in 0..n {
            let x = MARGIN_LEFT + j * CELL;
            let y = MARGIN_TOP + i * CELL;
            let fill = rgb(scale.color(summary.mean[i][j], range));
            out.push_str(&format!(
                "  <rect x=\"{x}\" y=\"{y}\" width=\"{CELL}\" height=\"{CELL}\" \
                 fill=\"{fill}\" stroke=\"rgb(220,220,220)\"/>\n"
            ));
        }
    }

    // color bar with min / zero / max labels
    let bar_x = MARGIN_LEFT + grid + BAR_GAP;
    out.push_str(&format!(
        "  <rect x=\"{bar_x}\" y=\"{MARGIN_TOP}\" width=\"{BAR_WIDTH}\" height=\"{grid}\" \
         fill=\"url(#diverging)\" stroke=\"rgb(220,220,220)\"/>\n"
    ));
    let label_x = bar_x + BAR_WIDTH + 6;
    for (value, y) in [
        (range, MARGIN_TOP + 4),
        (0.0, MARGIN_TOP + grid / 2 + 4),
        (-range, MARGIN_TOP + grid + 4),
    ] {
        out.push_str(&format!(
            "  <text x=\"{label_x}\" y=\"{y}\" font-family=\"monospace\" font-size=\"11\" \
             text-anchor=\"start\">{}</text>\n",
            fmt_fixed(value, 3)
        ));
    }
    out.push_str("</svg>\n");
    out
}
