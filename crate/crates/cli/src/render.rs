//! Static SVG drawing of a dendrogram record.

use std::collections::HashMap;
use std::fmt::Write;

use crate::document::DendrogramRecord;
use crate::error::{CliError, Result};

const LEAF_SPACING: f64 = 24.0;
const PLOT_HEIGHT: f64 = 320.0;
const MARGIN: f64 = 48.0;

/// Leaves on the horizontal axis, merge heights `−log α` on the vertical one.
pub fn render_svg(d: &DendrogramRecord) -> Result<String> {
    if d.leaves.is_empty() {
        return Err(CliError::Validation("dendrogram has no leaves".into()));
    }
    let n: usize = d.leaves.iter().map(|l| l.members.len()).sum();
    let top = d.levels.last().map_or(1.0, |l| l.height).max(f64::MIN_POSITIVE);
    let width = 2.0 * MARGIN + LEAF_SPACING * d.leaves.len() as f64;
    let height = 2.0 * MARGIN + PLOT_HEIGHT;
    let y_of = |h: f64| MARGIN + PLOT_HEIGHT * (1.0 - h / top);

    let mut pos: HashMap<usize, (f64, f64)> = HashMap::new();
    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    )
    .unwrap();
    writeln!(svg, r#"<g stroke="black" stroke-width="1.2" fill="none">"#).unwrap();
    for (i, leaf) in d.leaves.iter().enumerate() {
        let x = MARGIN + LEAF_SPACING * (i as f64 + 0.5);
        pos.insert(leaf.cluster, (x, y_of(0.0)));
    }
    let mut step = d.base.merges.len();
    for level in &d.levels {
        let y = y_of(level.height);
        for &(a, b) in &level.merges {
            let (&(xa, ya), &(xb, yb)) = match (pos.get(&a), pos.get(&b)) {
                (Some(pa), Some(pb)) => (pa, pb),
                _ => return Err(CliError::Validation(format!("merge ({a}, {b}) refers to an unknown cluster"))),
            };
            writeln!(
                svg,
                r#"<path d="M{xa:.2},{ya:.2} V{y:.2} H{xb:.2} V{yb:.2}"/>"#
            )
            .unwrap();
            pos.insert(n + step, ((xa + xb) / 2.0, y));
            step += 1;
        }
    }
    writeln!(svg, "</g>").unwrap();

    writeln!(svg, r#"<g font-family="sans-serif" font-size="10">"#).unwrap();
    let axis_x = MARGIN - 8.0;
    writeln!(
        svg,
        r#"<line x1="{axis_x}" y1="{:.2}" x2="{axis_x}" y2="{:.2}" stroke="black"/>"#,
        y_of(0.0),
        y_of(top)
    )
    .unwrap();
    for level in &d.levels {
        writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{:.3}</text>"#,
            axis_x - 3.0,
            y_of(level.height) + 3.0,
            level.height
        )
        .unwrap();
    }
    writeln!(
        svg,
        r#"<text x="12" y="{:.2}" transform="rotate(-90 12 {:.2})" text-anchor="middle">-log(alpha)</text>"#,
        MARGIN + PLOT_HEIGHT / 2.0,
        MARGIN + PLOT_HEIGHT / 2.0
    )
    .unwrap();
    for (i, leaf) in d.leaves.iter().enumerate() {
        let x = MARGIN + LEAF_SPACING * (i as f64 + 0.5);
        writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            y_of(0.0) + 14.0,
            leaf.members.len()
        )
        .unwrap();
    }
    writeln!(svg, "</g>\n</svg>").unwrap();
    Ok(svg)
}
