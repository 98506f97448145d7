//! Standalone SVG heatmaps of per-node residual magnitudes.

use std::fmt::Write as _;

use bonnetlab::report::FieldDump;

const CELL: f64 = 8.0;
const MARGIN: f64 = 40.0;
const LEGEND: f64 = 60.0;

/// Linear blue → yellow ramp; `t ∈ [0, 1]`.
fn color(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let lerp = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    format!("#{:02x}{:02x}{:02x}", lerp(48.0, 250.0), lerp(18.0, 220.0), lerp(110.0, 40.0))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// `x¹` runs down the rows, `x²` across the columns.
pub fn heatmap(title: &str, dump: &FieldDump) -> String {
    let (n1, n2) = (dump.grid.n1, dump.grid.n2);
    let min = dump.values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = dump.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    let w = 2.0 * MARGIN + n2 as f64 * CELL + LEGEND;
    let h = 2.0 * MARGIN + n1 as f64 * CELL;

    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#).unwrap();
    writeln!(
        s,
        r#"<text x="{MARGIN}" y="{}" font-family="monospace" font-size="12">{}</text>"#,
        MARGIN - 22.0,
        escape(title)
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{MARGIN}" y="{}" font-family="monospace" font-size="10">min={min:.6e} max={max:.6e}</text>"#,
        MARGIN - 8.0
    )
    .unwrap();
    for i in 0..n1 {
        for j in 0..n2 {
            let v = dump.values[i * n2 + j];
            let t = if span > 0.0 { (v - min) / span } else { 0.0 };
            writeln!(
                s,
                r#"<rect x="{}" y="{}" width="{CELL}" height="{CELL}" fill="{}"/>"#,
                MARGIN + j as f64 * CELL,
                MARGIN + i as f64 * CELL,
                color(t)
            )
            .unwrap();
        }
    }
    let lx = MARGIN + n2 as f64 * CELL + 10.0;
    let lh = n1 as f64 * CELL;
    for k in 0..10 {
        let t = 1.0 - k as f64 / 9.0;
        writeln!(
            s,
            r#"<rect x="{lx}" y="{}" width="12" height="{}" fill="{}"/>"#,
            MARGIN + k as f64 * lh / 10.0,
            lh / 10.0,
            color(t)
        )
        .unwrap();
    }
    writeln!(s, r#"<text x="{}" y="{}" font-family="monospace" font-size="9">{max:.2e}</text>"#, lx, MARGIN - 2.0)
        .unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="monospace" font-size="9">{min:.2e}</text>"#,
        lx,
        MARGIN + lh + 10.0
    )
    .unwrap();
    s.push_str("</svg>\n");
    s
}

/// File-system friendly version of a residual name.
pub fn slug(name: &str) -> String {
    let mut out = String::new();
    for c in name.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c);
        } else if c == '\'' {
            out.push_str("prime");
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out.trim_matches('_').to_string()
}
