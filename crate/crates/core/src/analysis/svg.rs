//! Static SVG rendering of report summaries. Reports with per-cluster rows
//! become grouped bar charts of the `mean` rows; the rest become line plots
//! of the `median` rows (or `mean` when there is no median).

use std::fmt::Write;

use super::report::{ExperimentReport, TrialTag};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;
const PALETTE: [&str; 7] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"];

pub fn render_svg(report: &ExperimentReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if report.rows.iter().any(|r| r.cluster.is_some()) {
        bars(report, &mut out);
    } else {
        lines(report, &mut out);
    }
    out.push_str("</svg>\n");
    out
}

fn axes(out: &mut String, y_max: f64, x_label: &str, y_label: &str) {
    let (x0, y0, x1, y1) = (MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN, MARGIN);
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#);
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{x_label}</text>"#, WIDTH / 2.0, HEIGHT - 12.0);
    let _ = writeln!(out, r#"<text x="14" y="{}" transform="rotate(-90 14 {})" text-anchor="middle">{y_label}</text>"#, HEIGHT / 2.0, HEIGHT / 2.0);
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, x0 - 4.0, y1 + 4.0, trim(y_max));
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">0</text>"#, x0 - 4.0, y0 + 4.0);
}

fn legend(out: &mut String, methods: &[String]) {
    for (i, m) in methods.iter().enumerate() {
        let y = MARGIN + 14.0 * i as f64;
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(out, r#"<rect x="{}" y="{}" width="10" height="10" fill="{color}"/>"#, WIDTH - MARGIN - 90.0, y - 9.0);
        let _ = writeln!(out, r#"<text x="{}" y="{y}">{m}</text>"#, WIDTH - MARGIN - 75.0);
    }
}

fn trim(v: f64) -> String {
    if v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.3}")
    }
}

fn lines(report: &ExperimentReport, out: &mut String) {
    let methods = report.methods();
    let series: Vec<Vec<(f64, f64)>> = methods
        .iter()
        .map(|m| {
            let s = report.series(TrialTag::Median, m);
            if s.is_empty() {
                report.series(TrialTag::Mean, m)
            } else {
                s
            }
        })
        .collect();
    let points = series.iter().flatten();
    let x_max = points.clone().map(|p| p.0).fold(0.0, f64::max).max(1.0);
    let y_max = points.map(|p| p.1).fold(0.0, f64::max).max(1.0);
    axes(out, y_max, "samples", "value");
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, WIDTH - MARGIN, HEIGHT - MARGIN + 14.0, trim(x_max));
    let sx = |x: f64| MARGIN + x / x_max * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - y / y_max * (HEIGHT - 2.0 * MARGIN);
    for (i, s) in series.iter().enumerate() {
        let pts: Vec<String> = s.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{}" stroke-width="2" points="{}"/>"#,
            PALETTE[i % PALETTE.len()],
            pts.join(" ")
        );
    }
    legend(out, &methods);
}

fn bars(report: &ExperimentReport, out: &mut String) {
    let methods = report.methods();
    let groups: Vec<Vec<f64>> = methods.iter().map(|m| report.by_cluster(TrialTag::Mean, m)).collect();
    let clusters = groups.iter().map(Vec::len).max().unwrap_or(0).max(1);
    let y_max = groups.iter().flatten().copied().fold(0.0, f64::max).max(1.0);
    axes(out, y_max, "cluster", "mean samples");
    let slot = (WIDTH - 2.0 * MARGIN) / clusters as f64;
    let bar = slot * 0.8 / methods.len().max(1) as f64;
    for (mi, values) in groups.iter().enumerate() {
        for (c, &v) in values.iter().enumerate() {
            let h = v / y_max * (HEIGHT - 2.0 * MARGIN);
            let x = MARGIN + c as f64 * slot + slot * 0.1 + mi as f64 * bar;
            let _ = writeln!(
                out,
                r#"<rect x="{x:.2}" y="{:.2}" width="{bar:.2}" height="{h:.2}" fill="{}"/>"#,
                HEIGHT - MARGIN - h,
                PALETTE[mi % PALETTE.len()]
            );
        }
    }
    legend(out, &methods);
}
