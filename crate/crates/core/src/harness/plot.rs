//! Per-series plot data and two static SVG charts.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::sweep::ScalingRecord;
use crate::error::{invalid, Result};

const METRICS: [&str; 4] = ["best_cut", "eta_achieved", "giant_fraction", "mean_cc"];
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn metric(r: &ScalingRecord, name: &str) -> Option<f64> {
    match name {
        "best_cut" => r.best_cut_cross_edges.map(|c| c as f64),
        "eta_achieved" => r.eta_achieved,
        "giant_fraction" => Some(r.giant_fraction),
        "mean_cc" => Some(r.mean_cc),
        _ => None,
    }
}

/// `(n, mean, min, max, count)` rows of one metric, ascending in `n`.
type Summary = Vec<(usize, f64, f64, f64, usize)>;

fn summarize(records: &[&ScalingRecord], name: &str) -> Summary {
    let mut by_n: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for r in records {
        if let Some(y) = metric(r, name) {
            by_n.entry(r.n).or_default().push(y);
        }
    }
    by_n.into_iter()
        .map(|(n, ys)| {
            let mean = ys.iter().sum::<f64>() / ys.len() as f64;
            let lo = ys.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (n, mean, lo, hi, ys.len())
        })
        .collect()
}

/// Writes one TSV per (geometry, d, delta) series and metric, plus
/// `cut_scaling.svg` and `cc_vs_n.svg`. Returns the written paths.
pub fn emit_plot_data(records: &[ScalingRecord], dir: &Path) -> Result<Vec<PathBuf>> {
    if records.is_empty() {
        return Err(invalid("no records to plot"));
    }
    fs::create_dir_all(dir)?;
    let mut series: BTreeMap<String, Vec<&ScalingRecord>> = BTreeMap::new();
    for r in records {
        let key = format!("{}_d{}_delta{}", r.geometry, r.d, r.delta);
        series.entry(key).or_default().push(r);
    }
    let mut written = Vec::new();
    let mut cut_lines = Vec::new();
    let mut cc_lines = Vec::new();
    for (key, recs) in &series {
        for name in METRICS {
            let rows = summarize(recs, name);
            let mut text = String::from("n\tmean\tmin\tmax\tcount\n");
            for (n, mean, lo, hi, count) in &rows {
                writeln!(text, "{n}\t{mean:.10e}\t{lo:.10e}\t{hi:.10e}\t{count}").unwrap();
            }
            let path = dir.join(format!("{key}_{name}.tsv"));
            fs::write(&path, text)?;
            written.push(path);
            let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.0 as f64, r.1)).collect();
            match name {
                "best_cut" => cut_lines.push((key.clone(), points)),
                "mean_cc" => cc_lines.push((key.clone(), points)),
                _ => {}
            }
        }
    }
    let path = dir.join("cut_scaling.svg");
    fs::write(&path, chart("Best cut vs n", "n", "cross edges", &cut_lines, true))?;
    written.push(path);
    let path = dir.join("cc_vs_n.svg");
    fs::write(&path, chart("Mean clustering coefficient vs n", "n", "mean cc", &cc_lines, false))?;
    written.push(path);
    Ok(written)
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

/// Line chart with a log2 x axis and a log10 or linear y axis.
fn chart(title: &str, x_label: &str, y_label: &str, lines: &[(String, Vec<(f64, f64)>)], log_y: bool) -> String {
    let ty = |y: f64| if log_y { y.max(f64::MIN_POSITIVE).log10() } else { y };
    let pts: Vec<(f64, f64)> = lines
        .iter()
        .flat_map(|(_, p)| p.iter().map(|&(x, y)| (x.log2(), ty(y))))
        .filter(|p| p.0.is_finite() && p.1.is_finite())
        .collect();
    let (mut x0, mut x1) = bounds(pts.iter().map(|p| p.0));
    let (mut y0, mut y1) = bounds(pts.iter().map(|p| p.1));
    if !log_y {
        y0 = y0.min(0.0);
    }
    if x1 - x0 < 1e-9 {
        (x0, x1) = (x0 - 1.0, x1 + 1.0);
    }
    if y1 - y0 < 1e-9 {
        (y0, y1) = (y0 - 0.5, y1 + 0.5);
    }
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + ph - (y - y0) / (y1 - y0) * ph;

    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#).unwrap();
    writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(s, r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="15">{title}</text>"#, LEFT + pw / 2.0).unwrap();
    writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#).unwrap();
    for i in 0..=4 {
        let x = x0 + (x1 - x0) * i as f64 / 4.0;
        let y = y0 + (y1 - y0) * i as f64 / 4.0;
        let y_text = if log_y { format!("{:.3e}", 10f64.powf(y)) } else { format!("{y:.3}") };
        writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">2^{x:.1}</text>"#, sx(x), TOP + ph + 18.0).unwrap();
        writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{y_text}</text>"#, LEFT - 6.0, sy(y) + 4.0).unwrap();
        writeln!(s, r##"<line x1="{:.1}" y1="{TOP}" x2="{:.1}" y2="{:.1}" stroke="#ddd"/>"##, sx(x), sx(x), TOP + ph).unwrap();
    }
    writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{x_label}</text>"#, LEFT + pw / 2.0, HEIGHT - 12.0).unwrap();
    writeln!(s, r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{y_label}</text>"#, TOP + ph / 2.0, TOP + ph / 2.0).unwrap();
    for (i, (name, points)) in lines.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = points
            .iter()
            .map(|&(x, y)| (x.log2(), ty(y)))
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|(x, y)| format!("{:.1},{:.1}", sx(x), sy(y)))
            .collect();
        writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#, coords.join(" ")).unwrap();
        for c in &coords {
            let (cx, cy) = c.split_once(',').unwrap();
            writeln!(s, r#"<circle cx="{cx}" cy="{cy}" r="3" fill="{color}"/>"#).unwrap();
        }
        let ly = TOP + 14.0 + 18.0 * i as f64;
        writeln!(s, r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/>"#, WIDTH - RIGHT + 12.0, WIDTH - RIGHT + 32.0).unwrap();
        writeln!(s, r#"<text x="{:.1}" y="{:.1}">{name}</text>"#, WIDTH - RIGHT + 38.0, ly + 4.0).unwrap();
    }
    s.push_str("</svg>\n");
    s
}

fn bounds(xs: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
    if lo.is_finite() {
        (lo, hi)
    } else {
        (0.0, 1.0)
    }
}
