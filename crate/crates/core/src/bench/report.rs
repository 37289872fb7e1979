//! CSV and self-contained SVG renderings of a [`PsnrReport`]. Output depends
//! only on the report, so re-rendering is byte-identical.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::experiment::PsnrReport;
use crate::error::{Error, Result};

pub fn format_db(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.4}")
    }
}

pub fn psnr_table_csv(report: &PsnrReport) -> String {
    let mut s = String::from("variant,d,psnr_db\n");
    for v in &report.variants {
        for (t, &d) in report.dims.iter().enumerate() {
            let _ = writeln!(s, "{},{d},{}", v.variant, format_db(v.aggregate_db[t]));
        }
    }
    s
}

pub fn per_image_csv(report: &PsnrReport, t: usize) -> String {
    let mut s = String::from("sorted_rank,image_id");
    for v in &report.variants {
        let _ = write!(s, ",{}", v.variant);
    }
    s.push('\n');
    for (rank, &id) in report.sort_order(t).iter().enumerate() {
        let _ = write!(s, "{},{id}", rank + 1);
        for v in &report.variants {
            let _ = write!(s, ",{}", format_db(v.per_image_db[t][id]));
        }
        s.push('\n');
    }
    s
}

const PALETTE: [(f64, f64, f64); 5] = [
    (68.0, 1.0, 84.0),
    (59.0, 82.0, 139.0),
    (33.0, 145.0, 140.0),
    (94.0, 201.0, 98.0),
    (253.0, 231.0, 37.0),
];

fn color(t: f64) -> String {
    let t = t.clamp(0.0, 1.0) * (PALETTE.len() - 1) as f64;
    let i = (t.floor() as usize).min(PALETTE.len() - 2);
    let f = t - i as f64;
    let (a, b) = (PALETTE[i], PALETTE[i + 1]);
    let mix = |x: f64, y: f64| (x + (y - x) * f).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

fn finite_range<'a>(values: impl Iterator<Item = &'a f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if lo > hi {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

/// Variants x dimensions grid colored by aggregate PSNR, with a color legend.
pub fn psnr_heatmap_svg(report: &PsnrReport) -> String {
    let (cw, ch, left, top) = (64.0, 32.0, 90.0, 40.0);
    let cols = report.dims.len() as f64;
    let rows = report.variants.len() as f64;
    let legend_x = left + cols * cw + 30.0;
    let width = legend_x + 90.0;
    let height = top + rows * ch + 50.0;
    let (lo, hi) = finite_range(report.variants.iter().flat_map(|v| &v.aggregate_db));
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<text x="{left}" y="20" font-size="13">Aggregate PSNR (dB)</text>"#);
    for (c, d) in report.dims.iter().enumerate() {
        let x = left + c as f64 * cw + cw / 2.0;
        let _ = writeln!(s, r#"<text x="{x}" y="{}" text-anchor="middle">d={d}</text>"#, top - 6.0);
    }
    for (r, v) in report.variants.iter().enumerate() {
        let y = top + r as f64 * ch;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            left - 8.0,
            y + ch / 2.0 + 4.0,
            v.variant
        );
        for (c, &db) in v.aggregate_db.iter().enumerate() {
            let x = left + c as f64 * cw;
            let (fill, ink) = if db.is_finite() {
                let t = (db - lo) / (hi - lo);
                (color(t), if t > 0.6 { "#000000" } else { "#ffffff" })
            } else {
                ("#ffffff".to_string(), "#000000")
            };
            let _ = writeln!(
                s,
                r##"<rect x="{x}" y="{y}" width="{cw}" height="{ch}" fill="{fill}" stroke="#ffffff"/><text x="{}" y="{}" text-anchor="middle" fill="{ink}">{}</text>"##,
                x + cw / 2.0,
                y + ch / 2.0 + 4.0,
                if db.is_finite() { format!("{db:.2}") } else { format_db(db) }
            );
        }
    }
    // Legend: a stepped gradient from the lowest to the highest finite value.
    let steps = 20;
    let lh = rows * ch;
    for i in 0..steps {
        let t = 1.0 - i as f64 / (steps - 1) as f64;
        let y = top + lh * i as f64 / steps as f64;
        let _ = writeln!(
            s,
            r#"<rect x="{legend_x}" y="{y:.2}" width="16" height="{:.2}" fill="{}"/>"#,
            lh / steps as f64 + 0.5,
            color(t)
        );
    }
    for (t, label) in [(0.0, hi), (1.0, lo)] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.2}">{label:.2} dB</text>"#,
            legend_x + 22.0,
            top + lh * t + 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Per-image PSNR curves at `dims[t]`, images ordered as in [`per_image_csv`].
/// Infinite values are drawn at the top edge.
pub fn per_image_svg(report: &PsnrReport, t: usize) -> String {
    const COLORS: [&str; 7] = ["#000000", "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];
    let order = report.sort_order(t);
    let (w, h, left, top) = (640.0, 360.0, 60.0, 30.0);
    let (lo, hi) = finite_range(report.variants.iter().flat_map(|v| &v.per_image_db[t]));
    let (lo, hi) = ((lo / 5.0).floor() * 5.0, (hi / 5.0).ceil() * 5.0);
    let n = order.len().max(2) as f64;
    let x_of = |i: usize| left + w * i as f64 / (n - 1.0);
    let y_of = |v: f64| {
        let v = if v.is_finite() { v } else { hi };
        top + h * (1.0 - (v - lo) / (hi - lo))
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif" font-size="11">"#,
        left + w + 120.0,
        top + h + 50.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{left}" y="18" font-size="13">Per-image PSNR (dB), d={}</text>"#,
        report.dims[t]
    );
    let _ = writeln!(
        s,
        r##"<rect x="{left}" y="{top}" width="{w}" height="{h}" fill="none" stroke="#888888"/>"##
    );
    let mut tick = lo;
    while tick <= hi + 1e-9 {
        let y = y_of(tick);
        let _ = writeln!(
            s,
            r##"<line x1="{left}" x2="{}" y1="{y:.2}" y2="{y:.2}" stroke="#dddddd"/><text x="{}" y="{:.2}" text-anchor="end">{tick}</text>"##,
            left + w,
            left - 6.0,
            y + 4.0
        );
        tick += 5.0;
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">image (sorted)</text>"#,
        left + w / 2.0,
        top + h + 30.0
    );
    for (k, v) in report.variants.iter().enumerate() {
        let pts: Vec<String> = order
            .iter()
            .enumerate()
            .map(|(i, &id)| format!("{:.2},{:.2}", x_of(i), y_of(v.per_image_db[t][id])))
            .collect();
        let c = COLORS[k % COLORS.len()];
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{c}" stroke-width="1.2" points="{}"/>"#,
            pts.join(" ")
        );
        let ly = top + 14.0 * k as f64 + 8.0;
        let _ = writeln!(
            s,
            r#"<line x1="{}" x2="{}" y1="{ly}" y2="{ly}" stroke="{c}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            left + w + 10.0,
            left + w + 30.0,
            left + w + 35.0,
            ly + 4.0,
            v.variant
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Writes every report file into `out_dir` and returns their paths.
pub fn emit_reports(report: &PsnrReport, out_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut files = vec![
        ("psnr_table.csv".to_string(), psnr_table_csv(report)),
        ("psnr_heatmap.svg".to_string(), psnr_heatmap_svg(report)),
    ];
    for (t, d) in report.dims.iter().enumerate() {
        files.push((format!("per_image_d{d}.csv"), per_image_csv(report, t)));
        files.push((format!("per_image_d{d}.svg"), per_image_svg(report, t)));
    }
    files
        .into_iter()
        .map(|(name, body)| {
            let path = out_dir.join(name);
            std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
            Ok(path)
        })
        .collect()
}
