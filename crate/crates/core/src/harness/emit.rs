//! CSV rows and an SVG line plot of verification records.

use super::VerificationRecord;
use crate::bounds::Target;
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

pub const CSV_COLUMNS: [&str; 13] = [
    "case_id",
    "domain",
    "bc",
    "B0",
    "h",
    "lambda1_raw",
    "lambda1_extrap",
    "bound_name",
    "kind",
    "value",
    "valid",
    "margin",
    "runtime_ms",
];

/// One row per evaluated bound. Fails when there is no bound to write.
pub fn write_csv<W: Write>(records: &[VerificationRecord], out: W) -> Result<()> {
    let rows: usize = records.iter().flat_map(|r| &r.outcomes).map(|o| o.bounds.len()).sum();
    if rows == 0 {
        return Err(Error::Config("no bound rows to write".into()));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in records {
        let b0 = r.b0.map(|b| b.to_string()).unwrap_or_default();
        let runtime = format!("{:.1}", r.runtime_ms);
        for o in &r.outcomes {
            for b in &o.bounds {
                w.write_record([
                    r.case_id.as_str(),
                    r.domain.as_str(),
                    o.bc.as_str(),
                    b0.as_str(),
                    &o.h.to_string(),
                    &o.lambda1.raw.to_string(),
                    &o.lambda1.extrapolated.to_string(),
                    &b.report.name,
                    b.report.kind.as_str(),
                    &b.report.value.to_string(),
                    if b.report.valid { "true" } else { "false" },
                    &b.margin.to_string(),
                    &runtime,
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const PAD: f64 = 60.0;
const COLORS: [&str; 8] = ["#000000", "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Computed `λ₁` and every valid bound on it against `B₀`, one polyline per
/// series.
pub fn write_svg(records: &[VerificationRecord]) -> String {
    let mut series: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for r in records {
        let Some(b0) = r.b0 else { continue };
        for o in &r.outcomes {
            series.entry(format!("computed {}", o.bc.as_str())).or_default().push((b0, o.lambda1.extrapolated));
            for b in &o.bounds {
                let on_lambda = matches!(b.report.target, Target::DirichletLambda1 | Target::NeumannMu1);
                if on_lambda && b.report.valid && b.report.value.is_finite() {
                    series.entry(b.report.name.clone()).or_default().push((b0, b.report.value));
                }
            }
        }
    }
    for pts in series.values_mut() {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    let all = series.values().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 <= 0.0 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 <= 0.0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * PAD);
    let sy = |y: f64| HEIGHT - PAD - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * PAD);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{} {} V{} H{}" fill="none" stroke="black"/>"#,
        PAD,
        PAD,
        HEIGHT - PAD,
        WIDTH - PAD
    );
    for k in 0..=4 {
        let t = k as f64 / 4.0;
        let (x, y) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-size="11" text-anchor="middle">{}</text>"#,
            sx(x),
            HEIGHT - PAD + 16.0,
            fmt_tick(x)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-size="11" text-anchor="end">{}</text>"#,
            PAD - 6.0,
            sy(y) + 4.0,
            fmt_tick(y)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" font-size="13" text-anchor="middle">B0</text>"#,
        WIDTH / 2.0,
        HEIGHT - 16.0
    );
    for (k, (name, pts)) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let d: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, d.join(" "));
        for &(x, y) in pts {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#, sx(x), sy(y));
        }
        let ly = PAD + 14.0 * k as f64;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{ly:.1}" font-size="11" fill="{color}">{}</text>"#,
            WIDTH - PAD - 150.0,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn fmt_tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

/// Writes the CSV to `csv_path` and, when given, the plot to `plot_path`.
pub fn emit(records: &[VerificationRecord], csv_path: &Path, plot_path: Option<&Path>) -> Result<()> {
    if records.is_empty() {
        return Err(Error::Config("no records to emit".into()));
    }
    let mut buf = Vec::new();
    write_csv(records, &mut buf)?;
    std::fs::write(csv_path, buf)?;
    if let Some(p) = plot_path {
        std::fs::write(p, write_svg(records))?;
    }
    Ok(())
}
