//! CSV, JSON metadata and SVG output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::{BenchConfig, Metric};
use super::fit::ERROR_WINDOW;
use super::run::{gate_counting_notes, BenchRecord, BenchReport, RecordFailure};
use crate::error::{Error, Result};
use crate::problems::ProblemDescription;

fn refuse_empty(records: &[BenchRecord]) -> Result<()> {
    if records.is_empty() {
        return Err(Error::InvalidArgument("no records to emit".into()));
    }
    Ok(())
}

fn io_context(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io(std::io::Error::other(format!("{}: {e}", path.display())))
}

/// `scheme,base,N,gates,error,seconds`, one row per record.
pub fn csv_string(records: &[BenchRecord]) -> Result<String> {
    refuse_empty(records)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r).map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn write_csv(records: &[BenchRecord], path: &Path) -> Result<()> {
    let text = csv_string(records)?;
    fs::write(path, text).map_err(|e| io_context(path, e))
}

/// Sidecar written next to the CSV as `<csv>.meta.json`.
#[derive(Debug, Serialize)]
pub struct BenchMeta<'a> {
    pub problem: &'a ProblemDescription,
    pub metric: Metric,
    pub seeds: &'a [u64],
    pub reference_tol: f64,
    pub error_window: (f64, f64),
    pub gate_counting: BTreeMap<String, String>,
    pub failures: &'a [RecordFailure],
}

pub fn meta_path(csv: &Path) -> PathBuf {
    let mut name = csv.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".meta.json");
    csv.with_file_name(name)
}

pub fn write_meta(config: &BenchConfig, report: &BenchReport, path: &Path) -> Result<()> {
    let meta = BenchMeta {
        problem: &config.problem,
        metric: config.metric,
        seeds: &report.seeds,
        reference_tol: config.reference_tol,
        error_window: ERROR_WINDOW,
        gate_counting: gate_counting_notes(config),
        failures: &report.failures,
    };
    let text = serde_json::to_string_pretty(&meta).expect("plain data serializes");
    fs::write(path, text + "\n").map_err(|e| io_context(path, e))
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

const W: f64 = 760.0;
const H: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 200.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;

/// Log-log scatter of error against gate count, one series per scheme, with a
/// dashed guide of slope `guide_slope` through the first plotted point.
pub fn svg_string(records: &[BenchRecord], guide_slope: f64) -> Result<String> {
    refuse_empty(records)?;
    let pts: Vec<&BenchRecord> = records
        .iter()
        .filter(|r| r.gates > 0 && r.error > 0.0 && r.error.is_finite())
        .collect();
    if pts.is_empty() {
        return Err(Error::InvalidArgument("no positive errors to plot".into()));
    }
    let lx = |r: &BenchRecord| (r.gates as f64).log10();
    let ly = |r: &BenchRecord| r.error.log10();
    let x0 = pts.iter().map(|r| lx(r)).fold(f64::INFINITY, f64::min).floor();
    let mut x1 = pts.iter().map(|r| lx(r)).fold(f64::NEG_INFINITY, f64::max).ceil();
    let y0 = pts.iter().map(|r| ly(r)).fold(f64::INFINITY, f64::min).floor();
    let mut y1 = pts.iter().map(|r| ly(r)).fold(f64::NEG_INFINITY, f64::max).ceil();
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let sx = |v: f64| LEFT + (v - x0) / (x1 - x0) * pw;
    let sy = |v: f64| TOP + (y1 - v) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<defs><clipPath id="plot"><rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}"/></clipPath></defs>"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r##"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>"##
    );
    for d in (x0 as i32)..=(x1 as i32) {
        let x = sx(d as f64);
        let _ = writeln!(
            s,
            r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="#ddd"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">1e{d}</text>"##,
            TOP + ph,
            TOP + ph + 18.0
        );
    }
    for d in (y0 as i32)..=(y1 as i32) {
        let y = sy(d as f64);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">1e{d}</text>"##,
            LEFT + pw,
            LEFT - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">gates</text>"#,
        LEFT + pw / 2.0,
        H - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">error</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );

    let mut series: Vec<&str> = Vec::new();
    for r in &pts {
        if !series.contains(&r.series.as_str()) {
            series.push(&r.series);
        }
    }
    for (i, id) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut line: Vec<&&BenchRecord> = pts.iter().filter(|r| r.series == *id).collect();
        line.sort_by_key(|r| r.n_steps);
        let coords: Vec<String> = line.iter().map(|r| format!("{:.2},{:.2}", sx(lx(r)), sy(ly(r)))).collect();
        let _ = writeln!(
            s,
            r#"<g clip-path="url(#plot)"><polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            coords.join(" ")
        );
        for c in &coords {
            let (cx, cy) = c.split_once(',').expect("formatted pair");
            let _ = writeln!(s, r#"<circle cx="{cx}" cy="{cy}" r="3" fill="{color}"/>"#);
        }
        let _ = writeln!(s, "</g>");
        let ly_ = TOP + 14.0 + 18.0 * i as f64;
        let lx_ = LEFT + pw + 16.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx_}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{ly_:.2}">{}</text>"#,
            ly_ - 4.0,
            lx_ + 20.0,
            ly_ - 4.0,
            lx_ + 26.0,
            escape(id)
        );
    }

    let anchor = pts[0];
    let (ax, ay) = (lx(anchor), ly(anchor));
    let guide = |x: f64| ay + guide_slope * (x - ax);
    let _ = writeln!(
        s,
        r##"<line clip-path="url(#plot)" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#000" stroke-dasharray="6 4"/>"##,
        sx(x0),
        sy(guide(x0)),
        sx(x1),
        sy(guide(x1))
    );
    let gy = TOP + 14.0 + 18.0 * series.len() as f64;
    let gx = LEFT + pw + 16.0;
    let _ = writeln!(
        s,
        r##"<line x1="{gx}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#000" stroke-dasharray="6 4"/><text x="{:.2}" y="{gy:.2}">{}</text>"##,
        gy - 4.0,
        gx + 20.0,
        gy - 4.0,
        gx + 26.0,
        escape(&format!("O(N^{guide_slope})"))
    );
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn write_svg(records: &[BenchRecord], guide_slope: f64, path: &Path) -> Result<()> {
    let text = svg_string(records, guide_slope)?;
    fs::write(path, text).map_err(|e| io_context(path, e))
}

/// Writes the CSV, its metadata sidecar and the optional SVG; returns the paths written.
pub fn emit_all(config: &BenchConfig, report: &BenchReport) -> Result<Vec<PathBuf>> {
    refuse_empty(&report.records)?;
    let dir = config.output.resolved_dir();
    fs::create_dir_all(&dir).map_err(|e| io_context(&dir, e))?;
    let csv = config.output.csv_path();
    write_csv(&report.records, &csv)?;
    let meta = meta_path(&csv);
    write_meta(config, report, &meta)?;
    let mut written = vec![csv, meta];
    if let Some(svg) = config.output.svg_path() {
        write_svg(&report.records, config.output.guide_slope, &svg)?;
        written.push(svg);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(series: &str, n: usize, error: f64) -> BenchRecord {
        BenchRecord {
            scheme: series.into(),
            base: "Ost4".into(),
            n_steps: n,
            gates: 7 * n,
            error,
            seconds: 0.0,
            series: series.into(),
        }
    }

    #[test]
    fn csv_has_header_and_rows() {
        let r = vec![rec("hdr", 8, 1e-3), rec("a,b", 16, 6.25e-5)];
        let s = csv_string(&r).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "scheme,base,N,gates,error,seconds");
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1], "hdr,Ost4,8,56,0.001,0.0");
        assert!(lines[2].starts_with("\"a,b\","));
    }

    #[test]
    fn empty_is_refused() {
        assert!(csv_string(&[]).is_err());
        assert!(svg_string(&[], -4.0).is_err());
    }

    #[test]
    fn svg_escapes_labels() {
        let s = svg_string(&[rec("x<&>", 8, 1e-3), rec("x<&>", 16, 1e-4)], -4.0).unwrap();
        assert!(s.contains("x&lt;&amp;&gt;"));
        assert!(!s.contains("x<&>"));
        assert!(s.contains("stroke-dasharray"));
    }

    #[test]
    fn meta_sits_next_to_csv() {
        assert_eq!(meta_path(Path::new("out/a.csv")), PathBuf::from("out/a.csv.meta.json"));
    }
}
