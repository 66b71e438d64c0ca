//! Error curves, their CSV form and a log-scale SVG chart.

use std::fmt::Write as _;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 5] = ["method", "k", "matvecs", "norm", "error"];

/// One method's error curve.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub method: String,
    pub norm: String,
    pub ks: Vec<usize>,
    pub matvecs: Vec<usize>,
    pub errors: Vec<f64>,
}

impl ExperimentReport {
    pub fn new(method: impl Into<String>, norm: impl Into<String>) -> Self {
        Self {
            method: method.into(),
            norm: norm.into(),
            ks: Vec::new(),
            matvecs: Vec::new(),
            errors: Vec::new(),
        }
    }

    pub fn push(&mut self, k: usize, matvecs: usize, error: f64) {
        self.ks.push(k);
        self.matvecs.push(matvecs);
        self.errors.push(error);
    }

    pub fn len(&self) -> usize {
        self.ks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ks.is_empty()
    }

    /// Error at the given iteration index, if recorded.
    pub fn error_at_k(&self, k: usize) -> Option<f64> {
        self.ks.iter().position(|&j| j == k).map(|i| self.errors[i])
    }

    /// The last error recorded with at most `budget` products.
    pub fn error_within(&self, budget: usize) -> Option<f64> {
        self.matvecs
            .iter()
            .zip(&self.errors)
            .filter(|(&m, _)| m <= budget)
            .next_back()
            .map(|(_, &e)| e)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    method: String,
    k: usize,
    matvecs: usize,
    norm: String,
    error: f64,
}

/// Writes `method,k,matvecs,norm,error` rows, one per (method, k).
pub fn write_csv<W: Write>(reports: &[ExperimentReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        for i in 0..r.len() {
            w.serialize(Row {
                method: r.method.clone(),
                k: r.ks[i],
                matvecs: r.matvecs[i],
                norm: r.norm.clone(),
                error: r.errors[i],
            })?;
        }
    }
    if reports.iter().all(|r| r.is_empty()) {
        w.write_record(CSV_HEADER)?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string(reports: &[ExperimentReport]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(reports, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Stream(e.to_string()))
}

/// Reads rows back, grouping consecutive rows with the same method and norm.
pub fn read_csv<R: Read>(input: R) -> Result<Vec<ExperimentReport>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header {}", CSV_HEADER.join(",")),
        });
    }
    let mut out: Vec<ExperimentReport> = Vec::new();
    for row in rd.deserialize() {
        let row: Row = row?;
        match out.last_mut() {
            Some(r) if r.method == row.method && r.norm == row.norm => {
                r.push(row.k, row.matvecs, row.error)
            }
            _ => {
                let mut r = ExperimentReport::new(row.method, row.norm);
                r.push(row.k, row.matvecs, row.error);
                out.push(r);
            }
        }
    }
    Ok(out)
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

/// Standalone SVG line chart: products with `A` against log₁₀ error.
/// Non-positive or non-finite errors are left out of the curves.
pub fn render_svg(title: &str, reports: &[ExperimentReport]) -> String {
    let (w, h) = (720.0, 440.0);
    let (left, right, top, bottom) = (70.0, 190.0, 40.0, 50.0);
    let pw = w - left - right;
    let ph = h - top - bottom;

    let points: Vec<Vec<(f64, f64)>> = reports
        .iter()
        .map(|r| {
            r.matvecs
                .iter()
                .zip(&r.errors)
                .filter(|(_, e)| e.is_finite() && **e > 0.0)
                .map(|(&m, e)| (m as f64, e.log10()))
                .collect()
        })
        .collect();
    let all = points.iter().flatten();
    let (mut xmax, mut ymin, mut ymax) = (1.0_f64, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    if !ymin.is_finite() {
        ymin = -1.0;
        ymax = 0.0;
    }
    let ylo = ymin.floor();
    let yhi = ymax.ceil().max(ylo + 1.0);
    let sx = |x: f64| left + pw * x / xmax;
    let sy = |y: f64| top + ph * (yhi - y) / (yhi - ylo);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        left + pw / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    let mut e = ylo as i64;
    let step = (((yhi - ylo) / 8.0).ceil() as i64).max(1);
    while e as f64 <= yhi {
        let y = sy(e as f64);
        let _ = writeln!(
            s,
            r##"<line x1="{left}" y1="{y:.1}" x2="{}" y2="{y:.1}" stroke="#ddd"/><text x="{}" y="{:.1}" text-anchor="end">1e{e}</text>"##,
            left + pw,
            left - 6.0,
            y + 4.0
        );
        e += step;
    }
    for i in 0..=5 {
        let xv = xmax * i as f64 / 5.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{}" text-anchor="middle">{}</text>"#,
            sx(xv),
            top + ph + 18.0,
            xv.round()
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">matrix-vector products</text>"#,
        left + pw / 2.0,
        h - 10.0
    );
    for (i, (r, pts)) in reports.iter().zip(&points).enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if !pts.is_empty() {
            let path: Vec<String> = pts
                .iter()
                .map(|&(x, y)| format!("{:.1},{:.1}", sx(x), sy(y)))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                path.join(" ")
            );
        }
        let ly = top + 14.0 + 18.0 * i as f64;
        let lx = left + pw + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{} ({})</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(&r.method),
            escape(&r.norm)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<ExperimentReport> {
        let mut a = ExperimentReport::new("lanczos-or", "A2");
        a.push(1, 1, 0.5);
        a.push(2, 2, 1.0 / 3.0);
        a.push(3, 3, 1e-300);
        let mut b = ExperimentReport::new("lanczos-fa", "A2");
        b.push(1, 1, f64::INFINITY);
        b.push(2, 2, 0.1 + 0.2);
        vec![a, b]
    }

    #[test]
    fn csv_round_trip() {
        let reports = sample();
        let text = to_csv_string(&reports).unwrap();
        assert!(text.starts_with("method,k,matvecs,norm,error\n"));
        assert_eq!(read_csv(text.as_bytes()).unwrap(), reports);
    }

    #[test]
    fn csv_rejects_other_header() {
        assert!(read_csv("a,b,c,d,e\n".as_bytes()).is_err());
    }

    #[test]
    fn svg_is_well_formed() {
        let svg = render_svg("test <chart>", &sample());
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("test &lt;chart&gt;"));
    }

    #[test]
    fn lookups() {
        let r = &sample()[0];
        assert_eq!(r.error_at_k(2), Some(1.0 / 3.0));
        assert_eq!(r.error_within(2), Some(1.0 / 3.0));
        assert_eq!(r.error_within(0), None);
    }
}
