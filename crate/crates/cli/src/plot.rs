//! (n, h(n), KL(n)) scatter data and self-contained SVG plots.
//!
//! Three views are written: the full range of every point, and two windows
//! on the h-axis around h = 2. Each SVG starts with a comment giving its axis
//! ranges and point count.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use divkl::format::fmt_sig;
use divkl::{Result, ScanContext};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 560.0;
const MARGIN: f64 = 64.0;
const TICKS: usize = 5;

pub struct View {
    pub file: &'static str,
    pub title: &'static str,
    /// h-axis window; `None` fits all points.
    pub h_window: Option<(f64, f64)>,
}

pub const VIEWS: [View; 3] = [
    View {
        file: "h_kl.svg",
        title: "h(n) and KL(n)",
        h_window: None,
    },
    View {
        file: "h_kl_zoom.svg",
        title: "h(n) and KL(n), 1.9 <= h <= 2.1",
        h_window: Some((1.9, 2.1)),
    },
    View {
        file: "h_kl_zoom2.svg",
        title: "h(n) and KL(n), 1.98 <= h <= 2.02",
        h_window: Some((1.98, 2.02)),
    },
];

pub const DATA_FILE: &str = "h_kl.csv";

pub struct Point {
    pub n: u64,
    pub h: f64,
    pub kl: f64,
}

pub fn points(limit: u64) -> Result<Vec<Point>> {
    let ctx = ScanContext::new(limit, true)?;
    Ok((1..=limit)
        .map(|n| Point {
            n,
            h: ctx.tables().h(n).to_f64(),
            kl: ctx.kl_value(n),
        })
        .collect())
}

pub fn csv(points: &[Point], digits: usize) -> String {
    let mut s = String::from("n,h,kl\n");
    for p in points {
        let _ = writeln!(s, "{},{},{}", p.n, fmt_sig(p.h, digits), fmt_sig(p.kl, digits));
    }
    s
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

pub fn svg(points: &[Point], view: &View) -> String {
    let inside: Vec<&Point> = points
        .iter()
        .filter(|p| view.h_window.is_none_or(|(a, b)| p.h >= a && p.h <= b))
        .collect();
    let (x0, x1) = view.h_window.unwrap_or_else(|| range(inside.iter().map(|p| p.h)));
    let (y0, y1) = range(inside.iter().map(|p| p.kl));
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        "<!-- x: h(n) in [{}, {}]; y: KL(n) in [{}, {}]; points: {} -->",
        fmt_sig(x0, 12),
        fmt_sig(x1, 12),
        fmt_sig(y0, 12),
        fmt_sig(y1, 12),
        inside.len()
    );
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        view.title.replace('<', "&lt;")
    );
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        s,
        r#"<path d="M{left} {top}V{bottom}H{right}" fill="none" stroke="black"/>"#
    );
    for i in 0..=TICKS {
        let t = i as f64 / TICKS as f64;
        let x = x0 + t * (x1 - x0);
        let y = y0 + t * (y1 - y0);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            sx(x),
            bottom + 16.0,
            fmt_sig(x, 4)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            left - 6.0,
            sy(y) + 4.0,
            fmt_sig(y, 4)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">h(n)</text>"#,
        WIDTH / 2.0,
        HEIGHT - 20.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">KL(n)</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    let _ = writeln!(s, r#"<g fill="steelblue">"#);
    for p in &inside {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="1.5"/>"#, sx(p.h), sy(p.kl));
    }
    let _ = writeln!(s, "</g>\n</svg>");
    s
}

/// Writes the CSV and every view into `dir`; returns the paths written.
pub fn write_all(limit: u64, dir: &Path, digits: usize) -> Result<Vec<PathBuf>> {
    let pts = points(limit)?;
    let mut written = Vec::new();
    let data = dir.join(DATA_FILE);
    fs::write(&data, csv(&pts, digits))?;
    written.push(data);
    for v in &VIEWS {
        let path = dir.join(v.file);
        fs::write(&path, svg(&pts, v))?;
        written.push(path);
    }
    Ok(written)
}
