//! Static SVG dispersion diagrams from run CSVs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SvgError {
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("bad number `{value}` in column `{column}`")]
    BadNumber { column: String, value: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgStyle {
    pub width: f64,
    pub height: f64,
    /// Frequencies marked with a cross on the ω axis (pole real parts).
    pub markers: Vec<f64>,
}

impl Default for SvgStyle {
    fn default() -> Self {
        Self { width: 640.0, height: 320.0, markers: Vec::new() }
    }
}

const MARGIN: f64 = 48.0;

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    w: f64,
    h: f64,
}

impl Frame {
    fn new(xs: &[f64], ys: &[f64], style: &SvgStyle) -> Self {
        let (mut x0, mut x1) = bounds(xs);
        let (mut y0, mut y1) = bounds(ys);
        for m in &style.markers {
            x0 = x0.min(*m);
            x1 = x1.max(*m);
        }
        if !(x1 > x0) {
            x0 = if x0.is_finite() { x0 } else { 0.0 };
            x1 = x0 + 1.0;
        }
        y0 = y0.min(0.0);
        if !(y1 > y0) {
            y1 = y0 + 1.0;
        }
        Self { x0, x1, y0, y1, w: style.width, h: style.height }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (self.w - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        self.h - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (self.h - 2.0 * MARGIN)
    }

    fn open(&self, out: &mut String, title: &str, xlabel: &str, ylabel: &str) {
        let (w, h) = (self.w, self.h);
        let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
        let _ = writeln!(out, r#"<rect class="background" x="0" y="0" width="{w}" height="{h}" fill="white"/>"#);
        let _ = writeln!(out, r#"<text x="{:.2}" y="20" font-size="14" text-anchor="middle">{title}</text>"#, w / 2.0);
        let (l, r, t, b) = (MARGIN, w - MARGIN, MARGIN, h - MARGIN);
        let _ = writeln!(out, r#"<g class="axes" stroke="black" fill="none"><line x1="{l}" y1="{b}" x2="{r}" y2="{b}"/><line x1="{l}" y1="{b}" x2="{l}" y2="{t}"/></g>"#);
        let _ = writeln!(
            out,
            r#"<g class="ticks" font-size="10"><text x="{l}" y="{:.2}" text-anchor="middle">{:.3}</text><text x="{r}" y="{:.2}" text-anchor="middle">{:.3}</text><text x="{:.2}" y="{b}" text-anchor="end">{:.3}</text><text x="{:.2}" y="{t}" text-anchor="end">{:.3}</text></g>"#,
            b + 14.0,
            self.x0,
            b + 14.0,
            self.x1,
            l - 4.0,
            self.y0,
            l - 4.0,
            self.y1
        );
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{xlabel}</text>"#, w / 2.0, h - 8.0);
        let _ = writeln!(out, r#"<text x="12" y="{:.2}" font-size="12" transform="rotate(-90 12 {:.2})" text-anchor="middle">{ylabel}</text>"#, h / 2.0, h / 2.0);
    }

    fn crosses(&self, out: &mut String, markers: &[f64]) {
        let y = self.py(self.y0);
        for m in markers {
            let x = self.px(*m);
            let _ = writeln!(
                out,
                r#"<path class="cross" d="M{:.2},{:.2} L{:.2},{:.2} M{:.2},{:.2} L{:.2},{:.2}" stroke="red" stroke-width="1.5"/>"#,
                x - 5.0,
                y - 5.0,
                x + 5.0,
                y + 5.0,
                x - 5.0,
                y + 5.0,
                x + 5.0,
                y - 5.0
            );
        }
    }
}

fn bounds(v: &[f64]) -> (f64, f64) {
    v.iter()
        .filter(|x| x.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(*x), b.max(*x)))
}

struct Columns {
    names: Vec<String>,
    data: Vec<Vec<String>>,
}

impl Columns {
    fn read(path: &Path) -> Result<Self, SvgError> {
        let mut r = csv::Reader::from_path(path)?;
        let names = r.headers()?.iter().map(str::to_string).collect();
        let mut data = Vec::new();
        for rec in r.records() {
            data.push(rec?.iter().map(str::to_string).collect());
        }
        Ok(Self { names, data })
    }

    fn has(&self, name: &str) -> bool {
        self.names.iter().any(|n| n == name)
    }

    fn numbers(&self, name: &str) -> Result<Vec<f64>, SvgError> {
        let k = self.names.iter().position(|n| n == name).ok_or_else(|| SvgError::MissingColumn(name.into()))?;
        self.data
            .iter()
            .map(|row| {
                let v = row.get(k).map(String::as_str).unwrap_or("");
                v.parse::<f64>().map_err(|_| SvgError::BadNumber { column: name.into(), value: v.into() })
            })
            .collect()
    }
}

fn curve(frame: &Frame, xs: &[f64], ys: &[f64]) -> String {
    // break the polyline at jumps so folded branches are not joined
    let jump = 0.15 * (frame.y1 - frame.y0);
    let mut out = String::new();
    let mut path = String::new();
    let mut prev: Option<f64> = None;
    for (x, y) in xs.iter().zip(ys) {
        if !y.is_finite() {
            prev = None;
            continue;
        }
        let cmd = match prev {
            Some(p) if (y - p).abs() <= jump => 'L',
            _ => 'M',
        };
        let _ = write!(path, "{cmd}{:.2},{:.2} ", frame.px(*x), frame.py(*y));
        prev = Some(*y);
    }
    if !path.is_empty() {
        let _ = writeln!(out, r#"<path class="curve" d="{}" stroke="navy" stroke-width="1.2" fill="none"/>"#, path.trim_end());
    }
    out
}

fn pane(xs: &[f64], ys: &[f64], style: &SvgStyle, title: &str, ylabel: &str) -> String {
    let frame = Frame::new(xs, ys, style);
    let mut s = String::new();
    frame.open(&mut s, title, "ω", ylabel);
    s.push_str(&curve(&frame, xs, ys));
    frame.crosses(&mut s, &style.markers);
    s.push_str("</svg>\n");
    s
}

fn gap_pane(lo: &[f64], hi: &[f64], sentinels: &[f64], style: &SvgStyle) -> String {
    let mut xs: Vec<f64> = lo.iter().chain(hi).copied().collect();
    xs.extend_from_slice(sentinels);
    let frame = Frame::new(&xs, &[0.0, 1.0], style);
    let mut s = String::new();
    frame.open(&mut s, "band gaps", "ω", "");
    let (top, bottom) = (frame.py(1.0), frame.py(0.0));
    for (a, b) in lo.iter().zip(hi) {
        let (x0, x1) = (frame.px(*a), frame.px(*b));
        let _ = writeln!(
            s,
            r#"<rect class="gap" x="{x0:.4}" y="{top:.2}" width="{:.4}" height="{:.2}" fill="steelblue" fill-opacity="0.35"/>"#,
            (x1 - x0).max(0.5),
            bottom - top
        );
    }
    for w in sentinels {
        let x = frame.px(*w);
        let _ = writeln!(s, r#"<line class="sentinel" x1="{x:.4}" y1="{bottom:.2}" x2="{x:.4}" y2="{:.2}" stroke="gray"/>"#, bottom - 8.0);
    }
    frame.crosses(&mut s, &style.markers);
    s.push_str("</svg>\n");
    s
}

fn sibling(csv_path: &Path, suffix: &str) -> PathBuf {
    let stem = csv_path.file_stem().and_then(|s| s.to_str()).unwrap_or("plot");
    csv_path.with_file_name(format!("{stem}_{suffix}.svg"))
}

/// Render the panes supported by the CSV's columns; returns the written files.
///
/// Sweep tables (`omega`, `abs_re`, `abs_im`) give two panes, gap tables
/// (`lo`, `hi`) one pane with shaded intervals.
pub fn render_svg(csv_path: &Path, style: &SvgStyle) -> Result<Vec<PathBuf>, SvgError> {
    let cols = Columns::read(csv_path)?;
    if cols.has("lo") && cols.has("hi") {
        let lo = cols.numbers("lo")?;
        let hi = cols.numbers("hi")?;
        let sentinels = if cols.has("sentinel_omega") { cols.numbers("sentinel_omega")? } else { Vec::new() };
        let path = sibling(csv_path, "gaps");
        std::fs::write(&path, gap_pane(&lo, &hi, &sentinels, style))?;
        return Ok(vec![path]);
    }
    for c in ["omega", "abs_re", "abs_im"] {
        if !cols.has(c) {
            return Err(SvgError::MissingColumn(c.into()));
        }
    }
    let w = cols.numbers("omega")?;
    let re = cols.numbers("abs_re")?;
    let im = cols.numbers("abs_im")?;
    let p_re = sibling(csv_path, "re");
    let p_im = sibling(csv_path, "im");
    std::fs::write(&p_re, pane(&w, &re, style, "|Re κ|", "|Re κ|"))?;
    std::fs::write(&p_im, pane(&w, &im, style, "|Im κ|", "|Im κ|"))?;
    Ok(vec![p_re, p_im])
}
