//! Standalone SVG log-log convergence plot.
//!
//! Axes are `log₂ h` against `log₂ rmse`. Each scheme is one `<polyline>`; two
//! dashed `<line class="reference">` elements of slope 1 and 1/2 pass through
//! the finest-step SIPMM point (or the finest point of the first scheme when
//! SIPMM is absent).

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::harness::ConvergenceReport;
use crate::schemes::SchemeKind;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

pub const REFERENCE_SLOPES: [f64; 2] = [1.0, 0.5];

fn colour(scheme: SchemeKind) -> &'static str {
    match scheme {
        SchemeKind::Sipmm => "#d62728",
        SchemeKind::Sipem => "#2ca02c",
        SchemeKind::Bem => "#1f77b4",
    }
}

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x_min) / (self.x_max - self.x_min) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        TOP + (self.y_max - y) / (self.y_max - self.y_min) * (HEIGHT - TOP - BOTTOM)
    }
}

pub fn render_svg(report: &ConvergenceReport) -> Result<String> {
    let schemes = &report.config.schemes;
    let mut curves: Vec<(SchemeKind, Vec<(f64, f64)>)> = Vec::new();
    for &s in schemes {
        let rows: Vec<_> = report.rows_for(s).collect();
        if rows.len() < 2 {
            return Err(Error::domain(format!("plot needs at least 2 levels for {s}, got {}", rows.len())));
        }
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.rmse > 0.0)
            .map(|r| (r.h.log2(), r.rmse.log2()))
            .collect();
        curves.push((s, pts));
    }

    let anchor_scheme = if schemes.contains(&SchemeKind::Sipmm) {
        SchemeKind::Sipmm
    } else {
        schemes[0]
    };
    let anchor_pts = &curves.iter().find(|(s, _)| *s == anchor_scheme).expect("scheme present").1;
    let anchor = anchor_pts.iter().copied().min_by(|a, b| a.0.total_cmp(&b.0));

    let all: Vec<(f64, f64)> = curves.iter().flat_map(|(_, p)| p.iter().copied()).collect();
    if all.is_empty() {
        return Err(Error::domain("plot needs at least one positive error"));
    }
    let mut x_min = all.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let mut x_max = all.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    if x_max - x_min < 1.0 {
        x_min -= 0.5;
        x_max += 0.5;
    }
    let reference: Vec<(f64, (f64, f64), (f64, f64))> = anchor
        .map(|(ax, ay)| {
            REFERENCE_SLOPES
                .iter()
                .map(|&s| (s, (ax, ay), (x_max, ay + s * (x_max - ax))))
                .collect()
        })
        .unwrap_or_default();
    let ys = all
        .iter()
        .map(|p| p.1)
        .chain(reference.iter().flat_map(|(_, a, b)| [a.1, b.1]));
    let (mut y_min, mut y_max) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), y| (lo.min(y), hi.max(y)));
    let pad = ((y_max - y_min) * 0.05).max(0.25);
    y_min -= pad;
    y_max += pad;
    let frame = Frame { x_min, x_max, y_min, y_max };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
    let _ = writeln!(
        svg,
        r#"<path class="axes" d="M {x0} {y0} L {x0} {y1} L {x1} {y1}" fill="none" stroke="black"/>"#
    );

    // integer ticks on both axes
    for t in (x_min.ceil() as i64)..=(x_max.floor() as i64) {
        let x = frame.px(t as f64);
        let _ = writeln!(svg, r#"<path class="tick" d="M {x} {y1} L {x} {}" stroke="black"/>"#, y1 + 5.0);
        let _ = writeln!(svg, r#"<text x="{x}" y="{}" text-anchor="middle">{t}</text>"#, y1 + 20.0);
    }
    for t in (y_min.ceil() as i64)..=(y_max.floor() as i64) {
        let y = frame.py(t as f64);
        let _ = writeln!(svg, r#"<path class="tick" d="M {x0} {y} L {} {y}" stroke="black"/>"#, x0 - 5.0);
        let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="end">{t}</text>"#, x0 - 8.0, y + 4.0);
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">log2(h)</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{}" text-anchor="middle" transform="rotate(-90 20 {})">log2(RMSE)</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );

    for (slope, a, b) in &reference {
        let _ = writeln!(
            svg,
            r#"<line class="reference" data-slope="{slope}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="gray" stroke-dasharray="6 4"/>"#,
            frame.px(a.0),
            frame.py(a.1),
            frame.px(b.0),
            frame.py(b.1)
        );
    }

    for (scheme, pts) in &curves {
        let points: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{},{}", frame.px(x), frame.py(y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="scheme" data-scheme="{scheme}" points="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
            points.join(" "),
            colour(*scheme)
        );
        for &(x, y) in pts {
            let _ = writeln!(
                svg,
                r#"<circle cx="{}" cy="{}" r="3" fill="{}"/>"#,
                frame.px(x),
                frame.py(y),
                colour(*scheme)
            );
        }
    }

    let lx = x1 + 20.0;
    let mut ly = y0 + 10.0;
    for (scheme, _) in &curves {
        let label = match report.fit(*scheme) {
            Some(f) => format!("{scheme} (q = {:.4})", f.rate),
            None => scheme.to_string(),
        };
        let _ = writeln!(
            svg,
            r#"<path class="legend-key" d="M {lx} {ly} L {} {ly}" stroke="{}" stroke-width="2"/>"#,
            lx + 20.0,
            colour(*scheme)
        );
        let _ = writeln!(svg, r#"<text class="legend" x="{}" y="{}">{label}</text>"#, lx + 26.0, ly + 4.0);
        ly += 20.0;
    }
    for slope in REFERENCE_SLOPES {
        let _ = writeln!(
            svg,
            r#"<path class="legend-key" d="M {lx} {ly} L {} {ly}" stroke="gray" stroke-dasharray="6 4"/>"#,
            lx + 20.0
        );
        let _ = writeln!(svg, r#"<text class="legend" x="{}" y="{}">slope {slope}</text>"#, lx + 26.0, ly + 4.0);
        ly += 20.0;
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn emit_plot(report: &ConvergenceReport, path: &Path) -> Result<()> {
    std::fs::write(path, render_svg(report)?)?;
    Ok(())
}
