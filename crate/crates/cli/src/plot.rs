//! Minimal SVG 1.1 line charts of sweep results.

use std::fmt::Write;

use ruinlab_core::{SweepAxis, SweepRow};

use crate::table::fmt_num;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const TICKS: usize = 5;

struct Series<'a> {
    label: &'a str,
    colour: &'a str,
    dash: Option<&'a str>,
    points: Vec<Option<(f64, f64)>>,
}

fn axis_label(axis: SweepAxis) -> &'static str {
    match axis {
        SweepAxis::U => "initial capital u",
        SweepAxis::KCap => "number of claims k",
        SweepAxis::X => "retention x",
    }
}

/// UMR against the swept value, plus the optimal retention when present.
/// Failed rows break the line.
pub fn line_chart(axis: SweepAxis, rows: &[SweepRow]) -> String {
    let mut series = vec![Series {
        label: "UMR",
        colour: "#1f5fa8",
        dash: None,
        points: rows
            .iter()
            .map(|r| r.umr.map(|v| (r.axis_value, v)))
            .collect(),
    }];
    if rows.iter().any(|r| r.x_star.is_some()) {
        series.push(Series {
            label: "optimal retention x*",
            colour: "#c0392b",
            dash: Some("6 4"),
            points: rows
                .iter()
                .map(|r| r.x_star.map(|v| (r.axis_value, v)))
                .collect(),
        });
    }

    let (x_lo, x_hi) = bounds(rows.iter().map(|r| r.axis_value));
    let (_, y_hi) = bounds(
        series
            .iter()
            .flat_map(|s| s.points.iter().flatten().map(|p| p.1)),
    );
    let (y_lo, y_hi) = (0.0, if y_hi > 0.0 { y_hi * 1.05 } else { 1.0 });
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| TOP + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for i in 0..=TICKS {
        let f = i as f64 / TICKS as f64;
        let xv = x_lo + f * (x_hi - x_lo);
        let yv = y_lo + f * (y_hi - y_lo);
        let (px, py) = (sx(xv), sy(yv));
        let _ = writeln!(
            svg,
            r##"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{TOP}" stroke="#dddddd"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
            TOP + plot_h,
            TOP + plot_h + 18.0,
            tick(xv)
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{LEFT}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#dddddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
            LEFT + plot_w,
            LEFT - 6.0,
            py + 4.0,
            tick(yv)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0,
        axis_label(axis)
    );

    for (i, s) in series.iter().enumerate() {
        let dash = s
            .dash
            .map(|d| format!(r#" stroke-dasharray="{d}""#))
            .unwrap_or_default();
        for segment in s.points.split(Option::is_none) {
            if segment.is_empty() {
                continue;
            }
            let pts: Vec<String> = segment
                .iter()
                .flatten()
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{}" stroke-width="2"{dash} points="{}"/>"#,
                s.colour,
                pts.join(" ")
            );
        }
        let ly = TOP + 16.0 + 18.0 * i as f64;
        let lx = LEFT + plot_w - 170.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{}" stroke-width="2"{dash}/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 24.0,
            s.colour,
            lx + 30.0,
            ly + 4.0,
            s.label
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

fn tick(v: f64) -> String {
    let s = format!("{v:.4e}");
    let back: f64 = s.parse().unwrap_or(v);
    fmt_num(back)
}
