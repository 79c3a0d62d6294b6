//! Minimal hand-rolled SVG writer: polyline norm plots with axes and an
//! optional reference line, plus grayscale strips of the leg probability
//! profiles. Output is built deterministically (fixed float precision,
//! fixed element order) so identical inputs produce identical bytes.

use std::fmt::Write as _;

use crate::error::{CliError, Result};
use crate::table::ResultTable;

const WIDTH: f64 = 880.0;
const NORM_PANEL_H: f64 = 320.0;
const STRIP_H: f64 = 150.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 160.0;
const MARGIN_T: f64 = 36.0;
const GAP: f64 = 46.0;

/// Colors per norm-series column, in draw order.
const SERIES_STYLE: &[(&str, &str, &str)] = &[
    ("P1s", "#1f77b4", ""),
    ("P2s", "#2ca02c", ""),
    ("PT", "#000000", ""),
    ("PT_predicted", "#d62728", "6,4"),
];

/// Plot description for [`render_svg`].
#[derive(Debug, Clone, Default)]
pub struct PlotSpec {
    pub title: String,
    /// Horizontal reference value drawn as a dashed gray line.
    pub reference: Option<f64>,
}

/// Render the norm series (columns `t`, `P1s`, `P2s`, `PT`,
/// `PT_predicted`; missing ones are skipped) and, when given, the long
/// profile table (columns `t`, `j`, `P1`, `P2`) as two grayscale strips.
pub fn render_svg(
    norms: &ResultTable,
    profiles: Option<&ResultTable>,
    spec: &PlotSpec,
) -> Result<String> {
    if norms.is_empty() {
        return Err(CliError::EmptyData);
    }
    let t = norms
        .column("t")
        .ok_or_else(|| CliError::Schema("norm table lacks a t column".to_string()))?;

    let strips = profiles.map(profile_grids).transpose()?;
    let n_strips = strips.as_ref().map_or(0, |s| s.grids.len());
    let height =
        MARGIN_T + NORM_PANEL_H + n_strips as f64 * (STRIP_H + GAP) + 50.0;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{h}" viewBox="0 0 {WIDTH} {h}">"##,
        h = fmt(height)
    );
    let _ = writeln!(svg, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    if !spec.title.is_empty() {
        let _ = writeln!(
            svg,
            r##"<text x="{x}" y="22" font-family="sans-serif" font-size="15" text-anchor="middle">{title}</text>"##,
            x = fmt(WIDTH / 2.0),
            title = escape(&spec.title)
        );
    }

    norm_panel(&mut svg, norms, &t, spec)?;

    if let Some(strips) = &strips {
        for (i, grid) in strips.grids.iter().enumerate() {
            let top = MARGIN_T + NORM_PANEL_H + GAP + i as f64 * (STRIP_H + GAP);
            strip_panel(&mut svg, grid, &strips.t_range, strips.n_rungs, top, &strips.names[i]);
        }
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

fn norm_panel(svg: &mut String, norms: &ResultTable, t: &[f64], spec: &PlotSpec) -> Result<()> {
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let (t_min, t_max) = min_max(t);
    let t_span = (t_max - t_min).max(f64::MIN_POSITIVE);

    let mut series: Vec<(&str, &str, &str, Vec<f64>)> = Vec::new();
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for &(name, color, dash) in SERIES_STYLE {
        if let Some(values) = norms.column(name) {
            if values.iter().any(|v| v.is_finite()) {
                let (lo, hi) = min_max(&values);
                y_min = y_min.min(lo);
                y_max = y_max.max(hi);
                series.push((name, color, dash, values));
            }
        }
    }
    if let Some(r) = spec.reference {
        y_min = y_min.min(r);
        y_max = y_max.max(r);
    }
    if series.is_empty() {
        return Err(CliError::EmptyData);
    }
    let pad = ((y_max - y_min) * 0.08).max(1e-12);
    let (y_min, y_max) = (y_min - pad, y_max + pad);
    let y_span = y_max - y_min;

    let x_of = |tv: f64| MARGIN_L + (tv - t_min) / t_span * plot_w;
    let y_of = |v: f64| MARGIN_T + NORM_PANEL_H - (v - y_min) / y_span * NORM_PANEL_H;

    // frame and ticks
    let _ = writeln!(
        svg,
        r##"<rect x="{x}" y="{y}" width="{w}" height="{h}" fill="none" stroke="#444444" stroke-width="1"/>"##,
        x = fmt(MARGIN_L),
        y = fmt(MARGIN_T),
        w = fmt(plot_w),
        h = fmt(NORM_PANEL_H)
    );
    for i in 0..=5 {
        let frac = i as f64 / 5.0;
        let tx = MARGIN_L + frac * plot_w;
        let tv = t_min + frac * t_span;
        let _ = writeln!(
            svg,
            r##"<line x1="{x}" y1="{y1}" x2="{x}" y2="{y2}" stroke="#444444" stroke-width="1"/>"##,
            x = fmt(tx),
            y1 = fmt(MARGIN_T + NORM_PANEL_H),
            y2 = fmt(MARGIN_T + NORM_PANEL_H + 6.0)
        );
        let _ = writeln!(
            svg,
            r##"<text x="{x}" y="{y}" font-family="sans-serif" font-size="11" text-anchor="middle">{v}</text>"##,
            x = fmt(tx),
            y = fmt(MARGIN_T + NORM_PANEL_H + 20.0),
            v = fmt_tick(tv)
        );
        let vy = MARGIN_T + NORM_PANEL_H - frac * NORM_PANEL_H;
        let vv = y_min + frac * y_span;
        let _ = writeln!(
            svg,
            r##"<line x1="{x1}" y1="{y}" x2="{x2}" y2="{y}" stroke="#444444" stroke-width="1"/>"##,
            x1 = fmt(MARGIN_L - 6.0),
            x2 = fmt(MARGIN_L),
            y = fmt(vy)
        );
        let _ = writeln!(
            svg,
            r##"<text x="{x}" y="{y}" font-family="sans-serif" font-size="11" text-anchor="end">{v}</text>"##,
            x = fmt(MARGIN_L - 10.0),
            y = fmt(vy + 4.0),
            v = fmt_tick(vv)
        );
    }
    let _ = writeln!(
        svg,
        r##"<text x="{x}" y="{y}" font-family="sans-serif" font-size="12" text-anchor="middle">t</text>"##,
        x = fmt(MARGIN_L + plot_w / 2.0),
        y = fmt(MARGIN_T + NORM_PANEL_H + 38.0)
    );

    if let Some(r) = spec.reference {
        let _ = writeln!(
            svg,
            r##"<line x1="{x1}" y1="{y}" x2="{x2}" y2="{y}" stroke="#888888" stroke-width="1" stroke-dasharray="3,3"/>"##,
            x1 = fmt(MARGIN_L),
            x2 = fmt(MARGIN_L + plot_w),
            y = fmt(y_of(r))
        );
    }

    for (idx, (name, color, dash, values)) in series.iter().enumerate() {
        let mut points = String::new();
        for (tv, v) in t.iter().zip(values) {
            if !v.is_finite() {
                continue;
            }
            let _ = write!(points, "{},{} ", fmt(x_of(*tv)), fmt(y_of(*v)));
        }
        let dash_attr = if dash.is_empty() {
            String::new()
        } else {
            format!(r##" stroke-dasharray="{dash}""##)
        };
        let _ = writeln!(
            svg,
            r##"<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1.5"{dash_attr}/>"##,
            points = points.trim_end()
        );
        // legend entry
        let ly = MARGIN_T + 16.0 + idx as f64 * 18.0;
        let _ = writeln!(
            svg,
            r##"<line x1="{x1}" y1="{y}" x2="{x2}" y2="{y}" stroke="{color}" stroke-width="1.5"{dash_attr}/>"##,
            x1 = fmt(WIDTH - MARGIN_R + 12.0),
            x2 = fmt(WIDTH - MARGIN_R + 40.0),
            y = fmt(ly)
        );
        let _ = writeln!(
            svg,
            r##"<text x="{x}" y="{y}" font-family="sans-serif" font-size="11">{name}</text>"##,
            x = fmt(WIDTH - MARGIN_R + 46.0),
            y = fmt(ly + 4.0)
        );
    }
    Ok(())
}

struct ProfileGrids {
    /// One grid per leg: row index = time sample, col index = rung bucket.
    grids: Vec<Vec<Vec<f64>>>,
    names: Vec<String>,
    t_range: (f64, f64),
    n_rungs: usize,
}

/// Reshape the long-format `(t, j, P1, P2)` table into per-leg grids,
/// downsampling to at most 120 time columns and 160 rung rows.
fn profile_grids(profiles: &ResultTable) -> Result<ProfileGrids> {
    let t = profiles
        .column("t")
        .ok_or_else(|| CliError::Schema("profile table lacks t".to_string()))?;
    let j = profiles
        .column("j")
        .ok_or_else(|| CliError::Schema("profile table lacks j".to_string()))?;
    let p1 = profiles
        .column("P1")
        .ok_or_else(|| CliError::Schema("profile table lacks P1".to_string()))?;
    let p2 = profiles
        .column("P2")
        .ok_or_else(|| CliError::Schema("profile table lacks P2".to_string()))?;

    let mut times: Vec<f64> = t.clone();
    times.dedup();
    let n_rungs = j.iter().fold(0.0f64, |a, &b| a.max(b)) as usize;
    if times.is_empty() || n_rungs == 0 {
        return Err(CliError::EmptyData);
    }
    let stride_t = times.len().div_ceil(120);
    let stride_j = n_rungs.div_ceil(160);

    let kept_times: Vec<f64> = times.iter().copied().step_by(stride_t).collect();
    let time_index = |tv: f64| -> Option<usize> {
        kept_times.iter().position(|&kt| kt == tv)
    };

    let cols = kept_times.len();
    let rows = n_rungs.div_ceil(stride_j);
    let mut grids = vec![vec![vec![0.0f64; cols]; rows], vec![vec![0.0f64; cols]; rows]];
    for i in 0..t.len() {
        if let Some(ci) = time_index(t[i]) {
            let rj = (j[i] as usize - 1) / stride_j;
            grids[0][rj][ci] += p1[i];
            grids[1][rj][ci] += p2[i];
        }
    }
    Ok(ProfileGrids {
        grids,
        names: vec!["leg 1".to_string(), "leg 2".to_string()],
        t_range: (kept_times[0], *kept_times.last().unwrap()),
        n_rungs,
    })
}

fn strip_panel(
    svg: &mut String,
    grid: &[Vec<f64>],
    t_range: &(f64, f64),
    n_rungs: usize,
    top: f64,
    name: &str,
) {
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let rows = grid.len();
    let cols = grid.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return;
    }
    let vmax = grid.iter().flatten().fold(0.0f64, |a, &b| a.max(b)).max(f64::MIN_POSITIVE);
    let cw = plot_w / cols as f64;
    let ch = STRIP_H / rows as f64;
    for (r, row) in grid.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            let x = MARGIN_L + c as f64 * cw;
            // rung 1 at the bottom of the strip
            let y = top + STRIP_H - (r + 1) as f64 * ch;
            let shade = (255.0 * (1.0 - (v / vmax).clamp(0.0, 1.0))).round() as u8;
            let _ = writeln!(
                svg,
                r##"<rect x="{x}" y="{y}" width="{w}" height="{h}" fill="#{s:02x}{s:02x}{s:02x}"/>"##,
                x = fmt(x),
                y = fmt(y),
                w = fmt(cw + 0.5),
                h = fmt(ch + 0.5),
                s = shade
            );
        }
    }
    let _ = writeln!(
        svg,
        r##"<rect x="{x}" y="{y}" width="{w}" height="{h}" fill="none" stroke="#444444" stroke-width="1"/>"##,
        x = fmt(MARGIN_L),
        y = fmt(top),
        w = fmt(plot_w),
        h = fmt(STRIP_H)
    );
    let _ = writeln!(
        svg,
        r##"<text x="{x}" y="{y}" font-family="sans-serif" font-size="12">{name}: site probability, t = {t0} .. {t1}, rungs 1..{n}</text>"##,
        x = fmt(MARGIN_L),
        y = fmt(top - 8.0),
        t0 = fmt_tick(t_range.0),
        t1 = fmt_tick(t_range.1),
        n = n_rungs
    );
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter().filter(|x| x.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
        (lo.min(x), hi.max(x))
    })
}

fn fmt(v: f64) -> String {
    format!("{v:.3}")
}

fn fmt_tick(v: f64) -> String {
    format!("{v:.4}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
