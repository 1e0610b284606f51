//! File emitters: trace CSV, joint-intensity CSV, SVG plots, metrics text.
//!
//! Floating-point values are written as `{:.16e}` (17 significant digits),
//! which round-trips every `f64` exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use biphoton::analysis::baseline;
use biphoton::{Jsa64, Trace64};

use crate::error::{CliError, CliResult};

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
        }
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// `rate / baseline`, or zero for an identically vanishing trace.
pub fn normalized_by_baseline(trace: &Trace64) -> Vec<f64> {
    let b = baseline(trace.rates());
    trace
        .rates()
        .iter()
        .map(|&r| if b > 0.0 { r / b } else { 0.0 })
        .collect()
}

/// Columns `tau_ps,rate,rate_normalized`.
pub fn trace_csv(trace: &Trace64) -> String {
    let mut out = String::from("tau_ps,rate,rate_normalized\n");
    let normalized = normalized_by_baseline(trace);
    for ((tau, rate), norm) in trace
        .delays()
        .values()
        .iter()
        .zip(trace.rates())
        .zip(&normalized)
    {
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt_f64(*tau),
            fmt_f64(*rate),
            fmt_f64(*norm)
        );
    }
    out
}

pub fn emit_trace_csv(trace: &Trace64, path: &Path) -> CliResult<()> {
    write_file(path, &trace_csv(trace))
}

/// Header row: empty corner then the idler axis; each following row: the
/// signal detuning then `|φ|²` along the idler axis. Detunings in rad/ps.
pub fn jsi_csv(jsa: &Jsa64) -> String {
    let axis = jsa.grid().axis();
    let intensity = jsa.intensity();
    let n = axis.len();
    let mut out = String::from("nu_s\\nu_i");
    for nu in axis {
        out.push(',');
        out.push_str(&fmt_f64(*nu));
    }
    out.push('\n');
    for (j, nu_s) in axis.iter().enumerate() {
        out.push_str(&fmt_f64(*nu_s));
        for v in &intensity[j * n..(j + 1) * n] {
            out.push(',');
            out.push_str(&fmt_f64(*v));
        }
        out.push('\n');
    }
    out
}

pub fn emit_jsi_csv(jsa: &Jsa64, path: &Path) -> CliResult<()> {
    write_file(path, &jsi_csv(jsa))
}

/// Parsed joint-intensity CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct JsiTable {
    pub idler_axis: Vec<f64>,
    pub signal_axis: Vec<f64>,
    /// Row-major, rows along the signal axis.
    pub intensity: Vec<Vec<f64>>,
}

pub fn parse_jsi_csv(text: &str) -> Result<JsiTable, String> {
    let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("{s:?}: {e}"));
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty file")?;
    let idler_axis = header
        .split(',')
        .skip(1)
        .map(parse)
        .collect::<Result<Vec<_>, _>>()?;
    let mut signal_axis = Vec::new();
    let mut intensity = Vec::new();
    for (k, line) in lines.enumerate() {
        let mut cells = line.split(',');
        signal_axis.push(parse(cells.next().unwrap_or_default())?);
        let row = cells.map(parse).collect::<Result<Vec<_>, _>>()?;
        if row.len() != idler_axis.len() {
            return Err(format!(
                "row {k} has {} cells, expected {}",
                row.len(),
                idler_axis.len()
            ));
        }
        intensity.push(row);
    }
    Ok(JsiTable {
        idler_axis,
        signal_axis,
        intensity,
    })
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#e6a700", "#2ca02c", "#9467bd", "#8c564b",
];
const DASHES: [&str; 6] = ["", "6 4", "8 3 2 3", "2 3", "10 4", "4 2"];

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Rounds a raw tick interval up to 1, 2 or 5 × 10ᵏ.
fn nice_step(raw: f64) -> f64 {
    let mag = 10f64.powf(raw.log10().floor());
    let r = raw / mag;
    let m = if r <= 1.0 {
        1.0
    } else if r <= 2.0 {
        2.0
    } else if r <= 5.0 {
        5.0
    } else {
        10.0
    };
    m * mag
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = nice_step((hi - lo) / 5.0);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

/// Self-contained SVG with one polyline per trace (rates divided by each
/// trace's baseline) and a legend from the trace labels.
pub fn plot_svg(traces: &[Trace64], title: &str) -> CliResult<String> {
    let first = traces
        .first()
        .ok_or_else(|| CliError::validation("traces", "at least one trace is required"))?;
    if let Some(k) = traces.iter().position(|t| t.delays() != first.delays()) {
        return Err(CliError::validation(
            format!("traces[{k}]"),
            "delay axis differs from the first trace",
        ));
    }
    let (width, height) = (720.0, 440.0);
    let (left, right, top, bottom) = (70.0, 20.0, 40.0, 55.0);
    let (pw, ph) = (width - left - right, height - top - bottom);

    let delays = first.delays().values();
    let (x_lo, x_hi) = (delays[0], delays[delays.len() - 1]);
    let series: Vec<Vec<f64>> = traces.iter().map(normalized_by_baseline).collect();
    let (mut y_lo, mut y_hi) = series
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &y| {
            (lo.min(y), hi.max(y))
        });
    y_lo = y_lo.min(0.0);
    if y_hi - y_lo < 1e-12 {
        y_hi = y_lo + 1.0;
    }
    let pad = 0.05 * (y_hi - y_lo);
    let (y_lo, y_hi) = (y_lo, y_hi + pad);
    let px = |x: f64| left + (x - x_lo) / (x_hi - x_lo) * pw;
    let py = |y: f64| top + (y_hi - y) / (y_hi - y_lo) * ph;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{width}" height="{height}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        width / 2.0,
        escape_xml(title)
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for t in ticks(x_lo, x_hi) {
        let x = px(t);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{t}</text>"#,
            top + ph,
            top + ph + 5.0,
            top + ph + 18.0
        );
    }
    for t in ticks(y_lo, y_hi) {
        let y = py(t);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{left}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            left - 5.0,
            left - 8.0,
            y + 4.0,
            (t * 1e6).round() / 1e6
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">τ (ps)</text>"#,
        left + pw / 2.0,
        height - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">normalized coincidence rate</text>"#,
        top + ph / 2.0,
        top + ph / 2.0
    );

    for (k, (trace, ys)) in traces.iter().zip(&series).enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let dash = DASHES[k % DASHES.len()];
        let dash_attr = if dash.is_empty() {
            String::new()
        } else {
            format!(r#" stroke-dasharray="{dash}""#)
        };
        let points: Vec<String> = delays
            .iter()
            .zip(ys)
            .map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5"{dash_attr} points="{}"/>"#,
            points.join(" ")
        );
        let ly = top + 16.0 + 18.0 * k as f64;
        let lx = left + pw - 170.0;
        let _ = writeln!(
            svg,
            r#"<g class="legend"><line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{colour}" stroke-width="1.5"{dash_attr}/><text x="{:.2}" y="{:.2}">{}</text></g>"#,
            lx + 30.0,
            lx + 36.0,
            ly + 4.0,
            escape_xml(&trace.label())
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn emit_plot_svg(traces: &[Trace64], title: &str, path: &Path) -> CliResult<()> {
    write_file(path, &plot_svg(traces, title)?)
}
