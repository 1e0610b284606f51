//! Source → filters → interferometer → analysis, and the oracle check.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use biphoton::analysis::{normalized_distance, trace_metrics_with, TraceSummary};
use biphoton::interferometry::{rate, scan_trace};
use biphoton::oracle::{oracle_rate, MAX_ORACLE_MODES};
use biphoton::{
    apply_filters, build_jsa_windowed, Configuration, Grid64, Jsa64, Provenance, Trace64,
};

use crate::error::{CliError, CliResult};
use crate::output::{emit_jsi_csv, emit_plot_svg, emit_trace_csv, fmt_f64, write_file};
use crate::scenario::{parse_trace_ref, resolve, ComparisonMetric, Overrides, Resolved, Scenario};

#[derive(Debug, Clone)]
pub struct FilteredSpectrum {
    pub set: String,
    pub jsa: Jsa64,
    pub survival: f64,
}

#[derive(Debug, Clone)]
pub struct NamedTrace {
    pub configuration: Configuration,
    pub set: String,
    pub trace: Trace64,
}

impl NamedTrace {
    /// `"<configuration>/<filter set>"`.
    pub fn key(&self) -> String {
        format!("{}/{}", self.configuration, self.set)
    }

    pub fn file_stem(&self) -> String {
        format!("{}__{}", self.configuration, self.set)
    }
}

#[derive(Debug, Clone)]
pub struct Computed {
    pub resolved: Resolved,
    pub spectra: Vec<FilteredSpectrum>,
    pub traces: Vec<NamedTrace>,
}

impl Computed {
    pub fn trace(&self, key: &str) -> Option<&NamedTrace> {
        let (cfg, set) = parse_trace_ref(key)?;
        self.traces
            .iter()
            .find(|t| t.configuration.as_str() == cfg && t.set == set)
    }
}

fn spectra_on(resolved: &Resolved, grid: &Grid64) -> Vec<FilteredSpectrum> {
    let window = resolved
        .window
        .is_some()
        .then(|| biphoton::DifferenceWindow::for_grid(grid));
    let base = build_jsa_windowed(grid, &resolved.source, window.as_ref(), true);
    resolved
        .filter_sets
        .iter()
        .map(|set| {
            let out = apply_filters(&base, &set.filters);
            FilteredSpectrum {
                set: set.name.clone(),
                jsa: out.jsa,
                survival: out.survival,
            }
        })
        .collect()
}

fn source_label(resolved: &Resolved) -> String {
    let s = &resolved.source;
    format!(
        "Tp={} ps, eta_s L={} ps, eta_i L={} ps",
        s.pump_duration(),
        s.eta_s_l(),
        s.eta_i_l()
    )
}

pub fn compute(resolved: Resolved) -> CliResult<Computed> {
    let spectra = spectra_on(&resolved, &resolved.grid);
    let mut traces = Vec::new();
    for spectrum in &spectra {
        for &cfg in &resolved.configurations {
            let trace = scan_trace(cfg, &spectrum.jsa, &resolved.delays, &resolved.beamsplitter)
                .map_err(|e| CliError::Invariant(format!("{cfg}/{}: {e}", spectrum.set)))?;
            let provenance = Provenance {
                source: source_label(&resolved),
                filters: spectrum.set.clone(),
                beamsplitter: resolved.beamsplitter.to_string(),
            };
            traces.push(NamedTrace {
                configuration: cfg,
                set: spectrum.set.clone(),
                trace: trace.with_provenance(provenance),
            });
        }
    }
    Ok(Computed {
        resolved,
        spectra,
        traces,
    })
}

fn summary(trace: &Trace64, tail_fraction: f64) -> CliResult<TraceSummary<f64>> {
    trace_metrics_with(trace, tail_fraction)
        .map_err(|e| CliError::Invariant(format!("trace analysis: {e}")))
}

/// Key-value metrics text: run parameters, per-trace metrics, comparisons.
pub fn metrics_text(computed: &Computed) -> CliResult<String> {
    let r = &computed.resolved;
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    kv("scenario", r.name.clone());
    kv("source.pump_duration_ps", fmt_f64(r.source.pump_duration()));
    kv("source.eta_s_l_ps", fmt_f64(r.source.eta_s_l()));
    kv("source.eta_i_l_ps", fmt_f64(r.source.eta_i_l()));
    kv("grid.points", r.grid.len().to_string());
    kv("grid.half_width_rad_per_ps", fmt_f64(r.grid.half_width()));
    kv("grid.difference_window", r.window.is_some().to_string());
    kv("delays.points", r.delays.len().to_string());
    kv("delays.step_ps", fmt_f64(r.delays.step()));
    kv("beamsplitter", r.beamsplitter.to_string());
    kv("analysis.tail_fraction", fmt_f64(r.tail_fraction));
    for s in &computed.spectra {
        kv(
            &format!("filter_set.{}.survival", s.set),
            fmt_f64(s.survival),
        );
    }
    let mut summaries = Vec::new();
    for t in &computed.traces {
        let key = t.key();
        let s = summary(&t.trace, r.tail_fraction)?;
        match &s {
            TraceSummary::Featureless { baseline } => {
                kv(&format!("trace.{key}.kind"), "featureless".into());
                kv(&format!("trace.{key}.baseline"), fmt_f64(*baseline));
            }
            TraceSummary::Feature(m) => {
                let kind = match m.kind {
                    biphoton::analysis::FeatureKind::Peak => "peak",
                    biphoton::analysis::FeatureKind::Dip => "dip",
                };
                kv(&format!("trace.{key}.kind"), kind.into());
                kv(&format!("trace.{key}.baseline"), fmt_f64(m.baseline));
                kv(
                    &format!("trace.{key}.extremum_value"),
                    fmt_f64(m.extremum_value),
                );
                kv(
                    &format!("trace.{key}.extremum_delay_ps"),
                    fmt_f64(m.extremum_delay),
                );
                kv(&format!("trace.{key}.visibility"), fmt_f64(m.visibility));
                kv(&format!("trace.{key}.width_half_ps"), fmt_f64(m.width_half));
                kv(&format!("trace.{key}.tail_width_ps"), fmt_f64(m.tail_width));
                kv(
                    &format!("trace.{key}.well_resolved"),
                    m.well_resolved.to_string(),
                );
            }
        }
        summaries.push((key, s));
    }
    let lookup = |key: &str| {
        summaries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, s)| *s)
            .ok_or_else(|| CliError::Invariant(format!("comparison refers to missing trace {key}")))
    };
    for c in &r.comparisons {
        let (a, b) = (
            computed
                .trace(&c.a)
                .ok_or_else(|| CliError::Invariant(format!("missing trace {}", c.a)))?,
            computed
                .trace(&c.b)
                .ok_or_else(|| CliError::Invariant(format!("missing trace {}", c.b)))?,
        );
        let value = match c.metric {
            ComparisonMetric::Distance => match normalized_distance(&a.trace, &b.trace) {
                Ok(d) => fmt_f64(d),
                Err(biphoton::Error::Featureless) => "featureless".into(),
                Err(e) => return Err(CliError::Invariant(e.to_string())),
            },
            ComparisonMetric::TailRatio => match (lookup(&c.a)?, lookup(&c.b)?) {
                (TraceSummary::Feature(ma), TraceSummary::Feature(mb)) => {
                    fmt_f64(ma.tail_width / mb.tail_width)
                }
                _ => "featureless".into(),
            },
        };
        let name = match c.metric {
            ComparisonMetric::Distance => "distance",
            ComparisonMetric::TailRatio => "tail_ratio",
        };
        kv(&format!("{name}[{}, {}]", c.a, c.b), value);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub computed: Computed,
    pub written: Vec<PathBuf>,
}

/// Runs a scenario and writes its artifacts below `base_dir/outputs.dir`.
pub fn run_scenario(
    scenario: &Scenario,
    overrides: &Overrides,
    base_dir: &Path,
) -> CliResult<RunSummary> {
    let mut scenario = scenario.clone();
    overrides.apply(&mut scenario);
    let computed = compute(resolve(&scenario)?)?;
    let out_dir: PathBuf = base_dir
        .join(&scenario.outputs.dir)
        .components()
        .filter(|c| !matches!(c, std::path::Component::CurDir))
        .collect();
    let mut written = Vec::new();

    for t in &computed.traces {
        let path = out_dir.join(format!("{}.csv", t.file_stem()));
        emit_trace_csv(&t.trace, &path)?;
        written.push(path);
    }
    if scenario.outputs.jsi {
        for s in &computed.spectra {
            let path = out_dir.join(format!("jsi__{}.csv", s.set));
            emit_jsi_csv(&s.jsa, &path)?;
            written.push(path);
        }
    }
    if scenario.outputs.svg {
        for &cfg in &computed.resolved.configurations {
            let traces: Vec<Trace64> = computed
                .traces
                .iter()
                .filter(|t| t.configuration == cfg)
                .map(|t| t.trace.clone())
                .collect();
            let path = out_dir.join(format!("{cfg}.svg"));
            emit_plot_svg(
                &traces,
                &format!("{} — {cfg}", computed.resolved.name),
                &path,
            )?;
            written.push(path);
        }
    }
    let path = out_dir.join(&scenario.outputs.metrics);
    write_file(&path, &metrics_text(&computed)?)?;
    written.push(path);
    Ok(RunSummary { computed, written })
}

pub const ORACLE_GRID_POINTS: usize = 33;
pub const ORACLE_DELAYS_PS: [f64; 5] = [-10.0, -2.5, 0.0, 2.5, 10.0];
pub const ORACLE_TOLERANCE: f64 = 1e-10;
/// Relative-error denominator floor, as a fraction of `Σ|φ|²Δ²`.
pub const ORACLE_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct OracleReport {
    pub grid_points: usize,
    pub checks: usize,
    pub worst_relative_error: f64,
    pub worst_case: String,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.worst_relative_error <= ORACLE_TOLERANCE
    }
}

/// Compares closed-form rates with the Fock-space oracle for every
/// configuration and filter set of the scenario on a coarse grid.
pub fn oracle_check(scenario: &Scenario, grid_points: Option<usize>) -> CliResult<OracleReport> {
    let mut scenario = scenario.clone();
    let n = grid_points.unwrap_or(ORACLE_GRID_POINTS);
    if n > MAX_ORACLE_MODES {
        return Err(CliError::validation(
            "grid.points",
            format!("oracle check supports at most {MAX_ORACLE_MODES} points, got {n}"),
        ));
    }
    scenario.grid.points = n;
    let resolved = resolve(&scenario)?;
    let mut report = OracleReport {
        grid_points: n,
        checks: 0,
        worst_relative_error: 0.0,
        worst_case: String::new(),
    };
    for spectrum in spectra_on(&resolved, &resolved.grid) {
        let floor = ORACLE_FLOOR * spectrum.jsa.pair_weight();
        for &cfg in &resolved.configurations {
            for tau in ORACLE_DELAYS_PS {
                let closed = rate(cfg, &spectrum.jsa, tau, &resolved.beamsplitter);
                let brute = oracle_rate(cfg, &spectrum.jsa, tau, &resolved.beamsplitter)
                    .map_err(|e| CliError::validation("grid.points", e))?;
                let err = (brute - closed).abs() / closed.max(floor).max(f64::MIN_POSITIVE);
                report.checks += 1;
                if err >= report.worst_relative_error {
                    report.worst_relative_error = err;
                    report.worst_case = format!("{cfg}/{} at tau={tau} ps", spectrum.set);
                }
            }
        }
    }
    Ok(report)
}
