//! Scenario files: TOML schema, parsing and resolution into core types.
//!
//! Frequencies (filter bandwidths and centres, grid half width, central
//! frequency) are quoted in GHz; `frequency_quote` says whether they are
//! ordinary frequencies `f` (converted with `ω = 2πf`) or already angular
//! (`10⁹ rad/s`). Times are in picoseconds.

use std::fs;
use std::path::{Path, PathBuf};

use biphoton::spectral::{default_half_width, DEFAULT_GRID_POINTS};
use biphoton::{
    Amplitude, BeamSplitter64, Configuration, Delays64, DifferenceWindow, Filter64, FilterKind,
    FrequencyQuote, Grid64, Source64,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuoteConfig {
    #[default]
    Ordinary,
    Angular,
}

impl From<QuoteConfig> for FrequencyQuote {
    fn from(q: QuoteConfig) -> Self {
        match q {
            QuoteConfig::Ordinary => FrequencyQuote::Ordinary,
            QuoteConfig::Angular => FrequencyQuote::Angular,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConfigurationName {
    SinglePort,
    TwoPort,
    Noon,
}

impl From<ConfigurationName> for Configuration {
    fn from(c: ConfigurationName) -> Self {
        match c {
            ConfigurationName::SinglePort => Configuration::SinglePort,
            ConfigurationName::TwoPort => Configuration::TwoPort,
            ConfigurationName::Noon => Configuration::Noon,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BeamSplitterPreset {
    #[serde(rename = "lossless-5050")]
    Lossless5050,
}

/// Either the named preset or explicit `t`, `r` as `[re, im]` pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BeamSplitterConfig {
    Preset(BeamSplitterPreset),
    Coefficients { t: [f64; 2], r: [f64; 2] },
}

impl Default for BeamSplitterConfig {
    fn default() -> Self {
        BeamSplitterConfig::Preset(BeamSplitterPreset::Lossless5050)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceConfig {
    pub pump_duration_ps: f64,
    pub eta_s_l_ps: f64,
    pub eta_i_l_ps: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub central_frequency: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_grid_points")]
    pub points: usize,
    /// Defaults to six times the widest spectral scale.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    /// Flat-top window on `ν_s − ν_i` that keeps the grid from truncating
    /// the phase-matching ridge along its length.
    #[serde(default = "yes")]
    pub difference_window: bool,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            points: DEFAULT_GRID_POINTS,
            half_width: None,
            difference_window: true,
        }
    }
}

fn default_grid_points() -> usize {
    DEFAULT_GRID_POINTS
}

fn yes() -> bool {
    true
}

pub const DEFAULT_DELAY_HALF_SPAN_PS: f64 = 100.0;
pub const DEFAULT_DELAY_POINTS: usize = 201;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DelayConfig {
    #[serde(default = "default_half_span")]
    pub half_span_ps: f64,
    #[serde(default = "default_delay_points")]
    pub points: usize,
}

impl Default for DelayConfig {
    fn default() -> Self {
        Self {
            half_span_ps: DEFAULT_DELAY_HALF_SPAN_PS,
            points: DEFAULT_DELAY_POINTS,
        }
    }
}

fn default_half_span() -> f64 {
    DEFAULT_DELAY_HALF_SPAN_PS
}

fn default_delay_points() -> usize {
    DEFAULT_DELAY_POINTS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    #[serde(default = "default_tail_fraction")]
    pub tail_fraction: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            tail_fraction: biphoton::analysis::DEFAULT_TAIL_FRACTION,
        }
    }
}

fn default_tail_fraction() -> f64 {
    biphoton::analysis::DEFAULT_TAIL_FRACTION
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterKindConfig {
    TwoPhoton,
    SingleSignal,
    SingleIdler,
}

impl From<FilterKindConfig> for FilterKind {
    fn from(k: FilterKindConfig) -> Self {
        match k {
            FilterKindConfig::TwoPhoton => FilterKind::TwoPhoton,
            FilterKindConfig::SingleSignal => FilterKind::SingleSignal,
            FilterKindConfig::SingleIdler => FilterKind::SingleIdler,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterConfig {
    pub kind: FilterKindConfig,
    pub sigma: f64,
    #[serde(default)]
    pub centre: f64,
}

/// A named combination of filters applied together; one trace per
/// (configuration, filter set).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterSetConfig {
    pub name: String,
    #[serde(default)]
    pub filters: Vec<FilterConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComparisonMetric {
    Distance,
    TailRatio,
}

/// Traces are referenced as `"<configuration>/<filter set>"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComparisonConfig {
    pub metric: ComparisonMetric,
    pub a: String,
    pub b: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Output directory, relative to the scenario file.
    #[serde(default = "default_out_dir")]
    pub dir: PathBuf,
    /// Metrics file name inside `dir`.
    #[serde(default = "default_metrics")]
    pub metrics: String,
    /// One SVG panel per configuration.
    #[serde(default)]
    pub svg: bool,
    /// Joint spectral intensity matrix per filter set.
    #[serde(default)]
    pub jsi: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: default_out_dir(),
            metrics: default_metrics(),
            svg: false,
            jsi: false,
        }
    }
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_metrics() -> String {
    "metrics.txt".to_string()
}

fn default_filter_sets() -> Vec<FilterSetConfig> {
    vec![FilterSetConfig {
        name: "none".to_string(),
        filters: vec![],
    }]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub frequency_quote: QuoteConfig,
    pub configurations: Vec<ConfigurationName>,
    #[serde(default)]
    pub beamsplitter: BeamSplitterConfig,
    pub source: SourceConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub delays: DelayConfig,
    #[serde(default)]
    pub analysis: AnalysisConfig,
    #[serde(default = "default_filter_sets")]
    pub filter_sets: Vec<FilterSetConfig>,
    #[serde(default)]
    pub comparisons: Vec<ComparisonConfig>,
    #[serde(default)]
    pub outputs: OutputConfig,
}

impl Scenario {
    pub fn from_toml(text: &str, file: &Path) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Parse {
            file: file.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text, path)
    }

    pub fn to_toml(&self) -> CliResult<String> {
        toml::to_string(self)
            .map_err(|e| CliError::Invariant(format!("scenario serialization: {e}")))
    }
}

/// Command-line overrides applied on top of a scenario.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub grid_points: Option<usize>,
    pub delay_half_span_ps: Option<f64>,
    pub delay_points: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, scenario: &mut Scenario) {
        if let Some(n) = self.grid_points {
            scenario.grid.points = n;
        }
        if let Some(s) = self.delay_half_span_ps {
            scenario.delays.half_span_ps = s;
        }
        if let Some(n) = self.delay_points {
            scenario.delays.points = n;
        }
    }
}

/// A filter set converted to internal units.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterSet {
    pub name: String,
    pub filters: Vec<Filter64>,
}

/// A scenario validated and converted to internal units (rad/ps, ps).
#[derive(Debug, Clone)]
pub struct Resolved {
    pub name: String,
    pub source: Source64,
    pub grid: Grid64,
    pub window: Option<DifferenceWindow<f64>>,
    pub filter_sets: Vec<FilterSet>,
    pub configurations: Vec<Configuration>,
    pub beamsplitter: BeamSplitter64,
    pub delays: Delays64,
    pub tail_fraction: f64,
    pub comparisons: Vec<ComparisonConfig>,
}

/// Splits `"<configuration>/<filter set>"`.
pub fn parse_trace_ref(reference: &str) -> Option<(&str, &str)> {
    reference.split_once('/')
}

fn check_finite(path: &str, value: f64) -> CliResult<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(CliError::validation(
            path,
            format!("must be finite, got {value}"),
        ))
    }
}

pub fn resolve(scenario: &Scenario) -> CliResult<Resolved> {
    let quote = FrequencyQuote::from(scenario.frequency_quote);
    if scenario.configurations.is_empty() {
        return Err(CliError::validation(
            "configurations",
            "at least one configuration is required",
        ));
    }
    let mut configurations: Vec<Configuration> = Vec::new();
    for c in &scenario.configurations {
        let c = Configuration::from(*c);
        if configurations.contains(&c) {
            return Err(CliError::validation(
                "configurations",
                format!("{c} listed twice"),
            ));
        }
        configurations.push(c);
    }

    let s = &scenario.source;
    let mut source = Source64::new(
        check_finite("source.pump_duration_ps", s.pump_duration_ps)?,
        check_finite("source.eta_s_l_ps", s.eta_s_l_ps)?,
        check_finite("source.eta_i_l_ps", s.eta_i_l_ps)?,
    )
    .map_err(|e| CliError::validation("source", e))?;
    if let Some(w0) = s.central_frequency {
        source = source.with_central_frequency(
            quote.to_rad_per_ps(check_finite("source.central_frequency", w0)?),
        );
    }

    if scenario.filter_sets.is_empty() {
        return Err(CliError::validation(
            "filter_sets",
            "at least one filter set is required",
        ));
    }
    let mut filter_sets: Vec<FilterSet> = Vec::new();
    let mut bandwidths = Vec::new();
    for (k, set) in scenario.filter_sets.iter().enumerate() {
        let path = format!("filter_sets[{k}]");
        if set.name.is_empty() || set.name.contains(['/', '\\']) || set.name.trim() != set.name {
            return Err(CliError::validation(
                format!("{path}.name"),
                format!(
                    "{:?} is not a usable name (non-empty, no slashes or surrounding spaces)",
                    set.name
                ),
            ));
        }
        if filter_sets.iter().any(|f| f.name == set.name) {
            return Err(CliError::validation(
                format!("{path}.name"),
                format!("duplicate name {:?}", set.name),
            ));
        }
        let mut filters = Vec::new();
        for (j, f) in set.filters.iter().enumerate() {
            let fpath = format!("{path}.filters[{j}]");
            let sigma = quote.to_rad_per_ps(check_finite(&format!("{fpath}.sigma"), f.sigma)?);
            let centre = quote.to_rad_per_ps(check_finite(&format!("{fpath}.centre"), f.centre)?);
            let spec = Filter64::new(f.kind.into(), sigma, centre)
                .map_err(|e| CliError::validation(&fpath, e))?;
            bandwidths.push(sigma);
            filters.push(spec);
        }
        filter_sets.push(FilterSet {
            name: set.name.clone(),
            filters,
        });
    }

    let half_width = match scenario.grid.half_width {
        Some(w) => quote.to_rad_per_ps(check_finite("grid.half_width", w)?),
        None => default_half_width(&source, &bandwidths),
    };
    let grid = Grid64::new(scenario.grid.points, half_width)
        .map_err(|e| CliError::validation("grid", e))?;
    let window = scenario
        .grid
        .difference_window
        .then(|| DifferenceWindow::for_grid(&grid));

    let beamsplitter = match scenario.beamsplitter {
        BeamSplitterConfig::Preset(BeamSplitterPreset::Lossless5050) => {
            BeamSplitter64::lossless_50_50()
        }
        BeamSplitterConfig::Coefficients { t, r } => {
            for (name, v) in [("t", t), ("r", r)] {
                for x in v {
                    check_finite(&format!("beamsplitter.{name}"), x)?;
                }
            }
            BeamSplitter64::new(Amplitude::new(t[0], t[1]), Amplitude::new(r[0], r[1]))
                .map_err(|e| CliError::validation("beamsplitter", e))?
        }
    };

    let delays = Delays64::new(
        check_finite("delays.half_span_ps", scenario.delays.half_span_ps)?,
        scenario.delays.points,
    )
    .map_err(|e| CliError::validation("delays", e))?;

    let tail_fraction = scenario.analysis.tail_fraction;
    if !(tail_fraction > 0.0 && tail_fraction < 1.0) {
        return Err(CliError::validation(
            "analysis.tail_fraction",
            format!("must lie strictly between 0 and 1, got {tail_fraction}"),
        ));
    }

    for (k, cmp) in scenario.comparisons.iter().enumerate() {
        for (side, reference) in [("a", &cmp.a), ("b", &cmp.b)] {
            let path = format!("comparisons[{k}].{side}");
            let known = parse_trace_ref(reference).is_some_and(|(cfg, set)| {
                configurations.iter().any(|c| c.as_str() == cfg)
                    && filter_sets.iter().any(|f| f.name == set)
            });
            if !known {
                return Err(CliError::validation(
                    path,
                    format!("{reference:?} does not name a computed trace (\"<configuration>/<filter set>\")"),
                ));
            }
        }
    }

    Ok(Resolved {
        name: scenario.name.clone(),
        source,
        grid,
        window,
        filter_sets,
        configurations,
        beamsplitter,
        delays,
        tail_fraction,
        comparisons: scenario.comparisons.clone(),
    })
}
