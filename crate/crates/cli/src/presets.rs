//! Built-in scenarios: filtered joint spectra (`fig2a`–`fig2d`) and the
//! six-panel trace comparison for symmetric and asymmetric sources
//! (`fig3-symmetric`, `fig3-asymmetric`). All use `T_p = 5 ps` and 20 GHz
//! filters centred on the degenerate frequency.

use std::path::PathBuf;

use crate::scenario::{
    AnalysisConfig, BeamSplitterConfig, ComparisonConfig, ComparisonMetric, ConfigurationName,
    DelayConfig, FilterConfig, FilterKindConfig, FilterSetConfig, GridConfig, OutputConfig,
    QuoteConfig, Scenario, SourceConfig,
};

pub const PRESET_NAMES: [&str; 6] = [
    "fig2a",
    "fig2b",
    "fig2c",
    "fig2d",
    "fig3-symmetric",
    "fig3-asymmetric",
];

const PUMP_DURATION_PS: f64 = 5.0;
const SIGMA_GHZ: f64 = 20.0;

fn source(asymmetric: bool) -> SourceConfig {
    SourceConfig {
        pump_duration_ps: PUMP_DURATION_PS,
        eta_s_l_ps: PUMP_DURATION_PS,
        eta_i_l_ps: if asymmetric {
            2.0 * PUMP_DURATION_PS
        } else {
            PUMP_DURATION_PS
        },
        central_frequency: None,
    }
}

fn filter(kind: FilterKindConfig) -> FilterConfig {
    FilterConfig {
        kind,
        sigma: SIGMA_GHZ,
        centre: 0.0,
    }
}

fn set(name: &str, kinds: &[FilterKindConfig]) -> FilterSetConfig {
    FilterSetConfig {
        name: name.to_string(),
        filters: kinds.iter().map(|&k| filter(k)).collect(),
    }
}

fn compare(metric: ComparisonMetric, a: &str, b: &str) -> ComparisonConfig {
    ComparisonConfig {
        metric,
        a: a.to_string(),
        b: b.to_string(),
    }
}

fn base(name: &str, asymmetric: bool, filter_sets: Vec<FilterSetConfig>) -> Scenario {
    Scenario {
        name: name.to_string(),
        frequency_quote: QuoteConfig::Ordinary,
        configurations: vec![
            ConfigurationName::SinglePort,
            ConfigurationName::TwoPort,
            ConfigurationName::Noon,
        ],
        beamsplitter: BeamSplitterConfig::default(),
        source: source(asymmetric),
        grid: GridConfig::default(),
        delays: DelayConfig {
            half_span_ps: 100.0,
            points: 401,
        },
        analysis: AnalysisConfig::default(),
        filter_sets,
        comparisons: vec![],
        outputs: OutputConfig {
            dir: PathBuf::from("."),
            metrics: "metrics.txt".to_string(),
            svg: true,
            jsi: false,
        },
    }
}

fn jsi_preset(name: &str, asymmetric: bool, kinds: &[FilterKindConfig]) -> Scenario {
    let mut s = base(name, asymmetric, vec![set("filtered", kinds)]);
    s.outputs.jsi = true;
    s
}

fn trace_preset(name: &str, asymmetric: bool) -> Scenario {
    use ComparisonMetric::{Distance, TailRatio};
    use FilterKindConfig::{SingleSignal, TwoPhoton};
    let mut s = base(
        name,
        asymmetric,
        vec![
            set("none", &[]),
            set("etpa", &[TwoPhoton]),
            set("single", &[SingleSignal]),
        ],
    );
    s.comparisons = vec![
        compare(Distance, "single_port/none", "single_port/etpa"),
        compare(Distance, "single_port/none", "single_port/single"),
        compare(Distance, "two_port/none", "two_port/etpa"),
        compare(Distance, "two_port/none", "two_port/single"),
        compare(Distance, "noon/none", "noon/single"),
        compare(Distance, "noon/none", "noon/etpa"),
        compare(TailRatio, "noon/etpa", "single_port/single"),
        compare(TailRatio, "noon/etpa", "two_port/single"),
    ];
    s
}

pub fn preset(name: &str) -> Option<Scenario> {
    use FilterKindConfig::{SingleIdler, SingleSignal, TwoPhoton};
    Some(match name {
        "fig2a" => jsi_preset(name, false, &[TwoPhoton]),
        "fig2b" => jsi_preset(name, false, &[SingleSignal]),
        "fig2c" => jsi_preset(name, true, &[SingleSignal, SingleIdler]),
        "fig2d" => jsi_preset(name, true, &[TwoPhoton, SingleSignal, SingleIdler]),
        "fig3-symmetric" => trace_preset(name, false),
        "fig3-asymmetric" => trace_preset(name, true),
        _ => return None,
    })
}
