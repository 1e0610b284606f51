//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;

use biphoton::analysis::{normalized_distance, tail_ratio, trace_metrics};
use biphoton::interferometry::{noon_via_sum_marginal, rate, scan_trace};
use biphoton::oracle::oracle_rate;
use biphoton::spectral::{default_half_width, DEFAULT_GRID_POINTS};
use biphoton::{
    apply_filters, build_jsa_windowed, Amplitude, BeamSplitter, Configuration, DelayAxis,
    DifferenceWindow, FilterSpec, FrequencyGrid, FrequencyQuote, JointAmplitude, SourceParams,
    Trace,
};

const PUMP_DURATION_PS: f64 = 5.0;
const FILTER_SIGMA_GHZ: f64 = 20.0;
const DELAY_HALF_SPAN_PS: f64 = 100.0;
const DELAY_POINTS: usize = 401;

const HOM_NULL_TOL: f64 = 1e-6;
const SINGLE_PORT_PEAK_TOL: f64 = 1e-6;
const COMPLEMENTARITY_TOL: f64 = 1e-9;
const NOON_PEAK_TOL: f64 = 1e-3;
const DIP_SHIFT_PS: f64 = -2.5;
const TRANSPARENCY_TOL: f64 = 1e-9;
const OVERLAP_RATIO_MAX: f64 = 0.2;
const ETPA_DEVIATION_MIN: f64 = 0.05;
const TAIL_RATIO_RANGE: (f64, f64) = (1.5, 2.5);
const ORACLE_TOL: f64 = 1e-10;
const ORACLE_GRID: usize = 33;
const ORACLE_SPOT_GRID: usize = 65;
const ORACLE_DELAYS_PS: [f64; 5] = [-10.0, -2.5, 0.0, 2.5, 10.0];
/// Floor of the relative-error denominator, as a fraction of `Σ|φ|²Δ²`;
/// keeps near-zero rates (HOM null) from turning round-off into failures.
const ORACLE_FLOOR: f64 = 1e-6;
const LOSSY_EFFICIENCY: f64 = 0.5;
const LOSSY_TOL: f64 = 1e-12;
const MARGINAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Source {
    Symmetric,
    Asymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Filters {
    None,
    Etpa,
    Single,
    SignalIdler,
}

const SOURCES: [Source; 2] = [Source::Symmetric, Source::Asymmetric];
const FILTER_SETS: [Filters; 4] = [
    Filters::None,
    Filters::Etpa,
    Filters::Single,
    Filters::SignalIdler,
];

fn sigma() -> f64 {
    FrequencyQuote::Ordinary.to_rad_per_ps(FILTER_SIGMA_GHZ)
}

fn source(which: Source) -> SourceParams<f64> {
    let eta_i = match which {
        Source::Symmetric => PUMP_DURATION_PS,
        Source::Asymmetric => 2.0 * PUMP_DURATION_PS,
    };
    SourceParams::new(PUMP_DURATION_PS, PUMP_DURATION_PS, eta_i).unwrap()
}

fn filter_specs(set: Filters) -> Vec<FilterSpec<f64>> {
    let s = sigma();
    match set {
        Filters::None => vec![],
        Filters::Etpa => vec![FilterSpec::two_photon(s).unwrap()],
        Filters::Single => vec![FilterSpec::single_signal(s, 0.0).unwrap()],
        Filters::SignalIdler => vec![
            FilterSpec::single_signal(s, 0.0).unwrap(),
            FilterSpec::single_idler(s, 0.0).unwrap(),
        ],
    }
}

fn jsa(which: Source, set: Filters, points: usize) -> JointAmplitude<f64> {
    let src = source(which);
    let grid = FrequencyGrid::new(points, default_half_width(&src, &[sigma()])).unwrap();
    let window = DifferenceWindow::for_grid(&grid);
    let base = build_jsa_windowed(&grid, &src, Some(&window), true);
    apply_filters(&base, &filter_specs(set)).jsa
}

struct Fixture {
    delays: DelayAxis<f64>,
    jsas: BTreeMap<(Source, Filters), JointAmplitude<f64>>,
    traces: BTreeMap<(Source, Filters, Configuration), Trace<f64>>,
}

impl Fixture {
    fn build() -> Self {
        let delays = DelayAxis::new(DELAY_HALF_SPAN_PS, DELAY_POINTS).unwrap();
        let bs = BeamSplitter::lossless_50_50();
        let mut jsas = BTreeMap::new();
        let mut traces = BTreeMap::new();
        for which in SOURCES {
            for set in FILTER_SETS {
                let j = jsa(which, set, DEFAULT_GRID_POINTS);
                for cfg in Configuration::ALL {
                    traces.insert(
                        (which, set, cfg),
                        scan_trace(cfg, &j, &delays, &bs).unwrap(),
                    );
                }
                jsas.insert((which, set), j);
            }
        }
        Self {
            delays,
            jsas,
            traces,
        }
    }

    fn trace(&self, which: Source, set: Filters, cfg: Configuration) -> &Trace<f64> {
        &self.traces[&(which, set, cfg)]
    }

    fn centre(&self, which: Source, set: Filters, cfg: Configuration) -> (f64, f64) {
        let tr = self.trace(which, set, cfg);
        let m = trace_metrics(tr).unwrap();
        (tr.rates()[tr.rates().len() / 2], m.baseline())
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn hom_nullity(fx: &Fixture) -> Outcome {
    let (r0, base) = fx.centre(Source::Symmetric, Filters::None, Configuration::TwoPort);
    let ratio = r0 / base;
    outcome(
        ratio <= HOM_NULL_TOL,
        format!("R-(0)/baseline = {ratio:.3e} (<= {HOM_NULL_TOL:e})"),
    )
}

fn single_port_peak(fx: &Fixture) -> Outcome {
    let (r0, base) = fx.centre(Source::Symmetric, Filters::None, Configuration::SinglePort);
    let ratio = r0 / base;
    let plus = fx
        .trace(Source::Symmetric, Filters::None, Configuration::SinglePort)
        .rates();
    let minus = fx
        .trace(Source::Symmetric, Filters::None, Configuration::TwoPort)
        .rates();
    let sums: Vec<f64> = plus.iter().zip(minus).map(|(a, b)| a + b).collect();
    let (lo, hi) = sums
        .iter()
        .fold((f64::MAX, f64::MIN), |(lo, hi), &s| (lo.min(s), hi.max(s)));
    let spread = (hi - lo) / hi;
    outcome(
        (ratio - 2.0).abs() <= SINGLE_PORT_PEAK_TOL && spread <= COMPLEMENTARITY_TOL,
        format!(
            "R+(0)/baseline = {ratio:.12} (2 ± {SINGLE_PORT_PEAK_TOL:e}); R+ + R- spread = {spread:.3e} (<= {COMPLEMENTARITY_TOL:e})"
        ),
    )
}

fn noon_peak(fx: &Fixture) -> Outcome {
    let (r0, base) = fx.centre(Source::Symmetric, Filters::None, Configuration::Noon);
    let ratio = r0 / base;
    outcome(
        (ratio - 2.0).abs() <= NOON_PEAK_TOL,
        format!("R_N(0)/baseline = {ratio:.9} (2 ± {NOON_PEAK_TOL:e})"),
    )
}

fn dip_shift(fx: &Fixture) -> Outcome {
    let tr = fx.trace(Source::Asymmetric, Filters::None, Configuration::TwoPort);
    let m = trace_metrics(tr).unwrap().into_feature().unwrap();
    let step = fx.delays.step();
    outcome(
        (m.extremum_delay - DIP_SHIFT_PS).abs() <= step,
        format!(
            "dip centre = {:.4} ps (expected {DIP_SHIFT_PS} ± {step} ps)",
            m.extremum_delay
        ),
    )
}

fn transparency(fx: &Fixture) -> Outcome {
    let mut worst: f64 = 0.0;
    for cfg in [Configuration::SinglePort, Configuration::TwoPort] {
        let d = normalized_distance(
            fx.trace(Source::Symmetric, Filters::None, cfg),
            fx.trace(Source::Symmetric, Filters::Etpa, cfg),
        )
        .unwrap();
        worst = worst.max(d);
    }
    outcome(
        worst <= TRANSPARENCY_TOL,
        format!(
            "max normalized R± difference, eTPA vs none = {worst:.3e} (<= {TRANSPARENCY_TOL:e})"
        ),
    )
}

fn witness_separation(fx: &Fixture) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for which in SOURCES {
        let none = fx.trace(which, Filters::None, Configuration::Noon);
        let single =
            normalized_distance(none, fx.trace(which, Filters::Single, Configuration::Noon))
                .unwrap();
        let etpa =
            normalized_distance(none, fx.trace(which, Filters::Etpa, Configuration::Noon)).unwrap();
        pass &= single <= OVERLAP_RATIO_MAX * etpa && etpa >= ETPA_DEVIATION_MIN;
        parts.push(format!(
            "{which:?}: D(single) = {single:.4}, D(eTPA) = {etpa:.4}"
        ));
    }
    outcome(
        pass,
        format!(
            "{} (need D(single) <= {OVERLAP_RATIO_MAX}·D(eTPA), D(eTPA) >= {ETPA_DEVIATION_MIN})",
            parts.join("; ")
        ),
    )
}

fn tail_broadening(fx: &Fixture) -> Outcome {
    let ratio = tail_ratio(
        fx.trace(Source::Asymmetric, Filters::Etpa, Configuration::Noon),
        fx.trace(
            Source::Asymmetric,
            Filters::Single,
            Configuration::SinglePort,
        ),
    )
    .unwrap();
    let (lo, hi) = TAIL_RATIO_RANGE;
    outcome(
        (lo..=hi).contains(&ratio),
        format!(
            "tail ratio N00N eTPA / single-port one-photon loss = {ratio:.4} (in [{lo}, {hi}])"
        ),
    )
}

fn oracle_error(
    cfg: Configuration,
    j: &JointAmplitude<f64>,
    tau: f64,
    bs: &BeamSplitter<f64>,
) -> f64 {
    let closed = rate(cfg, j, tau, bs);
    let brute = oracle_rate(cfg, j, tau, bs).unwrap();
    (brute - closed).abs() / closed.max(ORACLE_FLOOR * j.pair_weight())
}

fn oracle_equivalence() -> Outcome {
    let splitters = [
        BeamSplitter::lossless_50_50(),
        BeamSplitter::new(Amplitude::new(0.3, 0.6), Amplitude::new(-0.5, 0.2)).unwrap(),
    ];
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for which in SOURCES {
        for set in FILTER_SETS {
            let j = jsa(which, set, ORACLE_GRID);
            for cfg in Configuration::ALL {
                for bs in &splitters {
                    for tau in ORACLE_DELAYS_PS {
                        worst = worst.max(oracle_error(cfg, &j, tau, bs));
                        checks += 1;
                    }
                }
            }
        }
    }
    let spot = jsa(Source::Asymmetric, Filters::SignalIdler, ORACLE_SPOT_GRID);
    for cfg in Configuration::ALL {
        worst = worst.max(oracle_error(cfg, &spot, 2.5, &splitters[0]));
        checks += 1;
    }
    outcome(
        worst <= ORACLE_TOL,
        format!("{checks} oracle checks, max relative error = {worst:.3e} (<= {ORACLE_TOL:e})"),
    )
}

fn lossy_scaling(fx: &Fixture) -> Outcome {
    let lossless = BeamSplitter::lossless_50_50();
    let lossy = lossless.attenuated(LOSSY_EFFICIENCY).unwrap();
    let factor = lossy.coincidence_prefactor() / 0.25;
    let mut worst: f64 = 0.0;
    for ((which, set), j) in &fx.jsas {
        for cfg in Configuration::ALL {
            let scaled = scan_trace(cfg, j, &fx.delays, &lossy).unwrap();
            let reference = fx.trace(*which, *set, cfg);
            for (a, b) in scaled.rates().iter().zip(reference.rates()) {
                let expected = b * factor;
                let scale = expected
                    .max(reference.rates().iter().cloned().fold(0.0, f64::max) * f64::EPSILON);
                worst = worst.max((a - expected).abs() / scale);
            }
        }
    }
    outcome(
        worst <= LOSSY_TOL,
        format!("factor {factor}, max relative deviation = {worst:.3e} (<= {LOSSY_TOL:e})"),
    )
}

fn marginal_law(fx: &Fixture) -> Outcome {
    let bs = BeamSplitter::lossless_50_50();
    let mut worst: f64 = 0.0;
    for ((which, set), j) in &fx.jsas {
        let via = noon_via_sum_marginal(j, &fx.delays, &bs).unwrap();
        let direct = fx.trace(*which, *set, Configuration::Noon);
        for (a, b) in via.rates().iter().zip(direct.rates()) {
            worst = worst.max((a - b).abs() / b);
        }
    }
    outcome(
        worst <= MARGINAL_TOL,
        format!("max point-wise relative difference = {worst:.3e} (<= {MARGINAL_TOL:e})"),
    )
}

fn main() -> ExitCode {
    let fx = Fixture::build();
    let results = [
        ("1 HOM dip nullity", hom_nullity(&fx)),
        ("2 single-port peak ratio", single_port_peak(&fx)),
        ("3 N00N peak ratio", noon_peak(&fx)),
        ("4 dip-shift law", dip_shift(&fx)),
        ("5 sum-frequency filter transparency", transparency(&fx)),
        ("6 N00N witness separation", witness_separation(&fx)),
        ("7 tail broadening", tail_broadening(&fx)),
        ("8 oracle equivalence", oracle_equivalence()),
        ("9 lossy beamsplitter scaling", lossy_scaling(&fx)),
        ("10 N00N marginal law", marginal_law(&fx)),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!(
            "criterion {name}: {} — {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
