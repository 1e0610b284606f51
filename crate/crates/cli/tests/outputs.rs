use biphoton::{
    apply_filters, build_jsa, BeamSplitter, Configuration, DelayAxis, FilterSpec, FrequencyGrid,
    Provenance, SourceParams, Trace,
};
use biphoton_cli::output::{jsi_csv, parse_jsi_csv, plot_svg, trace_csv};

fn trace(half_span: f64, label: &str, shift: f64) -> Trace<f64> {
    let d = DelayAxis::new(half_span, 41).unwrap();
    let rates = d
        .values()
        .iter()
        .map(|&t| 1.0 - 0.9 * (-(t - shift).powi(2) / 8.0).exp())
        .collect();
    let p = Provenance {
        filters: label.to_string(),
        ..Provenance::default()
    };
    Trace::new(d, rates, Configuration::TwoPort, p).unwrap()
}

#[test]
fn trivial_grid_gives_four_by_four_table() {
    let grid = FrequencyGrid::new(9, 4.0).unwrap();
    let jsa = build_jsa(&grid, &SourceParams::new(0.3, 0.2, 0.2).unwrap(), true);
    let text = jsi_csv(&jsa);
    assert_eq!(text.lines().count(), 10);
    assert!(text.lines().all(|l| l.split(',').count() == 10));
    let t = parse_jsi_csv(&text).unwrap();
    assert_eq!(t.idler_axis, grid.axis());
    assert_eq!(t.signal_axis, grid.axis());
    // exact round trip of every cell
    let flat: Vec<f64> = t.intensity.concat();
    assert_eq!(flat, jsa.intensity());

    let tiny = FrequencyGrid::new(9, 1.0).unwrap();
    let j = build_jsa(&tiny, &SourceParams::new(1.0, 1.0, 1.0).unwrap(), false);
    let table = parse_jsi_csv(&jsi_csv(&j)).unwrap();
    assert_eq!(table.intensity.len(), 9);
}

#[test]
fn symmetric_spectrum_survives_serialization_as_symmetric() {
    let grid = FrequencyGrid::new(33, 1.5).unwrap();
    let jsa = build_jsa(&grid, &SourceParams::new(5.0, 5.0, 5.0).unwrap(), true);
    let t = parse_jsi_csv(&jsi_csv(&jsa)).unwrap();
    for j in 0..33 {
        for k in 0..33 {
            assert_eq!(t.intensity[j][k], t.intensity[k][j]);
        }
    }
}

#[test]
fn two_photon_notch_is_zero_on_the_anti_diagonal() {
    let grid = FrequencyGrid::new(33, 1.5).unwrap();
    let jsa = build_jsa(&grid, &SourceParams::new(5.0, 5.0, 10.0).unwrap(), true);
    let filtered = apply_filters(&jsa, &[FilterSpec::two_photon(0.12566).unwrap()]).jsa;
    let t = parse_jsi_csv(&jsi_csv(&filtered)).unwrap();
    for j in 0..33 {
        assert_eq!(t.intensity[j][32 - j], 0.0);
    }
    assert!(t.intensity[16][10] > 0.0);
}

#[test]
fn trace_csv_has_full_precision_columns() {
    let d = DelayAxis::new(10.0, 21).unwrap();
    let jsa = build_jsa(
        &FrequencyGrid::new(33, 1.5).unwrap(),
        &SourceParams::new(5.0, 5.0, 5.0).unwrap(),
        true,
    );
    let tr = biphoton::interferometry::scan_trace(
        Configuration::Noon,
        &jsa,
        &d,
        &BeamSplitter::lossless_50_50(),
    )
    .unwrap();
    let text = trace_csv(&tr);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("tau_ps,rate,rate_normalized"));
    let baseline = biphoton::analysis::baseline(tr.rates());
    for (k, line) in lines.enumerate() {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols[0], d.values()[k]);
        assert_eq!(cols[1], tr.rates()[k]);
        assert_eq!(cols[2], tr.rates()[k] / baseline);
    }
}

#[test]
fn one_polyline_per_trace_with_legend() {
    let one = plot_svg(&[trace(10.0, "none", 0.0)], "panel").unwrap();
    assert!(one.starts_with("<svg"));
    assert!(one.trim_end().ends_with("</svg>"));
    assert_eq!(one.matches("<polyline").count(), 1);
    assert!(one.contains("τ (ps)"));
    assert!(one.contains("normalized coincidence rate"));

    let three = plot_svg(
        &[
            trace(10.0, "none", 0.0),
            trace(10.0, "etpa", 1.0),
            trace(10.0, "a<b&c", -1.0),
        ],
        "panel",
    )
    .unwrap();
    assert_eq!(three.matches("<polyline").count(), 3);
    assert_eq!(three.matches(r#"class="legend""#).count(), 3);
    assert!(three.contains("two_port / etpa"));
    assert!(three.contains("a&lt;b&amp;c"));
}

#[test]
fn mismatched_delay_axes_are_rejected() {
    let err = plot_svg(&[trace(10.0, "a", 0.0), trace(12.0, "b", 0.0)], "panel").unwrap_err();
    assert_eq!(err.exit_code(), 1);
    assert!(plot_svg(&[], "panel").is_err());
}
