//! Feature extraction from coincidence traces: baseline, extremum,
//! visibility, widths and shape comparisons.

use crate::error::{Error, Result};
use crate::interferometry::Trace;
use crate::scalar::Real;

/// Fraction of the feature height at which the tail width is measured.
pub const DEFAULT_TAIL_FRACTION: f64 = 0.1;

/// Traces shorter than this are rejected.
pub const MIN_TRACE_SAMPLES: usize = 21;

/// Share of samples on each side used for the baseline.
const BASELINE_SHARE: f64 = 0.1;

/// Feature heights below this fraction of the trace scale count as flat.
const FEATURELESS_RELATIVE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureKind {
    Peak,
    Dip,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceMetrics<T> {
    /// Median of the outer samples on both sides.
    pub baseline: T,
    pub kind: FeatureKind,
    pub extremum_value: T,
    pub extremum_delay: T,
    pub visibility: T,
    /// Full width at half of the extremum-minus-baseline height.
    pub width_half: T,
    /// Full width at `tail_fraction` of the height.
    pub tail_width: T,
    pub tail_fraction: T,
    /// Whether the delay span covers at least four half-height widths.
    pub well_resolved: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraceSummary<T> {
    /// No extremum distinguishable from the baseline.
    Featureless {
        baseline: T,
    },
    Feature(TraceMetrics<T>),
}

impl<T: Copy> TraceSummary<T> {
    pub fn baseline(&self) -> T {
        match self {
            TraceSummary::Featureless { baseline } => *baseline,
            TraceSummary::Feature(m) => m.baseline,
        }
    }

    pub fn feature(&self) -> Option<&TraceMetrics<T>> {
        match self {
            TraceSummary::Featureless { .. } => None,
            TraceSummary::Feature(m) => Some(m),
        }
    }

    pub fn into_feature(self) -> Result<TraceMetrics<T>> {
        match self {
            TraceSummary::Featureless { .. } => Err(Error::Featureless),
            TraceSummary::Feature(m) => Ok(m),
        }
    }
}

fn median<T: Real>(mut values: Vec<T>) -> T {
    values.sort_by(|a, b| a.partial_cmp(b).expect("rates are finite"));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / T::lit(2.0)
    }
}

/// Median of the outer 10% of samples on each side (at least one per side).
pub fn baseline<T: Real>(rates: &[T]) -> T {
    let n = rates.len();
    let k = ((n as f64 * BASELINE_SHARE).floor() as usize)
        .max(1)
        .min(n / 2)
        .max(1);
    let outer = rates[..k].iter().chain(&rates[n - k..]).copied().collect();
    median(outer)
}

/// Walks outward from `start` until the normalized height drops below
/// `level`; returns the linearly interpolated crossing delay.
fn crossing<T: Real>(delays: &[T], heights: &[T], start: usize, level: T, forward: bool) -> T {
    let n = heights.len();
    let mut k = start;
    loop {
        let next = if forward {
            if k + 1 >= n {
                return delays[k];
            }
            k + 1
        } else {
            if k == 0 {
                return delays[0];
            }
            k - 1
        };
        if heights[next] < level {
            let (h0, h1) = (heights[k], heights[next]);
            let frac = (h0 - level) / (h0 - h1);
            return delays[k] + (delays[next] - delays[k]) * frac;
        }
        k = next;
    }
}

pub fn trace_metrics<T: Real>(trace: &Trace<T>) -> Result<TraceSummary<T>> {
    trace_metrics_with(trace, T::lit(DEFAULT_TAIL_FRACTION))
}

/// Baseline, refined extremum, visibility and widths of a trace.
pub fn trace_metrics_with<T: Real>(trace: &Trace<T>, tail_fraction: T) -> Result<TraceSummary<T>> {
    let rates = trace.rates();
    let delays = trace.delays().values();
    let n = rates.len();
    if n < MIN_TRACE_SAMPLES {
        return Err(Error::TraceTooShort(n));
    }
    let base = baseline(rates);

    let (mut idx, mut height) = (0, T::zero());
    for (k, &r) in rates.iter().enumerate() {
        if (r - base).abs() > height.abs() {
            idx = k;
            height = r - base;
        }
    }
    let scale = rates
        .iter()
        .fold(base.abs(), |acc, r| acc.max(r.abs()))
        .max(T::min_positive_value());
    if height.abs() <= T::lit(FEATURELESS_RELATIVE) * scale {
        return Ok(TraceSummary::Featureless { baseline: base });
    }
    let kind = if height > T::zero() {
        FeatureKind::Peak
    } else {
        FeatureKind::Dip
    };

    // Three-point parabola through the grid extremum.
    let step = trace.delays().step();
    let (mut ext_delay, mut ext_value) = (delays[idx], rates[idx]);
    if idx > 0 && idx + 1 < n {
        let (y0, y1, y2) = (rates[idx - 1], rates[idx], rates[idx + 1]);
        let curvature = y0 - T::lit(2.0) * y1 + y2;
        if curvature != T::zero() {
            let half = T::lit(0.5);
            let offset = (half * (y0 - y2) / curvature).max(-half).min(half);
            ext_delay = delays[idx] + offset * step;
            ext_value = y1 - T::lit(0.25) * (y0 - y2) * offset;
        }
    }

    let visibility = {
        let (num, den) = match kind {
            FeatureKind::Peak => (ext_value - base, ext_value + base),
            FeatureKind::Dip => (base - ext_value, base + ext_value),
        };
        if den > T::zero() {
            (num / den).max(T::zero()).min(T::one())
        } else {
            T::one()
        }
    };

    let feature = ext_value - base;
    let heights: Vec<T> = rates.iter().map(|&r| (r - base) / feature).collect();
    let width_at = |level: T| {
        crossing(delays, &heights, idx, level, true) - crossing(delays, &heights, idx, level, false)
    };
    let width_half = width_at(T::lit(0.5));
    let tail_width = width_at(tail_fraction);
    let span = delays[n - 1] - delays[0];

    Ok(TraceSummary::Feature(TraceMetrics {
        baseline: base,
        kind,
        extremum_value: ext_value,
        extremum_delay: ext_delay,
        visibility,
        width_half,
        tail_width,
        tail_fraction,
        well_resolved: span >= T::lit(4.0) * width_half,
    }))
}

/// Trace mapped affinely so that the baseline sits at 0 and the extremum at 1.
pub fn normalized_rates<T: Real>(trace: &Trace<T>) -> Result<Vec<T>> {
    let m = trace_metrics(trace)?.into_feature()?;
    let height = m.extremum_value - m.baseline;
    Ok(trace
        .rates()
        .iter()
        .map(|&r| (r - m.baseline) / height)
        .collect())
}

/// Largest pointwise difference between the normalized traces.
pub fn normalized_distance<T: Real>(a: &Trace<T>, b: &Trace<T>) -> Result<T> {
    if a.delays() != b.delays() {
        return Err(Error::AxisMismatch);
    }
    let (na, nb) = (normalized_rates(a)?, normalized_rates(b)?);
    Ok(na
        .iter()
        .zip(&nb)
        .fold(T::zero(), |acc, (x, y)| acc.max((*x - *y).abs())))
}

/// `tail_width(a) / tail_width(b)` at the default tail fraction.
pub fn tail_ratio<T: Real>(a: &Trace<T>, b: &Trace<T>) -> Result<T> {
    let ma = trace_metrics(a)?.into_feature()?;
    let mb = trace_metrics(b)?.into_feature()?;
    Ok(ma.tail_width / mb.tail_width)
}
