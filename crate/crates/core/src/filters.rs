//! Spectral loss filters acting on the joint amplitude.
//!
//! The sample is modelled as a set of Gaussian notches multiplying the
//! amplitude: a two-photon (eTPA) notch on the sum frequency `ν_s + ν_i`
//! and single-photon notches on `ν_s` or `ν_i` alone.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::JointAmplitude;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FilterKind {
    /// Notch at the two-photon resonance `ν_s + ν_i = 0`.
    TwoPhoton,
    /// Notch on the signal photon only.
    SingleSignal,
    /// Notch on the idler photon only.
    SingleIdler,
}

impl FilterKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FilterKind::TwoPhoton => "two_photon",
            FilterKind::SingleSignal => "single_signal",
            FilterKind::SingleIdler => "single_idler",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSpec<T> {
    kind: FilterKind,
    bandwidth: T,
    centre: T,
}

impl<T: Real> FilterSpec<T> {
    pub fn two_photon(bandwidth: T) -> Result<Self> {
        Self::new(FilterKind::TwoPhoton, bandwidth, T::zero())
    }

    pub fn single_signal(bandwidth: T, centre: T) -> Result<Self> {
        Self::new(FilterKind::SingleSignal, bandwidth, centre)
    }

    pub fn single_idler(bandwidth: T, centre: T) -> Result<Self> {
        Self::new(FilterKind::SingleIdler, bandwidth, centre)
    }

    pub fn new(kind: FilterKind, bandwidth: T, centre: T) -> Result<Self> {
        if !(bandwidth > T::zero()) || !bandwidth.is_finite() {
            return Err(Error::NonPositive {
                what: "filter bandwidth",
                value: bandwidth.to_f64_lossy(),
            });
        }
        if !centre.is_finite() {
            return Err(Error::NonFinite {
                what: "filter centre",
                value: centre.to_f64_lossy(),
            });
        }
        if kind == FilterKind::TwoPhoton && centre != T::zero() {
            return Err(Error::TwoPhotonCenter(centre.to_f64_lossy()));
        }
        Ok(Self {
            kind,
            bandwidth,
            centre,
        })
    }

    pub fn kind(&self) -> FilterKind {
        self.kind
    }

    pub fn bandwidth(&self) -> T {
        self.bandwidth
    }

    pub fn centre(&self) -> T {
        self.centre
    }

    /// Amplitude transmission `1 − exp[−(x − x₀)²/(2σ²)]` at `(ν_s, ν_i)`.
    pub fn value(&self, nu_s: T, nu_i: T) -> T {
        let x = match self.kind {
            FilterKind::TwoPhoton => nu_s + nu_i,
            FilterKind::SingleSignal => nu_s - self.centre,
            FilterKind::SingleIdler => nu_i - self.centre,
        };
        T::one() - (-(x * x) / (T::lit(2.0) * self.bandwidth * self.bandwidth)).exp()
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.kind
            .cmp(&other.kind)
            .then_with(|| {
                self.bandwidth
                    .partial_cmp(&other.bandwidth)
                    .unwrap_or(Ordering::Equal)
            })
            .then_with(|| {
                self.centre
                    .partial_cmp(&other.centre)
                    .unwrap_or(Ordering::Equal)
            })
    }
}

/// Free-function form of [`FilterSpec::value`].
pub fn filter_value<T: Real>(spec: &FilterSpec<T>, nu_s: T, nu_i: T) -> T {
    spec.value(nu_s, nu_i)
}

/// Filtered amplitude together with the fraction of pairs that survived.
#[derive(Debug, Clone, PartialEq)]
pub struct Filtered<T> {
    pub jsa: JointAmplitude<T>,
    pub survival: T,
}

/// Multiplies the amplitude pointwise by every filter in `specs`.
///
/// The filters are combined in a canonical order, so the result does not
/// depend on the order of `specs`, bit for bit. No renormalization.
pub fn apply_filters<T: Real>(jsa: &JointAmplitude<T>, specs: &[FilterSpec<T>]) -> Filtered<T> {
    if specs.is_empty() {
        return Filtered {
            jsa: jsa.clone(),
            survival: T::one(),
        };
    }
    let mut ordered = specs.to_vec();
    ordered.sort_by(FilterSpec::canonical_cmp);
    let out = jsa.weighted(|s, i| ordered.iter().fold(T::one(), |acc, f| acc * f.value(s, i)));
    let before = jsa.pair_weight();
    let survival = if before > T::zero() {
        out.pair_weight() / before
    } else {
        T::zero()
    };
    Filtered { jsa: out, survival }
}
