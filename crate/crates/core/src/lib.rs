//! Two-photon interferometry of spectrally filtered SPDC pairs.
//!
//! The pipeline is: build a joint spectral amplitude ([`spectral`]), pass
//! it through loss filters ([`filters`]), evaluate coincidence traces for
//! the single-port, two-port (HOM) and N00N interferometers
//! ([`interferometry`]), and extract features ([`analysis`]). The
//! [`oracle`] module recomputes every rate by explicit Fock-space algebra.
//!
//! All numerics are generic over [`Real`]; the `f64` aliases below are
//! what the command-line front end uses.

// `!(x > 0)` is deliberate throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod filters;
pub mod interferometry;
pub mod oracle;
pub mod scalar;
pub mod spectral;
pub mod units;

pub use error::{Error, Result};
pub use filters::{apply_filters, FilterKind, FilterSpec, Filtered};
pub use interferometry::{BeamSplitter, Configuration, DelayAxis, Provenance, Trace};
pub use scalar::{Amplitude, Real};
pub use spectral::{
    build_jsa, build_jsa_windowed, DifferenceWindow, FrequencyGrid, JointAmplitude, Normalization,
    SourceParams,
};
pub use units::FrequencyQuote;

pub type Grid64 = FrequencyGrid<f64>;
pub type Source64 = SourceParams<f64>;
pub type Jsa64 = JointAmplitude<f64>;
pub type Filter64 = FilterSpec<f64>;
pub type BeamSplitter64 = BeamSplitter<f64>;
pub type Delays64 = DelayAxis<f64>;
pub type Trace64 = Trace<f64>;
pub type Metrics64 = analysis::TraceMetrics<f64>;

pub type Grid32 = FrequencyGrid<f32>;
pub type Jsa32 = JointAmplitude<f32>;
pub type Trace32 = Trace<f32>;
