//! Conversion of quoted frequencies into internal angular units.

use crate::scalar::Real;

/// How a frequency quoted in GHz is to be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FrequencyQuote {
    /// Ordinary frequency `f`: converted with `ν = 2π f`.
    #[default]
    Ordinary,
    /// Already an angular frequency (Grad/s).
    Angular,
}

impl FrequencyQuote {
    /// Converts a value quoted in GHz (or Grad/s) to rad/ps.
    pub fn to_rad_per_ps<T: Real>(self, quoted_ghz: T) -> T {
        let per_ps = quoted_ghz * T::lit(1e-3);
        match self {
            FrequencyQuote::Ordinary => T::lit(2.0) * T::PI() * per_ps,
            FrequencyQuote::Angular => per_ps,
        }
    }

    /// Inverse of [`FrequencyQuote::to_rad_per_ps`].
    pub fn from_rad_per_ps<T: Real>(self, rad_per_ps: T) -> T {
        let quoted = rad_per_ps * T::lit(1e3);
        match self {
            FrequencyQuote::Ordinary => quoted / (T::lit(2.0) * T::PI()),
            FrequencyQuote::Angular => quoted,
        }
    }
}
