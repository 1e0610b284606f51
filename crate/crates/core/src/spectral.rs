//! SPDC joint spectral amplitude on a uniform frequency grid.
//!
//! Frequencies are angular detunings from the degenerate centre frequency in
//! rad/ps; times (pump duration, GVM-length products, delays) are in ps.

use crate::error::{Error, Result};
use crate::scalar::{Amplitude, Real};

/// Smallest admissible number of points per grid axis.
pub const MIN_GRID_POINTS: usize = 9;

/// Below this magnitude `sinc` switches to its Taylor series.
const SINC_SERIES_CUTOFF: f64 = 1e-4;

/// Uniform, symmetric axis of frequency detunings shared by signal and idler.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid<T> {
    half_width: T,
    spacing: T,
    axis: Vec<T>,
}

impl<T: Real> FrequencyGrid<T> {
    /// `n_points` must be odd so that zero detuning is a grid point.
    pub fn new(n_points: usize, half_width: T) -> Result<Self> {
        if n_points < MIN_GRID_POINTS || n_points.is_multiple_of(2) {
            return Err(Error::GridPoints {
                got: n_points,
                min: MIN_GRID_POINTS,
            });
        }
        if !(half_width > T::zero()) || !half_width.is_finite() {
            return Err(Error::NonPositive {
                what: "grid half width",
                value: half_width.to_f64_lossy(),
            });
        }
        let spacing = (half_width + half_width) / T::from_count(n_points - 1);
        let centre = (n_points - 1) / 2;
        // Offsets are built from signed integers so that ν[k] = -ν[n-1-k] holds bit for bit.
        let axis = (0..n_points)
            .map(|k| {
                let offset = k as i64 - centre as i64;
                let magnitude = T::from_count(offset.unsigned_abs() as usize) * spacing;
                if offset < 0 {
                    -magnitude
                } else {
                    magnitude
                }
            })
            .collect();
        Ok(Self {
            half_width,
            spacing,
            axis,
        })
    }

    pub fn len(&self) -> usize {
        self.axis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axis.is_empty()
    }

    pub fn half_width(&self) -> T {
        self.half_width
    }

    pub fn spacing(&self) -> T {
        self.spacing
    }

    pub fn axis(&self) -> &[T] {
        &self.axis
    }

    /// Index of the zero-detuning point.
    pub fn centre_index(&self) -> usize {
        (self.axis.len() - 1) / 2
    }

    /// Quadrature weight of one grid cell, `spacing²`.
    pub fn cell_area(&self) -> T {
        self.spacing * self.spacing
    }
}

/// SPDC source parameters. The crystal length only enters through the
/// products `η_s·L` and `η_i·L`, which are stored directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceParams<T> {
    pump_duration: T,
    eta_s_l: T,
    eta_i_l: T,
    central_frequency: T,
}

impl<T: Real> SourceParams<T> {
    pub fn new(pump_duration: T, eta_s_l: T, eta_i_l: T) -> Result<Self> {
        if !(pump_duration > T::zero()) || !pump_duration.is_finite() {
            return Err(Error::NonPositive {
                what: "pump duration",
                value: pump_duration.to_f64_lossy(),
            });
        }
        for (what, v) in [("eta_s*L", eta_s_l), ("eta_i*L", eta_i_l)] {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    what,
                    value: v.to_f64_lossy(),
                });
            }
        }
        Ok(Self {
            pump_duration,
            eta_s_l,
            eta_i_l,
            central_frequency: T::zero(),
        })
    }

    /// Attaches the degenerate centre frequency (rad/ps). Metadata only.
    pub fn with_central_frequency(mut self, omega0: T) -> Self {
        self.central_frequency = omega0;
        self
    }

    pub fn pump_duration(&self) -> T {
        self.pump_duration
    }

    pub fn eta_s_l(&self) -> T {
        self.eta_s_l
    }

    pub fn eta_i_l(&self) -> T {
        self.eta_i_l
    }

    pub fn central_frequency(&self) -> T {
        self.central_frequency
    }

    /// Equal GVM products make the amplitude invariant under signal/idler exchange.
    pub fn is_exchange_symmetric(&self) -> bool {
        self.eta_s_l == self.eta_i_l
    }
}

/// Gaussian pump envelope `exp[-2 T_p² (ν_s + ν_i)²]`.
pub fn pump_envelope<T: Real>(nu_s: T, nu_i: T, pump_duration: T) -> T {
    let sum = nu_s + nu_i;
    (-T::lit(2.0) * pump_duration * pump_duration * sum * sum).exp()
}

/// `sin(x)/x` with the removable singularity at zero.
pub fn sinc<T: Real>(x: T) -> T {
    if x.abs() < T::lit(SINC_SERIES_CUTOFF) {
        let x2 = x * x;
        T::one() - x2 / T::lit(6.0) + x2 * x2 / T::lit(120.0)
    } else {
        x.sin() / x
    }
}

/// Phase-matching function `sinc(x)·exp(-ix)` with `x = (η_s L ν_s + η_i L ν_i)/2`.
pub fn phase_matching<T: Real>(nu_s: T, nu_i: T, eta_s_l: T, eta_i_l: T) -> Amplitude<T> {
    let x = (eta_s_l * nu_s + eta_i_l * nu_i) / T::lit(2.0);
    Amplitude::from_polar(sinc(x), -x)
}

/// Smooth acceptance window on the difference frequency `ν_s − ν_i`.
///
/// Unity for `|ν_s − ν_i| ≤ flat_half_width`, a raised-cosine roll-off over
/// `taper_width`, and exactly zero beyond. It models the finite detection
/// bandwidth along the difference-frequency direction; because it depends
/// on `ν_s − ν_i` alone it commutes with every sum-frequency filter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DifferenceWindow<T> {
    pub flat_half_width: T,
    pub taper_width: T,
}

impl<T: Real> DifferenceWindow<T> {
    pub fn new(flat_half_width: T, taper_width: T) -> Result<Self> {
        for (what, v) in [
            ("window flat half width", flat_half_width),
            ("window taper width", taper_width),
        ] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::NonPositive {
                    what,
                    value: v.to_f64_lossy(),
                });
            }
        }
        Ok(Self {
            flat_half_width,
            taper_width,
        })
    }

    /// Default window for a grid: flat out to the grid half width, tapered
    /// to zero at 1.5× the half width. The diagonal of the square grid
    /// reaches `|ν_s − ν_i| = 2·half_width`, so the window support lies
    /// inside the grid for every sum frequency up to half the grid width.
    pub fn for_grid(grid: &FrequencyGrid<T>) -> Self {
        let w = grid.half_width();
        Self {
            flat_half_width: w,
            taper_width: w / T::lit(2.0),
        }
    }

    pub fn value(&self, nu_minus: T) -> T {
        let m = nu_minus.abs();
        if m <= self.flat_half_width {
            T::one()
        } else if m >= self.flat_half_width + self.taper_width {
            T::zero()
        } else {
            let phase = T::PI() * (m - self.flat_half_width) / self.taper_width;
            (T::one() + phase.cos()) / T::lit(2.0)
        }
    }
}

/// Normalization state of a [`JointAmplitude`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    Unnormalized,
    /// `Σ|φ|²·spacing² = 1` on the grid.
    UnitL2,
}

/// Complex joint spectral amplitude sampled on a [`FrequencyGrid`].
///
/// Row index is the signal detuning, column index the idler detuning, so
/// signal/idler exchange is matrix transposition.
#[derive(Debug, Clone, PartialEq)]
pub struct JointAmplitude<T> {
    grid: FrequencyGrid<T>,
    values: Vec<Amplitude<T>>,
    normalization: Normalization,
}

impl<T: Real> JointAmplitude<T> {
    /// Wraps raw row-major samples. Panics if `values.len() != n²`.
    pub fn from_values(
        grid: FrequencyGrid<T>,
        values: Vec<Amplitude<T>>,
        normalization: Normalization,
    ) -> Self {
        let n = grid.len();
        assert_eq!(values.len(), n * n, "joint amplitude must be n x n");
        Self {
            grid,
            values,
            normalization,
        }
    }

    /// Samples `f(ν_s, ν_i)` on the grid.
    pub fn from_fn(grid: FrequencyGrid<T>, f: impl Fn(T, T) -> Amplitude<T>) -> Self {
        let axis = grid.axis();
        let values = axis
            .iter()
            .flat_map(|&s| axis.iter().map(move |&i| (s, i)))
            .map(|(s, i)| f(s, i))
            .collect();
        Self::from_values(grid, values, Normalization::Unnormalized)
    }

    pub fn grid(&self) -> &FrequencyGrid<T> {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn values(&self) -> &[Amplitude<T>] {
        &self.values
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    /// `φ(ν_s[signal], ν_i[idler])`.
    #[inline]
    pub fn at(&self, signal: usize, idler: usize) -> Amplitude<T> {
        self.values[signal * self.grid.len() + idler]
    }

    /// `Σ|φ|²·spacing²`, the pair probability carried by the amplitude.
    pub fn pair_weight(&self) -> T {
        self.values.iter().map(|v| v.norm_sqr()).sum::<T>() * self.grid.cell_area()
    }

    /// Joint spectral intensity `|φ|²`, row-major.
    pub fn intensity(&self) -> Vec<T> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// Amplitude with signal and idler arguments exchanged.
    pub fn exchanged(&self) -> Self {
        let n = self.len();
        let values = (0..n * n).map(|idx| self.at(idx % n, idx / n)).collect();
        Self::from_values(self.grid.clone(), values, self.normalization)
    }

    /// Largest `|φ(s,i) − φ(i,s)|` over the grid.
    pub fn exchange_asymmetry(&self) -> T {
        let n = self.len();
        let mut worst = T::zero();
        for j in 0..n {
            for k in (j + 1)..n {
                worst = worst.max((self.at(j, k) - self.at(k, j)).norm());
            }
        }
        worst
    }

    /// Rescales to unit L2 weight on the grid.
    pub fn normalized(mut self) -> Self {
        let w = self.pair_weight();
        if w > T::zero() {
            let scale = w.sqrt().recip();
            for v in &mut self.values {
                *v = v.scale(scale);
            }
            self.normalization = Normalization::UnitL2;
        }
        self
    }

    /// Multiplies every sample by a real weight `g(ν_s, ν_i)`; the result
    /// is marked unnormalized.
    pub fn weighted(&self, g: impl Fn(T, T) -> T) -> Self {
        let axis = self.grid.axis();
        let n = axis.len();
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(idx, v)| v.scale(g(axis[idx / n], axis[idx % n])))
            .collect();
        Self::from_values(self.grid.clone(), values, Normalization::Unnormalized)
    }
}

/// Samples `E_p(ν_s+ν_i)·sinc(x)·exp(-ix)` on the grid.
pub fn build_jsa<T: Real>(
    grid: &FrequencyGrid<T>,
    source: &SourceParams<T>,
    normalize: bool,
) -> JointAmplitude<T> {
    build_jsa_windowed(grid, source, None, normalize)
}

/// As [`build_jsa`], additionally multiplied by a difference-frequency window.
pub fn build_jsa_windowed<T: Real>(
    grid: &FrequencyGrid<T>,
    source: &SourceParams<T>,
    window: Option<&DifferenceWindow<T>>,
    normalize: bool,
) -> JointAmplitude<T> {
    let tp = source.pump_duration();
    let (es, ei) = (source.eta_s_l(), source.eta_i_l());
    let jsa = JointAmplitude::from_fn(grid.clone(), |s, i| {
        let amp = phase_matching(s, i, es, ei).scale(pump_envelope(s, i, tp));
        match window {
            Some(w) => amp.scale(w.value(s - i)),
            None => amp,
        }
    });
    if normalize {
        jsa.normalized()
    } else {
        jsa
    }
}

/// Default grid half width: six times the widest spectral scale among the
/// pump bandwidth, the filter bandwidths and the sinc lobe spacing.
pub fn default_half_width<T: Real>(source: &SourceParams<T>, filter_bandwidths: &[T]) -> T {
    let mut scale = source.pump_duration().recip();
    for &sigma in filter_bandwidths {
        scale = scale.max(sigma);
    }
    let gvm = source.eta_s_l().abs() + source.eta_i_l().abs();
    if gvm > T::zero() {
        scale = scale.max(T::lit(2.0) * T::PI() / gvm);
    }
    T::lit(6.0) * scale
}

/// Grid point count used when a scenario does not specify one.
pub const DEFAULT_GRID_POINTS: usize = 513;
