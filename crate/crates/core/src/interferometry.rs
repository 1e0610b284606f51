//! Coincidence rates of the single-port, two-port (HOM) and N00N
//! interferometers, evaluated as Riemann sums over the joint amplitude grid.
//!
//! The delay `τ` acts on the signal photon (phase `e^{iν_s τ}`). For the
//! N00N configuration the delay acts on the doubly-occupied `a` arm and only
//! the detuning phase `e^{i(ν_s+ν_i)τ}` is kept; the optical carrier
//! `e^{2iω₀τ}` is dropped.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{Amplitude, Real};
use crate::spectral::JointAmplitude;

/// Tolerance on the passivity bound.
const PASSIVITY_SLACK: f64 = 1e-12;

/// Frequency-independent beamsplitter coefficients.
///
/// Loss (`|t|² + |r|² < 1`) is carried entirely by the coefficients: the
/// Langevin noise operators that restore commutation relations annihilate
/// the vacuum and add nothing to normally ordered coincidences.
///
/// Passivity means the port map `[[t, r], [r, t]]` never amplifies. Its
/// squared singular values are `|t|² + |r|² ± 2 Re(t r*)`, so the bound is
/// `|t|² + |r|² + 2|Re(t r*)| ≤ 1`; a lossless splitter additionally has
/// `t ⟂ r` in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitter<T> {
    t: Amplitude<T>,
    r: Amplitude<T>,
}

impl<T: Real> BeamSplitter<T> {
    pub fn new(t: Amplitude<T>, r: Amplitude<T>) -> Result<Self> {
        let gain = t.norm_sqr() + r.norm_sqr() + T::lit(2.0) * (t * r.conj()).re.abs();
        if !gain.is_finite() || gain > T::one() + T::lit(PASSIVITY_SLACK) {
            return Err(Error::ActiveBeamSplitter(gain.to_f64_lossy()));
        }
        Ok(Self { t, r })
    }

    /// Lossless 50:50 splitter with `t = i·r`, `|t| = |r| = 1/√2`.
    pub fn lossless_50_50() -> Self {
        let h = T::FRAC_1_SQRT_2();
        Self {
            t: Amplitude::new(T::zero(), h),
            r: Amplitude::new(h, T::zero()),
        }
    }

    /// Splitter with both coefficients scaled by `sqrt(efficiency)`.
    pub fn attenuated(&self, efficiency: T) -> Result<Self> {
        if !(efficiency > T::zero()) || efficiency > T::one() {
            return Err(Error::NonPositive {
                what: "beamsplitter efficiency",
                value: efficiency.to_f64_lossy(),
            });
        }
        let a = efficiency.sqrt();
        Self::new(self.t.scale(a), self.r.scale(a))
    }

    pub fn transmission(&self) -> Amplitude<T> {
        self.t
    }

    pub fn reflection(&self) -> Amplitude<T> {
        self.r
    }

    /// `|t|² + |r|²`; one for a lossless splitter.
    pub fn efficiency(&self) -> T {
        self.t.norm_sqr() + self.r.norm_sqr()
    }

    /// `|t|²|r|²`, the prefactor shared by the single-port and N00N rates.
    pub fn coincidence_prefactor(&self) -> T {
        self.t.norm_sqr() * self.r.norm_sqr()
    }

    pub fn is_lossless_balanced(&self) -> bool {
        let tol = T::lit(1e-12);
        let half = T::lit(0.5);
        (self.t.norm_sqr() - half).abs() <= tol && (self.r.norm_sqr() - half).abs() <= tol
    }
}

impl<T: Real> fmt::Display for BeamSplitter<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Self::lossless_50_50() {
            write!(f, "lossless-5050")
        } else {
            write!(
                f,
                "t={}{:+}i r={}{:+}i",
                self.t.re, self.t.im, self.r.re, self.r.im
            )
        }
    }
}

/// Uniform delay axis symmetric about zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayAxis<T> {
    step: T,
    values: Vec<T>,
}

impl<T: Real> DelayAxis<T> {
    /// `count` odd samples spanning `[-half_span, half_span]` ps.
    pub fn new(half_span: T, count: usize) -> Result<Self> {
        if count < 3 || count.is_multiple_of(2) {
            return Err(Error::DelayPoints(count));
        }
        if !(half_span > T::zero()) || !half_span.is_finite() {
            return Err(Error::NonPositive {
                what: "delay half span",
                value: half_span.to_f64_lossy(),
            });
        }
        let centre = (count - 1) / 2;
        Self::with_step(half_span / T::from_count(centre), count)
    }

    /// `count` odd samples at multiples of `step`.
    pub fn with_step(step: T, count: usize) -> Result<Self> {
        if count < 3 || count.is_multiple_of(2) {
            return Err(Error::DelayPoints(count));
        }
        if !(step > T::zero()) || !step.is_finite() {
            return Err(Error::NonPositive {
                what: "delay step",
                value: step.to_f64_lossy(),
            });
        }
        let centre = (count - 1) / 2;
        let values = (0..count)
            .map(|k| {
                let m = T::from_count(k.abs_diff(centre)) * step;
                if k < centre {
                    -m
                } else {
                    m
                }
            })
            .collect();
        Ok(Self { step, values })
    }

    pub fn step(&self) -> T {
        self.step
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn half_span(&self) -> T {
        self.values[self.values.len() - 1]
    }
}

/// Interferometer configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Configuration {
    /// Both photons enter the same port; `R₊`.
    SinglePort,
    /// Hong-Ou-Mandel, photons in opposite ports; `R₋`.
    TwoPort,
    /// Superposition of both photons in `a` and both in `b`; `R_N`.
    Noon,
}

impl Configuration {
    pub const ALL: [Configuration; 3] = [
        Configuration::SinglePort,
        Configuration::TwoPort,
        Configuration::Noon,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Configuration::SinglePort => "single_port",
            Configuration::TwoPort => "two_port",
            Configuration::Noon => "noon",
        }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Human-readable description of what produced a trace.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Provenance {
    pub source: String,
    pub filters: String,
    pub beamsplitter: String,
}

/// Coincidence rate sampled over a delay axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace<T> {
    delays: DelayAxis<T>,
    rates: Vec<T>,
    configuration: Configuration,
    provenance: Provenance,
}

impl<T: Real> Trace<T> {
    pub fn new(
        delays: DelayAxis<T>,
        rates: Vec<T>,
        configuration: Configuration,
        provenance: Provenance,
    ) -> Result<Self> {
        if rates.len() != delays.len() {
            return Err(Error::TraceLength {
                rates: rates.len(),
                delays: delays.len(),
            });
        }
        if let Some(bad) = rates.iter().find(|r| !(**r >= T::zero()) || !r.is_finite()) {
            return Err(Error::NonFinite {
                what: "coincidence rate",
                value: bad.to_f64_lossy(),
            });
        }
        Ok(Self {
            delays,
            rates,
            configuration,
            provenance,
        })
    }

    pub fn delays(&self) -> &DelayAxis<T> {
        &self.delays
    }

    pub fn rates(&self) -> &[T] {
        &self.rates
    }

    pub fn configuration(&self) -> Configuration {
        self.configuration
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    /// Legend label, e.g. `noon / etpa`.
    pub fn label(&self) -> String {
        if self.provenance.filters.is_empty() {
            self.configuration.to_string()
        } else {
            format!("{} / {}", self.configuration, self.provenance.filters)
        }
    }

    /// Same trace with the delay axis reversed (`τ → −τ`).
    pub fn reversed(&self) -> Self {
        let mut rates = self.rates.clone();
        rates.reverse();
        Self {
            rates,
            ..self.clone()
        }
    }

    /// Applies `rate → scale·rate + offset` (for invariance checks).
    pub fn affine(&self, scale: T, offset: T) -> Result<Self> {
        let rates = self.rates.iter().map(|&r| scale * r + offset).collect();
        Self::new(
            self.delays.clone(),
            rates,
            self.configuration,
            self.provenance.clone(),
        )
    }
}

/// Signal-delay phases `e^{iν_k τ}` over the grid axis.
fn delay_phases<T: Real>(jsa: &JointAmplitude<T>, tau: T) -> Vec<Amplitude<T>> {
    jsa.grid()
        .axis()
        .iter()
        .map(|&nu| Amplitude::from_polar(T::one(), nu * tau))
        .collect()
}

/// Single-port rate `R₊(τ) = |t|²|r|² Σ |φ(s,i)e^{i(ν_s−ν_i)τ} + φ(i,s)|² Δ²`.
pub fn rate_single_port<T: Real>(jsa: &JointAmplitude<T>, tau: T, bs: &BeamSplitter<T>) -> T {
    let n = jsa.len();
    let e = delay_phases(jsa, tau);
    let mut acc = T::zero();
    for j in 0..n {
        for k in 0..n {
            let direct = jsa.at(j, k) * e[j] * e[k].conj();
            acc = acc + (direct + jsa.at(k, j)).norm_sqr();
        }
    }
    bs.coincidence_prefactor() * acc * jsa.grid().cell_area()
}

/// Two-port (HOM) rate with constant coefficients:
/// `Σ [|t|⁴|φ(s,i)|² + |r|⁴|φ(i,s)|² + 2 Re(t² r*² φ(s,i) φ*(i,s) e^{i(ν_s−ν_i)τ})] Δ²`.
pub fn rate_two_port<T: Real>(jsa: &JointAmplitude<T>, tau: T, bs: &BeamSplitter<T>) -> T {
    let n = jsa.len();
    let e = delay_phases(jsa, tau);
    let (t, r) = (bs.transmission(), bs.reflection());
    let t4 = t.norm_sqr() * t.norm_sqr();
    let r4 = r.norm_sqr() * r.norm_sqr();
    let cross = t * t * (r * r).conj();
    let two = T::lit(2.0);
    let mut acc = T::zero();
    for j in 0..n {
        for k in 0..n {
            let direct = jsa.at(j, k);
            let swapped = jsa.at(k, j);
            let interference = cross * direct * swapped.conj() * e[j] * e[k].conj();
            acc = acc + t4 * direct.norm_sqr() + r4 * swapped.norm_sqr() + two * interference.re;
        }
    }
    (acc * jsa.grid().cell_area()).max(T::zero())
}

/// N00N rate `R_N(τ) = (|t|²|r|²/2) Σ |1 + e^{i(ν_s+ν_i)τ}|² |φ(s,i) + φ(i,s)|² Δ²`.
pub fn rate_noon<T: Real>(jsa: &JointAmplitude<T>, tau: T, bs: &BeamSplitter<T>) -> T {
    let n = jsa.len();
    let e = delay_phases(jsa, tau);
    let one = Amplitude::new(T::one(), T::zero());
    let mut acc = T::zero();
    for j in 0..n {
        for k in 0..n {
            let sym = (jsa.at(j, k) + jsa.at(k, j)).norm_sqr();
            acc = acc + (one + e[j] * e[k]).norm_sqr() * sym;
        }
    }
    bs.coincidence_prefactor() / T::lit(2.0) * acc * jsa.grid().cell_area()
}

/// Rate of the chosen configuration at one delay.
pub fn rate<T: Real>(
    configuration: Configuration,
    jsa: &JointAmplitude<T>,
    tau: T,
    bs: &BeamSplitter<T>,
) -> T {
    match configuration {
        Configuration::SinglePort => rate_single_port(jsa, tau, bs),
        Configuration::TwoPort => rate_two_port(jsa, tau, bs),
        Configuration::Noon => rate_noon(jsa, tau, bs),
    }
}

/// Delay-independent precomputation for fast trace evaluation.
///
/// Every rate splits into an incoherent part and a single interference sum,
/// `R(τ) = incoherent + Re[c · Σ_{j,k} K[j,k] e^{iν_j τ} e^{±iν_k τ}]`:
///
/// * single port: `K = φ(s,i)φ*(i,s)`, `c = 2|t|²|r|²`, minus sign;
/// * two port: `K = φ(s,i)φ*(i,s)`, `c = 2t²r*²`, minus sign;
/// * N00N: `K = |φ(s,i)+φ(i,s)|²`, `c = |t|²|r|²`, plus sign.
#[derive(Debug, Clone)]
pub struct RateKernel<T> {
    configuration: Configuration,
    axis: Vec<T>,
    incoherent: T,
    coupling: Amplitude<T>,
    kernel: Vec<Amplitude<T>>,
}

impl<T: Real> RateKernel<T> {
    pub fn new(
        configuration: Configuration,
        jsa: &JointAmplitude<T>,
        bs: &BeamSplitter<T>,
    ) -> Self {
        let n = jsa.len();
        let cell = jsa.grid().cell_area();
        let (t, r) = (bs.transmission(), bs.reflection());
        let (t2, r2) = (t.norm_sqr(), r.norm_sqr());
        let two = T::lit(2.0);
        let mut incoherent = T::zero();
        let mut kernel = Vec::with_capacity(n * n);
        for j in 0..n {
            for k in 0..n {
                let (d, s) = (jsa.at(j, k), jsa.at(k, j));
                match configuration {
                    Configuration::SinglePort => {
                        incoherent = incoherent + t2 * r2 * (d.norm_sqr() + s.norm_sqr());
                        kernel.push(d * s.conj());
                    }
                    Configuration::TwoPort => {
                        incoherent = incoherent + t2 * t2 * d.norm_sqr() + r2 * r2 * s.norm_sqr();
                        kernel.push(d * s.conj());
                    }
                    Configuration::Noon => {
                        let sym = (d + s).norm_sqr();
                        incoherent = incoherent + t2 * r2 * sym;
                        kernel.push(Amplitude::new(sym, T::zero()));
                    }
                }
            }
        }
        let coupling = match configuration {
            Configuration::SinglePort => Amplitude::new(two * t2 * r2, T::zero()),
            Configuration::TwoPort => (t * t * (r * r).conj()).scale(two),
            Configuration::Noon => Amplitude::new(t2 * r2, T::zero()),
        };
        Self {
            configuration,
            axis: jsa.grid().axis().to_vec(),
            incoherent: incoherent * cell,
            coupling: coupling.scale(cell),
            kernel,
        }
    }

    pub fn configuration(&self) -> Configuration {
        self.configuration
    }

    /// The delay-independent part: the rate for distinguishable photons and
    /// the large-delay limit of the trace.
    pub fn incoherent(&self) -> T {
        self.incoherent
    }

    pub fn rate(&self, tau: T) -> T {
        let n = self.axis.len();
        let phases: Vec<Amplitude<T>> = self
            .axis
            .iter()
            .map(|&nu| Amplitude::from_polar(T::one(), nu * tau))
            .collect();
        let second: Vec<Amplitude<T>> = match self.configuration {
            Configuration::Noon => phases.clone(),
            _ => phases.iter().map(|p| p.conj()).collect(),
        };
        let zero = Amplitude::new(T::zero(), T::zero());
        let mut total = zero;
        for (j, row) in self.kernel.chunks_exact(n).enumerate() {
            let inner = row
                .iter()
                .zip(&second)
                .fold(zero, |acc, (&kv, &p)| acc + kv * p);
            total = total + phases[j] * inner;
        }
        (self.incoherent + (self.coupling * total).re).max(T::zero())
    }
}

/// The delay-independent part of a configuration's rate.
pub fn incoherent_rate<T: Real>(
    configuration: Configuration,
    jsa: &JointAmplitude<T>,
    bs: &BeamSplitter<T>,
) -> T {
    RateKernel::new(configuration, jsa, bs).incoherent()
}

/// Evaluates a configuration over every delay of the axis, in parallel.
pub fn scan_trace<T: Real>(
    configuration: Configuration,
    jsa: &JointAmplitude<T>,
    delays: &DelayAxis<T>,
    bs: &BeamSplitter<T>,
) -> Result<Trace<T>> {
    let kernel = RateKernel::new(configuration, jsa, bs);
    let rates = delays
        .values()
        .par_iter()
        .map(|&tau| kernel.rate(tau))
        .collect();
    Trace::new(
        delays.clone(),
        rates,
        configuration,
        Provenance {
            beamsplitter: bs.to_string(),
            ..Provenance::default()
        },
    )
}

/// Symmetrized sum-frequency marginal `M(ν₊) = Σ_{ν_s+ν_i=ν₊} ¼|φ(s,i)+φ(i,s)|² Δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SumMarginal<T> {
    /// `ν₊` samples, spacing equal to the grid spacing, `2n − 1` entries.
    pub sum_frequency: Vec<T>,
    pub density: Vec<T>,
    pub spacing: T,
}

/// Collapses the amplitude onto its anti-diagonals.
pub fn sum_frequency_marginal<T: Real>(jsa: &JointAmplitude<T>) -> SumMarginal<T> {
    let n = jsa.len();
    let spacing = jsa.grid().spacing();
    let centre = 2 * jsa.grid().centre_index();
    let mut density = vec![T::zero(); 2 * n - 1];
    for j in 0..n {
        for k in 0..n {
            let w = (jsa.at(j, k) + jsa.at(k, j)).norm_sqr();
            density[j + k] = density[j + k] + w;
        }
    }
    let quarter_cell = spacing / T::lit(4.0);
    for m in &mut density {
        *m = *m * quarter_cell;
    }
    let sum_frequency = (0..2 * n - 1)
        .map(|s| {
            let m = T::from_count(s.abs_diff(centre)) * spacing;
            if s < centre {
                -m
            } else {
                m
            }
        })
        .collect();
    SumMarginal {
        sum_frequency,
        density,
        spacing,
    }
}

/// N00N trace through its sum-frequency marginal:
/// `R_N(τ) = Σ M(ν₊)(1 + cos ν₊τ) Δ`. Only defined for the lossless 50:50 splitter.
pub fn noon_via_sum_marginal<T: Real>(
    jsa: &JointAmplitude<T>,
    delays: &DelayAxis<T>,
    bs: &BeamSplitter<T>,
) -> Result<Trace<T>> {
    if !bs.is_lossless_balanced() {
        return Err(Error::NotBalancedLossless);
    }
    let marginal = sum_frequency_marginal(jsa);
    let rates = delays
        .values()
        .iter()
        .map(|&tau| {
            marginal
                .sum_frequency
                .iter()
                .zip(&marginal.density)
                .map(|(&nu, &m)| m * (T::one() + (nu * tau).cos()))
                .sum::<T>()
                * marginal.spacing
        })
        .collect();
    Trace::new(
        delays.clone(),
        rates,
        Configuration::Noon,
        Provenance {
            beamsplitter: bs.to_string(),
            ..Provenance::default()
        },
    )
}
