//! Brute-force two-photon Fock-space validator.
//!
//! A biphoton state is stored as a symmetric coefficient matrix `c` over
//! single-photon modes `x = (port, frequency bin)`, with
//! `|Ψ⟩ = Σ_{x,y} c[x,y] x† y† |0⟩`. A beamsplitter is a linear map on
//! creation operators, `x† → Σ_{x'} M[x',x] x'†`, so `c → M c Mᵀ`. The
//! coincidence probability is read off as `Σ |⟨0| b_{m₂} a_{m₁} |Ψ⟩|²`.
//!
//! None of this goes through the closed-form rate expressions, which is the
//! point: the two must agree to rounding.
//!
//! Continuum operators are discretized with `a†(ω) ≈ a†_m / √Δ`, so a grid
//! amplitude `φ` enters the coefficients as `Δ·φ`. States carry the same
//! (unnormalized) convention as the rate formulas.

use crate::error::{Error, Result};
use crate::interferometry::{BeamSplitter, Configuration};
use crate::scalar::{Amplitude, Real};
use crate::spectral::JointAmplitude;

/// Largest number of frequency bins per port the oracle accepts.
pub const MAX_ORACLE_MODES: usize = 65;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Port {
    A,
    B,
}

impl Port {
    fn offset(self, modes: usize) -> usize {
        match self {
            Port::A => 0,
            Port::B => modes,
        }
    }
}

/// Two-photon state over `2 × modes` single-photon modes.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteBiphoton<T> {
    modes: usize,
    coeffs: Vec<Amplitude<T>>,
}

impl<T: Real> DiscreteBiphoton<T> {
    pub fn vacuum_pair_space(modes: usize) -> Result<Self> {
        if modes > MAX_ORACLE_MODES {
            return Err(Error::OracleTooLarge {
                got: modes,
                cap: MAX_ORACLE_MODES,
            });
        }
        let dim = 2 * modes;
        Ok(Self {
            modes,
            coeffs: vec![Amplitude::new(T::zero(), T::zero()); dim * dim],
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    fn dim(&self) -> usize {
        2 * self.modes
    }

    fn index(&self, port: Port, bin: usize) -> usize {
        port.offset(self.modes) + bin
    }

    /// Adds `amp · x† y†` with `x = (p1, m1)`, `y = (p2, m2)`, splitting the
    /// weight over both operator orderings.
    pub fn add_term(&mut self, p1: Port, m1: usize, p2: Port, m2: usize, amp: Amplitude<T>) {
        let (x, y) = (self.index(p1, m1), self.index(p2, m2));
        let dim = self.dim();
        let half = amp.scale(T::lit(0.5));
        self.coeffs[x * dim + y] = self.coeffs[x * dim + y] + half;
        self.coeffs[y * dim + x] = self.coeffs[y * dim + x] + half;
    }

    /// Symmetric coefficient of `x† y†`.
    pub fn coefficient(&self, p1: Port, m1: usize, p2: Port, m2: usize) -> Amplitude<T> {
        self.coeffs[self.index(p1, m1) * self.dim() + self.index(p2, m2)]
    }

    /// `⟨Ψ|Ψ⟩ = Σ_{x,y} c*[x,y](c[x,y] + c[y,x])`.
    pub fn norm(&self) -> T {
        let dim = self.dim();
        let mut acc = T::zero();
        for x in 0..dim {
            for y in 0..dim {
                let c = self.coeffs[x * dim + y];
                acc = acc + (c.conj() * (c + self.coeffs[y * dim + x])).re;
            }
        }
        acc
    }

    /// Largest `|c[x,y] − c[y,x]|`.
    pub fn exchange_asymmetry(&self) -> T {
        let dim = self.dim();
        let mut worst = T::zero();
        for x in 0..dim {
            for y in 0..x {
                worst = worst.max((self.coeffs[x * dim + y] - self.coeffs[y * dim + x]).norm());
            }
        }
        worst
    }
}

/// Builds the input state of a configuration from a (coarse) joint amplitude.
pub fn prepare_input<T: Real>(
    configuration: Configuration,
    jsa: &JointAmplitude<T>,
    tau: T,
) -> Result<DiscreteBiphoton<T>> {
    let n = jsa.len();
    let mut state = DiscreteBiphoton::vacuum_pair_space(n)?;
    let axis = jsa.grid().axis();
    let cell = jsa.grid().spacing();
    let inv_sqrt2 = T::FRAC_1_SQRT_2();
    for ms in 0..n {
        for mi in 0..n {
            let amp = jsa.at(ms, mi).scale(cell);
            match configuration {
                Configuration::SinglePort => {
                    let delayed = amp * Amplitude::from_polar(T::one(), axis[ms] * tau);
                    state.add_term(Port::A, ms, Port::A, mi, delayed);
                }
                Configuration::TwoPort => {
                    let delayed = amp * Amplitude::from_polar(T::one(), axis[ms] * tau);
                    state.add_term(Port::A, ms, Port::B, mi, delayed);
                }
                Configuration::Noon => {
                    let amp = amp.scale(inv_sqrt2);
                    let both_delayed =
                        amp * Amplitude::from_polar(T::one(), (axis[ms] + axis[mi]) * tau);
                    state.add_term(Port::A, ms, Port::A, mi, both_delayed);
                    state.add_term(Port::B, ms, Port::B, mi, amp);
                }
            }
        }
    }
    Ok(state)
}

/// Single-photon mode matrix of the beamsplitter, `M[out, in]`.
///
/// `a†_in(m) → t a†_out(m) + r b†_out(m)`, `b†_in(m) → r a†_out(m) + t b†_out(m)`.
/// Amplitude leaking into loss modes is discarded; those modes are never
/// observed and the trace over them is exactly this truncation.
pub fn mode_matrix<T: Real>(modes: usize, bs: &BeamSplitter<T>) -> Vec<Amplitude<T>> {
    let dim = 2 * modes;
    let zero = Amplitude::new(T::zero(), T::zero());
    let mut m = vec![zero; dim * dim];
    let (t, r) = (bs.transmission(), bs.reflection());
    for bin in 0..modes {
        let (a, b) = (bin, modes + bin);
        m[a * dim + a] = t;
        m[b * dim + a] = r;
        m[a * dim + b] = r;
        m[b * dim + b] = t;
    }
    m
}

fn matmul<T: Real>(lhs: &[Amplitude<T>], rhs: &[Amplitude<T>], dim: usize) -> Vec<Amplitude<T>> {
    let zero = Amplitude::new(T::zero(), T::zero());
    let mut out = vec![zero; dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            let l = lhs[i * dim + k];
            if l == zero {
                continue;
            }
            for j in 0..dim {
                out[i * dim + j] = out[i * dim + j] + l * rhs[k * dim + j];
            }
        }
    }
    out
}

/// Transforms both creation operators through the beamsplitter: `c → M c Mᵀ`.
pub fn apply_bs<T: Real>(state: &DiscreteBiphoton<T>, bs: &BeamSplitter<T>) -> DiscreteBiphoton<T> {
    let dim = state.dim();
    let m = mode_matrix(state.modes, bs);
    let mut mt = m.clone();
    for i in 0..dim {
        for j in 0..dim {
            mt[i * dim + j] = m[j * dim + i];
        }
    }
    let coeffs = matmul(&matmul(&m, &state.coeffs, dim), &mt, dim);
    DiscreteBiphoton {
        modes: state.modes,
        coeffs,
    }
}

/// `⟨N_a N_b⟩ = Σ_{m₁,m₂} |c[a m₁, b m₂] + c[b m₂, a m₁]|²`.
pub fn coincidence_probability<T: Real>(state: &DiscreteBiphoton<T>) -> T {
    let n = state.modes;
    let dim = state.dim();
    let mut acc = T::zero();
    for m1 in 0..n {
        for m2 in 0..n {
            let (a, b) = (m1, n + m2);
            acc = acc + (state.coeffs[a * dim + b] + state.coeffs[b * dim + a]).norm_sqr();
        }
    }
    acc
}

/// Prepare, transform and count in one call.
pub fn oracle_rate<T: Real>(
    configuration: Configuration,
    jsa: &JointAmplitude<T>,
    tau: T,
    bs: &BeamSplitter<T>,
) -> Result<T> {
    let input = prepare_input(configuration, jsa, tau)?;
    Ok(coincidence_probability(&apply_bs(&input, bs)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{build_jsa, FrequencyGrid, SourceParams};
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Amplitude<f64> {
        Amplitude::new(re, im)
    }

    fn sym_jsa(n: usize) -> JointAmplitude<f64> {
        let g = FrequencyGrid::new(n, 1.5).unwrap();
        build_jsa(&g, &SourceParams::new(5.0, 5.0, 5.0).unwrap(), true)
    }

    fn asym_jsa(n: usize) -> JointAmplitude<f64> {
        let g = FrequencyGrid::new(n, 1.5).unwrap();
        build_jsa(&g, &SourceParams::new(5.0, 5.0, 10.0).unwrap(), true)
    }

    #[test]
    fn cap_on_mode_count() {
        assert!(DiscreteBiphoton::<f64>::vacuum_pair_space(65).is_ok());
        assert!(matches!(
            DiscreteBiphoton::<f64>::vacuum_pair_space(66),
            Err(Error::OracleTooLarge { got: 66, cap: 65 })
        ));
    }

    #[test]
    fn two_port_input_lives_on_cross_port_block() {
        let jsa = sym_jsa(9);
        let s = prepare_input(Configuration::TwoPort, &jsa, 0.0).unwrap();
        let d = jsa.grid().spacing();
        for m1 in 0..9 {
            for m2 in 0..9 {
                assert_eq!(s.coefficient(Port::A, m1, Port::A, m2), c(0.0, 0.0));
                assert_eq!(s.coefficient(Port::B, m1, Port::B, m2), c(0.0, 0.0));
                let expected = jsa.at(m1, m2).scale(d / 2.0);
                assert!((s.coefficient(Port::A, m1, Port::B, m2) - expected).norm() < 1e-15);
            }
        }
        // unit-L2 amplitude in opposite ports is a normalized state
        assert_relative_eq!(s.norm(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn noon_input_has_equal_arm_weights() {
        let jsa = asym_jsa(9);
        let s = prepare_input(Configuration::Noon, &jsa, 0.0).unwrap();
        let mut aa = 0.0;
        let mut bb = 0.0;
        for m1 in 0..9 {
            for m2 in 0..9 {
                aa += s.coefficient(Port::A, m1, Port::A, m2).norm_sqr();
                bb += s.coefficient(Port::B, m1, Port::B, m2).norm_sqr();
                assert_eq!(s.coefficient(Port::A, m1, Port::B, m2), c(0.0, 0.0));
            }
        }
        assert_relative_eq!(aa, bb, max_relative = 1e-14);
        assert_eq!(s.exchange_asymmetry(), 0.0);
    }

    #[test]
    fn single_port_delay_phases_signal_slot_only() {
        let jsa = asym_jsa(9);
        let d = jsa.grid().spacing();
        // one full period of the first bin away from centre
        let tau = 2.0 * std::f64::consts::PI / d;
        let s = prepare_input(Configuration::SinglePort, &jsa, tau).unwrap();
        let axis = jsa.grid().axis();
        for ms in 0..9 {
            for mi in 0..9 {
                let a = jsa.at(ms, mi) * Amplitude::from_polar(1.0, axis[ms] * tau);
                let b = jsa.at(mi, ms) * Amplitude::from_polar(1.0, axis[mi] * tau);
                let expected = (a + b).scale(d / 2.0);
                assert!((s.coefficient(Port::A, ms, Port::A, mi) - expected).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn identity_splitter_leaves_state_unchanged() {
        let jsa = asym_jsa(9);
        let s = prepare_input(Configuration::TwoPort, &jsa, 0.7).unwrap();
        let id = BeamSplitter::new(c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(apply_bs(&s, &id), s);
    }

    #[test]
    fn product_state_in_distinct_ports_always_coincides() {
        let mut s = DiscreteBiphoton::<f64>::vacuum_pair_space(5).unwrap();
        s.add_term(Port::A, 1, Port::B, 3, c(1.0, 0.0));
        assert_relative_eq!(s.norm(), 1.0);
        let id = BeamSplitter::new(c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_relative_eq!(coincidence_probability(&apply_bs(&s, &id)), 1.0);
    }

    #[test]
    fn hom_cancellation_from_operator_algebra() {
        let jsa = sym_jsa(17);
        let s = prepare_input(Configuration::TwoPort, &jsa, 0.0).unwrap();
        let out = apply_bs(&s, &BeamSplitter::lossless_50_50());
        assert!(coincidence_probability(&out) < 1e-16);
        assert_relative_eq!(out.norm(), s.norm(), max_relative = 1e-12);
    }

    #[test]
    fn per_photon_loss_compounds_for_pairs() {
        let bs = BeamSplitter::lossless_50_50().attenuated(0.8).unwrap();
        let m = mode_matrix(3, &bs);
        // each single-photon mode keeps 0.8 of its norm
        for col in 0..6 {
            let w: f64 = (0..6).map(|row| m[row * 6 + col].norm_sqr()).sum();
            assert_relative_eq!(w, 0.8, max_relative = 1e-14);
        }
        let jsa = asym_jsa(17);
        for cfg in Configuration::ALL {
            let s = prepare_input(cfg, &jsa, 1.3).unwrap();
            let out = apply_bs(&s, &bs);
            assert_relative_eq!(out.norm(), 0.64 * s.norm(), max_relative = 1e-12);
            assert!(out.exchange_asymmetry() < 1e-15);
        }
    }

    #[test]
    fn lossless_splitters_preserve_norm() {
        let jsa = asym_jsa(17);
        let theta: f64 = 0.3;
        let bs = BeamSplitter::new(c(0.0, theta.cos()), c(theta.sin(), 0.0)).unwrap();
        for cfg in Configuration::ALL {
            let s = prepare_input(cfg, &jsa, -2.0).unwrap();
            assert_relative_eq!(apply_bs(&s, &bs).norm(), s.norm(), max_relative = 1e-12);
        }
    }
}
