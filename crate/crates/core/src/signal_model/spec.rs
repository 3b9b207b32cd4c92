//! Parametric description of a three-phase signal.
//!
//! Each phase is `u_k(t) cos(omega_o t + phi_k(t) + zeta_k(t))` plus any number
//! of additive sequence components. All laws come from a closed catalog so
//! every quantity derived from a generated signal has a closed form.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default angular shifts of phases a, b, c (balanced positive sequence).
pub const BALANCED_SHIFTS: [f64; 3] = [0.0, -TAU / 3.0, TAU / 3.0];

/// Value and first two time derivatives of a scalar law at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// Per-phase magnitude law `u_k(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Envelope {
    Constant {
        amplitude: f64,
    },
    /// `amplitude + slope * t`
    Ramp {
        amplitude: f64,
        slope: f64,
    },
    /// `amplitude * exp(rate * t)`
    Exponential {
        amplitude: f64,
        rate: f64,
    },
    /// `amplitude * (1 + depth * sin(2 pi frequency_hz t + phase))`
    Sinusoidal {
        amplitude: f64,
        depth: f64,
        frequency_hz: f64,
        #[serde(default)]
        phase: f64,
    },
}

impl Envelope {
    pub fn jet(&self, t: f64) -> Jet {
        match *self {
            Envelope::Constant { amplitude } => Jet {
                value: amplitude,
                d1: 0.0,
                d2: 0.0,
            },
            Envelope::Ramp { amplitude, slope } => Jet {
                value: amplitude + slope * t,
                d1: slope,
                d2: 0.0,
            },
            Envelope::Exponential { amplitude, rate } => {
                let value = amplitude * (rate * t).exp();
                Jet {
                    value,
                    d1: rate * value,
                    d2: rate * rate * value,
                }
            }
            Envelope::Sinusoidal {
                amplitude,
                depth,
                frequency_hz,
                phase,
            } => {
                let w = TAU * frequency_hz;
                let arg = w * t + phase;
                Jet {
                    value: amplitude * (1.0 + depth * arg.sin()),
                    d1: amplitude * depth * w * arg.cos(),
                    d2: -amplitude * depth * w * w * arg.sin(),
                }
            }
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.jet(t).value
    }

    fn validate(&self) -> Result<()> {
        let (amplitude, extra) = match *self {
            Envelope::Constant { amplitude } => (amplitude, vec![]),
            Envelope::Ramp { amplitude, slope } => (amplitude, vec![slope]),
            Envelope::Exponential { amplitude, rate } => (amplitude, vec![rate]),
            Envelope::Sinusoidal {
                amplitude,
                depth,
                frequency_hz,
                phase,
            } => {
                if !(0.0..=1.0).contains(&depth) {
                    return Err(Error::InvalidSpec(format!(
                        "modulation depth must lie in [0, 1], got {depth}"
                    )));
                }
                if frequency_hz < 0.0 {
                    return Err(Error::InvalidSpec(format!(
                        "modulation frequency must be >= 0, got {frequency_hz}"
                    )));
                }
                (amplitude, vec![frequency_hz, phase])
            }
        };
        if !amplitude.is_finite() || amplitude < 0.0 {
            return Err(Error::InvalidSpec(format!(
                "envelope amplitude must be finite and >= 0, got {amplitude}"
            )));
        }
        if extra.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidSpec(
                "envelope parameter is not finite".into(),
            ));
        }
        Ok(())
    }
}

/// Time-dependent part of the phase, `phi_k(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhaseLaw {
    Constant {
        phase: f64,
    },
    /// `offset + rate * t`; a frequency offset of `rate` rad/s.
    Ramp {
        rate: f64,
        offset: f64,
    },
    /// `amplitude * sin(2 pi frequency_hz t + phase)`
    Sinusoidal {
        amplitude: f64,
        frequency_hz: f64,
        #[serde(default)]
        phase: f64,
    },
}

impl Default for PhaseLaw {
    fn default() -> Self {
        PhaseLaw::Constant { phase: 0.0 }
    }
}

impl PhaseLaw {
    pub fn jet(&self, t: f64) -> Jet {
        match *self {
            PhaseLaw::Constant { phase } => Jet {
                value: phase,
                d1: 0.0,
                d2: 0.0,
            },
            PhaseLaw::Ramp { rate, offset } => Jet {
                value: offset + rate * t,
                d1: rate,
                d2: 0.0,
            },
            PhaseLaw::Sinusoidal {
                amplitude,
                frequency_hz,
                phase,
            } => {
                let w = TAU * frequency_hz;
                let arg = w * t + phase;
                Jet {
                    value: amplitude * arg.sin(),
                    d1: amplitude * w * arg.cos(),
                    d2: -amplitude * w * w * arg.sin(),
                }
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let params = match *self {
            PhaseLaw::Constant { phase } => vec![phase],
            PhaseLaw::Ramp { rate, offset } => vec![rate, offset],
            PhaseLaw::Sinusoidal {
                amplitude,
                frequency_hz,
                phase,
            } => {
                if amplitude < 0.0 || frequency_hz < 0.0 {
                    return Err(Error::InvalidSpec(
                        "phase modulation amplitude and frequency must be >= 0".into(),
                    ));
                }
                vec![amplitude, frequency_hz, phase]
            }
        };
        if params.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidSpec(
                "phase-law parameter is not finite".into(),
            ));
        }
        Ok(())
    }
}

/// Angular shift `zeta_k(t) = offset + rate * t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Shift {
    pub offset: f64,
    #[serde(default)]
    pub rate: f64,
}

impl Shift {
    pub fn constant(offset: f64) -> Self {
        Self { offset, rate: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpec {
    pub envelope: Envelope,
    #[serde(default)]
    pub deviation: PhaseLaw,
    /// `None` selects the balanced default for the phase's position.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<Shift>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sequence {
    Positive,
    Negative,
    Zero,
}

impl Sequence {
    /// Angular shifts applied to phases a, b, c.
    pub fn shifts(self) -> [f64; 3] {
        match self {
            Sequence::Positive => BALANCED_SHIFTS,
            Sequence::Negative => [0.0, TAU / 3.0, -TAU / 3.0],
            Sequence::Zero => [0.0; 3],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentFrequency {
    /// Integer multiple of the nominal frequency.
    Harmonic(u32),
    /// Absolute frequency in Hz.
    InterharmonicHz(f64),
}

/// Additive tone `amplitude * cos(w t + phase + s_k)` with the sequence's
/// per-phase shifts `s_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub sequence: Sequence,
    pub frequency: ComponentFrequency,
    pub amplitude: f64,
    #[serde(default)]
    pub phase: f64,
}

impl Component {
    pub fn new(sequence: Sequence, frequency: ComponentFrequency, amplitude: f64) -> Self {
        Self {
            sequence,
            frequency,
            amplitude,
            phase: 0.0,
        }
    }

    pub fn angular_frequency(&self, omega_o: f64) -> f64 {
        match self.frequency {
            ComponentFrequency::Harmonic(h) => h as f64 * omega_o,
            ComponentFrequency::InterharmonicHz(f) => TAU * f,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalSpec {
    /// Nominal angular frequency in rad/s.
    pub omega_o: f64,
    pub phases: [PhaseSpec; 3],
    #[serde(default)]
    pub components: Vec<Component>,
}

impl SignalSpec {
    /// Balanced positive-sequence tone of the given peak amplitude.
    pub fn balanced(amplitude: f64, omega_o: f64) -> Self {
        let phase = PhaseSpec {
            envelope: Envelope::Constant { amplitude },
            deviation: PhaseLaw::default(),
            shift: None,
        };
        Self {
            omega_o,
            phases: [phase; 3],
            components: Vec::new(),
        }
    }

    /// Applies one envelope law to all three phases.
    pub fn with_envelope(mut self, envelope: Envelope) -> Self {
        for p in &mut self.phases {
            p.envelope = envelope;
        }
        self
    }

    pub fn with_deviation(mut self, deviation: PhaseLaw) -> Self {
        for p in &mut self.phases {
            p.deviation = deviation;
        }
        self
    }

    pub fn with_component(mut self, component: Component) -> Self {
        self.components.push(component);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_o.is_finite() && self.omega_o > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "omega_o must be finite and > 0, got {}",
                self.omega_o
            )));
        }
        for p in &self.phases {
            p.envelope.validate()?;
            p.deviation.validate()?;
            if let Some(s) = p.shift {
                if !(s.offset.is_finite() && s.rate.is_finite()) {
                    return Err(Error::InvalidSpec("shift is not finite".into()));
                }
            }
        }
        for c in &self.components {
            if !(c.amplitude.is_finite() && c.amplitude >= 0.0 && c.phase.is_finite()) {
                return Err(Error::InvalidSpec(format!(
                    "component amplitude must be finite and >= 0, got {}",
                    c.amplitude
                )));
            }
            match c.frequency {
                ComponentFrequency::Harmonic(0) => {
                    return Err(Error::InvalidSpec("harmonic order must be >= 1".into()))
                }
                ComponentFrequency::InterharmonicHz(f) if !(f.is_finite() && f >= 0.0) => {
                    return Err(Error::InvalidSpec(format!(
                        "interharmonic frequency must be finite and >= 0, got {f}"
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Effective shift law of phase `k` (0 = a, 1 = b, 2 = c).
    pub fn shift(&self, k: usize) -> Shift {
        self.phases[k]
            .shift
            .unwrap_or(Shift::constant(BALANCED_SHIFTS[k]))
    }

    /// Full phase angle `omega_o t + phi_k(t) + zeta_k(t)` and its derivatives.
    pub fn angle_jet(&self, k: usize, t: f64) -> Jet {
        let dev = self.phases[k].deviation.jet(t);
        let shift = self.shift(k);
        Jet {
            value: self.omega_o * t + dev.value + shift.offset + shift.rate * t,
            d1: self.omega_o + dev.d1 + shift.rate,
            d2: dev.d2,
        }
    }

    /// Closed-form value and derivatives of `v_k(t)`, including additive
    /// components.
    pub fn phase_jet(&self, k: usize, t: f64) -> Jet {
        let u = self.phases[k].envelope.jet(t);
        let psi = self.angle_jet(k, t);
        let (s, c) = psi.value.sin_cos();
        let mut jet = Jet {
            value: u.value * c,
            d1: u.d1 * c - u.value * psi.d1 * s,
            d2: u.d2 * c
                - 2.0 * u.d1 * psi.d1 * s
                - u.value * psi.d2 * s
                - u.value * psi.d1 * psi.d1 * c,
        };
        for comp in &self.components {
            let w = comp.angular_frequency(self.omega_o);
            let arg = w * t + comp.phase + comp.sequence.shifts()[k];
            let (s, c) = arg.sin_cos();
            jet.value += comp.amplitude * c;
            jet.d1 -= comp.amplitude * w * s;
            jet.d2 -= comp.amplitude * w * w * c;
        }
        jet
    }

    pub fn phase_value(&self, k: usize, t: f64) -> f64 {
        self.phase_jet(k, t).value
    }

    /// Fundamental per-phase phasors `u_k e^{j(phi_k + zeta_k)}` at `t`,
    /// referred to the nominal rotation `e^{j omega_o t}`. Additive
    /// components are not included.
    pub fn fundamental_phasors(&self, t: f64) -> [Complex64; 3] {
        std::array::from_fn(|k| {
            let u = self.phases[k].envelope.value(t);
            let angle = self.angle_jet(k, t).value - self.omega_o * t;
            Complex64::from_polar(u, angle)
        })
    }

    /// Nominal period `2 pi / omega_o`.
    pub fn period(&self) -> f64 {
        TAU / self.omega_o
    }

    pub fn nominal_hz(&self) -> f64 {
        self.omega_o / (2.0 * PI)
    }
}
