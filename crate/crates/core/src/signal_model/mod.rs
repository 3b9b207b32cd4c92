//! Three-phase signal model: synthetic generation from a [`SignalSpec`],
//! symmetrical components, and CSV trace ingestion.

mod sequence;
mod spec;
mod trace;

pub use sequence::{sequence_phasors, SequencePhasors, ALPHA};
pub use spec::{
    Component, ComponentFrequency, Envelope, Jet, PhaseLaw, PhaseSpec, Sequence, Shift, SignalSpec,
    BALANCED_SHIFTS,
};
pub use trace::{read_trace, write_trace};

use crate::error::{Error, Result};
use crate::series::{RealSeries, Series};

/// Minimum record length of a [`ThreePhaseSignal`].
pub const MIN_SAMPLES: usize = 3;

/// Uniformly sampled `(v_a, v_b, v_c)` trace.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreePhaseSignal {
    series: Series<[f64; 3]>,
}

impl ThreePhaseSignal {
    pub fn new(t0: f64, dt: f64, samples: Vec<[f64; 3]>) -> Result<Self> {
        if samples.len() < MIN_SAMPLES {
            return Err(Error::TooShort {
                required: MIN_SAMPLES,
                actual: samples.len(),
            });
        }
        Ok(Self {
            series: Series::new(t0, dt, samples)?,
        })
    }

    pub fn t0(&self) -> f64 {
        self.series.t0()
    }

    pub fn dt(&self) -> f64 {
        self.series.dt()
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    pub fn samples(&self) -> &[[f64; 3]] {
        self.series.values()
    }

    pub fn time(&self, j: usize) -> f64 {
        self.series.time(j)
    }

    pub fn as_series(&self) -> &Series<[f64; 3]> {
        &self.series
    }

    /// Phase `k` (0 = a, 1 = b, 2 = c) as a real series.
    pub fn channel(&self, k: usize) -> RealSeries {
        self.series.map(|s| s[k])
    }

    /// Applies `f` to every sample, keeping the grid.
    pub fn map_samples(&self, f: impl FnMut(&[f64; 3]) -> [f64; 3]) -> Result<Self> {
        let mapped = self.series.map(f);
        Self::new(mapped.t0(), mapped.dt(), mapped.into_values())
    }

    /// Applies a fixed 3x3 linear map (row-major) to every sample.
    pub fn transformed(&self, m: &[[f64; 3]; 3]) -> Result<Self> {
        self.map_samples(|v| {
            std::array::from_fn(|r| m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2])
        })
    }
}

/// Samples `spec` on the grid `t0 + j*dt`, `j < n`, from its closed forms.
pub fn generate(spec: &SignalSpec, t0: f64, dt: f64, n: usize) -> Result<ThreePhaseSignal> {
    spec.validate()?;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidStep(dt));
    }
    let mut samples = Vec::with_capacity(n);
    for j in 0..n {
        let t = t0 + j as f64 * dt;
        for (k, p) in spec.phases.iter().enumerate() {
            let u = p.envelope.value(t);
            if u < 0.0 {
                return Err(Error::InvalidSpec(format!(
                    "envelope of phase {} is negative ({u}) at t = {t}",
                    ["a", "b", "c"][k]
                )));
            }
        }
        samples.push(std::array::from_fn(|k| spec.phase_value(k, t)));
    }
    ThreePhaseSignal::new(t0, dt, samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn balanced_set_at_origin() {
        let spec = SignalSpec::balanced(1.0, TAU * 50.0);
        let sig = generate(&spec, 0.0, 1e-4, 8).unwrap();
        let s = sig.samples()[0];
        assert!((s[0] - 1.0).abs() < 1e-15);
        assert!((s[1] + 0.5).abs() < 1e-15);
        assert!((s[2] + 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_amplitude_gives_zero_signal() {
        let spec = SignalSpec::balanced(0.0, TAU * 50.0);
        let sig = generate(&spec, 0.0, 1e-4, 16).unwrap();
        assert!(sig.samples().iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn rejects_bad_grid_and_spec() {
        let spec = SignalSpec::balanced(1.0, TAU * 50.0);
        assert_eq!(generate(&spec, 0.0, 0.0, 8), Err(Error::InvalidStep(0.0)));
        assert!(matches!(
            generate(&spec, 0.0, 1e-4, 2),
            Err(Error::TooShort { .. })
        ));
        let bad = SignalSpec::balanced(-0.5, TAU * 50.0);
        assert!(matches!(
            generate(&bad, 0.0, 1e-4, 8),
            Err(Error::InvalidSpec(_))
        ));
        let falling = SignalSpec::balanced(1.0, TAU * 50.0).with_envelope(Envelope::Ramp {
            amplitude: 1.0,
            slope: -10.0,
        });
        assert!(matches!(
            generate(&falling, 0.0, 0.01, 20),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = SignalSpec::balanced(1.0, TAU * 50.0).with_component(Component::new(
            Sequence::Negative,
            ComponentFrequency::Harmonic(5),
            0.1,
        ));
        assert_eq!(
            generate(&spec, 0.0, 1e-4, 256).unwrap(),
            generate(&spec, 0.0, 1e-4, 256).unwrap()
        );
    }
}
