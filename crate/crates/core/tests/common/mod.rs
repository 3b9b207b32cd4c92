#![allow(dead_code)]

use std::f64::consts::TAU;

use ifreq::signal_model::{Component, ComponentFrequency, Envelope, PhaseLaw, Sequence};
use ifreq::{Complex64, SignalSpec, ThreePhaseSignal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const W0: f64 = TAU * 50.0;
pub const FS: f64 = 10_000.0;
pub const DT: f64 = 1.0 / FS;
pub const N: usize = 10_000;

pub fn desk(spec: &SignalSpec) -> ThreePhaseSignal {
    ifreq::generate(spec, 0.0, DT, N).unwrap()
}

pub fn balanced() -> SignalSpec {
    SignalSpec::balanced(1.0, W0)
}

pub fn am(depth: f64, hz: f64) -> SignalSpec {
    balanced().with_envelope(Envelope::Sinusoidal {
        amplitude: 1.0,
        depth,
        frequency_hz: hz,
        phase: 0.0,
    })
}

/// Every envelope and phase law in the catalog, plus unbalance and
/// zero-sequence cases.
pub fn catalog() -> Vec<(&'static str, SignalSpec)> {
    vec![
        ("balanced", balanced()),
        (
            "ramp",
            balanced().with_envelope(Envelope::Ramp {
                amplitude: 1.0,
                slope: 0.3,
            }),
        ),
        (
            "exponential",
            balanced().with_envelope(Envelope::Exponential {
                amplitude: 1.0,
                rate: -0.5,
            }),
        ),
        ("am", am(0.1, 2.0)),
        (
            "offset",
            balanced().with_deviation(PhaseLaw::Ramp {
                rate: 2.0,
                offset: 0.2,
            }),
        ),
        (
            "phase-modulated",
            balanced().with_deviation(PhaseLaw::Sinusoidal {
                amplitude: 0.05,
                frequency_hz: 3.0,
                phase: 0.0,
            }),
        ),
        (
            "negative-sequence",
            balanced().with_component(Component::new(
                Sequence::Negative,
                ComponentFrequency::Harmonic(1),
                0.1,
            )),
        ),
        (
            "zero-sequence",
            balanced().with_component(Component::new(
                Sequence::Zero,
                ComponentFrequency::InterharmonicHz(75.0),
                0.2,
            )),
        ),
    ]
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly random rotation from a normalized random quaternion.
pub fn random_rotation(rng: &mut impl Rng) -> [[f64; 3]; 3] {
    let mut q = [0.0f64; 4];
    loop {
        for c in &mut q {
            *c = rng.gen_range(-1.0..1.0);
        }
        let n2: f64 = q.iter().map(|c| c * c).sum();
        if n2 > 1e-3 && n2 <= 1.0 {
            let n = n2.sqrt();
            q.iter_mut().for_each(|c| *c /= n);
            break;
        }
    }
    let [w, x, y, z] = q;
    [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
        ],
        [
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
        ],
        [
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ]
}

/// Direct O(n^2) DFT.
pub fn dft(x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(j, v)| v * Complex64::from_polar(1.0, -TAU * (k * j % n) as f64 / n as f64))
                .sum()
        })
        .collect()
}

pub fn interior(n: usize, margin: usize) -> std::ops::Range<usize> {
    margin..n.saturating_sub(margin)
}

pub fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| m.max(v.abs()))
}
