//! Analytic-signal formulation of instantaneous complex phase and frequency.
//!
//! A real channel `v` is extended to `v + j H{v}` with a full-record DFT
//! Hilbert transform. The complex phase is the unwrapped logarithm of that
//! signal and the complex frequency its time derivative, whose real part is
//! the radial frequency `u'/u` (Np/s) and whose imaginary part is the angular
//! frequency (rad/s).
//!
//! The DFT treats the record as one period of a periodic signal. Records
//! that are not periodic get an edge transient; the first and last
//! [`hilbert_guard`] samples of every Hilbert output are flagged through the
//! series' edge guard.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::diff;
use crate::error::{Error, Result};
use crate::series::{interior, ComplexSeries, RealSeries};

/// Shortest record accepted by [`hilbert`].
pub const MIN_HILBERT_SAMPLES: usize = 8;

/// Samples whose magnitude is at or below this fraction of the series'
/// maximum magnitude have no meaningful phase.
pub const MAGNITUDE_FLOOR: f64 = 1e-12;

/// Half-width of the central difference stencil.
pub const STENCIL_HALF_WIDTH: usize = 1;

/// Number of samples flagged at each end of a Hilbert-transformed record.
pub fn hilbert_guard(n: usize) -> usize {
    (n / 32).max(1)
}

/// Complex frequency `rho + j omega` with its unreliable edge count.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexFrequencySeries {
    pub series: ComplexSeries,
    /// Samples at each end excluded from interior comparisons.
    pub edge_margin: usize,
}

impl ComplexFrequencySeries {
    /// Radial frequency (Np/s).
    pub fn rho(&self) -> RealSeries {
        self.series.re()
    }

    /// Angular frequency (rad/s).
    pub fn omega(&self) -> RealSeries {
        self.series.im()
    }

    pub fn interior(&self) -> std::ops::Range<usize> {
        interior(self.series.len(), self.edge_margin)
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }
}

/// Discrete Hilbert transform: DFT, multiply by `-j sgn(f)` (zero at DC and
/// Nyquist), inverse DFT.
pub fn hilbert(x: &RealSeries) -> Result<RealSeries> {
    let n = x.len();
    if n < MIN_HILBERT_SAMPLES {
        return Err(Error::TooShort {
            required: MIN_HILBERT_SAMPLES,
            actual: n,
        });
    }
    let mut planner = FftPlanner::<f64>::new();
    let mut buf: Vec<Complex64> = x.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    planner.plan_fft_forward(n).process(&mut buf);

    let neg_j = Complex64::new(0.0, -1.0);
    let pos_j = Complex64::new(0.0, 1.0);
    // Bins 1..half are positive frequencies, half+1.. negative; for even n
    // bin n/2 is the Nyquist bin and shares both signs.
    let half = n.div_ceil(2);
    buf[0] = Complex64::default();
    for (k, b) in buf.iter_mut().enumerate().skip(1) {
        if k < half {
            *b *= neg_j;
        } else if n.is_multiple_of(2) && k == n / 2 {
            *b = Complex64::default();
        } else {
            *b *= pos_j;
        }
    }
    planner.plan_fft_inverse(n).process(&mut buf);

    let scale = 1.0 / n as f64;
    let values = buf.iter().map(|z| z.re * scale).collect();
    Ok(RealSeries::new(x.t0(), x.dt(), values)?
        .with_edge_guard(x.edge_guard().max(hilbert_guard(n))))
}

/// `x + j H{x}`. The real part is the input, bit for bit.
pub fn analytic_signal(x: &RealSeries) -> Result<ComplexSeries> {
    let h = hilbert(x)?;
    x.zip_with(&h, |&re, &im| Complex64::new(re, im))
}

/// First sample whose magnitude is at or below the floor, if any.
fn check_floor(z: &ComplexSeries) -> Result<()> {
    let max = z.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    let floor = MAGNITUDE_FLOOR * max;
    match z.values().iter().position(|v| v.norm() <= floor) {
        Some(index) => Err(Error::BelowMagnitudeFloor { index, floor }),
        None => Ok(()),
    }
}

/// Complex phase `ln|z| + j arg(z)` with the argument unwrapped sample to
/// sample and anchored at the principal value of the first sample.
///
/// Unwrapping assumes the phase advances by less than pi per sample.
pub fn icp(z: &ComplexSeries) -> Result<ComplexSeries> {
    check_floor(z)?;
    let vals = z.values();
    let mut out = Vec::with_capacity(vals.len());
    let mut phase = match vals.first() {
        Some(first) => first.arg(),
        None => return Ok(z.clone()),
    };
    out.push(Complex64::new(vals[0].norm().ln(), phase));
    for w in vals.windows(2) {
        phase += (w[1] * w[0].conj()).arg();
        out.push(Complex64::new(w[1].norm().ln(), phase));
    }
    Ok(ComplexSeries::new(z.t0(), z.dt(), out)?.with_edge_guard(z.edge_guard()))
}

/// Complex frequency: time derivative of [`icp`] by second-order central
/// differences (one-sided at the two boundary samples).
///
/// The stencil is fed per-step increments `ln(|z[j+1]|/|z[j]|)` and
/// `arg(z[j+1] conj(z[j]))`, which equal the differences of the unwrapped
/// phase but do not lose precision once the accumulated phase grows large.
pub fn icf(z: &ComplexSeries) -> Result<ComplexFrequencySeries> {
    if z.len() < 3 {
        return Err(Error::TooShort {
            required: 3,
            actual: z.len(),
        });
    }
    check_floor(z)?;
    let vals = z.values();
    let (log_steps, arg_steps): (Vec<f64>, Vec<f64>) = vals
        .windows(2)
        .map(|w| ((w[1].norm() / w[0].norm()).ln(), (w[1] * w[0].conj()).arg()))
        .unzip();
    let rho = diff::first_from_steps(&log_steps, z.dt());
    let omega = diff::first_from_steps(&arg_steps, z.dt());
    let values = rho
        .into_iter()
        .zip(omega)
        .map(|(r, w)| Complex64::new(r, w))
        .collect();
    Ok(ComplexFrequencySeries {
        series: ComplexSeries::new(z.t0(), z.dt(), values)?.with_edge_guard(z.edge_guard()),
        edge_margin: STENCIL_HALF_WIDTH + z.edge_guard(),
    })
}

/// Complex phase of a real channel via its analytic signal.
pub fn channel_icp(x: &RealSeries) -> Result<ComplexSeries> {
    icp(&analytic_signal(x)?)
}

/// Complex frequency of a real channel via its analytic signal.
pub fn channel_icf(x: &RealSeries) -> Result<ComplexFrequencySeries> {
    icf(&analytic_signal(x)?)
}

/// Fraction of the envelope's energy lying at or above the carrier
/// frequency, or 0 when the envelope's 99%-energy bandwidth lies strictly
/// below the carrier.
///
/// The spectrum is the one-sided DFT power of the supplied envelope
/// samples, DC included.
pub fn bedrosian_overlap(envelope: &RealSeries, carrier_hz: f64) -> f64 {
    let n = envelope.len();
    if n == 0 {
        return 0.0;
    }
    let mut buf: Vec<Complex64> = envelope
        .values()
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    FftPlanner::<f64>::new()
        .plan_fft_forward(n)
        .process(&mut buf);

    let df = 1.0 / (n as f64 * envelope.dt());
    let power: Vec<(f64, f64)> = (0..=n / 2)
        .map(|k| {
            // Non-DC, non-Nyquist bins carry their mirror image's energy too.
            let fold = if k == 0 || (n.is_multiple_of(2) && k == n / 2) {
                1.0
            } else {
                2.0
            };
            (k as f64 * df, fold * buf[k].norm_sqr())
        })
        .collect();
    let total: f64 = power.iter().map(|p| p.1).sum();
    if total == 0.0 {
        return 0.0;
    }

    let mut cumulative = 0.0;
    let mut bandwidth = 0.0;
    for &(f, p) in &power {
        cumulative += p;
        bandwidth = f;
        if cumulative >= 0.99 * total {
            break;
        }
    }
    if bandwidth < carrier_hz {
        return 0.0;
    }
    power
        .iter()
        .filter(|(f, _)| *f >= carrier_hz)
        .map(|p| p.1)
        .sum::<f64>()
        / total
}
