//! Space-vector formulations: Clarke and Park vectors, planar phase and
//! frequency of the Park vector, and the permuted Clarke-frame quantities
//! they relate to.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{self, ComplexFrequencySeries};
use crate::diff;
use crate::error::{Error, Result};
use crate::series::{ComplexSeries, RealSeries, Series};
use crate::signal_model::{ThreePhaseSignal, ALPHA};

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

/// Angle `delta_dq(t)` of the Park reference frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RotatingFrame {
    /// Fixed angle; `omega_dq = 0`. A zero angle is the Clarke frame.
    Constant { angle: f64 },
    /// `delta_dq = omega * t + offset`.
    Ramp { omega: f64, offset: f64 },
    /// Angle samples on the signal grid; `omega_dq` by central differences.
    Sampled { angle: RealSeries },
}

impl Default for RotatingFrame {
    fn default() -> Self {
        Self::clarke()
    }
}

impl RotatingFrame {
    /// The stationary frame (`delta_dq = 0`).
    pub fn clarke() -> Self {
        RotatingFrame::Constant { angle: 0.0 }
    }

    pub fn synchronous(omega: f64) -> Self {
        RotatingFrame::Ramp { omega, offset: 0.0 }
    }

    /// `delta_dq` sampled on `grid`.
    pub fn angles<T>(&self, grid: &Series<T>) -> Result<Vec<f64>> {
        match self {
            RotatingFrame::Constant { angle } => Ok(vec![*angle; grid.len()]),
            RotatingFrame::Ramp { omega, offset } => {
                Ok(grid.times().map(|t| omega * t + offset).collect())
            }
            RotatingFrame::Sampled { angle } => {
                angle.check_grid(grid)?;
                Ok(angle.values().to_vec())
            }
        }
    }

    /// `omega_dq` sampled on `grid`: exact for closed-form laws.
    pub fn omegas<T>(&self, grid: &Series<T>) -> Result<Vec<f64>> {
        match self {
            RotatingFrame::Constant { .. } => Ok(vec![0.0; grid.len()]),
            RotatingFrame::Ramp { omega, .. } => Ok(vec![*omega; grid.len()]),
            RotatingFrame::Sampled { angle } => {
                angle.check_grid(grid)?;
                if angle.len() < 3 {
                    return Err(Error::TooShort {
                        required: 3,
                        actual: angle.len(),
                    });
                }
                Ok(diff::first(angle.values(), angle.dt()))
            }
        }
    }

    /// Samples at each end where `omega_dq` comes from a one-sided stencil.
    pub fn edge_margin(&self) -> usize {
        match self {
            RotatingFrame::Sampled { .. } => analytic::STENCIL_HALF_WIDTH,
            _ => 0,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            RotatingFrame::Constant { angle } => format!("constant angle {angle} rad"),
            RotatingFrame::Ramp { omega, offset } => {
                format!("ramp {omega} rad/s, offset {offset} rad")
            }
            RotatingFrame::Sampled { angle } => format!("sampled ({} samples)", angle.len()),
        }
    }
}

/// Planar phase `ln u_dq + j theta_dq` of a Park vector, with its frame.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarPhaseSeries {
    pub series: ComplexSeries,
    pub frame: RotatingFrame,
}

/// Planar frequency `rho_m + j omega_m` of a Park vector, with its frame.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarFrequencySeries {
    pub frequency: ComplexFrequencySeries,
    pub frame: RotatingFrame,
}

/// Amplitude-invariant Clarke vector `v_alpha + j v_beta`.
///
/// A balanced positive-sequence set of peak `U` maps to a vector of
/// magnitude `U`; the zero-sequence part is dropped.
pub fn clarke(sig: &ThreePhaseSignal) -> ComplexSeries {
    sig.as_series().map(|&[a, b, c]| {
        Complex64::new(
            (2.0 / 3.0) * (a - 0.5 * b - 0.5 * c),
            (2.0 / 3.0) * SQRT3_2 * (b - c),
        )
    })
}

/// Park vector: the Clarke vector rotated by `-delta_dq(t)`.
pub fn park(v_ab: &ComplexSeries, frame: &RotatingFrame) -> Result<ComplexSeries> {
    let angles = frame.angles(v_ab)?;
    let rotated = v_ab
        .values()
        .iter()
        .zip(&angles)
        .map(|(v, &d)| v * Complex64::from_polar(1.0, -d))
        .collect();
    Ok(ComplexSeries::new(v_ab.t0(), v_ab.dt(), rotated)?.with_edge_guard(v_ab.edge_guard()))
}

/// Planar phase of a Park vector (same log, unwrapping and floor as
/// [`analytic::icp`]).
pub fn ipp(v_dq: &ComplexSeries, frame: &RotatingFrame) -> Result<PlanarPhaseSeries> {
    Ok(PlanarPhaseSeries {
        series: analytic::icp(v_dq)?,
        frame: frame.clone(),
    })
}

/// Planar frequency of a Park vector (same stencil as [`analytic::icf`]).
pub fn ipf(v_dq: &ComplexSeries, frame: &RotatingFrame) -> Result<PlanarFrequencySeries> {
    let mut frequency = analytic::icf(v_dq)?;
    frequency.edge_margin = frequency.edge_margin.max(frame.edge_margin());
    Ok(PlanarFrequencySeries {
        frequency,
        frame: frame.clone(),
    })
}

/// Clarke, Park and planar frequency in one call.
pub fn planar_frequency(
    sig: &ThreePhaseSignal,
    frame: &RotatingFrame,
) -> Result<PlanarFrequencySeries> {
    ipf(&park(&clarke(sig), frame)?, frame)
}

/// Clarke, Park and planar phase in one call.
pub fn planar_phase(sig: &ThreePhaseSignal, frame: &RotatingFrame) -> Result<PlanarPhaseSeries> {
    ipp(&park(&clarke(sig), frame)?, frame)
}

const NEG_J: Complex64 = Complex64 { re: 0.0, im: -1.0 };
const J: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Clarke-frame phase with permuted parts: `arg(v_ab) - j ln|v_ab|`.
pub fn permuted_phase(v_ab: &ComplexSeries) -> Result<ComplexSeries> {
    Ok(analytic::icp(v_ab)?.map(|p| NEG_J * p))
}

/// Clarke-frame frequency with permuted parts: `omega - j rho`.
pub fn permuted_frequency(v_ab: &ComplexSeries) -> Result<ComplexFrequencySeries> {
    let f = analytic::icf(v_ab)?;
    Ok(ComplexFrequencySeries {
        series: f.series.map(|s| NEG_J * s),
        edge_margin: f.edge_margin,
    })
}

/// `phi_l = -j phi_m + delta_dq`.
pub fn lei_phase_from_milano(phi_m: &PlanarPhaseSeries) -> Result<ComplexSeries> {
    let delta = phi_m.frame.angles(&phi_m.series)?;
    Ok(zip_real(&phi_m.series, &delta, |p, d| NEG_J * p + d))
}

/// `phi_m = j (phi_l - delta_dq)`.
pub fn milano_phase_from_lei(
    phi_l: &ComplexSeries,
    frame: &RotatingFrame,
) -> Result<PlanarPhaseSeries> {
    let delta = frame.angles(phi_l)?;
    Ok(PlanarPhaseSeries {
        series: zip_real(phi_l, &delta, |p, d| J * (p - d)),
        frame: frame.clone(),
    })
}

/// `s_l = -j s_m + omega_dq`.
pub fn lei_frequency_from_milano(s_m: &PlanarFrequencySeries) -> Result<ComplexFrequencySeries> {
    let omega = s_m.frame.omegas(&s_m.frequency.series)?;
    Ok(ComplexFrequencySeries {
        series: zip_real(&s_m.frequency.series, &omega, |s, w| NEG_J * s + w),
        edge_margin: s_m.frequency.edge_margin,
    })
}

/// `s_m = j (s_l - omega_dq)`.
pub fn milano_frequency_from_lei(
    s_l: &ComplexFrequencySeries,
    frame: &RotatingFrame,
) -> Result<PlanarFrequencySeries> {
    let omega = frame.omegas(&s_l.series)?;
    Ok(PlanarFrequencySeries {
        frequency: ComplexFrequencySeries {
            series: zip_real(&s_l.series, &omega, |s, w| J * (s - w)),
            edge_margin: s_l.edge_margin.max(frame.edge_margin()),
        },
        frame: frame.clone(),
    })
}

fn zip_real(
    z: &ComplexSeries,
    r: &[f64],
    f: impl Fn(Complex64, f64) -> Complex64,
) -> ComplexSeries {
    let mut i = 0;
    z.map(|&v| {
        let out = f(v, r[i]);
        i += 1;
        out
    })
}

/// Lyon positive-sequence vector `(v_a + alpha v_b + alpha^2 v_c) / 3`
/// built from the instantaneous phase values. It contains the positive
/// sequence term and the conjugated negative-sequence term.
pub fn lyon_positive(sig: &ThreePhaseSignal) -> ComplexSeries {
    let a2 = ALPHA * ALPHA;
    sig.as_series()
        .map(|&[a, b, c]| (Complex64::new(a, 0.0) + ALPHA * b + a2 * c) / 3.0)
}

/// Share of the signal energy carried by the zero-sequence (homopolar)
/// part, which the Clarke and Park vectors discard.
pub fn zero_sequence_energy_ratio(sig: &ThreePhaseSignal) -> f64 {
    let (zero, total) = sig.samples().iter().fold((0.0, 0.0), |(z, t), s| {
        let v0 = (s[0] + s[1] + s[2]) / 3.0;
        (
            z + 3.0 * v0 * v0,
            t + s[0] * s[0] + s[1] * s[1] + s[2] * s[2],
        )
    });
    if total == 0.0 {
        0.0
    } else {
        zero / total
    }
}
