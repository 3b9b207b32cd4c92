//! Geometric frequency of the three-phase voltage trajectory.
//!
//! The voltage vector `v(t)` in abc space is treated as the velocity of a
//! flux trajectory. Its geometric frequency has a scalar part
//! `(v . v') / |v|^2` (radial dilatation) and a bivector part
//! `(v ^ v') / |v|^2`. In three dimensions the bivector is carried by its dual
//! vector `v x v'`, so its magnitude is `|v x v'|` and its plane is the one
//! normal to `v x v'`. Torsion `|v . (v' x v'')| / |v x v'|^2` is zero exactly
//! when the trajectory is planar.
//!
//! Derivatives are always numerical, so generated and ingested traces go
//! through the same code path.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic;
use crate::diff;
use crate::error::{Error, Result};
use crate::series::{interior, ComplexSeries, RealSeries};
use crate::signal_model::ThreePhaseSignal;

pub type Vec3 = [f64; 3];

/// Shortest record accepted by [`derivatives`].
pub const MIN_SAMPLES: usize = 5;

/// Relative floor below which `|v|` or `|v x v'|` is treated as zero.
pub const DEGENERACY_FLOOR: f64 = 1e-12;

/// Default bound on the dimensionless torsion metric for a planar trajectory.
pub const PLANARITY_THRESHOLD: f64 = 1e-4;

pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

fn scale(a: &Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// First and second time derivatives of the voltage vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivatives {
    pub first: Vec<Vec3>,
    pub second: Vec<Vec3>,
    /// Boundary samples computed with one-sided stencils.
    pub edge_margin: usize,
}

/// Componentwise second-order finite differences.
pub fn derivatives(sig: &ThreePhaseSignal) -> Result<Derivatives> {
    if sig.len() < MIN_SAMPLES {
        return Err(Error::TooShort {
            required: MIN_SAMPLES,
            actual: sig.len(),
        });
    }
    let dt = sig.dt();
    Ok(Derivatives {
        first: diff::componentwise(sig.samples(), |c| diff::first(c, dt)),
        second: diff::componentwise(sig.samples(), |c| diff::second(c, dt)),
        edge_margin: analytic::STENCIL_HALF_WIDTH,
    })
}

/// Scalar and bivector parts of the geometric frequency at one sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyTerms {
    /// `(v . v') / |v|^2`, in Np/s.
    pub rho: f64,
    /// `|v ^ v'| / |v|^2`, in rad/s.
    pub omega_biv: f64,
    /// Unit dual of the bivector; `None` when `|v x v'|` is below the floor.
    pub plane_normal: Option<Vec3>,
}

/// Per-sample geometric frequency terms; `None` where `|v|` is below
/// [`DEGENERACY_FLOOR`] times the record maximum.
pub fn frequency_terms(v: &[Vec3], dv: &[Vec3]) -> Vec<Option<FrequencyTerms>> {
    let v_floor = DEGENERACY_FLOOR * v.iter().map(norm).fold(0.0, f64::max);
    let w_floor = wedge_floor(v, dv);
    v.iter()
        .zip(dv)
        .map(|(v, dv)| {
            let n2 = dot(v, v);
            if n2.sqrt() <= v_floor {
                return None;
            }
            let c = cross(v, dv);
            let wedge = norm(&c);
            Some(FrequencyTerms {
                rho: dot(v, dv) / n2,
                omega_biv: wedge / n2,
                plane_normal: (wedge > w_floor).then(|| scale(&c, 1.0 / wedge)),
            })
        })
        .collect()
}

fn wedge_floor(v: &[Vec3], dv: &[Vec3]) -> f64 {
    DEGENERACY_FLOOR
        * v.iter()
            .zip(dv)
            .map(|(a, b)| norm(a) * norm(b))
            .fold(0.0, f64::max)
}

/// `|v . (v' x v'')| / |v x v'|^2` per sample; `None` where `|v x v'|` is
/// below the degeneracy floor (straight-line motion, standstill).
pub fn torsion(v: &[Vec3], dv: &[Vec3], ddv: &[Vec3]) -> Vec<Option<f64>> {
    let w_floor = wedge_floor(v, dv);
    v.iter()
        .zip(dv)
        .zip(ddv)
        .map(|((v, dv), ddv)| {
            let c = cross(v, dv);
            let w2 = dot(&c, &c);
            if w2.sqrt() <= w_floor {
                None
            } else {
                Some(dot(v, &cross(dv, ddv)).abs() / w2)
            }
        })
        .collect()
}

/// Geometric frequency and torsion of a three-phase trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricFrequencySeries {
    pub t0: f64,
    pub dt: f64,
    pub rho: Vec<Option<f64>>,
    pub omega_biv: Vec<Option<f64>>,
    pub plane_normal: Vec<Option<Vec3>>,
    /// In 1/Wb: the trajectory's length unit is a flux.
    pub torsion: Vec<Option<f64>>,
    pub edge_margin: usize,
}

impl GeometricFrequencySeries {
    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    pub fn interior(&self) -> std::ops::Range<usize> {
        interior(self.len(), self.edge_margin)
    }

    /// Median of the defined interior bivector magnitudes.
    pub fn median_omega(&self) -> Option<f64> {
        let mut w: Vec<f64> = self.omega_biv[self.interior()]
            .iter()
            .flatten()
            .copied()
            .collect();
        if w.is_empty() {
            return None;
        }
        w.sort_by(f64::total_cmp);
        Some(w[w.len() / 2])
    }
}

pub fn geometric_frequency(sig: &ThreePhaseSignal) -> Result<GeometricFrequencySeries> {
    let d = derivatives(sig)?;
    let v = sig.samples();
    let terms = frequency_terms(v, &d.first);
    Ok(GeometricFrequencySeries {
        t0: sig.t0(),
        dt: sig.dt(),
        rho: terms.iter().map(|t| t.map(|t| t.rho)).collect(),
        omega_biv: terms.iter().map(|t| t.map(|t| t.omega_biv)).collect(),
        plane_normal: terms
            .iter()
            .map(|t| t.and_then(|t| t.plane_normal))
            .collect(),
        torsion: torsion(v, &d.first, &d.second),
        edge_margin: d.edge_margin,
    })
}

/// Dimensionless torsion: `|tau| * T * V_rms`, with `T` the rotation period
/// and `V_rms` the RMS of `|v|` over the interior.
#[derive(Debug, Clone, PartialEq)]
pub struct TorsionMetric {
    pub per_sample: Vec<Option<f64>>,
    /// Largest defined interior value; `None` when no interior sample has a
    /// defined torsion.
    pub max_interior: Option<f64>,
    pub period: f64,
    pub v_rms: f64,
}

/// Computes the dimensionless torsion metric. `period` defaults to
/// `2 pi / median(omega_biv)` over the interior.
pub fn torsion_metric(
    sig: &ThreePhaseSignal,
    geo: &GeometricFrequencySeries,
    period: Option<f64>,
) -> Result<TorsionMetric> {
    let period = match period {
        Some(p) => p,
        None => match geo.median_omega() {
            Some(w) if w > 0.0 => TAU / w,
            _ => {
                return Err(Error::Degenerate(
                    "trajectory does not rotate; no period to scale torsion".into(),
                ))
            }
        },
    };
    let range = geo.interior();
    let count = range.len().max(1) as f64;
    let v_rms = (sig.samples()[range.clone()]
        .iter()
        .map(|v| dot(v, v))
        .sum::<f64>()
        / count)
        .sqrt();
    let per_sample: Vec<Option<f64>> = geo
        .torsion
        .iter()
        .map(|t| t.map(|t| t * period * v_rms))
        .collect();
    let max_interior = per_sample[range].iter().flatten().copied().reduce(f64::max);
    Ok(TorsionMetric {
        per_sample,
        max_interior,
        period,
        v_rms,
    })
}

/// Orthonormal basis of the plane holding a zero-torsion trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneBasis {
    pub normal: Vec3,
    pub mu_axis: Vec3,
    pub xi_axis: Vec3,
    /// Largest out-of-plane distance over the largest `|v|`.
    pub residual: f64,
}

/// Bound and time scale for the planarity test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarityGate {
    pub threshold: f64,
    /// Rotation period used to scale torsion; estimated when `None`.
    pub period: Option<f64>,
}

impl Default for PlanarityGate {
    fn default() -> Self {
        Self {
            threshold: PLANARITY_THRESHOLD,
            period: None,
        }
    }
}

/// Finds the trajectory plane with the default planarity gate.
pub fn find_plane(sig: &ThreePhaseSignal) -> Result<PlaneBasis> {
    find_plane_with(sig, &PlanarityGate::default())
}

/// Finds the plane of a zero-torsion trajectory.
///
/// The normal is the mean of the interior bivector normals, each signed to
/// agree with the first, so the trajectory turns counter-clockwise from
/// `mu` towards `xi`. `mu` is the projection of the phase-a axis onto the
/// plane (the first interior voltage sample when that axis is nearly
/// normal to the plane); `xi = normal x mu`.
pub fn find_plane_with(sig: &ThreePhaseSignal, gate: &PlanarityGate) -> Result<PlaneBasis> {
    let geo = geometric_frequency(sig)?;
    let metric = torsion_metric(sig, &geo, gate.period)?;
    let worst = metric
        .max_interior
        .ok_or_else(|| Error::Degenerate("torsion undefined at every interior sample".into()))?;
    if worst.is_nan() || worst >= gate.threshold {
        return Err(Error::NotPlanar {
            metric: worst,
            threshold: gate.threshold,
        });
    }

    let mut normals = geo.plane_normal[geo.interior()].iter().flatten();
    let reference = *normals
        .next()
        .ok_or_else(|| Error::Degenerate("no defined plane normal".into()))?;
    let mut sum = reference;
    for n in normals {
        let s = if dot(n, &reference) < 0.0 { -1.0 } else { 1.0 };
        for k in 0..3 {
            sum[k] += s * n[k];
        }
    }
    let normal = scale(&sum, 1.0 / norm(&sum));

    let in_plane = |v: &Vec3| sub(v, &scale(&normal, dot(v, &normal)));
    let mut mu = in_plane(&[1.0, 0.0, 0.0]);
    if norm(&mu) < 1e-6 {
        let first = sig.samples()[geo.interior()]
            .iter()
            .map(in_plane)
            .find(|p| norm(p) > 0.0)
            .ok_or_else(|| Error::Degenerate("trajectory has no in-plane extent".into()))?;
        mu = first;
    }
    let mu_axis = scale(&mu, 1.0 / norm(&mu));
    let xi_axis = cross(&normal, &mu_axis);

    let max_v = sig.samples().iter().map(norm).fold(0.0, f64::max);
    let max_out = sig
        .samples()
        .iter()
        .map(|v| dot(v, &normal).abs())
        .fold(0.0, f64::max);
    Ok(PlaneBasis {
        normal,
        mu_axis,
        xi_axis,
        residual: if max_v > 0.0 { max_out / max_v } else { 0.0 },
    })
}

/// In-plane coordinates `v_mu + j v_xi`.
pub fn plane_vector(basis: &PlaneBasis, sig: &ThreePhaseSignal) -> ComplexSeries {
    sig.as_series()
        .map(|v| Complex64::new(dot(v, &basis.mu_axis), dot(v, &basis.xi_axis)))
}

/// Outcome of testing whether the in-plane coordinates are a Hilbert pair.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbertPairCheck {
    /// `|v_xi - H{v_mu}| / max|v|` per sample.
    pub residual: RealSeries,
    /// Largest interior residual.
    pub max_residual: f64,
    /// Largest interior `|v_xi + H{v_mu}| / max|v|`.
    pub max_flipped_residual: f64,
    /// Set when the pair holds with `xi` negated, i.e. the axis points the
    /// wrong way.
    pub orientation_reversed: bool,
    pub edge_margin: usize,
}

pub fn hilbert_pair_check(basis: &PlaneBasis, sig: &ThreePhaseSignal) -> Result<HilbertPairCheck> {
    let v = plane_vector(basis, sig);
    let v_mu = v.re();
    let v_xi = v.im();
    let h = analytic::hilbert(&v_mu)?;
    let max_v = sig.samples().iter().map(norm).fold(0.0, f64::max);
    let scale = if max_v > 0.0 { 1.0 / max_v } else { 0.0 };
    let residual = v_xi.zip_with(&h, |x, h| (x - h).abs() * scale)?;
    let flipped = v_xi.zip_with(&h, |x, h| (x + h).abs() * scale)?;
    let edge_margin = h.edge_guard();
    let range = interior(sig.len(), edge_margin);
    let max_of = |s: &RealSeries| {
        s.values()[range.clone()]
            .iter()
            .copied()
            .fold(0.0, f64::max)
    };
    let max_residual = max_of(&residual);
    let max_flipped_residual = max_of(&flipped);
    Ok(HilbertPairCheck {
        orientation_reversed: max_flipped_residual < 0.1 && max_flipped_residual < max_residual,
        residual,
        max_residual,
        max_flipped_residual,
        edge_margin,
    })
}
