//! Numerical checks of the relations linking the analytic-signal,
//! space-vector and geometric formulations.
//!
//! Every check computes both sides independently, forms a per-sample
//! residual, and compares the interior maximum against a tolerance. A
//! report holds exactly when every one of its conditions holds.

use std::f64::consts::TAU;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{self, ComplexFrequencySeries};
use crate::error::{Error, Result};
use crate::geometric::{self, PlanarityGate, PlaneBasis};
use crate::series::{interior, ComplexSeries};
use crate::signal_model::ThreePhaseSignal;
use crate::space_vector::{self, RotatingFrame};

const J: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RelationId {
    /// Park-frame planar quantities vs permuted Clarke-frame quantities.
    #[serde(rename = "EQ7")]
    Eq7,
    /// Park vector vs the rotated analytic signal of phase a.
    #[serde(rename = "EQ12")]
    Eq12,
    /// Planar phase vs analytic-signal phase minus the frame angle.
    #[serde(rename = "EQ13_ICP")]
    Eq13Icp,
    /// Planar frequency vs analytic-signal frequency minus the frame speed.
    #[serde(rename = "EQ13_ICF")]
    Eq13Icf,
    /// Planar frequency vs the geometric frequency, gated by torsion.
    #[serde(rename = "EQ15")]
    Eq15,
    /// In-plane coordinates form a Hilbert pair, and the two frequencies
    /// built from them coincide.
    #[serde(rename = "EQ17")]
    Eq17,
}

impl RelationId {
    pub const ALL: [RelationId; 6] = [
        RelationId::Eq7,
        RelationId::Eq12,
        RelationId::Eq13Icp,
        RelationId::Eq13Icf,
        RelationId::Eq15,
        RelationId::Eq17,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RelationId::Eq7 => "EQ7",
            RelationId::Eq12 => "EQ12",
            RelationId::Eq13Icp => "EQ13_ICP",
            RelationId::Eq13Icf => "EQ13_ICF",
            RelationId::Eq15 => "EQ15",
            RelationId::Eq17 => "EQ17",
        }
    }

    /// Parses a comma-separated list. `EQ13` expands to both of its parts.
    /// The result is sorted and free of duplicates.
    pub fn parse_list(list: &str) -> std::result::Result<Vec<RelationId>, String> {
        let mut out = Vec::new();
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            if item.eq_ignore_ascii_case("EQ13") {
                out.extend([RelationId::Eq13Icp, RelationId::Eq13Icf]);
            } else {
                out.push(item.parse()?);
            }
        }
        if out.is_empty() {
            return Err("no relation requested".into());
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl FromStr for RelationId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        RelationId::ALL
            .into_iter()
            .find(|r| r.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown relation id `{s}`"))
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
}

/// Tolerances applied to interior residuals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Complex-frequency residuals, rad/s.
    pub icf: f64,
    /// Complex-phase residuals after branch alignment, rad.
    pub icp: f64,
    /// Relative residual of the purely algebraic frame relation.
    pub algebraic: f64,
    /// Relative residual of vector identities (Park vs rotated analytic
    /// signal, in-plane Hilbert pair).
    pub vector: f64,
    /// Dimensionless torsion bound for planarity.
    pub planarity: f64,
}

impl Tolerances {
    /// Defaults scaled to a nominal angular frequency.
    pub fn for_nominal(omega_o: f64) -> Self {
        Self {
            icf: 1e-3 * omega_o,
            icp: 1e-3,
            algebraic: 1e-12,
            vector: 1e-6,
            planarity: geometric::PLANARITY_THRESHOLD,
        }
    }
}

/// One residual compared against one tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub unit: String,
    pub tolerance: f64,
    pub max_interior: f64,
    pub rms_interior: f64,
    pub holds: bool,
    /// Per-sample residual; `None` where either side is undefined.
    pub residual: Vec<Option<f64>>,
}

impl Condition {
    fn new(
        name: &str,
        unit: &str,
        tolerance: f64,
        residual: Vec<Option<f64>>,
        margin: usize,
    ) -> Self {
        let range = interior(residual.len(), margin);
        let defined: Vec<f64> = residual[range].iter().flatten().copied().collect();
        let max_interior = defined.iter().copied().fold(0.0, f64::max);
        let rms_interior = if defined.is_empty() {
            0.0
        } else {
            (defined.iter().map(|r| r * r).sum::<f64>() / defined.len() as f64).sqrt()
        };
        Self {
            name: name.into(),
            unit: unit.into(),
            tolerance,
            max_interior,
            rms_interior,
            holds: !defined.is_empty() && max_interior <= tolerance,
            residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub relation: RelationId,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub conditions: Vec<Condition>,
    /// Samples excluded at each end.
    pub edge_margin: usize,
    pub n_samples: usize,
    pub t0: f64,
    pub dt: f64,
    pub frame: String,
    pub provenance: String,
    /// Share of the phase-a envelope energy at or above the carrier.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bedrosian_overlap: Option<f64>,
    /// Share of signal energy in the zero sequence, which space vectors drop.
    pub zero_sequence_energy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plane: Option<PlaneBasis>,
}

impl EquivalenceReport {
    fn new(
        relation: RelationId,
        sig: &ThreePhaseSignal,
        frame: &RotatingFrame,
        conditions: Vec<Condition>,
        edge_margin: usize,
    ) -> Self {
        let failed: Vec<&str> = conditions
            .iter()
            .filter(|c| !c.holds)
            .map(|c| c.name.as_str())
            .collect();
        let (verdict, reason) = if failed.is_empty() {
            (Verdict::Holds, None)
        } else if failed.contains(&"torsion") {
            (Verdict::Violated, Some("nonzero torsion".to_string()))
        } else {
            (
                Verdict::Violated,
                Some(format!("residual exceeds tolerance: {}", failed.join(", "))),
            )
        };
        Self {
            relation,
            verdict,
            reason,
            conditions,
            edge_margin,
            n_samples: sig.len(),
            t0: sig.t0(),
            dt: sig.dt(),
            frame: frame.describe(),
            provenance: String::new(),
            bedrosian_overlap: None,
            zero_sequence_energy: space_vector::zero_sequence_energy_ratio(sig),
            plane: None,
        }
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }

    /// Largest interior residual over all conditions (in each one's unit).
    pub fn max_residual(&self) -> f64 {
        self.conditions
            .iter()
            .map(|c| c.max_interior)
            .fold(0.0, f64::max)
    }
}

fn magnitudes(z: impl IntoIterator<Item = Complex64>) -> Vec<Option<f64>> {
    z.into_iter().map(|r| Some(r.norm())).collect()
}

/// Removes the multiple of 2 pi from the imaginary part that minimizes the
/// residual at the first interior sample.
fn align_branch(residual: &mut [Complex64], margin: usize) {
    let range = interior(residual.len(), margin);
    if let Some(first) = residual.get(range.start) {
        let turns = (first.im / TAU).round();
        if turns != 0.0 {
            for r in residual.iter_mut() {
                r.im -= turns * TAU;
            }
        }
    }
}

/// Median interior angular frequency of an analytic signal, in Hz.
fn carrier_hz(s: &ComplexFrequencySeries) -> f64 {
    let mut w: Vec<f64> = s.series.values()[s.interior()]
        .iter()
        .map(|z| z.im.abs())
        .collect();
    if w.is_empty() {
        return 0.0;
    }
    w.sort_by(f64::total_cmp);
    w[w.len() / 2] / TAU
}

/// Relations between the phase-a analytic signal and the Park vector:
/// `phi_m = phi_h - j delta_dq` (EQ13_ICP) and `s_m = s_h - j omega_dq`
/// (EQ13_ICF).
///
/// The planar phase and the analytic phase are unwrapped from different
/// anchors, so the phase residual is compared modulo one global multiple
/// of 2 pi.
pub fn check_hahn_milano(
    sig: &ThreePhaseSignal,
    frame: &RotatingFrame,
    tol: &Tolerances,
) -> Result<[EquivalenceReport; 2]> {
    let z_a = analytic::analytic_signal(&sig.channel(0))?;
    let phi_h = analytic::icp(&z_a)?;
    let s_h = analytic::icf(&z_a)?;

    let v_dq = space_vector::park(&space_vector::clarke(sig), frame)?;
    let phi_m = space_vector::ipp(&v_dq, frame)?;
    let s_m = space_vector::ipf(&v_dq, frame)?;

    let delta = frame.angles(&phi_m.series)?;
    let omega = frame.omegas(&phi_m.series)?;
    let margin = s_h.edge_margin.max(s_m.frequency.edge_margin);

    let mut phase_res: Vec<Complex64> = phi_m
        .series
        .values()
        .iter()
        .zip(phi_h.values())
        .zip(&delta)
        .map(|((m, h), d)| m - (h - J * d))
        .collect();
    align_branch(&mut phase_res, margin);
    let freq_res = s_m
        .frequency
        .series
        .values()
        .iter()
        .zip(s_h.series.values())
        .zip(&omega)
        .map(|((m, h), w)| m - (h - J * w));

    let envelope = z_a.map(|z| z.norm());
    let overlap = analytic::bedrosian_overlap(&envelope, carrier_hz(&s_h));

    let mut icp = EquivalenceReport::new(
        RelationId::Eq13Icp,
        sig,
        frame,
        vec![Condition::new(
            "phase",
            "rad",
            tol.icp,
            magnitudes(phase_res),
            margin,
        )],
        margin,
    );
    let mut icf = EquivalenceReport::new(
        RelationId::Eq13Icf,
        sig,
        frame,
        vec![Condition::new(
            "frequency",
            "rad/s",
            tol.icf,
            magnitudes(freq_res),
            margin,
        )],
        margin,
    );
    icp.bedrosian_overlap = Some(overlap);
    icf.bedrosian_overlap = Some(overlap);
    Ok([icp, icf])
}

/// Frame relation between Park-frame planar quantities and the permuted
/// Clarke-frame quantities: `phi_m = j (phi_l - delta_dq)` and
/// `s_m = j (s_l - omega_dq)`.
///
/// Both sides are computed independently (Park rotation then log on one
/// side, log of the Clarke vector then permutation on the other), so the
/// residual measures round-off only. Residuals are relative to the sum of
/// the magnitudes of the two terms on the right-hand side.
pub fn check_lei(
    sig: &ThreePhaseSignal,
    frame: &RotatingFrame,
    tol: &Tolerances,
) -> Result<EquivalenceReport> {
    let v_ab = space_vector::clarke(sig);
    let v_dq = space_vector::park(&v_ab, frame)?;
    let phi_m = space_vector::ipp(&v_dq, frame)?;
    let s_m = space_vector::ipf(&v_dq, frame)?;
    let phi_l = space_vector::permuted_phase(&v_ab)?;
    let s_l = space_vector::permuted_frequency(&v_ab)?;

    let delta = frame.angles(&v_ab)?;
    let omega = frame.omegas(&v_ab)?;
    let margin = s_m.frequency.edge_margin.max(s_l.edge_margin);

    let mut phase_res: Vec<Complex64> = phi_m
        .series
        .values()
        .iter()
        .zip(phi_l.values())
        .zip(&delta)
        .map(|((m, l), d)| m - J * (l - d))
        .collect();
    align_branch(&mut phase_res, 0);

    let max_abs = |it: &mut dyn Iterator<Item = f64>| it.fold(0.0, f64::max);
    let phase_scale = max_abs(&mut phi_l.values().iter().map(|z| z.norm()))
        + max_abs(&mut delta.iter().map(|d| d.abs()));
    let freq_scale = max_abs(&mut s_l.series.values().iter().map(|z| z.norm()))
        + max_abs(&mut omega.iter().map(|w| w.abs()));
    let rel = |r: Complex64, scale: f64| {
        Some(if scale > 0.0 {
            r.norm() / scale
        } else {
            r.norm()
        })
    };

    let phase_cond = Condition::new(
        "phase",
        "relative",
        tol.algebraic,
        phase_res.into_iter().map(|r| rel(r, phase_scale)).collect(),
        margin,
    );
    let freq_cond = Condition::new(
        "frequency",
        "relative",
        tol.algebraic,
        s_m.frequency
            .series
            .values()
            .iter()
            .zip(s_l.series.values())
            .zip(&omega)
            .map(|((m, l), w)| rel(m - J * (l - w), freq_scale))
            .collect(),
        margin,
    );
    Ok(EquivalenceReport::new(
        RelationId::Eq7,
        sig,
        frame,
        vec![phase_cond, freq_cond],
        margin,
    ))
}

/// Park vector against the rotated analytic signal of phase a:
/// `v_dq = v_ab e^{-j delta} = z_a e^{-j delta}`. The residual is relative
/// to the largest Clarke-vector magnitude.
pub fn check_clarke_park(
    sig: &ThreePhaseSignal,
    frame: &RotatingFrame,
    tol: &Tolerances,
) -> Result<EquivalenceReport> {
    let v_ab = space_vector::clarke(sig);
    let v_dq = space_vector::park(&v_ab, frame)?;
    let z_a = analytic::analytic_signal(&sig.channel(0))?;
    let rotated_a = space_vector::park(&z_a, frame)?;
    let scale = v_ab.values().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let margin = rotated_a.edge_guard().max(frame.edge_margin());
    let residual = v_dq
        .values()
        .iter()
        .zip(rotated_a.values())
        .map(|(a, b)| {
            Some(if scale > 0.0 {
                (a - b).norm() / scale
            } else {
                (a - b).norm()
            })
        })
        .collect();
    Ok(EquivalenceReport::new(
        RelationId::Eq12,
        sig,
        frame,
        vec![Condition::new(
            "vector", "relative", tol.vector, residual, margin,
        )],
        margin,
    ))
}

/// Torsion gate as a condition on the dimensionless metric.
fn torsion_condition(
    sig: &ThreePhaseSignal,
    geo: &geometric::GeometricFrequencySeries,
    tol: &Tolerances,
) -> Condition {
    match geometric::torsion_metric(sig, geo, None) {
        Ok(m) => Condition::new(
            "torsion",
            "dimensionless",
            tol.planarity,
            m.per_sample,
            geo.edge_margin,
        ),
        // A trajectory that does not rotate has no defined torsion; the
        // empty condition never holds.
        Err(_) => Condition::new(
            "torsion",
            "dimensionless",
            tol.planarity,
            vec![None; sig.len()],
            geo.edge_margin,
        ),
    }
}

/// Planar frequency against the geometric frequency:
/// `rho_m = (v . v') / |v|^2` and `omega_m = |v ^ v'| / |v|^2 - omega_dq`,
/// valid only for zero-torsion trajectories.
pub fn check_geometric(
    sig: &ThreePhaseSignal,
    frame: &RotatingFrame,
    tol: &Tolerances,
) -> Result<EquivalenceReport> {
    let geo = geometric::geometric_frequency(sig)?;
    let s_m = space_vector::planar_frequency(sig, frame)?;
    let omega = frame.omegas(&s_m.frequency.series)?;
    let margin = geo.edge_margin.max(s_m.frequency.edge_margin);

    let torsion = torsion_condition(sig, &geo, tol);
    let s = s_m.frequency.series.values();
    let rho_res = s
        .iter()
        .zip(&geo.rho)
        .map(|(s, r)| r.map(|r| (s.re - r).abs()))
        .collect();
    let omega_res = s
        .iter()
        .zip(&geo.omega_biv)
        .zip(&omega)
        .map(|((s, w), wdq)| w.map(|w| (s.im - (w - wdq)).abs()))
        .collect();
    let conditions = vec![
        torsion,
        Condition::new("rho", "Np/s", tol.icf, rho_res, margin),
        Condition::new("omega", "rad/s", tol.icf, omega_res, margin),
    ];
    Ok(EquivalenceReport::new(
        RelationId::Eq15,
        sig,
        frame,
        conditions,
        margin,
    ))
}

/// In-plane Hilbert-pair condition `v_xi = H{v_mu}` and its consequence:
/// the complex frequency of the analytic signal of `v_mu` coincides with the
/// planar frequency of `v_mu + j v_xi`.
pub fn check_hilbert_pair(sig: &ThreePhaseSignal, tol: &Tolerances) -> Result<EquivalenceReport> {
    let frame = RotatingFrame::clarke();
    let geo = geometric::geometric_frequency(sig)?;
    let torsion = torsion_condition(sig, &geo, tol);
    let gate = PlanarityGate {
        threshold: tol.planarity,
        period: None,
    };
    let basis = match geometric::find_plane_with(sig, &gate) {
        Ok(b) => b,
        Err(Error::NotPlanar { .. }) | Err(Error::Degenerate(_)) => {
            let mut report = EquivalenceReport::new(
                RelationId::Eq17,
                sig,
                &frame,
                vec![torsion],
                geo.edge_margin,
            );
            report.verdict = Verdict::Violated;
            report.reason = Some("nonzero torsion".into());
            return Ok(report);
        }
        Err(e) => return Err(e),
    };

    let pair = geometric::hilbert_pair_check(&basis, sig)?;
    let v_mu_xi: ComplexSeries = geometric::plane_vector(&basis, sig);
    let s_mu = analytic::channel_icf(&v_mu_xi.re())?;
    let s_plane = analytic::icf(&v_mu_xi)?;
    let margin = s_mu.edge_margin.max(s_plane.edge_margin);
    let coincidence = magnitudes(
        s_mu.series
            .values()
            .iter()
            .zip(s_plane.series.values())
            .map(|(a, b)| a - b),
    );

    let coordinate = Condition::new(
        "coordinate",
        "relative",
        tol.vector,
        pair.residual.values().iter().map(|&r| Some(r)).collect(),
        pair.edge_margin,
    );
    let mut report = EquivalenceReport::new(
        RelationId::Eq17,
        sig,
        &frame,
        vec![
            torsion,
            coordinate,
            Condition::new("coincidence", "rad/s", tol.icf, coincidence, margin),
        ],
        margin,
    );
    if pair.orientation_reversed {
        let reason = report.reason.take().unwrap_or_default();
        report.reason = Some(format!(
            "{reason}; pair holds with the xi axis reversed (clockwise rotation in the plane)"
        ));
    }
    report.plane = Some(basis);
    Ok(report)
}

/// Runs the requested relations, each on its own thread, and returns the
/// reports in relation order.
pub fn run_checks(
    sig: &ThreePhaseSignal,
    frame: &RotatingFrame,
    tol: &Tolerances,
    relations: &[RelationId],
) -> Result<Vec<EquivalenceReport>> {
    let wants = |r: RelationId| relations.contains(&r);
    let results: Vec<Result<Vec<EquivalenceReport>>> = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        if wants(RelationId::Eq7) {
            handles.push(scope.spawn(|| check_lei(sig, frame, tol).map(|r| vec![r])));
        }
        if wants(RelationId::Eq12) {
            handles.push(scope.spawn(|| check_clarke_park(sig, frame, tol).map(|r| vec![r])));
        }
        if wants(RelationId::Eq13Icp) || wants(RelationId::Eq13Icf) {
            handles.push(scope.spawn(|| {
                check_hahn_milano(sig, frame, tol).map(|pair| {
                    pair.into_iter()
                        .filter(|r| relations.contains(&r.relation))
                        .collect()
                })
            }));
        }
        if wants(RelationId::Eq15) {
            handles.push(scope.spawn(|| check_geometric(sig, frame, tol).map(|r| vec![r])));
        }
        if wants(RelationId::Eq17) {
            handles.push(scope.spawn(|| check_hilbert_pair(sig, tol).map(|r| vec![r])));
        }
        handles
            .into_iter()
            .map(|h| h.join().expect("relation check panicked"))
            .collect()
    });
    let mut reports = Vec::new();
    for r in results {
        reports.extend(r?);
    }
    reports.sort_by_key(|r| r.relation);
    Ok(reports)
}

/// Human-readable summary, one block per report.
pub fn render_text(reports: &[EquivalenceReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let verdict = match r.verdict {
            Verdict::Holds => "holds",
            Verdict::Violated => "VIOLATED",
        };
        let _ = writeln!(out, "{:<9} {}", r.relation.as_str(), verdict);
        if let Some(reason) = &r.reason {
            let _ = writeln!(out, "          reason: {reason}");
        }
        for c in &r.conditions {
            let _ = writeln!(
                out,
                "          {:<12} max {:.3e} rms {:.3e} tol {:.3e} {} [{}]",
                c.name,
                c.max_interior,
                c.rms_interior,
                c.tolerance,
                c.unit,
                if c.holds { "ok" } else { "fail" }
            );
        }
        if let Some(o) = r.bedrosian_overlap {
            let _ = writeln!(out, "          envelope/carrier overlap {o:.3e}");
        }
        if r.zero_sequence_energy > 1e-12 {
            let _ = writeln!(
                out,
                "          zero-sequence energy share {:.3e} (dropped by space vectors)",
                r.zero_sequence_energy
            );
        }
    }
    out
}
