mod common;

use std::f64::consts::TAU;

use common::*;
use ifreq::equivalence::{
    check_clarke_park, check_geometric, check_hahn_milano, check_hilbert_pair, check_lei,
    render_text, run_checks, EquivalenceReport, RelationId, Tolerances, Verdict,
};
use ifreq::signal_model::{Component, ComponentFrequency, Sequence};
use ifreq::{Complex64, RotatingFrame, SignalSpec};

fn tol() -> Tolerances {
    Tolerances::for_nominal(W0)
}

fn verdicts(spec: &SignalSpec, frame: &RotatingFrame) -> Vec<(RelationId, bool)> {
    run_checks(&desk(spec), frame, &tol(), &RelationId::ALL)
        .unwrap()
        .iter()
        .map(|r| (r.relation, r.holds()))
        .collect()
}

fn negative(eps: f64, h: u32) -> SignalSpec {
    balanced().with_component(Component::new(
        Sequence::Negative,
        ComponentFrequency::Harmonic(h),
        eps,
    ))
}

fn zero_seq() -> SignalSpec {
    balanced().with_component(Component::new(
        Sequence::Zero,
        ComponentFrequency::InterharmonicHz(75.0),
        0.2,
    ))
}

#[test]
fn default_tolerances() {
    let t = tol();
    assert_eq!(t.icf, 1e-3 * W0);
    assert_eq!(t.icp, 1e-3);
    assert_eq!(t.algebraic, 1e-12);
    assert_eq!(t.vector, 1e-6);
    assert_eq!(t.planarity, 1e-4);
}

#[test]
fn balanced_am_signal_satisfies_every_relation() {
    for frame in [
        RotatingFrame::clarke(),
        RotatingFrame::synchronous(W0),
        RotatingFrame::synchronous(0.3 * W0),
    ] {
        for (id, holds) in verdicts(&am(0.1, 2.0), &frame) {
            assert!(holds, "{id} in {}", frame.describe());
        }
    }
}

#[test]
fn unbalance_breaks_the_analytic_relations_only() {
    let frame = RotatingFrame::clarke();
    use RelationId::*;
    let expect = |spec: &SignalSpec, holding: &[RelationId]| {
        for (id, holds) in verdicts(spec, &frame) {
            assert_eq!(holds, holding.contains(&id), "{id}");
        }
    };
    expect(&negative(0.1, 1), &[Eq7, Eq15]);
    expect(&negative(0.05, 5), &[Eq7, Eq15]);
    expect(&zero_seq(), &[Eq7]);
}

#[test]
fn negative_sequence_residual_matches_closed_form() {
    // Phase a is (1 + eps) cos(w t); the Clarke vector is
    // e^{j w t} + eps e^{-j w t}, whose log-derivative differs from j w by
    // -2 j w eps e^{-2 j w t} / (1 + eps e^{-2 j w t}).
    let eps = 0.1;
    let sig = desk(&negative(eps, 1));
    let [_, icf] = check_hahn_milano(&sig, &RotatingFrame::clarke(), &tol()).unwrap();
    assert_eq!(icf.verdict, Verdict::Violated);
    let c = &icf.conditions[0];
    for k in interior(N, icf.edge_margin) {
        let e = Complex64::from_polar(eps, -2.0 * W0 * sig.time(k));
        let want = (Complex64::new(0.0, -2.0 * W0) * e / (1.0 + e)).norm();
        let got = c.residual[k].unwrap();
        assert!((got - want).abs() < 1e-3 * W0, "{got} vs {want} at {k}");
    }
    assert!(c.max_interior > 2.0 * W0 * eps / (1.0 + eps) * 0.99);
}

#[test]
fn hahn_milano_phase_aligns_the_branch() {
    let sig = desk(&am(0.1, 2.0));
    let frame = RotatingFrame::Ramp {
        omega: 0.3 * W0,
        offset: 5.0 * TAU + 0.1,
    };
    let [icp, icf] = check_hahn_milano(&sig, &frame, &tol()).unwrap();
    assert!(icp.holds(), "{}", render_text(std::slice::from_ref(&icp)));
    assert!(icp.conditions[0].max_interior < 1e-6);
    assert!(icf.holds());
    assert_eq!(icp.bedrosian_overlap, Some(0.0));
}

#[test]
fn lei_relation_holds_for_any_signal() {
    for (name, spec) in catalog() {
        let r = check_lei(&desk(&spec), &RotatingFrame::synchronous(0.7 * W0), &tol()).unwrap();
        assert!(
            r.holds(),
            "{name}: {}",
            render_text(std::slice::from_ref(&r))
        );
        assert_eq!(r.conditions.len(), 2);
    }
}

#[test]
fn clarke_park_matches_rotated_analytic_signal() {
    let r = check_clarke_park(&desk(&balanced()), &RotatingFrame::synchronous(W0), &tol()).unwrap();
    assert!(r.holds());
    assert!(r.max_residual() < 1e-9);
    let r = check_clarke_park(&desk(&negative(0.1, 1)), &RotatingFrame::clarke(), &tol()).unwrap();
    assert!(!r.holds());
}

#[test]
fn geometric_relation_needs_zero_torsion() {
    let r = check_geometric(&desk(&zero_seq()), &RotatingFrame::clarke(), &tol()).unwrap();
    assert_eq!(r.verdict, Verdict::Violated);
    assert_eq!(r.reason.as_deref(), Some("nonzero torsion"));
    assert!(!r.condition("torsion").unwrap().holds);
    assert!(r.zero_sequence_energy > 0.03);

    let r = check_geometric(
        &desk(&am(0.1, 2.0)),
        &RotatingFrame::synchronous(W0),
        &tol(),
    )
    .unwrap();
    assert!(r.holds());
    for name in ["torsion", "rho", "omega"] {
        assert!(r.condition(name).unwrap().holds, "{name}");
    }
}

#[test]
fn hilbert_pair_report_carries_the_plane() {
    let r = check_hilbert_pair(&desk(&balanced()), &tol()).unwrap();
    assert!(r.holds());
    let plane = r.plane.unwrap();
    let s3 = 3f64.sqrt().recip();
    for k in 0..3 {
        assert!((plane.normal[k] - s3).abs() < 1e-9);
    }
    let r = check_hilbert_pair(&desk(&zero_seq()), &tol()).unwrap();
    assert!(!r.holds());
    assert!(r.plane.is_none());
    assert_eq!(r.conditions.len(), 1);
}

#[test]
fn verdict_is_the_conjunction_of_conditions() {
    for (_, spec) in catalog() {
        for r in run_checks(
            &desk(&spec),
            &RotatingFrame::clarke(),
            &tol(),
            &RelationId::ALL,
        )
        .unwrap()
        {
            assert_eq!(r.holds(), r.conditions.iter().all(|c| c.holds));
            assert_eq!(r.holds(), r.reason.is_none());
            for c in &r.conditions {
                assert_eq!(c.residual.len(), N);
            }
        }
    }
}

#[test]
fn run_checks_selects_and_orders() {
    let sig = desk(&balanced());
    let ids = RelationId::parse_list("EQ17,EQ13,EQ7").unwrap();
    let reports = run_checks(&sig, &RotatingFrame::clarke(), &tol(), &ids).unwrap();
    let got: Vec<_> = reports.iter().map(|r| r.relation).collect();
    assert_eq!(
        got,
        vec![
            RelationId::Eq7,
            RelationId::Eq13Icp,
            RelationId::Eq13Icf,
            RelationId::Eq17
        ]
    );
    let only = run_checks(
        &sig,
        &RotatingFrame::clarke(),
        &tol(),
        &[RelationId::Eq13Icf],
    )
    .unwrap();
    assert_eq!(only.len(), 1);
    assert_eq!(only[0].relation, RelationId::Eq13Icf);
}

#[test]
fn relation_ids_parse_and_print() {
    for id in RelationId::ALL {
        assert_eq!(id.as_str().parse::<RelationId>().unwrap(), id);
        assert_eq!(id.to_string(), id.as_str());
        assert_eq!(serde_json::to_string(&id).unwrap(), format!("\"{id}\""));
    }
    assert!(RelationId::parse_list("EQ8").is_err());
    assert!(RelationId::parse_list(" , ").is_err());
}

#[test]
fn report_json_round_trip() {
    let reports: Vec<EquivalenceReport> = run_checks(
        &desk(&negative(0.1, 1)),
        &RotatingFrame::clarke(),
        &tol(),
        &RelationId::ALL,
    )
    .unwrap()
    .into_iter()
    .map(|r| r.with_provenance("spec x.json"))
    .collect();
    let text = serde_json::to_string(&reports).unwrap();
    let back: Vec<EquivalenceReport> = serde_json::from_str(&text).unwrap();
    assert_eq!(back, reports);
    assert!(text.contains("\"verdict\":\"violated\""));
    assert!(text.contains("\"EQ13_ICF\""));
}

#[test]
fn text_summary_lists_every_relation() {
    let reports = run_checks(
        &desk(&zero_seq()),
        &RotatingFrame::clarke(),
        &tol(),
        &RelationId::ALL,
    )
    .unwrap();
    let text = render_text(&reports);
    for id in RelationId::ALL {
        assert!(text.contains(id.as_str()));
    }
    assert!(text.contains("VIOLATED"));
    assert!(text.contains("nonzero torsion"));
    assert!(text.contains("zero-sequence energy share"));
}
