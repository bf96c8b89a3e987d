//! End-to-end checks through the public API: curve → torsion → field →
//! ideal classes → certificate, against class groups computed independently.

use std::time::Duration;

use num_bigint::BigInt;
use rank3_core::qform::CLASS_GROUP_BUDGET;
use rank3_core::specialize::{harness_windows, WindowSource};
use rank3_core::*;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// (discriminant, invariant factors) from an independent class group computation.
const CLASS_GROUPS: &[(i64, &[u64])] = &[
    (-107, &[3]),
    (-212, &[6]),
    (-491, &[9]),
    (-984, &[2, 6]),
    (-1347, &[6]),
    (-2867, &[12]),
    (-3299, &[3, 9]),
    (-3321607, &[3, 3, 63]),
    (-4447704, &[6, 6, 24]),
];

#[test]
fn class_groups_match_reference_values() {
    for &(d, inv) in CLASS_GROUPS {
        let g = class_group_small(d, CLASS_GROUP_BUDGET).unwrap();
        assert_eq!(g.invariants, inv, "D = {d}");
        assert_eq!(g.class_number() as u64, inv.iter().product::<u64>(), "D = {d}");
        let expected = inv.iter().filter(|&&n| n % 3 == 0).count() as u32;
        assert_eq!(g.three_rank, expected, "D = {d}");
        assert_eq!(g.three_rank_by_counting(), expected, "D = {d}");
    }
}

/// Specializations of `y² = t³ + (t + 2)²/4` and their discriminants.
const F1_FIELDS: &[(i64, i64)] = &[(-11, -107), (-10, -984), (-9, -2867), (-7, -1347), (-6, -212), (-5, -491), (-3, -107)];

#[test]
fn rank_one_family_end_to_end() {
    let fx = load_fixture(&"f1(2)".parse().unwrap()).unwrap();
    let report = verify_torsion(&fx, 2, 50).unwrap();
    assert_eq!(report.rank(), 1);
    let e = FactorEffort::default();
    for &(t, d) in F1_FIELDS {
        let cert = certify_field(&fx, &q(t), None, &e).unwrap();
        assert_eq!(cert.field.discriminant, BigInt::from(d), "t = {t}");
        assert_eq!(cert.field.level, Level::Field);
        assert_eq!(cert.rank, 1);
        assert!(cert.verify());
        assert_eq!(cert.domination_check(10_000_000), Some(true));
    }
    // t = -2 gives f = -8, the field Q(√-2) of class number one
    let fd = field_from_t(&fx, &q(-2), None, &e).unwrap();
    assert_eq!((fd.core, fd.discriminant), (BigInt::from(-2), BigInt::from(-8)));
    assert_eq!(certify_field(&fx, &q(-2), None, &e).unwrap_err(), Skip::NoForms);
}

#[test]
fn rank_three_family_skips_and_certifies() {
    let fx = load_fixture(&FixtureSpec::F3).unwrap();
    assert_eq!(verify_torsion(&fx, 2, 50).unwrap().rank(), 3);
    let e = FactorEffort::default();
    // f(1) = 11398625 > 0: a real field
    assert_eq!(certify_field(&fx, &q(1), None, &e).unwrap_err(), Skip::RealField);
    let certs: Vec<_> = (-40..-15).filter_map(|n| certify_field(&fx, &q(n), None, &e).ok()).collect();
    assert!(!certs.is_empty());
    for c in &certs {
        assert!(c.verify());
        assert!(c.rank >= 1 && c.rank <= 3);
        let json = serde_json::to_string(c).unwrap();
        let back: RankCertificate = serde_json::from_str(&json).unwrap();
        assert!(back.verify());
    }
}

#[test]
fn harness_store_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let fx = load_fixture(&"f1(2)".parse().unwrap()).unwrap();
    let e = FactorEffort::default();
    let cfg = HarnessConfig {
        bound: 12,
        budget: Duration::from_secs(600),
        windows: harness_windows(&fx, WindowSource::Real, &e).unwrap(),
        policy: StreamPolicy::Rational,
        effort: e,
        hints: None,
        cursor: None,
        batch: 8,
    };
    let path = dir.path().join("certs.jsonl");
    let mut store = CertificateStore::open(&path).unwrap();
    let summary = enumeration_harness(&fx, &cfg, &mut store).unwrap();
    assert!(summary.completed);
    assert!(summary.new_certificates > 0);
    assert!(summary.domination_failures.is_empty());
    assert_eq!(summary.domination_checked, summary.new_certificates);
    let all = CertificateStore::load_all(&path).unwrap();
    assert_eq!(all.len(), summary.new_certificates);
    assert!(all.iter().all(RankCertificate::verify));
    let json = serde_json::to_string(&summary).unwrap();
    assert_eq!(serde_json::from_str::<HarnessSummary>(&json).unwrap(), summary);
}
