//! External interface shapes: canonical JSON forms and golden dumps.

use mggs::group::QuotientBudget;
use mggs::{
    aut_structure, enumerate_quotient, normalizer_sequence, AutReport, FpVec, MggsGroup, Unit, Word,
};

#[test]
fn quotient_dump_is_sorted_and_stable() {
    let group = MggsGroup::new(3, vec![FpVec::new(3, [1, 2])]).unwrap();
    let q = enumerate_quotient(&group, &[Word::a(3, 1, 1)], 2, QuotientBudget::default()).unwrap();
    let dump = q.to_sorted_json();
    assert_eq!(
        dump,
        concat!(
            r#"[{"p":3,"depth":2,"labels":[[1,0],[1,0],[1,0],[1,0]]},"#,
            r#"{"p":3,"depth":2,"labels":[[1,1],[1,0],[1,0],[1,0]]},"#,
            r#"{"p":3,"depth":2,"labels":[[1,2],[1,0],[1,0],[1,0]]}]"#
        )
    );
    // Deterministic across runs.
    let q2 = enumerate_quotient(&group, &[Word::a(3, 1, 1)], 2, QuotientBudget::default()).unwrap();
    assert_eq!(q2.to_sorted_json(), dump);
}

#[test]
fn aut_report_json_parse_print_round_trip() {
    let group = MggsGroup::new(5, vec![FpVec::new(5, [1, 2, 3, 4])]).unwrap();
    let report = aut_structure(&group).unwrap();
    let printed = serde_json::to_string(&report).unwrap();
    let parsed: AutReport = serde_json::from_str(&printed).unwrap();
    assert_eq!(parsed, report);
    // Key names of the machine interface.
    let value: serde_json::Value = serde_json::from_str(&printed).unwrap();
    for key in [
        "classification",
        "U",
        "V",
        "W",
        "scalars",
        "structure",
        "out_finite",
        "coprime_autos",
    ] {
        assert!(value.get(key).is_some(), "missing key {key}");
    }
}

#[test]
fn trivial_w_groups_only_produce_constant_sequences() {
    let groups = vec![
        MggsGroup::new(5, vec![FpVec::new(5, [1, 2, 2, 1])]).unwrap(),
        MggsGroup::full_space(3).unwrap(),
        MggsGroup::full_space(5).unwrap(),
    ];
    for group in groups {
        let p = group.p();
        let report = aut_structure(&group).unwrap();
        assert_eq!(report.w, vec![1]);
        for &d0 in &report.u {
            let seq = normalizer_sequence(
                &group,
                Unit::new(d0 as i64, p).unwrap(),
                Unit::new(1, p).unwrap(),
            )
            .unwrap();
            assert!(seq.preperiod().is_empty(), "p={p} d0={d0}");
            assert_eq!(seq.period(), &[d0], "p={p} d0={d0}");
        }
    }
}

#[test]
fn core_types_are_send_and_sync() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<mggs::Portrait>();
    assert_send_sync::<mggs::Word>();
    assert_send_sync::<mggs::MggsGroup>();
    assert_send_sync::<mggs::QuotientGroup>();
    assert_send_sync::<mggs::AutReport>();
    assert_send_sync::<mggs::FpMat>();
}
