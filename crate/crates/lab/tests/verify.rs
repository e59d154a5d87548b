use liftoff_lab::verify::{verify, Suite, SUITE_NAMES};

#[test]
fn unknown_suite_lists_valid_ones() {
    let err = verify("everything").unwrap_err().to_string();
    for s in Suite::ALL {
        assert!(err.contains(s.name()), "{err}");
    }
    assert!(err.contains(SUITE_NAMES));
}

#[test]
fn oracle_suite_passes_and_reports_errors() {
    let report = verify("oracle").unwrap();
    assert!(report.passed(), "{:#?}", report.checks);
    let first = &report.checks[0];
    assert!(first.measurements.iter().all(|m| m.value < 1e-3 && m.value > 0.0));
    let json = report.to_json();
    assert_eq!(json["suite"], "oracle");
    assert_eq!(json["passed"], true);
    assert!(json["criteria"][0]["measurements"][0]["value"].is_number());
    assert!(json["criteria"][0]["resolution"]
        .as_str()
        .unwrap()
        .contains("2001 nodes"));
}

#[test]
fn conservation_suite_passes_with_reported_drift() {
    let report = verify("conservation").unwrap();
    assert!(report.passed(), "{:#?}", report.checks);
    let drift = report.checks[0].measurements[0].value;
    assert!(drift > 0.0 && drift <= 1e-3, "{drift}");
}

#[test]
fn critical_suite_matches_exactly() {
    let report = verify("critical").unwrap();
    assert!(report.passed(), "{:#?}", report.checks);
    assert_eq!(report.checks.len(), 2);
}
