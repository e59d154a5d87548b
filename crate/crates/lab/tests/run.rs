use liftoff_core::{Outcome, Verdict};
use liftoff_lab::output::{DIAGNOSTICS_FILE, FRAMES_FILE, REPORT_FILE};
use liftoff_lab::{parse_scenario, run, simulate, RunOptions, Scenario};

fn scenario(profile: &str, extra: &str) -> Scenario {
    parse_scenario(&format!(
        r#"
name = "test"
[profile]
{profile}
[domain]
n = 2
r_max = 20.0
num_nodes = 401
[initial]
kind = "gaussian"
sigma = 1.0
[solver]
dt = 1e-2
snapshot_stride = 50
{extra}
"#
    ))
    .unwrap()
}

#[test]
fn repeated_runs_write_identical_csv() {
    let s = scenario("kind = \"powerlaw\"\nA = 3.0\nbeta = -1.0", "[run]\nt_end = 2.0");
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        run(
            &s,
            &RunOptions {
                out_dir: Some(dir.path().to_path_buf()),
                skip_frames: false,
            },
        )
        .unwrap();
    }
    for file in [FRAMES_FILE, DIAGNOSTICS_FILE] {
        let x = std::fs::read(a.path().join(file)).unwrap();
        let y = std::fs::read(b.path().join(file)).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, y, "{file}");
    }
}

#[test]
fn outputs_have_the_documented_columns() {
    let s = scenario("kind = \"linear\"", "[run]\nt_end = 1.0");
    let dir = tempfile::tempdir().unwrap();
    let report = run(
        &s,
        &RunOptions {
            out_dir: Some(dir.path().to_path_buf()),
            skip_frames: false,
        },
    )
    .unwrap();

    let frames = std::fs::read_to_string(dir.path().join(FRAMES_FILE)).unwrap();
    let mut lines = frames.lines();
    assert_eq!(lines.next(), Some("t,r,u"));
    assert_eq!(lines.count(), report.diagnostics.len() * 401);

    let diag = std::fs::read_to_string(dir.path().join(DIAGNOSTICS_FILE)).unwrap();
    let mut lines = diag.lines();
    assert_eq!(lines.next(), Some("t,I_R,sup_u,center_u,mass"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first.len(), 5);
    for field in &first {
        // 17 significant digits: d.dddddddddddddddde±x
        let mantissa = field.split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(mantissa.replace('.', "").len(), 17, "{field}");
        let back: f64 = field.parse().unwrap();
        assert_eq!(format!("{back:.16e}"), *field);
    }

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join(REPORT_FILE)).unwrap()).unwrap();
    for key in [
        "verdict",
        "L",
        "phi_mass",
        "h_pred",
        "h_obs",
        "invariants",
        "timings",
        "resolution",
    ] {
        assert!(json.get(key).is_some(), "{key} missing");
    }
    assert_eq!(json["verdict"], "LiftOff");
}

#[test]
fn discrepancy_is_reported_exactly_for_liftoff() {
    let cases = [
        ("kind = \"linear\"", Some(Outcome::LiftOff)),
        ("kind = \"powerlaw\"\nA = 1.0\nbeta = -1.0", Some(Outcome::Decay)),
        ("kind = \"logcorrected\"\nalpha = 2.0", Some(Outcome::LiftOff)),
        ("kind = \"zero\"", Some(Outcome::Decay)),
        (
            "kind = \"tabulated\"\nr = [0.0, 2.0, 30.0]\npsi = [0.0, 1.0, 1.0]",
            None,
        ),
    ];
    for (profile, outcome) in cases {
        let (report, _) = simulate(&scenario(profile, "[run]\nt_end = 0.5")).unwrap();
        assert_eq!(report.expected(), outcome, "{profile}");
        assert_eq!(
            report.discrepancy.is_some(),
            outcome == Some(Outcome::LiftOff),
            "{profile}"
        );
        assert_eq!(
            report.prediction.is_some(),
            outcome == Some(Outcome::LiftOff),
            "{profile}"
        );
        assert_eq!(report.behavior_ok.is_some(), outcome.is_some(), "{profile}");
        assert_eq!(report.invariants.converged.is_some(), outcome == Some(Outcome::LiftOff));
    }
}

#[test]
fn short_supercritical_run_is_flagged_not_hidden() {
    // At t = 1 the center is still far above the predicted level.
    let s = scenario("kind = \"powerlaw\"\nA = 3.0\nbeta = -1.0", "[run]\nt_end = 1.0");
    let (report, _) = simulate(&s).unwrap();
    assert_eq!(report.classification.verdict, Verdict::LiftOff);
    assert!(report.discrepancy.unwrap() > 0.02);
    assert!(report.mismatch());
    assert_eq!(report.to_json()["mismatch"], true);
}

#[test]
fn linear_profile_tracks_the_closed_form() {
    let s = scenario("kind = \"linear\"", "[run]\nt_end = 3.0");
    let s = Scenario {
        num_nodes: 1001,
        solver: liftoff_core::SolverConfig {
            dt: 2e-3,
            snapshot_stride: 25,
            ..s.solver.clone()
        },
        ..s
    };
    let (report, traj) = simulate(&s).unwrap();
    assert!(traj.times.len() > 50);
    assert!(report.oracle_error.unwrap() < 1e-3, "{:?}", report.oracle_error);
}

#[test]
fn monotone_scheme_keeps_every_invariant() {
    let s = scenario(
        "kind = \"powerlaw\"\nA = 1.0\nbeta = -1.0",
        "theta = 1.0\nadvection = \"upwind\"\n[run]\nt_end = 5.0",
    );
    let (report, _) = simulate(&s).unwrap();
    let inv = &report.invariants;
    assert_eq!(inv.max_sup_increase, 0.0);
    assert!(inv.sup_nonincreasing);
    assert_eq!(inv.positivity, Some(true));
    assert_eq!(inv.radial_monotonicity, Some(true));
    assert_eq!(inv.weighted_mass, Some(true));
    assert!(inv.weighted_mass_increase <= 0.0);
}

#[test]
fn shipped_scenarios_behave_as_classified() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios");
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "toml"))
        .collect();
    paths.sort();
    let reports: Vec<_> = {
        use rayon::prelude::*;
        paths
            .par_iter()
            .map(|p| {
                let s = parse_scenario(&std::fs::read_to_string(p).unwrap()).unwrap();
                simulate(&s).unwrap().0
            })
            .collect()
    };
    for r in &reports {
        assert!(!r.mismatch(), "{}", r.summary());
        assert!(r.invariants.sup_nonincreasing, "{}", r.summary());
        assert_ne!(r.invariants.positivity, Some(false), "{}", r.summary());
    }
    let checked = reports.iter().filter(|r| r.behavior_ok == Some(true)).count();
    assert!(checked >= 5);
}
