use liftoff_core::{Advection, OuterBoundary, SolverConfig};
use liftoff_lab::{parse_scenario, InitialSpec, ProfileSpec, ScenarioError};

const MINIMAL: &str = r#"
[profile]
kind = "zero"

[domain]
n = 2

[initial]
kind = "gaussian"
sigma = 1.0
"#;

const SUPERCRITICAL: &str = r#"
name = "supercritical"

[profile]
kind = "powerlaw"
A = 3
beta = -1.0
r0 = 1.0

[domain]
n = 2
r_max = 40.0
num_nodes = 4001

[initial]
kind = "gaussian"
sigma = 1.0

[solver]
dt = 1e-3
theta = 0.5
advection = "centered"
outer_bc = "dirichlet_frozen"
snapshot_stride = 1000

[run]
t_end = 20.0
diag_radius = 32.0
"#;

#[test]
fn minimal_document_gets_solver_defaults() {
    let s = parse_scenario(MINIMAL).unwrap();
    assert_eq!(s.profile, ProfileSpec::Zero);
    assert_eq!(s.n_dim, 2);
    assert_eq!(s.initial, InitialSpec::Gaussian { sigma: 1.0 });
    assert_eq!(s.solver, SolverConfig::default());
    assert_eq!(s.solver.theta, 0.5);
    assert_eq!(s.solver.advection, Advection::Centered);
    assert_eq!(s.diag_radius(), 0.8 * s.r_max);
}

#[test]
fn amplitude_given_as_string_is_a_type_error() {
    let doc = SUPERCRITICAL.replace("A = 3", "A = \"3\"");
    let err = parse_scenario(&doc).unwrap_err();
    assert!(matches!(err, ScenarioError::Type { expected: "number", .. }), "{err:?}");
    assert_eq!(err.path(), Some("profile.A"));
    assert!(err.to_string().starts_with("profile.A:"), "{err}");
}

#[test]
fn supercritical_document_round_trips() {
    let s = parse_scenario(SUPERCRITICAL).unwrap();
    assert_eq!(s.name, "supercritical");
    assert_eq!(
        s.profile,
        ProfileSpec::PowerLaw {
            a: 3.0,
            beta: -1.0,
            r0: 1.0
        }
    );
    assert_eq!((s.n_dim, s.r_max, s.num_nodes), (2, 40.0, 4001));
    assert_eq!(s.solver.dt, 1e-3);
    assert_eq!(s.solver.outer_bc, OuterBoundary::DirichletFrozen);
    assert_eq!(s.solver.snapshot_stride, 1000);
    assert_eq!(s.t_end, 20.0);
    assert_eq!(s.diag_radius, Some(32.0));
    assert_eq!(parse_scenario(&s.to_document()).unwrap(), s);
}

#[test]
fn unknown_profile_kind_is_named() {
    let err = parse_scenario(&MINIMAL.replace("\"zero\"", "\"cubic\"")).unwrap_err();
    assert_eq!(err.path(), Some("profile.kind"));
    assert!(err.to_string().contains("cubic"));
    assert!(err.to_string().contains("logcorrected"));
}

#[test]
fn errors_name_their_key() {
    let cases = [
        (MINIMAL.replace("n = 2", ""), "domain.n"),
        (MINIMAL.replace("sigma = 1.0", ""), "initial.sigma"),
        (MINIMAL.replace("sigma = 1.0", "sigma = -1.0"), "initial.sigma"),
        (MINIMAL.replace("n = 2", "n = 2\nnodes = 10"), "domain.nodes"),
        (
            format!("{MINIMAL}\n[solver]\nadvection = \"downwind\"\n"),
            "solver.advection",
        ),
        (format!("{MINIMAL}\n[solver]\ntheta = 2\n"), "solver.theta"),
        (
            format!("{MINIMAL}\n[solver]\nsnapshot_stride = 1.5\n"),
            "solver.snapshot_stride",
        ),
        (format!("{MINIMAL}\n[run]\nt_end = -1\n"), "run.t_end"),
        (SUPERCRITICAL.replace("A = 3\n", ""), "profile.A"),
        (SUPERCRITICAL.replace("r0 = 1.0", "r0 = 0.0"), "profile"),
        (format!("{MINIMAL}\n[extra]\nx = 1\n"), "extra"),
    ];
    for (doc, path) in cases {
        let err = parse_scenario(&doc).unwrap_err();
        assert_eq!(err.path(), Some(path), "{err}");
    }
}

#[test]
fn malformed_text_is_a_syntax_error() {
    assert!(matches!(
        parse_scenario("[profile\nkind="),
        Err(ScenarioError::Syntax(_))
    ));
}

#[test]
fn tabulated_inputs_must_cover_the_domain() {
    let doc = r#"
[profile]
kind = "tabulated"
r = [0.0, 5.0]
psi = [0.0, 1.0]
[domain]
n = 2
r_max = 10.0
[initial]
kind = "gaussian"
sigma = 1.0
"#;
    assert_eq!(parse_scenario(doc).unwrap_err().path(), Some("profile.r"));
    let doc = r#"
[profile]
kind = "zero"
[domain]
n = 2
r_max = 10.0
[initial]
kind = "tabulated"
r = [0.0, 1.0, 4.0]
u = [1.0, 1.0, 0.0]
"#;
    assert_eq!(parse_scenario(doc).unwrap_err().path(), Some("initial.r"));
}

#[test]
fn shipped_scenarios_parse_and_round_trip() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let s = parse_scenario(&std::fs::read_to_string(&path).unwrap()).unwrap();
            assert_eq!(parse_scenario(&s.to_document()).unwrap(), s, "{}", path.display());
            count += 1;
        }
    }
    assert!(count >= 5);
}
