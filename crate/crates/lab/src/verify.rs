//! Named verification suites at fixed reference resolution.
//!
//! Every suite is a list of [`Criterion`]s. A criterion builds its own
//! scenario, runs it, and compares measured numbers with fixed limits.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use liftoff_core::{
    classify, predict_liftoff_level, radial_mass, solve, step, DriftProfile, GaussianData, Outcome, OuterBoundary,
    RadialField, RadialGrid, RadialOperator, SolverConfig, Trajectory, Verdict, WeightFunction,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::output::num;
use crate::run::{frame_oracle_error, oracle_error, simulate, RunError, DECAY_FRACTION, LIFTOFF_TOLERANCE};
use crate::scenario::{InitialSpec, ProfileSpec, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    AtMost,
    Below,
    AtLeast,
}

impl Comparison {
    fn holds(&self, value: f64, limit: f64) -> bool {
        match self {
            Self::AtMost => value <= limit,
            Self::Below => value < limit,
            Self::AtLeast => value >= limit,
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Self::AtMost => "<=",
            Self::Below => "<",
            Self::AtLeast => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub label: String,
    pub value: f64,
    pub limit: f64,
    pub comparison: Comparison,
}

impl Measurement {
    pub fn new(label: impl Into<String>, value: f64, comparison: Comparison, limit: f64) -> Self {
        Self {
            label: label.into(),
            value,
            limit,
            comparison,
        }
    }

    /// NaN never passes.
    pub fn passed(&self) -> bool {
        self.comparison.holds(self.value, self.limit)
    }

    /// 1 when `got == want`, else 0, compared against 1.
    fn exact(label: String, ok: bool) -> Self {
        Self::new(label, if ok { 1.0 } else { 0.0 }, Comparison::AtLeast, 1.0)
    }
}

impl fmt::Display for Measurement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} = {:.6e} {} {:e}",
            self.label,
            self.value,
            self.comparison.symbol(),
            self.limit
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub criterion: Criterion,
    pub resolution: String,
    pub measurements: Vec<Measurement>,
    /// Set when the criterion could not be evaluated at all.
    pub error: Option<String>,
    pub elapsed: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.error.is_none() && !self.measurements.is_empty() && self.measurements.iter().all(|m| m.passed())
    }

    /// `criterion N name: PASS|FAIL` followed by the measurements.
    pub fn line(&self) -> String {
        let mut line = format!(
            "criterion {:>2} {:<20} {}",
            self.criterion.number(),
            self.criterion.name(),
            if self.passed() { "PASS" } else { "FAIL" }
        );
        if let Some(e) = &self.error {
            line += &format!("  error: {e}");
        }
        for m in &self.measurements {
            line += &format!("  [{m}]");
        }
        line
    }

    pub fn to_json(&self) -> Value {
        let ms: Vec<Value> = self
            .measurements
            .iter()
            .map(|m| {
                json!({
                    "label": m.label,
                    "value": num(m.value),
                    "limit": num(m.limit),
                    "comparison": m.comparison.symbol(),
                    "passed": m.passed(),
                })
            })
            .collect();
        json!({
            "criterion": self.criterion.number(),
            "name": self.criterion.name(),
            "passed": self.passed(),
            "resolution": self.resolution,
            "measurements": ms,
            "error": self.error,
            "elapsed_s": self.elapsed,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Criterion {
    OracleEquivalence,
    LiftoffLevel,
    Conservation,
    LiftoffPrediction,
    Decay,
    CriticalFamily,
    ClassifierTable,
    MassGrowth,
    Invariants,
    ConvergenceOrder,
}

impl Criterion {
    pub const ALL: [Criterion; 10] = [
        Self::OracleEquivalence,
        Self::LiftoffLevel,
        Self::Conservation,
        Self::LiftoffPrediction,
        Self::Decay,
        Self::CriticalFamily,
        Self::ClassifierTable,
        Self::MassGrowth,
        Self::Invariants,
        Self::ConvergenceOrder,
    ];

    pub fn number(&self) -> usize {
        *self as usize + 1
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::OracleEquivalence => "oracle-equivalence",
            Self::LiftoffLevel => "liftoff-level",
            Self::Conservation => "conservation",
            Self::LiftoffPrediction => "liftoff-prediction",
            Self::Decay => "decay",
            Self::CriticalFamily => "critical-family",
            Self::ClassifierTable => "classifier-table",
            Self::MassGrowth => "mass-growth",
            Self::Invariants => "invariants",
            Self::ConvergenceOrder => "convergence-order",
        }
    }

    pub fn check(&self) -> CheckResult {
        let start = Instant::now();
        let (resolution, outcome) = match self {
            Self::OracleEquivalence => (LINEAR_REFERENCE, oracle_equivalence()),
            Self::LiftoffLevel => (LINEAR_REFERENCE, liftoff_level()),
            Self::Conservation => (SUPERCRITICAL_REFERENCE, conservation()),
            Self::LiftoffPrediction => (SUPERCRITICAL_REFERENCE, liftoff_prediction()),
            Self::Decay => (SUBCRITICAL_REFERENCE, decay()),
            Self::CriticalFamily => ("symbolic", Ok(critical_family())),
            Self::ClassifierTable => ("symbolic", Ok(classifier_table())),
            Self::MassGrowth => (MASS_REFERENCE, mass_growth()),
            Self::Invariants => (INVARIANT_REFERENCE, invariants()),
            Self::ConvergenceOrder => (CONVERGENCE_REFERENCE, convergence_order()),
        };
        let (measurements, error) = match outcome {
            Ok(ms) => (ms, None),
            Err(e) => (Vec::new(), Some(e.to_string())),
        };
        CheckResult {
            criterion: *self,
            resolution: resolution.into(),
            measurements,
            error,
            elapsed: start.elapsed().as_secs_f64(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Oracle,
    Conservation,
    Liftoff,
    Decay,
    Critical,
    Invariants,
    Convergence,
}

pub const SUITE_NAMES: &str = "oracle, conservation, liftoff, decay, critical, invariants, convergence";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("unknown suite `{0}`; valid suites: {SUITE_NAMES}")]
pub struct UnknownSuite(pub String);

impl Suite {
    pub const ALL: [Suite; 7] = [
        Self::Oracle,
        Self::Conservation,
        Self::Liftoff,
        Self::Decay,
        Self::Critical,
        Self::Invariants,
        Self::Convergence,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Oracle => "oracle",
            Self::Conservation => "conservation",
            Self::Liftoff => "liftoff",
            Self::Decay => "decay",
            Self::Critical => "critical",
            Self::Invariants => "invariants",
            Self::Convergence => "convergence",
        }
    }

    pub fn criteria(&self) -> &'static [Criterion] {
        match self {
            Self::Oracle => &[
                Criterion::OracleEquivalence,
                Criterion::LiftoffLevel,
                Criterion::MassGrowth,
            ],
            Self::Conservation => &[Criterion::Conservation],
            Self::Liftoff => &[Criterion::LiftoffPrediction],
            Self::Decay => &[Criterion::Decay],
            Self::Critical => &[Criterion::CriticalFamily, Criterion::ClassifierTable],
            Self::Invariants => &[Criterion::Invariants],
            Self::Convergence => &[Criterion::ConvergenceOrder],
        }
    }
}

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<CheckResult>,
    pub elapsed: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "passed": self.passed(),
            "elapsed_s": self.elapsed,
            "criteria": self.checks.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Runs a suite by name.
pub fn verify(suite: &str) -> Result<SuiteReport, UnknownSuite> {
    Ok(run_suite(suite.parse()?))
}

pub fn run_suite(suite: Suite) -> SuiteReport {
    let start = Instant::now();
    let mut checks: Vec<CheckResult> = suite.criteria().par_iter().map(|c| c.check()).collect();
    checks.sort_by_key(|c| c.criterion);
    SuiteReport {
        suite,
        checks,
        elapsed: start.elapsed().as_secs_f64(),
    }
}

const LINEAR_REFERENCE: &str =
    "linear drift, n=2, sigma=1, r_max=20, 2001 nodes, dt=1e-3, theta=0.5 centered, dirichlet_frozen";
const SUPERCRITICAL_REFERENCE: &str =
    "A=3 beta=-1 r0=1, n=2, sigma=1, r_max=40, 4001 nodes, dt=1e-3, t_end=10, theta=0.5 centered, dirichlet_frozen, R=32";
const SUBCRITICAL_REFERENCE: &str =
    "A=1 beta=-1 r0=1, n=2, sigma=1, r_max=80, 4001 nodes, dt=2e-3, t_end=200, theta=0.5 centered, dirichlet_frozen, R=64";
const MASS_REFERENCE: &str = "linear drift, n=2, sigma=1, r_max=30, 1501 nodes, dt=2e-3, t in [0, 1.5]";
const INVARIANT_REFERENCE: &str =
    "r_max=12, 121 nodes; one profile per family; monotone scheme theta=1 upwind dt=0.05, otherwise theta=0.5 centered";
const CONVERGENCE_REFERENCE: &str =
    "linear drift, n=2, sigma=1, r_max=20, 501/1001/2001 nodes with dt 4e-3/2e-3/1e-3, t in [0, 1], r <= 16";

fn scenario(profile: ProfileSpec, r_max: f64, num_nodes: usize, dt: f64, t_end: f64, stride: usize) -> Scenario {
    Scenario {
        name: "reference".into(),
        profile,
        n_dim: 2,
        r_max,
        num_nodes,
        initial: InitialSpec::Gaussian { sigma: 1.0 },
        solver: SolverConfig {
            dt,
            snapshot_stride: stride,
            ..SolverConfig::default()
        },
        t_end,
        diag_radius: None,
        out_dir: None,
    }
}

fn linear_run(num_nodes: usize, dt: f64, t_end: f64, stride: usize) -> Result<(Trajectory, GaussianData), RunError> {
    let g = GaussianData::new(1.0, 2).expect("valid Gaussian");
    let grid = RadialGrid::new(20.0, num_nodes, 2).map_err(liftoff_core::SolverError::from)?;
    let config = SolverConfig {
        dt,
        snapshot_stride: stride,
        ..SolverConfig::default()
    };
    let u0 = g.sample(grid).map_err(liftoff_core::SolverError::from)?;
    Ok((solve(&u0, &DriftProfile::Linear, &config, t_end)?, g))
}

fn oracle_equivalence() -> Result<Vec<Measurement>, RunError> {
    let (traj, g) = linear_run(2001, 1e-3, 3.0, 500)?;
    let mut ms = Vec::new();
    for t in [0.5, 1.0, 2.0, 3.0] {
        let (k, _) = traj
            .times
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))
            .expect("non-empty");
        let err = frame_oracle_error(&traj.frames[k], traj.times[k], &g, 16.0) / traj.initial().sup();
        ms.push(Measurement::new(
            format!("max error / sup u0 at t={}", traj.times[k]),
            err,
            Comparison::AtMost,
            1e-3,
        ));
    }
    Ok(ms)
}

fn liftoff_level() -> Result<Vec<Measurement>, RunError> {
    let (traj, g) = linear_run(2001, 1e-3, 6.0, 1000)?;
    let exact = 2.0 / 3.0;
    let (_, last) = traj.last();
    let h = predict_liftoff_level(traj.initial(), &WeightFunction::full(&DriftProfile::Linear))?;
    Ok(vec![
        Measurement::new(
            "|u(0,6) - 2/3| / (2/3)",
            (last.center() - exact).abs() / exact,
            Comparison::AtMost,
            0.02,
        ),
        Measurement::new(
            "|limit of closed form - 2/3| / (2/3)",
            (g.ou_limit() - exact).abs() / exact,
            Comparison::AtMost,
            1e-12,
        ),
        Measurement::new(
            "|h_pred - 2/3| / (2/3)",
            (h.level - exact).abs() / exact,
            Comparison::AtMost,
            1e-4,
        ),
    ])
}

fn supercritical() -> Scenario {
    Scenario {
        diag_radius: Some(32.0),
        ..scenario(
            ProfileSpec::PowerLaw {
                a: 3.0,
                beta: -1.0,
                r0: 1.0,
            },
            40.0,
            4001,
            1e-3,
            10.0,
            500,
        )
    }
}

fn conservation() -> Result<Vec<Measurement>, RunError> {
    let (report, _) = simulate(&supercritical())?;
    Ok(vec![
        Measurement::new(
            "max relative drift of I_32 (every step)",
            report.invariants.weighted_mass_drift,
            Comparison::AtMost,
            1e-3,
        ),
        Measurement::exact(
            format!("verdict {} is LiftOff", report.classification.verdict),
            report.classification.verdict == Verdict::LiftOff,
        ),
    ])
}

fn liftoff_prediction() -> Result<Vec<Measurement>, RunError> {
    let (report, _) = simulate(&supercritical())?;
    let discrepancy = report.discrepancy.unwrap_or(f64::NAN);
    Ok(vec![Measurement::new(
        format!(
            "|u(0,10) - h_pred| / h_pred with u(0,10)={:.6}, h_pred={:.6}",
            report.final_center,
            report.prediction.map_or(f64::NAN, |p| p.level)
        ),
        discrepancy,
        Comparison::AtMost,
        LIFTOFF_TOLERANCE,
    )])
}

fn decay() -> Result<Vec<Measurement>, RunError> {
    let s = scenario(
        ProfileSpec::PowerLaw {
            a: 1.0,
            beta: -1.0,
            r0: 1.0,
        },
        80.0,
        4001,
        2e-3,
        200.0,
        500,
    );
    let (report, _) = simulate(&s)?;
    let ratio = report.diagnostics.sup.iter().fold(f64::INFINITY, |m, &x| m.min(x)) / report.initial_sup;
    Ok(vec![
        Measurement::new(
            "largest per-step increase of sup u",
            report.invariants.max_sup_increase,
            Comparison::AtMost,
            1e-8,
        ),
        Measurement::new(
            "largest per-frame increase of sup u",
            report.diagnostics.max_sup_increase(),
            Comparison::AtMost,
            1e-8,
        ),
        Measurement::new(
            "min over t <= 200 of sup u / sup u0",
            ratio,
            Comparison::Below,
            DECAY_FRACTION,
        ),
        Measurement::new(
            "largest relative per-step increase of psi_+ weighted I_64",
            report.invariants.weighted_mass_increase,
            Comparison::AtMost,
            1e-6,
        ),
    ])
}

fn verdict_check(what: String, profile: &DriftProfile, n_dim: usize, want: Verdict) -> Measurement {
    let got = classify(profile, n_dim).map(|c| c.verdict);
    let label = match &got {
        Ok(v) => format!("{what}, n={n_dim}: {v} (want {want})"),
        Err(e) => format!("{what}, n={n_dim}: error {e} (want {want})"),
    };
    Measurement::exact(label, got.as_ref() == Ok(&want))
}

fn critical_family() -> Vec<Measurement> {
    [
        (2.0, Verdict::CriticalResolved(Outcome::LiftOff)),
        (0.5, Verdict::CriticalResolved(Outcome::Decay)),
        (1.0, Verdict::CriticalResolved(Outcome::Decay)),
    ]
    .into_iter()
    .map(|(alpha, want)| {
        let p = DriftProfile::log_corrected(2, alpha, 2.0).expect("valid profile");
        verdict_check(format!("alpha={alpha}"), &p, 2, want)
    })
    .collect()
}

fn classifier_table() -> Vec<Measurement> {
    [
        (3.0, -1.0, 2, Verdict::LiftOff),
        (1.0, 0.0, 2, Verdict::LiftOff),
        (1.0, -1.0, 2, Verdict::Decay),
        (5.0, -2.0, 3, Verdict::Decay),
    ]
    .into_iter()
    .map(|(a, beta, n, want)| {
        let p = DriftProfile::power_law(a, beta, 1.0).expect("valid profile");
        verdict_check(format!("A={a} beta={beta}"), &p, n, want)
    })
    .collect()
}

fn mass_growth() -> Result<Vec<Measurement>, RunError> {
    let g = GaussianData::new(1.0, 2).expect("valid Gaussian");
    let grid = RadialGrid::new(30.0, 1501, 2).map_err(liftoff_core::SolverError::from)?;
    let config = SolverConfig {
        dt: 2e-3,
        snapshot_stride: 25,
        ..SolverConfig::default()
    };
    let u0 = g.sample(grid).map_err(liftoff_core::SolverError::from)?;
    let traj = solve(&u0, &DriftProfile::Linear, &config, 1.5)?;
    let m0 = radial_mass(traj.initial());
    let worst = traj
        .iter()
        .map(|(t, u)| (radial_mass(u) / m0 / (2.0 * t).exp() - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(vec![Measurement::new(
        "max |mass(t)/mass(0) / e^{2t} - 1|",
        worst,
        Comparison::AtMost,
        0.02,
    )])
}

/// The invariant matrix: one profile per family, each with its own dimension.
pub fn invariant_profiles() -> Vec<(&'static str, DriftProfile, usize)> {
    vec![
        ("powerlaw", DriftProfile::power_law(3.0, -1.0, 1.0).expect("valid"), 2),
        (
            "logcorrected",
            DriftProfile::log_corrected(3, 2.0, 2.0).expect("valid"),
            3,
        ),
        ("linear", DriftProfile::Linear, 1),
        ("zero", DriftProfile::Zero, 4),
        (
            "tabulated",
            DriftProfile::tabulated(vec![0.0, 1.0, 4.0, 9.0, 13.0], vec![0.0, 1.5, -0.5, 2.0, 1.0]).expect("valid"),
            2,
        ),
    ]
}

#[derive(Debug, Clone, Copy, Default)]
struct InvariantMaxima {
    max_principle: f64,
    m_matrix_failures: f64,
    monotonicity: f64,
    negativity: f64,
    center_failures: f64,
    constants: f64,
    linearity: f64,
}

impl InvariantMaxima {
    fn merge(self, o: Self) -> Self {
        Self {
            max_principle: self.max_principle.max(o.max_principle),
            m_matrix_failures: self.m_matrix_failures + o.m_matrix_failures,
            monotonicity: self.monotonicity.max(o.monotonicity),
            negativity: self.negativity.max(o.negativity),
            center_failures: self.center_failures + o.center_failures,
            constants: self.constants.max(o.constants),
            linearity: self.linearity.max(o.linearity),
        }
    }
}

fn rough(grid: RadialGrid) -> RadialField {
    let v = (0..grid.num_nodes())
        .map(|i| {
            let x = i as f64;
            (1.7 * x).sin() + 0.5 * (0.31 * x * x).cos()
        })
        .collect();
    RadialField::new(grid, v).expect("finite")
}

fn invariant_case(profile: &DriftProfile, n_dim: usize) -> Result<InvariantMaxima, RunError> {
    let grid = RadialGrid::new(12.0, 121, n_dim).map_err(liftoff_core::SolverError::from)?;
    let mut out = InvariantMaxima::default();
    let rough_data = rough(grid);
    let decreasing =
        RadialField::from_fn(grid, |r| 1.0 / (1.0 + r * r) + if r < 3.0 { 0.5 } else { 0.0 }).expect("finite");
    let bump = RadialField::from_fn(grid, |r| (1.0 - r / 2.0).max(0.0)).expect("finite");

    for bc in [OuterBoundary::Neumann, OuterBoundary::DirichletFrozen] {
        let monotone = SolverConfig {
            outer_bc: bc,
            snapshot_stride: 1,
            ..SolverConfig::monotone(0.05)
        };
        let op = RadialOperator::for_config(&grid, profile, &monotone)?;
        if !op.implicit_matrix(1.0, monotone.dt).has_m_matrix_signs() {
            out.m_matrix_failures += 1.0;
        }

        let (lo, hi) = (rough_data.inf(), rough_data.sup());
        let scale = lo.abs().max(hi.abs());
        for frame in &solve(&rough_data, profile, &monotone, 1.0)?.frames {
            for &v in frame.values() {
                out.max_principle = out.max_principle.max((lo - v).max(v - hi).max(0.0) / scale);
            }
        }

        for frame in &solve(&decreasing, profile, &monotone, 1.0)?.frames {
            for w in frame.values().windows(2) {
                out.monotonicity = out.monotonicity.max((w[1] - w[0]).max(0.0));
            }
        }

        let traj = solve(&bump, profile, &monotone, 1.0)?;
        for (_, frame) in traj.iter().skip(1) {
            out.negativity = out.negativity.max((-frame.inf()).max(0.0));
            if !(frame.center() > 0.0) {
                out.center_failures += 1.0;
            }
        }

        for config in [
            monotone.clone(),
            SolverConfig {
                outer_bc: bc,
                ..SolverConfig::default()
            },
        ] {
            for c in [-2.5, 0.0, 1.0, 7.25] {
                let u = RadialField::constant(grid, c).expect("finite");
                let next = step(&u, profile, &config)?;
                for &v in next.values() {
                    out.constants = out.constants.max((v - c).abs());
                }
            }
        }

        let config = SolverConfig {
            outer_bc: bc,
            dt: 0.02,
            snapshot_stride: 1,
            ..SolverConfig::default()
        };
        let (a, b) = (0.7, -1.3);
        let combo = rough_data.linear_combination(a, &decreasing, b).expect("same grid");
        let tu = solve(&rough_data, profile, &config, 0.2)?;
        let tv = solve(&decreasing, profile, &config, 0.2)?;
        let tc = solve(&combo, profile, &config, 0.2)?;
        for ((fu, fv), fc) in tu.frames.iter().zip(&tv.frames).zip(&tc.frames) {
            let expected = fu.linear_combination(a, fv, b).expect("same grid");
            let scale = [a.abs() * max_abs(fu), b.abs() * max_abs(fv), max_abs(&expected)]
                .into_iter()
                .fold(f64::MIN_POSITIVE, f64::max);
            for (x, y) in fc.values().iter().zip(expected.values()) {
                out.linearity = out.linearity.max((x - y).abs() / scale);
            }
        }
    }
    Ok(out)
}

fn max_abs(u: &RadialField) -> f64 {
    u.values().iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn invariants() -> Result<Vec<Measurement>, RunError> {
    let per_family = invariant_profiles()
        .par_iter()
        .map(|(_, p, n)| invariant_case(p, *n))
        .collect::<Result<Vec<_>, _>>()?;
    let m = per_family
        .into_iter()
        .fold(InvariantMaxima::default(), InvariantMaxima::merge);
    Ok(vec![
        Measurement::new(
            "max principle violation / max|u0| (theta=1 upwind)",
            m.max_principle,
            Comparison::AtMost,
            1e-12,
        ),
        Measurement::new(
            "implicit matrices without M-matrix signs",
            m.m_matrix_failures,
            Comparison::AtMost,
            0.0,
        ),
        Measurement::new("largest radial increase", m.monotonicity, Comparison::AtMost, 1e-10),
        Measurement::new(
            "most negative value of non-negative data",
            m.negativity,
            Comparison::AtMost,
            1e-12,
        ),
        Measurement::new(
            "frames with non-positive center",
            m.center_failures,
            Comparison::AtMost,
            0.0,
        ),
        Measurement::new("largest change of a constant", m.constants, Comparison::AtMost, 0.0),
        Measurement::new("linearity defect (relative)", m.linearity, Comparison::AtMost, 1e-12),
    ])
}

/// Max oracle error over `r ≤ 16` and `t ∈ {0.25, 0.5, 0.75, 1}`.
pub fn linear_oracle_error(num_nodes: usize, dt: f64) -> Result<f64, RunError> {
    let stride = (0.25 / dt).round() as usize;
    let (traj, g) = linear_run(num_nodes, dt, 1.0, stride)?;
    Ok(oracle_error(&traj, &g, 16.0))
}

fn convergence_order() -> Result<Vec<Measurement>, RunError> {
    let levels = [(501, 4e-3), (1001, 2e-3), (2001, 1e-3)];
    let errors = levels
        .par_iter()
        .map(|&(n, dt)| linear_oracle_error(n, dt))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(errors
        .windows(2)
        .zip(levels.windows(2))
        .map(|(e, l)| {
            Measurement::new(
                format!(
                    "order {} -> {} nodes (errors {:.3e}, {:.3e})",
                    l[0].0, l[1].0, e[0], e[1]
                ),
                (e[0] / e[1]).log2(),
                Comparison::AtLeast,
                1.9,
            )
        })
        .collect())
}
