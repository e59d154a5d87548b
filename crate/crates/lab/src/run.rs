//! Single scenario runs: classify, simulate, diagnose, check, write.

use std::time::Instant;

use liftoff_core::{
    classify, diagnostics, ou_solution, predict_liftoff_level, solve_observed, ClassificationResult, DiagnosticSeries,
    GaussianData, GrowthLimit, LiftoffPrediction, MassQuadrature, Outcome, PhiMass, RadialField, SolverError,
    Trajectory, WeightError, WeightFunction,
};
use serde_json::{json, Value};
use thiserror::Error;

use crate::output::{self, num, OutputError};
use crate::scenario::{advection_name, boundary_name, Scenario, ScenarioError};

/// Center value within this fraction of the predicted level counts as lift-off.
pub const LIFTOFF_TOLERANCE: f64 = 0.02;
/// Final sup below this fraction of the initial sup counts as decay.
pub const DECAY_FRACTION: f64 = 0.1;
/// Largest relative drift of the full-weight functional.
pub const CONSERVATION_TOLERANCE: f64 = 1e-3;
/// Largest relative per-step increase of the ψ₊-weighted functional.
pub const MONOTONE_FUNCTIONAL_TOLERANCE: f64 = 1e-6;
/// Largest absolute per-step increase of sup u.
pub const SUP_TOLERANCE: f64 = 1e-8;
pub const MONOTONICITY_TOLERANCE: f64 = 1e-10;
pub const POSITIVITY_TOLERANCE: f64 = 1e-12;
/// `|u(0) - u(R/2)|` relative to sup u₀ at the end of a converged run.
pub const CONVERGED_SPREAD: f64 = 1e-4;
/// Center slope per unit time over the last tenth of a converged run.
pub const CONVERGED_SLOPE: f64 = 1e-5;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("solver: {0}")]
    Solver(#[from] SolverError),
    #[error("weight: {0}")]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Output(#[from] OutputError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    Full,
    PositivePart,
}

impl WeightKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Full => "full",
            Self::PositivePart => "positive_part",
        }
    }
}

/// Invariant checks. `None` means the check does not apply to this run.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantFlags {
    /// Largest per-step increase of sup u.
    pub max_sup_increase: f64,
    pub sup_nonincreasing: bool,
    /// Only checked for non-negative data.
    pub positivity: Option<bool>,
    /// Only checked for radially non-increasing data.
    pub radial_monotonicity: Option<bool>,
    /// Largest relative drift of `I_R` from its initial value.
    pub weighted_mass_drift: f64,
    /// Largest relative per-step increase of `I_R`.
    pub weighted_mass_increase: f64,
    /// Conservation for the full weight, monotonicity for ψ₊.
    pub weighted_mass: Option<bool>,
    /// Plateau reached; lift-off runs only.
    pub converged: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Timings {
    pub classify: f64,
    pub simulate: f64,
    pub diagnose: f64,
    pub output: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub scenario: Scenario,
    pub classification: ClassificationResult,
    pub weight: WeightKind,
    pub diagnostics: DiagnosticSeries,
    pub initial_sup: f64,
    pub final_time: f64,
    pub final_sup: f64,
    pub final_center: f64,
    /// Present iff the verdict predicts lift-off.
    pub prediction: Option<LiftoffPrediction>,
    /// `|u(0, t_end) - h| / h`, present iff the verdict predicts lift-off.
    pub discrepancy: Option<f64>,
    /// Whether the observed behavior matches the verdict; `None` if undetermined.
    pub behavior_ok: Option<bool>,
    /// Max error against the closed form relative to sup u₀ over
    /// `r ≤ 0.8 r_max`; linear drift with Gaussian data only.
    pub oracle_error: Option<f64>,
    pub invariants: InvariantFlags,
    pub timings: Timings,
}

impl RunReport {
    pub fn expected(&self) -> Option<Outcome> {
        self.classification.verdict.outcome()
    }

    pub fn mismatch(&self) -> bool {
        self.behavior_ok == Some(false)
    }

    pub fn to_json(&self) -> Value {
        let s = &self.scenario;
        let inv = &self.invariants;
        json!({
            "scenario": s.name,
            "verdict": self.classification.verdict.to_string(),
            "L": growth_json(&self.classification.growth_limit),
            "L_plus": growth_json(&self.classification.positive_growth_limit),
            "phi_mass": phi_mass_json(&self.classification.phi_mass),
            "classifier_note": self.classification.note,
            "weight": self.weight.name(),
            "diag_radius": num(self.diagnostics.radius),
            "h_pred": self.prediction.map(|p| num(p.level)),
            "h_pred_tail": self.prediction.map(|p| json!({
                "tail_mass": num(p.tail_mass),
                "relative_tail": num(p.relative_tail),
                "level_with_tail": num(p.level_with_tail),
            })),
            "h_obs": num(self.final_center),
            "discrepancy": self.discrepancy.map(num),
            "behavior_ok": self.behavior_ok,
            "mismatch": self.mismatch(),
            "initial_sup": num(self.initial_sup),
            "final_time": num(self.final_time),
            "final_sup": num(self.final_sup),
            "oracle_error": self.oracle_error.map(num),
            "invariants": {
                "sup_nonincreasing": inv.sup_nonincreasing,
                "max_sup_increase": num(inv.max_sup_increase),
                "positivity": inv.positivity,
                "radial_monotonicity": inv.radial_monotonicity,
                "weighted_mass": inv.weighted_mass,
                "weighted_mass_drift": num(inv.weighted_mass_drift),
                "weighted_mass_increase": num(inv.weighted_mass_increase),
                "converged": inv.converged,
            },
            "thresholds": {
                "liftoff_tolerance": LIFTOFF_TOLERANCE,
                "decay_fraction": DECAY_FRACTION,
                "conservation": CONSERVATION_TOLERANCE,
                "monotone_functional": MONOTONE_FUNCTIONAL_TOLERANCE,
                "sup": SUP_TOLERANCE,
            },
            "resolution": {
                "n": s.n_dim,
                "r_max": num(s.r_max),
                "num_nodes": s.num_nodes,
                "dt": num(s.solver.dt),
                "theta": num(s.solver.theta),
                "advection": advection_name(s.solver.advection),
                "outer_bc": boundary_name(s.solver.outer_bc),
                "t_end": num(s.t_end),
            },
            "timings": {
                "classify_s": self.timings.classify,
                "simulate_s": self.timings.simulate,
                "diagnose_s": self.timings.diagnose,
                "output_s": self.timings.output,
                "total_s": self.timings.total,
            },
        })
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let mut line = format!(
            "{}: verdict {}, u(0,{}) = {:.6}, sup = {:.6}",
            self.scenario.name, self.classification.verdict, self.final_time, self.final_center, self.final_sup
        );
        if let (Some(p), Some(d)) = (self.prediction, self.discrepancy) {
            line += &format!(", h_pred = {:.6} (off by {:.3}%)", p.level, 100.0 * d);
        }
        if let Some(e) = self.oracle_error {
            line += &format!(", oracle error {e:.3e}");
        }
        line += match self.behavior_ok {
            Some(true) => ", behavior matches",
            Some(false) => ", MISMATCH",
            None => ", behavior not checked",
        };
        line
    }
}

fn growth_json(g: &GrowthLimit) -> Value {
    match *g {
        GrowthLimit::Finite(l) => num(l),
        GrowthLimit::PlusInfinity => json!("+inf"),
        GrowthLimit::MinusInfinity => json!("-inf"),
        GrowthLimit::Range { liminf, limsup } => json!({ "liminf": num(liminf), "limsup": num(limsup) }),
    }
}

fn phi_mass_json(m: &PhiMass) -> Value {
    match *m {
        PhiMass::Finite {
            value,
            radius,
            tail,
            tail_exact,
        } => json!({ "value": num(value), "radius": num(radius), "tail": num(tail), "tail_exact": tail_exact }),
        PhiMass::Infinite => json!("infinite"),
        PhiMass::Unknown => json!("unknown"),
    }
}

/// Max of `|u - ou_solution(·, t)|` over nodes with `r ≤ r_cut`.
pub fn frame_oracle_error(u: &RadialField, t: f64, g: &GaussianData, r_cut: f64) -> f64 {
    let grid = *u.grid();
    u.values()
        .iter()
        .enumerate()
        .take_while(|&(i, _)| grid.radius(i) <= r_cut)
        .map(|(i, &v)| (v - ou_solution(g, grid.radius(i), t)).abs())
        .fold(0.0, f64::max)
}

/// Max over snapshots of [`frame_oracle_error`], relative to sup u₀.
pub fn oracle_error(traj: &Trajectory, g: &GaussianData, r_cut: f64) -> f64 {
    let scale = traj.initial().sup().abs().max(f64::MIN_POSITIVE);
    traj.iter()
        .map(|(t, u)| frame_oracle_error(u, t, g, r_cut))
        .fold(0.0, f64::max)
        / scale
}

/// Where and whether to write artifacts.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out_dir: Option<std::path::PathBuf>,
    /// Skip `frames.csv`, which can be large.
    pub skip_frames: bool,
}

/// Runs a scenario and, if requested, writes its artifacts.
pub fn run(s: &Scenario, opts: &RunOptions) -> Result<RunReport, RunError> {
    let (mut report, traj) = simulate(s)?;
    if let Some(dir) = opts.out_dir.as_deref() {
        let start = Instant::now();
        if !opts.skip_frames {
            output::write_frames(&dir.join(output::FRAMES_FILE), &traj)?;
        }
        output::write_diagnostics(&dir.join(output::DIAGNOSTICS_FILE), &report.diagnostics)?;
        report.timings.output = start.elapsed().as_secs_f64();
        report.timings.total += report.timings.output;
        output::write_json(&dir.join(output::REPORT_FILE), &report.to_json())?;
    }
    Ok(report)
}

/// Classify, simulate and diagnose without writing anything.
pub fn simulate(s: &Scenario) -> Result<(RunReport, Trajectory), RunError> {
    let total = Instant::now();
    s.validate()?;
    let grid = s.grid()?;
    let drift = s.drift()?;
    let u0 = s.initial_field()?;
    let radius = s.diag_radius();

    let start = Instant::now();
    let classification = classify(&drift, s.n_dim)?;
    let expected = classification.verdict.outcome();
    let weight_kind = match expected {
        Some(Outcome::Decay) => WeightKind::PositivePart,
        _ => WeightKind::Full,
    };
    let weight = match weight_kind {
        WeightKind::Full => WeightFunction::full(&drift),
        WeightKind::PositivePart => WeightFunction::positive_part(&drift),
    };
    let prediction = match expected {
        Some(Outcome::LiftOff) => Some(predict_liftoff_level(&u0, &WeightFunction::full(&drift))?),
        _ => None,
    };
    let t_classify = start.elapsed().as_secs_f64();

    // Per-step tracking of sup u and I_R, independent of the snapshot stride.
    let start = Instant::now();
    let quad = MassQuadrature::new(&grid, &weight, radius)?;
    let initial_mass = quad.apply(u0.values());
    let mut prev_mass = initial_mass;
    let mut prev_sup = u0.sup();
    let mut max_sup_increase: f64 = 0.0;
    let mut max_drift: f64 = 0.0;
    let mut max_increase: f64 = 0.0;
    let mut tail_center: Option<(f64, f64)> = None;
    let tail_start = 0.9 * s.t_end;
    let mass_scale = initial_mass.abs().max(f64::MIN_POSITIVE);
    let traj = solve_observed(&u0, &drift, &s.solver, s.t_end, |_, t, v| {
        let sup = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        max_sup_increase = max_sup_increase.max(sup - prev_sup);
        prev_sup = sup;
        let mass = quad.apply(v);
        max_drift = max_drift.max((mass - initial_mass).abs() / mass_scale);
        max_increase = max_increase.max((mass - prev_mass) / prev_mass.abs().max(f64::MIN_POSITIVE));
        prev_mass = mass;
        if tail_center.is_none() && t >= tail_start {
            tail_center = Some((t, v[0]));
        }
    })?;
    let t_simulate = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let series = diagnostics(&traj, &weight, radius)?;
    let initial_sup = u0.sup();
    let (final_time, last) = traj.last();
    let (final_sup, final_center) = (last.sup(), last.center());
    let scale = initial_sup.abs().max(f64::MIN_POSITIVE);

    let positivity = (u0.inf() >= 0.0).then(|| traj.frames.iter().all(|f| f.inf() >= -POSITIVITY_TOLERANCE * scale));
    let is_monotone = |v: &[f64], tol: f64| v.windows(2).all(|w| w[1] <= w[0] + tol);
    let radial_monotonicity = is_monotone(u0.values(), 0.0).then(|| {
        traj.frames
            .iter()
            .all(|f| is_monotone(f.values(), MONOTONICITY_TOLERANCE * scale))
    });
    let weighted_mass = expected.map(|o| match o {
        Outcome::LiftOff => max_drift <= CONSERVATION_TOLERANCE,
        Outcome::Decay => max_increase <= MONOTONE_FUNCTIONAL_TOLERANCE,
    });
    let converged = (expected == Some(Outcome::LiftOff)).then(|| {
        let mid = last.interpolate(0.5 * radius);
        let spread_ok = (final_center - mid).abs() < CONVERGED_SPREAD * scale;
        let slope_ok = match tail_center {
            Some((t, c)) if final_time > t => (final_center - c).abs() / (final_time - t) < CONVERGED_SLOPE,
            _ => false,
        };
        spread_ok && slope_ok
    });

    let discrepancy = prediction.map(|p| (final_center - p.level).abs() / p.level.abs());
    let behavior_ok = expected.map(|o| match o {
        Outcome::LiftOff => discrepancy.is_some_and(|d| d <= LIFTOFF_TOLERANCE),
        Outcome::Decay => final_sup < DECAY_FRACTION * initial_sup,
    });
    let oracle = match (&drift, s.gaussian()) {
        (liftoff_core::DriftProfile::Linear, Some(g)) => Some(oracle_error(&traj, &g, 0.8 * s.r_max)),
        _ => None,
    };
    let t_diagnose = start.elapsed().as_secs_f64();

    let report = RunReport {
        scenario: s.clone(),
        classification,
        weight: weight_kind,
        diagnostics: series,
        initial_sup,
        final_time,
        final_sup,
        final_center,
        prediction,
        discrepancy,
        behavior_ok,
        oracle_error: oracle,
        invariants: InvariantFlags {
            max_sup_increase,
            sup_nonincreasing: max_sup_increase <= SUP_TOLERANCE,
            positivity,
            radial_monotonicity,
            weighted_mass_drift: max_drift,
            weighted_mass_increase: max_increase,
            weighted_mass,
            converged,
        },
        timings: Timings {
            classify: t_classify,
            simulate: t_simulate,
            diagnose: t_diagnose,
            output: 0.0,
            total: total.elapsed().as_secs_f64(),
        },
    };
    Ok((report, traj))
}
