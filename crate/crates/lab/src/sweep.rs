//! Parameter sweeps over a base scenario.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::output::{self, num, OutputError};
use crate::run::{run, RunOptions, RunReport};
use crate::scenario::{InitialSpec, ProfileSpec, Scenario, ScenarioError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParam {
    A,
    Beta,
    Alpha,
    Sigma,
    NDim,
    RMax,
    NumNodes,
    Dt,
}

impl SweepParam {
    pub const ALL: [SweepParam; 8] = [
        Self::A,
        Self::Beta,
        Self::Alpha,
        Self::Sigma,
        Self::NDim,
        Self::RMax,
        Self::NumNodes,
        Self::Dt,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::A => "A",
            Self::Beta => "beta",
            Self::Alpha => "alpha",
            Self::Sigma => "sigma",
            Self::NDim => "n_dim",
            Self::RMax => "r_max",
            Self::NumNodes => "num_nodes",
            Self::Dt => "dt",
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("unknown sweep parameter `{0}`; valid parameters: A, beta, alpha, sigma, n_dim, r_max, num_nodes, dt")]
pub struct UnknownParam(pub String);

impl FromStr for SweepParam {
    type Err = UnknownParam;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| UnknownParam(s.to_string()))
    }
}

fn as_count(path: &str, value: f64) -> Result<usize, ScenarioError> {
    if value >= 0.0 && value.fract() == 0.0 && value <= usize::MAX as f64 {
        Ok(value as usize)
    } else {
        Err(ScenarioError::Invalid {
            path: path.into(),
            message: format!("{value} is not a non-negative integer"),
        })
    }
}

impl Scenario {
    /// Copy of `self` with one parameter replaced, revalidated.
    pub fn with_param(&self, param: SweepParam, value: f64) -> Result<Scenario, ScenarioError> {
        let mut s = self.clone();
        let wrong_kind = |path: &str| ScenarioError::Invalid {
            path: path.into(),
            message: format!("not a parameter of a {} profile", self.profile.kind()),
        };
        match (param, &mut s.profile, &mut s.initial) {
            (SweepParam::A, ProfileSpec::PowerLaw { a, .. }, _) => *a = value,
            (SweepParam::A, ..) => return Err(wrong_kind("profile.A")),
            (SweepParam::Beta, ProfileSpec::PowerLaw { beta, .. }, _) => *beta = value,
            (SweepParam::Beta, ..) => return Err(wrong_kind("profile.beta")),
            (SweepParam::Alpha, ProfileSpec::LogCorrected { alpha, .. }, _) => *alpha = value,
            (SweepParam::Alpha, ..) => return Err(wrong_kind("profile.alpha")),
            (SweepParam::Sigma, _, InitialSpec::Gaussian { sigma }) => *sigma = value,
            (SweepParam::Sigma, ..) => {
                return Err(ScenarioError::Invalid {
                    path: "initial.sigma".into(),
                    message: "initial data is not Gaussian".into(),
                })
            }
            (SweepParam::NDim, ..) => s.n_dim = as_count("domain.n", value)?,
            (SweepParam::RMax, ..) => s.r_max = value,
            (SweepParam::NumNodes, ..) => s.num_nodes = as_count("domain.num_nodes", value)?,
            (SweepParam::Dt, ..) => s.solver.dt = value,
        }
        s.name = format!("{}-{}={}", self.name, param, value);
        s.validate()?;
        Ok(s)
    }
}

#[derive(Debug)]
pub struct SweepRow {
    pub value: f64,
    pub key: String,
    pub result: Result<RunReport, String>,
}

#[derive(Debug)]
pub struct SweepResult {
    pub param: SweepParam,
    /// Sorted by value, then key.
    pub rows: Vec<SweepRow>,
}

/// Runs `base` once per value, in parallel. Failing rows are kept with
/// their error message; the sweep itself only fails on output errors.
pub fn sweep(
    base: &Scenario,
    param: SweepParam,
    values: &[f64],
    out_dir: Option<PathBuf>,
) -> Result<SweepResult, OutputError> {
    let mut rows: Vec<SweepRow> = values
        .par_iter()
        .map(|&value| {
            let key = format!("{param}={value}");
            let result = base.with_param(param, value).map_err(|e| e.to_string()).and_then(|s| {
                let opts = RunOptions {
                    out_dir: out_dir.as_ref().map(|d| d.join(&key)),
                    skip_frames: false,
                };
                run(&s, &opts).map_err(|e| e.to_string())
            });
            SweepRow { value, key, result }
        })
        .collect();
    rows.sort_by(|a, b| a.value.total_cmp(&b.value).then_with(|| a.key.cmp(&b.key)));
    let result = SweepResult { param, rows };
    if let Some(dir) = out_dir {
        output::write_text(&dir.join("summary.csv"), &result.summary_csv())?;
        output::write_json(&dir.join("sweep.json"), &result.to_json())?;
    }
    Ok(result)
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

impl SweepResult {
    /// Machine-readable summary with one row per value.
    pub fn summary_csv(&self) -> String {
        let mut out = format!(
            "{},status,verdict,final_center,final_sup,h_pred,discrepancy,oracle_error,error\n",
            self.param
        );
        for row in &self.rows {
            match &row.result {
                Ok(r) => {
                    out += &format!(
                        "{:.16e},{},{},{:.16e},{:.16e},{},{},{},\n",
                        row.value,
                        if r.mismatch() { "mismatch" } else { "ok" },
                        r.classification.verdict,
                        r.final_center,
                        r.final_sup,
                        opt(r.prediction.map(|p| p.level)),
                        opt(r.discrepancy),
                        opt(r.oracle_error),
                    )
                }
                Err(e) => out += &format!("{:.16e},error,,,,,,,\"{}\"\n", row.value, e.replace('"', "'")),
            }
        }
        out
    }

    /// Aligned table for the terminal.
    pub fn summary_table(&self) -> String {
        let mut out = format!(
            "{:>12}  {:<26} {:>12} {:>12} {:>12} {:>10} {:>11}  status\n",
            self.param.name(),
            "verdict",
            "u(0,t_end)",
            "sup u",
            "h_pred",
            "off by",
            "oracle err"
        );
        let dash = |x: Option<String>| x.unwrap_or_else(|| "-".into());
        for row in &self.rows {
            match &row.result {
                Ok(r) => {
                    out += &format!(
                        "{:>12}  {:<26} {:>12.6} {:>12.6} {:>12} {:>10} {:>11}  {}\n",
                        row.value,
                        r.classification.verdict.to_string(),
                        r.final_center,
                        r.final_sup,
                        dash(r.prediction.map(|p| format!("{:.6}", p.level))),
                        dash(r.discrepancy.map(|d| format!("{:.3}%", 100.0 * d))),
                        dash(r.oracle_error.map(|e| format!("{e:.3e}"))),
                        if r.mismatch() { "MISMATCH" } else { "ok" },
                    );
                }
                Err(e) => out += &format!("{:>12}  error: {e}\n", row.value),
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| match &row.result {
                Ok(r) => json!({ "value": num(row.value), "key": row.key, "report": r.to_json() }),
                Err(e) => json!({ "value": num(row.value), "key": row.key, "error": e }),
            })
            .collect();
        json!({ "param": self.param.name(), "rows": rows })
    }
}
