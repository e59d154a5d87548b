//! Scenario documents.
//!
//! A scenario is a TOML document with the sections `[profile]`, `[domain]`,
//! `[initial]`, `[solver]`, `[run]` and `[output]`, plus an optional
//! top-level `name`. Errors name the offending key as `section.key`.

use std::path::PathBuf;

use liftoff_core::{
    Advection, DriftProfile, GaussianData, OuterBoundary, ProfileError, RadialField, RadialGrid, SolverConfig,
};
use thiserror::Error;
use toml::{Table, Value};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("malformed document: {0}")]
    Syntax(String),
    #[error("{path}: missing required key")]
    Missing { path: String },
    #[error("{path}: expected {expected}, found {found}")]
    Type {
        path: String,
        expected: &'static str,
        found: &'static str,
    },
    #[error("{path}: unknown variant `{value}`, expected one of: {expected}")]
    UnknownVariant {
        path: String,
        value: String,
        expected: &'static str,
    },
    #[error("{path}: unknown key")]
    UnknownKey { path: String },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

impl ScenarioError {
    /// Key path of the offending entry, if the error concerns one.
    pub fn path(&self) -> Option<&str> {
        match self {
            Self::Syntax(_) => None,
            Self::Missing { path }
            | Self::Type { path, .. }
            | Self::UnknownVariant { path, .. }
            | Self::UnknownKey { path }
            | Self::Invalid { path, .. } => Some(path),
        }
    }

    fn invalid(path: impl Into<String>, message: impl ToString) -> Self {
        Self::Invalid {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileSpec {
    PowerLaw { a: f64, beta: f64, r0: f64 },
    LogCorrected { alpha: f64, r0: f64 },
    Linear,
    Zero,
    Tabulated { r: Vec<f64>, psi: Vec<f64> },
}

impl ProfileSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::PowerLaw { .. } => "powerlaw",
            Self::LogCorrected { .. } => "logcorrected",
            Self::Linear => "linear",
            Self::Zero => "zero",
            Self::Tabulated { .. } => "tabulated",
        }
    }

    pub fn build(&self, n_dim: usize) -> Result<DriftProfile, ProfileError> {
        match self {
            Self::PowerLaw { a, beta, r0 } => DriftProfile::power_law(*a, *beta, *r0),
            Self::LogCorrected { alpha, r0 } => DriftProfile::log_corrected(n_dim, *alpha, *r0),
            Self::Linear => Ok(DriftProfile::Linear),
            Self::Zero => Ok(DriftProfile::Zero),
            Self::Tabulated { r, psi } => DriftProfile::tabulated(r.clone(), psi.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialSpec {
    Gaussian {
        sigma: f64,
    },
    /// Samples interpolated linearly onto the grid; must reach `r_max`.
    Tabulated {
        r: Vec<f64>,
        u: Vec<f64>,
    },
}

pub const DEFAULT_R_MAX: f64 = 20.0;
pub const DEFAULT_NUM_NODES: usize = 1001;
pub const DEFAULT_T_END: f64 = 1.0;
/// Diagnostics radius as a fraction of `r_max` when `run.diag_radius` is omitted.
pub const DEFAULT_DIAG_FRACTION: f64 = 0.8;

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub profile: ProfileSpec,
    pub n_dim: usize,
    pub r_max: f64,
    pub num_nodes: usize,
    pub initial: InitialSpec,
    pub solver: SolverConfig,
    pub t_end: f64,
    pub diag_radius: Option<f64>,
    pub out_dir: Option<PathBuf>,
}

impl Scenario {
    /// Checks every cross-field invariant.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.name.is_empty() {
            return Err(ScenarioError::invalid("name", "must not be empty"));
        }
        self.grid()?;
        self.drift()?;
        self.initial_field()?;
        self.solver
            .validate()
            .map_err(|e| ScenarioError::invalid("solver", e))?;
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(ScenarioError::invalid("run.t_end", "must be positive and finite"));
        }
        if let Some(r) = self.diag_radius {
            if !(r > 0.0 && r <= self.r_max) {
                return Err(ScenarioError::invalid(
                    "run.diag_radius",
                    format!("must lie in (0, r_max = {}]", self.r_max),
                ));
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<RadialGrid, ScenarioError> {
        RadialGrid::new(self.r_max, self.num_nodes, self.n_dim).map_err(|e| ScenarioError::invalid("domain", e))
    }

    pub fn drift(&self) -> Result<DriftProfile, ScenarioError> {
        let profile = self
            .profile
            .build(self.n_dim)
            .map_err(|e| ScenarioError::invalid("profile", e))?;
        if let DriftProfile::Tabulated(t) = &profile {
            if t.max_radius() < self.r_max {
                return Err(ScenarioError::invalid(
                    "profile.r",
                    format!("samples end at {} but domain.r_max is {}", t.max_radius(), self.r_max),
                ));
            }
        }
        Ok(profile)
    }

    pub fn gaussian(&self) -> Option<GaussianData> {
        match self.initial {
            InitialSpec::Gaussian { sigma } => GaussianData::new(sigma, self.n_dim),
            InitialSpec::Tabulated { .. } => None,
        }
    }

    pub fn initial_field(&self) -> Result<RadialField, ScenarioError> {
        let grid = self.grid()?;
        match &self.initial {
            InitialSpec::Gaussian { sigma } => {
                let g = GaussianData::new(*sigma, self.n_dim)
                    .ok_or_else(|| ScenarioError::invalid("initial.sigma", "must be positive and finite"))?;
                g.sample(grid).map_err(|e| ScenarioError::invalid("initial", e))
            }
            InitialSpec::Tabulated { r, u } => {
                check_samples("initial", r, u)?;
                if *r.last().unwrap() < self.r_max {
                    return Err(ScenarioError::invalid(
                        "initial.r",
                        format!(
                            "samples end at {} but domain.r_max is {}",
                            r.last().unwrap(),
                            self.r_max
                        ),
                    ));
                }
                RadialField::from_fn(grid, |x| interpolate(r, u, x)).map_err(|e| ScenarioError::invalid("initial", e))
            }
        }
    }

    pub fn diag_radius(&self) -> f64 {
        self.diag_radius.unwrap_or(DEFAULT_DIAG_FRACTION * self.r_max)
    }

    /// Renders the scenario as a document that parses back to `self`.
    pub fn to_document(&self) -> String {
        let mut doc = Table::new();
        doc.insert("name".into(), Value::from(self.name.clone()));

        let mut profile = Table::new();
        profile.insert("kind".into(), Value::from(self.profile.kind()));
        match &self.profile {
            ProfileSpec::PowerLaw { a, beta, r0 } => {
                profile.insert("A".into(), Value::from(*a));
                profile.insert("beta".into(), Value::from(*beta));
                profile.insert("r0".into(), Value::from(*r0));
            }
            ProfileSpec::LogCorrected { alpha, r0 } => {
                profile.insert("alpha".into(), Value::from(*alpha));
                profile.insert("r0".into(), Value::from(*r0));
            }
            ProfileSpec::Tabulated { r, psi } => {
                profile.insert("r".into(), Value::from(r.clone()));
                profile.insert("psi".into(), Value::from(psi.clone()));
            }
            ProfileSpec::Linear | ProfileSpec::Zero => {}
        }
        doc.insert("profile".into(), Value::Table(profile));

        let mut domain = Table::new();
        domain.insert("n".into(), Value::from(self.n_dim as i64));
        domain.insert("r_max".into(), Value::from(self.r_max));
        domain.insert("num_nodes".into(), Value::from(self.num_nodes as i64));
        doc.insert("domain".into(), Value::Table(domain));

        let mut initial = Table::new();
        match &self.initial {
            InitialSpec::Gaussian { sigma } => {
                initial.insert("kind".into(), Value::from("gaussian"));
                initial.insert("sigma".into(), Value::from(*sigma));
            }
            InitialSpec::Tabulated { r, u } => {
                initial.insert("kind".into(), Value::from("tabulated"));
                initial.insert("r".into(), Value::from(r.clone()));
                initial.insert("u".into(), Value::from(u.clone()));
            }
        }
        doc.insert("initial".into(), Value::Table(initial));

        let mut solver = Table::new();
        solver.insert("dt".into(), Value::from(self.solver.dt));
        solver.insert("theta".into(), Value::from(self.solver.theta));
        solver.insert("advection".into(), Value::from(advection_name(self.solver.advection)));
        solver.insert("outer_bc".into(), Value::from(boundary_name(self.solver.outer_bc)));
        solver.insert(
            "snapshot_stride".into(),
            Value::from(self.solver.snapshot_stride as i64),
        );
        doc.insert("solver".into(), Value::Table(solver));

        let mut run = Table::new();
        run.insert("t_end".into(), Value::from(self.t_end));
        if let Some(r) = self.diag_radius {
            run.insert("diag_radius".into(), Value::from(r));
        }
        doc.insert("run".into(), Value::Table(run));

        if let Some(dir) = &self.out_dir {
            let mut output = Table::new();
            output.insert("dir".into(), Value::from(dir.display().to_string()));
            doc.insert("output".into(), Value::Table(output));
        }
        toml::to_string(&doc).expect("plain tables always serialize")
    }
}

pub fn advection_name(a: Advection) -> &'static str {
    match a {
        Advection::Centered => "centered",
        Advection::Upwind => "upwind",
    }
}

pub fn boundary_name(b: OuterBoundary) -> &'static str {
    match b {
        OuterBoundary::Neumann => "neumann",
        OuterBoundary::DirichletFrozen => "dirichlet_frozen",
    }
}

fn interpolate(r: &[f64], u: &[f64], x: f64) -> f64 {
    let k = r.partition_point(|&ri| ri <= x);
    if k == 0 {
        return u[0];
    }
    if k == r.len() {
        return u[r.len() - 1];
    }
    let s = (x - r[k - 1]) / (r[k] - r[k - 1]);
    u[k - 1] + s * (u[k] - u[k - 1])
}

fn check_samples(section: &str, r: &[f64], v: &[f64]) -> Result<(), ScenarioError> {
    if r.len() != v.len() {
        return Err(ScenarioError::invalid(
            format!("{section}.r"),
            format!("has {} entries but the values have {}", r.len(), v.len()),
        ));
    }
    if r.len() < 2 {
        return Err(ScenarioError::invalid(
            format!("{section}.r"),
            "needs at least two samples",
        ));
    }
    if r[0] != 0.0 {
        return Err(ScenarioError::invalid(format!("{section}.r"), "must start at 0"));
    }
    if r.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(ScenarioError::invalid(
            format!("{section}.r"),
            "must be strictly increasing",
        ));
    }
    Ok(())
}

/// One `[section]` of the document; absent sections behave as empty.
struct Section<'a> {
    name: &'static str,
    table: Option<&'a Table>,
}

impl<'a> Section<'a> {
    fn of(doc: &'a Table, name: &'static str) -> Result<Self, ScenarioError> {
        match doc.get(name) {
            None => Ok(Self { name, table: None }),
            Some(Value::Table(t)) => Ok(Self { name, table: Some(t) }),
            Some(other) => Err(ScenarioError::Type {
                path: name.into(),
                expected: "table",
                found: other.type_str(),
            }),
        }
    }

    fn path(&self, key: &str) -> String {
        format!("{}.{}", self.name, key)
    }

    fn get(&self, key: &str) -> Option<&'a Value> {
        self.table.and_then(|t| t.get(key))
    }

    fn only(&self, allowed: &[&str]) -> Result<(), ScenarioError> {
        if let Some(t) = self.table {
            if let Some(key) = t.keys().find(|k| !allowed.contains(&k.as_str())) {
                return Err(ScenarioError::UnknownKey { path: self.path(key) });
            }
        }
        Ok(())
    }

    fn missing(&self, key: &str) -> ScenarioError {
        ScenarioError::Missing { path: self.path(key) }
    }

    fn f64(&self, key: &str) -> Result<Option<f64>, ScenarioError> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Float(x)) => Ok(Some(*x)),
            Some(Value::Integer(i)) => Ok(Some(*i as f64)),
            Some(other) => Err(ScenarioError::Type {
                path: self.path(key),
                expected: "number",
                found: other.type_str(),
            }),
        }
    }

    fn req_f64(&self, key: &str) -> Result<f64, ScenarioError> {
        self.f64(key)?.ok_or_else(|| self.missing(key))
    }

    fn usize(&self, key: &str) -> Result<Option<usize>, ScenarioError> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Integer(i)) if *i >= 0 => Ok(Some(*i as usize)),
            Some(Value::Integer(_)) => Err(ScenarioError::invalid(self.path(key), "must be non-negative")),
            Some(other) => Err(ScenarioError::Type {
                path: self.path(key),
                expected: "integer",
                found: other.type_str(),
            }),
        }
    }

    fn str(&self, key: &str) -> Result<Option<&'a str>, ScenarioError> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(other) => Err(ScenarioError::Type {
                path: self.path(key),
                expected: "string",
                found: other.type_str(),
            }),
        }
    }

    fn req_array(&self, key: &str) -> Result<Vec<f64>, ScenarioError> {
        match self.get(key) {
            None => Err(self.missing(key)),
            Some(Value::Array(items)) => items
                .iter()
                .enumerate()
                .map(|(i, v)| match v {
                    Value::Float(x) => Ok(*x),
                    Value::Integer(x) => Ok(*x as f64),
                    other => Err(ScenarioError::Type {
                        path: format!("{}[{i}]", self.path(key)),
                        expected: "number",
                        found: other.type_str(),
                    }),
                })
                .collect(),
            Some(other) => Err(ScenarioError::Type {
                path: self.path(key),
                expected: "array",
                found: other.type_str(),
            }),
        }
    }
}

/// Parses and validates a scenario document, filling in defaults.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let doc: Table = text
        .parse()
        .map_err(|e: toml::de::Error| ScenarioError::Syntax(e.message().to_string()))?;
    const SECTIONS: [&str; 7] = ["name", "profile", "domain", "initial", "solver", "run", "output"];
    if let Some(key) = doc.keys().find(|k| !SECTIONS.contains(&k.as_str())) {
        return Err(ScenarioError::UnknownKey { path: key.clone() });
    }
    let name = match doc.get("name") {
        None => "scenario".to_string(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => {
            return Err(ScenarioError::Type {
                path: "name".into(),
                expected: "string",
                found: other.type_str(),
            })
        }
    };

    let p = Section::of(&doc, "profile")?;
    let kind = p.str("kind")?.ok_or_else(|| p.missing("kind"))?;
    let profile = match kind {
        "powerlaw" => {
            p.only(&["kind", "A", "beta", "r0"])?;
            ProfileSpec::PowerLaw {
                a: p.req_f64("A")?,
                beta: p.req_f64("beta")?,
                r0: p.f64("r0")?.unwrap_or(1.0),
            }
        }
        "logcorrected" => {
            p.only(&["kind", "alpha", "r0"])?;
            ProfileSpec::LogCorrected {
                alpha: p.req_f64("alpha")?,
                r0: p.f64("r0")?.unwrap_or(2.0),
            }
        }
        "linear" => {
            p.only(&["kind"])?;
            ProfileSpec::Linear
        }
        "zero" => {
            p.only(&["kind"])?;
            ProfileSpec::Zero
        }
        "tabulated" => {
            p.only(&["kind", "r", "psi"])?;
            let (r, psi) = (p.req_array("r")?, p.req_array("psi")?);
            check_samples("profile", &r, &psi)?;
            ProfileSpec::Tabulated { r, psi }
        }
        other => {
            return Err(ScenarioError::UnknownVariant {
                path: p.path("kind"),
                value: other.into(),
                expected: "powerlaw, logcorrected, linear, zero, tabulated",
            })
        }
    };

    let d = Section::of(&doc, "domain")?;
    d.only(&["n", "r_max", "num_nodes"])?;
    let n_dim = d.usize("n")?.ok_or_else(|| d.missing("n"))?;
    let r_max = d.f64("r_max")?.unwrap_or(DEFAULT_R_MAX);
    let num_nodes = d.usize("num_nodes")?.unwrap_or(DEFAULT_NUM_NODES);

    let i = Section::of(&doc, "initial")?;
    let initial = match i.str("kind")?.ok_or_else(|| i.missing("kind"))? {
        "gaussian" => {
            i.only(&["kind", "sigma"])?;
            InitialSpec::Gaussian {
                sigma: i.req_f64("sigma")?,
            }
        }
        "tabulated" => {
            i.only(&["kind", "r", "u"])?;
            InitialSpec::Tabulated {
                r: i.req_array("r")?,
                u: i.req_array("u")?,
            }
        }
        other => {
            return Err(ScenarioError::UnknownVariant {
                path: i.path("kind"),
                value: other.into(),
                expected: "gaussian, tabulated",
            })
        }
    };

    let s = Section::of(&doc, "solver")?;
    s.only(&["dt", "theta", "advection", "outer_bc", "snapshot_stride"])?;
    let defaults = SolverConfig::default();
    let advection = match s.str("advection")? {
        None => defaults.advection,
        Some("centered") => Advection::Centered,
        Some("upwind") => Advection::Upwind,
        Some(other) => {
            return Err(ScenarioError::UnknownVariant {
                path: s.path("advection"),
                value: other.into(),
                expected: "centered, upwind",
            })
        }
    };
    let outer_bc = match s.str("outer_bc")? {
        None => defaults.outer_bc,
        Some("neumann") => OuterBoundary::Neumann,
        Some("dirichlet_frozen") => OuterBoundary::DirichletFrozen,
        Some(other) => {
            return Err(ScenarioError::UnknownVariant {
                path: s.path("outer_bc"),
                value: other.into(),
                expected: "neumann, dirichlet_frozen",
            })
        }
    };
    let solver = SolverConfig {
        dt: s.f64("dt")?.unwrap_or(defaults.dt),
        theta: s.f64("theta")?.unwrap_or(defaults.theta),
        advection,
        outer_bc,
        snapshot_stride: s.usize("snapshot_stride")?.unwrap_or(defaults.snapshot_stride),
    };
    if !(solver.dt > 0.0 && solver.dt.is_finite()) {
        return Err(ScenarioError::invalid(s.path("dt"), "must be positive"));
    }
    if !(0.0..=1.0).contains(&solver.theta) {
        return Err(ScenarioError::invalid(s.path("theta"), "must lie in [0, 1]"));
    }
    if solver.snapshot_stride == 0 {
        return Err(ScenarioError::invalid(s.path("snapshot_stride"), "must be at least 1"));
    }

    let r = Section::of(&doc, "run")?;
    r.only(&["t_end", "diag_radius"])?;
    let t_end = r.f64("t_end")?.unwrap_or(DEFAULT_T_END);
    let diag_radius = r.f64("diag_radius")?;

    let o = Section::of(&doc, "output")?;
    o.only(&["dir"])?;
    let out_dir = o.str("dir")?.map(PathBuf::from);

    let scenario = Scenario {
        name,
        profile,
        n_dim,
        r_max,
        num_nodes,
        initial,
        solver,
        t_end,
        diag_radius,
        out_dir,
    };
    scenario.validate()?;
    Ok(scenario)
}
