//! θ-scheme time integration of the radial equation
//!
//! ```text
//! u_t = u_rr + ((n - 1)/r - ψ(r)) u_r,      u_r(0, t) = 0,
//! ```
//!
//! which is `u̇ = Δu - ⟨(x/|x|) ψ(|x|), ∇u⟩` restricted to rotationally
//! symmetric functions. At the origin the Laplacian is replaced by its limit
//! `n u_rr(0)` using the mirror relation `u(-h) = u(h)`.

use crate::error::SolverError;
use crate::grid::{RadialField, RadialGrid};
use crate::profile::DriftProfile;
use crate::tridiag::{Tridiagonal, TridiagonalLu};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OuterBoundary {
    /// `u_r(r_max) = 0` through the mirror ghost `u(r_max + h) = u(r_max - h)`.
    Neumann,
    /// `u(r_max, t) = u0(r_max)` for all t.
    #[default]
    DirichletFrozen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Advection {
    #[default]
    Centered,
    Upwind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub dt: f64,
    /// 0.5 is Crank–Nicolson, 1 is backward Euler.
    pub theta: f64,
    pub outer_bc: OuterBoundary,
    pub advection: Advection,
    pub snapshot_stride: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            theta: 0.5,
            outer_bc: OuterBoundary::DirichletFrozen,
            advection: Advection::Centered,
            snapshot_stride: 100,
        }
    }
}

impl SolverConfig {
    /// Backward Euler with upwinding: the monotone configuration.
    pub fn monotone(dt: f64) -> Self {
        Self {
            dt,
            theta: 1.0,
            advection: Advection::Upwind,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(SolverError::InvalidConfig(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(SolverError::InvalidConfig(format!(
                "theta must lie in [0, 1], got {}",
                self.theta
            )));
        }
        if self.snapshot_stride == 0 {
            return Err(SolverError::InvalidConfig("snapshot_stride must be at least 1".into()));
        }
        Ok(())
    }
}

/// Spatial operator `L` with `u_t = L u` as a tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialOperator {
    grid: RadialGrid,
    matrix: Tridiagonal,
}

impl RadialOperator {
    pub fn assemble(
        grid: &RadialGrid,
        profile: &DriftProfile,
        outer_bc: OuterBoundary,
        advection: Advection,
    ) -> Result<Self, SolverError> {
        let n = grid.num_nodes();
        let h = grid.spacing();
        let inv_h2 = 1.0 / (h * h);
        let dim = grid.n_dim() as f64;
        let mut m = Tridiagonal::zeros(n);

        m.diag[0] = -2.0 * dim * inv_h2;
        m.upper[0] = 2.0 * dim * inv_h2;

        let last_row = match outer_bc {
            OuterBoundary::Neumann => n,
            OuterBoundary::DirichletFrozen => n - 1,
        };
        for i in 1..last_row {
            let r = grid.radius(i);
            let c = (dim - 1.0) / r - profile.eval(r)?;
            let (mut lo, mut di, mut up) = (inv_h2, -2.0 * inv_h2, inv_h2);
            match advection {
                Advection::Centered => {
                    lo -= 0.5 * c / h;
                    up += 0.5 * c / h;
                }
                Advection::Upwind if c > 0.0 => {
                    di -= c / h;
                    up += c / h;
                }
                Advection::Upwind => {
                    di += c / h;
                    lo -= c / h;
                }
            }
            if i == n - 1 {
                // mirror ghost
                lo += up;
                up = 0.0;
            }
            debug_assert!((di + lo + up).abs() <= 1e-9 * inv_h2);
            m.lower[i] = lo;
            m.diag[i] = -(lo + up);
            m.upper[i] = up;
        }
        Ok(Self { grid: *grid, matrix: m })
    }

    pub fn for_config(grid: &RadialGrid, profile: &DriftProfile, config: &SolverConfig) -> Result<Self, SolverError> {
        Self::assemble(grid, profile, config.outer_bc, config.advection)
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn matrix(&self) -> &Tridiagonal {
        &self.matrix
    }

    pub fn apply(&self, u: &RadialField) -> RadialField {
        let mut out = vec![0.0; u.values().len()];
        self.matrix.apply_differences(u.values(), &mut out);
        RadialField::from_raw(*u.grid(), out)
    }

    /// Implicit matrix `I - θ dt L` of one θ-step.
    pub fn implicit_matrix(&self, theta: f64, dt: f64) -> Tridiagonal {
        self.matrix.shifted_identity(-theta * dt)
    }
}

/// Evaluates `L u`, the semi-discrete right-hand side.
pub fn radial_rhs(u: &RadialField, profile: &DriftProfile, config: &SolverConfig) -> Result<RadialField, SolverError> {
    Ok(RadialOperator::for_config(u.grid(), profile, config)?.apply(u))
}

/// One θ-step of fixed length, with the implicit matrix factored once.
///
/// The step is taken in increment form `(I - θ dt L) δ = dt L u`,
/// `u_new = u + δ`, which is algebraically the θ-scheme and leaves
/// constants untouched bit for bit.
#[derive(Debug, Clone)]
pub struct Stepper {
    operator: Tridiagonal,
    implicit: TridiagonalLu,
    dt: f64,
    grid: RadialGrid,
}

impl Stepper {
    pub fn new(operator: &RadialOperator, theta: f64, dt: f64) -> Result<Self, SolverError> {
        Ok(Self {
            operator: operator.matrix.clone(),
            implicit: operator.implicit_matrix(theta, dt).factor()?,
            dt,
            grid: operator.grid,
        })
    }

    /// Advances `values` in place; `scratch` must have the same length.
    pub fn advance(&self, values: &mut [f64], scratch: &mut [f64]) {
        self.operator.apply_differences(values, scratch);
        for s in scratch.iter_mut() {
            *s *= self.dt;
        }
        self.implicit.solve_in_place(scratch);
        for (v, d) in values.iter_mut().zip(scratch.iter()) {
            *v += d;
        }
    }

    pub fn step(&self, u: &RadialField) -> RadialField {
        debug_assert_eq!(u.grid(), &self.grid);
        let mut values = u.values().to_vec();
        let mut scratch = vec![0.0; values.len()];
        self.advance(&mut values, &mut scratch);
        RadialField::from_raw(self.grid, values)
    }
}

/// Solves `(I - θ dt L) u_new = (I + (1 - θ) dt L) u` once.
pub fn step(u: &RadialField, profile: &DriftProfile, config: &SolverConfig) -> Result<RadialField, SolverError> {
    config.validate()?;
    let op = RadialOperator::for_config(u.grid(), profile, config)?;
    let next = Stepper::new(&op, config.theta, config.dt)?.step(u);
    if next.values().iter().any(|v| !v.is_finite()) {
        return Err(SolverError::Divergence {
            step: 1,
            time: config.dt,
        });
    }
    Ok(next)
}

/// Snapshots of one simulation, starting at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub frames: Vec<RadialField>,
    pub config: SolverConfig,
    pub profile: DriftProfile,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn grid(&self) -> &RadialGrid {
        self.frames[0].grid()
    }

    pub fn initial(&self) -> &RadialField {
        &self.frames[0]
    }

    pub fn last(&self) -> (f64, &RadialField) {
        let k = self.len() - 1;
        (self.times[k], &self.frames[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &RadialField)> {
        self.times.iter().copied().zip(self.frames.iter())
    }

    /// Snapshot whose time is closest to `t`.
    pub fn nearest(&self, t: f64) -> (f64, &RadialField) {
        let k = self
            .times
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))
            .map(|(k, _)| k)
            .expect("non-empty trajectory");
        (self.times[k], &self.frames[k])
    }
}

/// Integrates from `u0` to `t_end`, saving every `snapshot_stride` steps and
/// at `t_end`. The last step is shortened so that the final snapshot lands
/// exactly on `t_end`.
pub fn solve(
    u0: &RadialField,
    profile: &DriftProfile,
    config: &SolverConfig,
    t_end: f64,
) -> Result<Trajectory, SolverError> {
    solve_observed(u0, profile, config, t_end, |_, _, _| {})
}

/// [`solve`], additionally calling `observer(step, t, values)` after every
/// step (not only the saved ones).
pub fn solve_observed(
    u0: &RadialField,
    profile: &DriftProfile,
    config: &SolverConfig,
    t_end: f64,
    mut observer: impl FnMut(usize, f64, &[f64]),
) -> Result<Trajectory, SolverError> {
    config.validate()?;
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(SolverError::InvalidConfig(format!(
            "t_end must be non-negative, got {t_end}"
        )));
    }
    let mut traj = Trajectory {
        times: vec![0.0],
        frames: vec![u0.clone()],
        config: config.clone(),
        profile: profile.clone(),
    };
    if t_end == 0.0 {
        return Ok(traj);
    }

    let dt = config.dt;
    let num_steps = ((t_end / dt) - 1e-9).ceil().max(1.0) as usize;
    let last_dt = t_end - (num_steps - 1) as f64 * dt;

    let op = RadialOperator::for_config(u0.grid(), profile, config)?;
    let regular = Stepper::new(&op, config.theta, dt)?;
    let short = if (last_dt - dt).abs() > 1e-12 * dt {
        Some(Stepper::new(&op, config.theta, last_dt)?)
    } else {
        None
    };

    let mut values = u0.values().to_vec();
    let mut scratch = vec![0.0; values.len()];
    for k in 1..=num_steps {
        let stepper = match (&short, k == num_steps) {
            (Some(s), true) => s,
            _ => &regular,
        };
        stepper.advance(&mut values, &mut scratch);
        let t = if k == num_steps { t_end } else { k as f64 * dt };
        if values.iter().any(|v| !v.is_finite()) {
            return Err(SolverError::Divergence { step: k, time: t });
        }
        observer(k, t, &values);
        if k % config.snapshot_stride == 0 || k == num_steps {
            traj.times.push(t);
            traj.frames.push(RadialField::from_raw(*u0.grid(), values.clone()));
        }
    }
    Ok(traj)
}
