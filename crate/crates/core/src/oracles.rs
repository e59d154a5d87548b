//! Closed-form reference solutions.
//!
//! For Gaussian data `u0(x) = exp(-|x|²/(4σ))` the heat flow stays Gaussian,
//! and for the drift `b(x) = -x` (ψ(r) = r) the solution is the heat flow
//! evaluated along the rescaling `x ↦ e^{-t} x`, `s ↦ s0 + (1 - e^{-2t})/2`.

use crate::error::GridError;
use crate::grid::{unit_sphere_area, RadialField, RadialGrid};
use crate::solver::Trajectory;

/// `u0(x) = exp(-|x|²/(4σ))` in ℝⁿ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianData {
    sigma: f64,
    n_dim: usize,
}

impl GaussianData {
    pub fn new(sigma: f64, n_dim: usize) -> Option<Self> {
        (sigma > 0.0 && sigma.is_finite() && n_dim >= 1).then_some(Self { sigma, n_dim })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn n_dim(&self) -> usize {
        self.n_dim
    }

    pub fn initial(&self, r: f64) -> f64 {
        (-r * r / (4.0 * self.sigma)).exp()
    }

    pub fn sample(&self, grid: RadialGrid) -> Result<RadialField, GridError> {
        RadialField::from_fn(grid, |r| self.initial(r))
    }

    /// `∫_{ℝⁿ} u0 = (4πσ)^{n/2}`.
    pub fn mass(&self) -> f64 {
        (4.0 * std::f64::consts::PI * self.sigma).powf(self.n_dim as f64 / 2.0)
    }

    /// Limit of the `ψ(r) = r` solution: `(σ/(σ + 1/2))^{n/2}`.
    pub fn ou_limit(&self) -> f64 {
        (self.sigma / (self.sigma + 0.5)).powf(self.n_dim as f64 / 2.0)
    }
}

/// Heat flow `w(r, s) = (σ/(σ+s))^{n/2} exp(-r²/(4(σ+s)))`.
pub fn heat_solution(g: &GaussianData, r: f64, s: f64) -> f64 {
    assert!(s >= 0.0, "heat time must be non-negative");
    let scale = g.sigma + s;
    (g.sigma / scale).powf(g.n_dim as f64 / 2.0) * (-r * r / (4.0 * scale)).exp()
}

/// Solution of `u̇ = Δu - ⟨x, ∇u⟩` with `u(·, 0) = u0`.
pub fn ou_solution(g: &GaussianData, r: f64, t: f64) -> f64 {
    ou_solution_with_offset(g, r, t, 0.0)
}

/// `w(e^{-t} r, s0 + (1 - e^{-2t})/2)`, which solves `u̇ = Δu - ⟨x, ∇u⟩`
/// for any heat-time offset `s0 ≥ 0`; its initial value is `w(·, s0)`.
pub fn ou_solution_with_offset(g: &GaussianData, r: f64, t: f64, s0: f64) -> f64 {
    assert!(t >= 0.0, "time must be non-negative");
    let decay = (-t).exp();
    heat_solution(g, decay * r, s0 + 0.5 * (1.0 - decay * decay))
}

/// One row of [`mass_growth_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassSample {
    pub time: f64,
    pub mass: f64,
    pub predicted: f64,
}

/// `ω_{n-1} ∫_0^{r_max} u r^{n-1} dr` by the trapezoid rule on the grid.
pub fn radial_mass(u: &RadialField) -> f64 {
    let grid = u.grid();
    let h = grid.spacing();
    let k = grid.n_dim() as i32 - 1;
    let last = grid.num_nodes() - 1;
    let sum: f64 = u
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let w = if i == 0 || i == last { 0.5 } else { 1.0 };
            w * v * grid.radius(i).powi(k)
        })
        .sum();
    unit_sphere_area(grid.n_dim()) * h * sum
}

/// Pairs the mass of every snapshot with `e^{n t} ∫u0`, the growth law of
/// `d/dt ∫u = n ∫u` that holds for `ψ(r) = r` away from the boundary.
pub fn mass_growth_check(traj: &Trajectory) -> Vec<MassSample> {
    let n = traj.grid().n_dim() as f64;
    let m0 = radial_mass(traj.initial());
    traj.iter()
        .map(|(t, u)| MassSample {
            time: t,
            mass: radial_mass(u),
            predicted: (n * t).exp() * m0,
        })
        .collect()
}
