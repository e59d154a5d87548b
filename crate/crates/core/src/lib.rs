//! Radially symmetric advection-diffusion `u̇ = Δu - ⟨(x/|x|) ψ(|x|), ∇u⟩`
//! on ℝⁿ: a monotone implicit radial solver, the conserved weighted mass
//! `∫ φ u` with `φ = exp(-∫ψ)`, the growth-rate classifier that separates
//! lift-off from decay, and closed-form Gaussian references.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod grid;
pub mod oracles;
pub mod profile;
pub mod solver;
pub mod tridiag;
pub mod weights;

pub use error::{GridError, ProfileError, SolverError, WeightError};
pub use grid::{unit_sphere_area, RadialField, RadialGrid};
pub use oracles::{
    heat_solution, mass_growth_check, ou_solution, ou_solution_with_offset, radial_mass, GaussianData, MassSample,
};
pub use profile::{eval_psi, DriftProfile, TabulatedProfile};
pub use solver::{
    radial_rhs, solve, solve_observed, step, Advection, OuterBoundary, RadialOperator, SolverConfig, Stepper,
    Trajectory,
};
pub use weights::{
    classify, diagnostics, phi, phi_mass, predict_liftoff_level, weighted_mass, ClassificationResult, DiagnosticSeries,
    GrowthLimit, LiftoffPrediction, MassQuadrature, Outcome, PhiMass, QuadratureOptions, Tail, Verdict, WeightFunction,
};
