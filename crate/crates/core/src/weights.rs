//! Weight `φ(r) = exp(-∫_0^r ψ)`, weighted masses, and the growth-rate
//! classifier.
//!
//! With the full profile, `φ' + φψ = 0` turns the equation into
//! `∂_t(φu) = div(φ∇u)`, so `∫φu` is conserved. With the positive part ψ₊
//! the same computation gives `∂_t(φu) ≤ div(φ∇u)` for radially
//! non-increasing `u`, so `∫φu` is non-increasing. Whether `∫_{ℝⁿ} φ` is
//! finite decides between lift-off and decay.

use std::fmt;

use crate::error::WeightError;
use crate::grid::{unit_sphere_area, RadialField, RadialGrid};
use crate::profile::DriftProfile;
use crate::solver::Trajectory;

/// Gap below which `L` and `n` count as equal.
pub const CRITICAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    /// Trapezoid panels per unit of radius.
    pub panels_per_unit: f64,
    /// Largest radius used for `∫φ r^{n-1}` before switching to the tail formula.
    pub max_radius: f64,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            panels_per_unit: 1e4,
            max_radius: 400.0,
        }
    }
}

#[derive(Debug, Clone)]
enum Antiderivative {
    /// Closed form of the profile (or exact piecewise-linear integral).
    Exact,
    /// Cumulative trapezoid of ψ₊ on `[0, knot]`, closed form beyond.
    Tabled {
        knot: f64,
        step: f64,
        cumulative: Vec<f64>,
        far_positive: bool,
    },
}

/// `φ(r) = exp(-Ψ(r))` with `Ψ = ∫_0^r ψ` or `∫_0^r ψ₊`.
#[derive(Debug, Clone)]
pub struct WeightFunction {
    profile: DriftProfile,
    positive_part: bool,
    options: QuadratureOptions,
    antiderivative: Antiderivative,
}

impl WeightFunction {
    /// Weight of the full profile, `φ' + φψ = 0`.
    pub fn full(profile: &DriftProfile) -> Self {
        Self::new(profile, false, QuadratureOptions::default()).expect("default options are valid")
    }

    /// Weight of the positive part, `φ' + φψ₊ = 0`.
    pub fn positive_part(profile: &DriftProfile) -> Self {
        Self::new(profile, true, QuadratureOptions::default()).expect("default options are valid")
    }

    pub fn new(profile: &DriftProfile, positive_part: bool, options: QuadratureOptions) -> Result<Self, WeightError> {
        if !(options.panels_per_unit >= 1.0 && options.panels_per_unit.is_finite()) {
            return Err(WeightError::InvalidQuadrature(format!(
                "panels_per_unit must be at least 1, got {}",
                options.panels_per_unit
            )));
        }
        if !(options.max_radius > 0.0 && options.max_radius.is_finite()) {
            return Err(WeightError::InvalidQuadrature(format!(
                "max_radius must be positive, got {}",
                options.max_radius
            )));
        }
        let exact = !positive_part || profile.is_nonnegative() || matches!(profile, DriftProfile::Tabulated(_));
        let antiderivative = if exact {
            Antiderivative::Exact
        } else {
            let (knot, far_positive) = profile.far_sign().expect("analytic family");
            let panels = (options.panels_per_unit * knot).ceil().max(1.0) as usize;
            let step = knot / panels as f64;
            let mut cumulative = Vec::with_capacity(panels + 1);
            cumulative.push(0.0);
            let mut prev = profile.eval(0.0)?.max(0.0);
            for k in 1..=panels {
                let cur = profile.eval(k as f64 * step)?.max(0.0);
                let last = *cumulative.last().expect("non-empty");
                cumulative.push(last + 0.5 * (prev + cur) * step);
                prev = cur;
            }
            Antiderivative::Tabled {
                knot,
                step,
                cumulative,
                far_positive,
            }
        };
        Ok(Self {
            profile: profile.clone(),
            positive_part,
            options,
            antiderivative,
        })
    }

    pub fn profile(&self) -> &DriftProfile {
        &self.profile
    }

    pub fn uses_positive_part(&self) -> bool {
        self.positive_part
    }

    pub fn options(&self) -> QuadratureOptions {
        self.options
    }

    /// `Ψ(r)`, the exponent of `φ`.
    pub fn exponent(&self, r: f64) -> Result<f64, WeightError> {
        match (&self.antiderivative, &self.profile) {
            (Antiderivative::Exact, DriftProfile::Tabulated(t)) => Ok(t.integral(r, self.positive_part)?),
            (Antiderivative::Exact, p) => Ok(p.antiderivative(r)?),
            (
                Antiderivative::Tabled {
                    knot,
                    step,
                    cumulative,
                    far_positive,
                },
                p,
            ) => {
                if r >= *knot {
                    let head = *cumulative.last().expect("non-empty");
                    if *far_positive {
                        Ok(head + p.antiderivative(r)? - p.antiderivative(*knot)?)
                    } else {
                        Ok(head)
                    }
                } else {
                    if !(r >= 0.0) {
                        return Err(crate::error::ProfileError::NegativeRadius(r).into());
                    }
                    let k = ((r / step).floor() as usize).min(cumulative.len() - 2);
                    let rk = k as f64 * step;
                    let a = p.eval(rk)?.max(0.0);
                    let b = p.eval(r)?.max(0.0);
                    Ok(cumulative[k] + 0.5 * (a + b) * (r - rk))
                }
            }
        }
    }

    pub fn eval(&self, r: f64) -> Result<f64, WeightError> {
        Ok((-self.exponent(r)?).exp())
    }

    /// `∫_R^∞ φ(r) r^{n-1} dr` from the far-field formula.
    pub fn tail(&self, radius: f64, n_dim: usize) -> Result<Tail, WeightError> {
        let n = n_dim as f64;
        let far_positive = match &self.antiderivative {
            Antiderivative::Tabled { far_positive, knot, .. } => {
                debug_assert!(radius >= *knot);
                *far_positive
            }
            Antiderivative::Exact => true,
        };
        let phi_r = self.eval(radius)?;
        Ok(match self.profile {
            DriftProfile::Tabulated(_) => Tail::Unknown,
            DriftProfile::Zero => Tail::Infinite,
            _ if !far_positive => Tail::Infinite,
            DriftProfile::PowerLaw {
                amplitude,
                exponent,
                ramp_radius,
            } => {
                debug_assert!(radius >= ramp_radius);
                if amplitude < 0.0 {
                    // full-ψ weight grows without bound
                    Tail::Infinite
                } else if amplitude == 0.0 || exponent < -1.0 {
                    Tail::Infinite
                } else if exponent == -1.0 {
                    if amplitude > n {
                        Tail::Exact(phi_r * radius.powf(n) / (amplitude - n))
                    } else {
                        Tail::Infinite
                    }
                } else {
                    stretched_exponential_tail(phi_r, radius, amplitude, exponent, n)
                }
            }
            DriftProfile::Linear => stretched_exponential_tail(phi_r, radius, 1.0, 1.0, n),
            DriftProfile::LogCorrected {
                n_dim: profile_dim,
                alpha,
                ramp_radius,
            } => {
                debug_assert!(radius >= ramp_radius);
                let m = profile_dim as f64;
                if m > n {
                    // φ r^{n-1} ≍ r^{n-1-m} (ln r)^{-α}, integrable; for α < 0 the
                    // log factor is absorbed into r^{(m-n)/2} once ln R ≥ 2|α|/(m-n)
                    if alpha >= 0.0 {
                        Tail::Bound(phi_r * radius.powf(n) / (m - n))
                    } else if radius.ln() >= 2.0 * alpha.abs() / (m - n) {
                        Tail::Bound(2.0 * phi_r * radius.powf(n) / (m - n))
                    } else {
                        Tail::Bound(f64::INFINITY)
                    }
                } else if m < n || alpha <= 1.0 {
                    Tail::Infinite
                } else {
                    Tail::Exact(phi_r * radius.powf(n) * radius.ln() / (alpha - 1.0))
                }
            }
        })
    }

    /// Smallest radius from which [`WeightFunction::tail`] applies.
    fn tail_start(&self) -> f64 {
        match (&self.antiderivative, &self.profile) {
            (Antiderivative::Tabled { knot, .. }, _) => *knot,
            (_, DriftProfile::PowerLaw { ramp_radius, .. }) | (_, DriftProfile::LogCorrected { ramp_radius, .. }) => {
                *ramp_radius
            }
            _ => 0.0,
        }
    }
}

/// Free-function form of [`WeightFunction::eval`].
pub fn phi(w: &WeightFunction, r: f64) -> Result<f64, WeightError> {
    w.eval(r)
}

/// `∫_R^∞ r^{n-1} φ` for `φ(r) = φ(R) exp(-A(r^γ - R^γ)/γ)`, `γ = β + 1 > 0`.
///
/// Substituting `x = A r^γ / γ` gives `φ(R) e^{X} γ^{-1} (γ/A)^{n/γ} Γ(n/γ, X)`
/// with `X = A R^γ / γ`, bounded through `Γ(s, X) ≤ X^{s-1} e^{-X} / (1 - (s-1)/X)`.
fn stretched_exponential_tail(phi_r: f64, radius: f64, amplitude: f64, exponent: f64, n: f64) -> Tail {
    let gamma = exponent + 1.0;
    let x = amplitude * radius.powf(gamma) / gamma;
    let s = n / gamma;
    let base = phi_r * radius.powf(n - gamma) / amplitude;
    if s <= 1.0 {
        Tail::Bound(base)
    } else if x > s - 1.0 {
        Tail::Bound(base / (1.0 - (s - 1.0) / x))
    } else {
        Tail::Bound(f64::INFINITY)
    }
}

/// Far-field contribution `∫_R^∞ φ r^{n-1} dr`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail {
    Exact(f64),
    /// Rigorous upper bound; the integral is finite.
    Bound(f64),
    Infinite,
    /// No far-field information (tabulated profiles).
    Unknown,
}

impl Tail {
    pub fn is_finite(&self) -> bool {
        match self {
            Self::Exact(_) => true,
            Self::Bound(b) => b.is_finite(),
            _ => false,
        }
    }
}

/// `∫_{ℝⁿ} φ(|x|) dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhiMass {
    Finite {
        /// Quadrature on `[0, radius]` plus the exact tail where available.
        value: f64,
        radius: f64,
        /// Tail contribution (already included when `tail_exact`).
        tail: f64,
        tail_exact: bool,
    },
    Infinite,
    Unknown,
}

impl PhiMass {
    pub fn value(&self) -> Option<f64> {
        match self {
            Self::Finite { value, .. } => Some(*value),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Finite { .. })
    }
}

impl fmt::Display for PhiMass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite { value, .. } => write!(f, "{value:.17e}"),
            Self::Infinite => write!(f, "inf"),
            Self::Unknown => write!(f, "unknown"),
        }
    }
}

/// Trapezoid rule for `∫_a^b f` with `ceil(ppu (b - a))` panels.
fn trapezoid(f: impl Fn(f64) -> Result<f64, WeightError>, a: f64, b: f64, ppu: f64) -> Result<f64, WeightError> {
    let panels = (ppu * (b - a)).ceil().max(1.0) as usize;
    let h = (b - a) / panels as f64;
    let mut acc = 0.5 * (f(a)? + f(b)?);
    for k in 1..panels {
        acc += f(a + k as f64 * h)?;
    }
    Ok(acc * h)
}

/// `ω_{n-1} ∫_0^∞ φ(r) r^{n-1} dr`, quadrature on a dedicated fine grid plus
/// the far-field tail.
pub fn phi_mass(w: &WeightFunction, n_dim: usize) -> Result<PhiMass, WeightError> {
    let k = n_dim as i32 - 1;
    let omega = unit_sphere_area(n_dim);
    let start = w.tail_start();
    let cap = w.options.max_radius.max(start);
    let mut radius = (2.0 * start).max(50.0).min(cap);
    loop {
        let tail = w.tail(radius, n_dim)?;
        match tail {
            Tail::Infinite => return Ok(PhiMass::Infinite),
            Tail::Unknown => return Ok(PhiMass::Unknown),
            _ => {}
        }
        let head = trapezoid(|r| Ok(w.eval(r)? * r.powi(k)), 0.0, radius, w.options.panels_per_unit)?;
        let (value, tail_value, tail_exact) = match tail {
            Tail::Exact(t) => (head + t, t, true),
            Tail::Bound(b) => (head, b, false),
            _ => unreachable!(),
        };
        let settled = tail_exact || tail_value <= 1e-12 * head;
        if settled || radius >= cap {
            return Ok(PhiMass::Finite {
                value: omega * value,
                radius,
                tail: omega * tail_value,
                tail_exact,
            });
        }
        radius = (2.0 * radius).min(cap);
    }
}

/// Trapezoid weights for `I_R(u) = ω_{n-1} ∫_0^R φ(r) u(r) r^{n-1} dr` on a
/// solver grid. A partial last panel uses linear interpolation of `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct MassQuadrature {
    radius: f64,
    weights: Vec<f64>,
}

impl MassQuadrature {
    pub fn new(grid: &RadialGrid, w: &WeightFunction, radius: f64) -> Result<Self, WeightError> {
        if !(radius >= 0.0) || radius > grid.r_max() * (1.0 + 1e-12) {
            return Err(WeightError::RadiusOutOfDomain {
                radius,
                r_max: grid.r_max(),
            });
        }
        let radius = radius.min(grid.r_max());
        let h = grid.spacing();
        let k = grid.n_dim() as i32 - 1;
        let omega = unit_sphere_area(grid.n_dim());
        let density = |r: f64| -> Result<f64, WeightError> { Ok(omega * w.eval(r)? * r.powi(k)) };

        let full = (((radius / h) * (1.0 + 1e-12)).floor() as usize).min(grid.num_nodes() - 1);
        let mut weights = vec![0.0; grid.num_nodes()];
        for i in 0..full {
            let (a, b) = (grid.radius(i), grid.radius(i + 1));
            weights[i] += 0.5 * h * density(a)?;
            weights[i + 1] += 0.5 * h * density(b)?;
        }
        let edge = grid.radius(full);
        if radius > edge {
            // ½ (f(edge) + f(R) u(R)) (R - edge), u(R) = (1 - s) u_full + s u_{full+1}
            let width = radius - edge;
            let s = width / h;
            let end = 0.5 * width * density(radius)?;
            weights[full] += 0.5 * width * density(edge)? + (1.0 - s) * end;
            weights[full + 1] += s * end;
        }
        Ok(Self { radius, weights })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn apply(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.weights.len());
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }
}

/// `I_R(u) = ω_{n-1} ∫_0^R φ(r) u(r) r^{n-1} dr` by the trapezoid rule on
/// the solver grid.
pub fn weighted_mass(u: &RadialField, w: &WeightFunction, radius: f64) -> Result<f64, WeightError> {
    Ok(MassQuadrature::new(u.grid(), w, radius)?.apply(u.values()))
}

/// Asymptotic value of `(1/ln r) ∫_0^r ψ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrowthLimit {
    Finite(f64),
    PlusInfinity,
    MinusInfinity,
    /// Numerical liminf/limsup estimate over the available samples.
    Range {
        liminf: f64,
        limsup: f64,
    },
}

impl GrowthLimit {
    fn exceeds(&self, n: f64) -> bool {
        match *self {
            Self::Finite(l) => l > n + CRITICAL_TOLERANCE,
            Self::PlusInfinity => true,
            Self::MinusInfinity => false,
            Self::Range { liminf, .. } => liminf > n + CRITICAL_TOLERANCE,
        }
    }

    fn below(&self, n: f64) -> bool {
        match *self {
            Self::Finite(l) => l < n - CRITICAL_TOLERANCE,
            Self::PlusInfinity => false,
            Self::MinusInfinity => true,
            Self::Range { limsup, .. } => limsup < n - CRITICAL_TOLERANCE,
        }
    }
}

impl fmt::Display for GrowthLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(l) => write!(f, "{l}"),
            Self::PlusInfinity => write!(f, "+inf"),
            Self::MinusInfinity => write!(f, "-inf"),
            Self::Range { liminf, limsup } => write!(f, "[{liminf}, {limsup}]"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    LiftOff,
    Decay,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    LiftOff,
    Decay,
    /// Growth limit equals the dimension; settled by integrability of φ.
    CriticalResolved(Outcome),
    /// Tabulated or otherwise inconclusive profile.
    Undetermined,
}

impl Verdict {
    pub fn outcome(&self) -> Option<Outcome> {
        match *self {
            Self::LiftOff => Some(Outcome::LiftOff),
            Self::Decay => Some(Outcome::Decay),
            Self::CriticalResolved(o) => Some(o),
            Self::Undetermined => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::LiftOff => write!(f, "LiftOff"),
            Self::Decay => write!(f, "Decay"),
            Self::CriticalResolved(Outcome::LiftOff) => write!(f, "CriticalResolved(LiftOff)"),
            Self::CriticalResolved(Outcome::Decay) => write!(f, "CriticalResolved(Decay)"),
            Self::Undetermined => write!(f, "Undetermined"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationResult {
    pub verdict: Verdict,
    /// Limit for ψ.
    pub growth_limit: GrowthLimit,
    /// Limit for ψ₊.
    pub positive_growth_limit: GrowthLimit,
    /// Mass of the weight that certifies the verdict (full ψ for lift-off and
    /// critical cases, ψ₊ for decay).
    pub phi_mass: PhiMass,
    pub note: String,
}

fn growth_limits(profile: &DriftProfile) -> (GrowthLimit, GrowthLimit) {
    use GrowthLimit::*;
    match *profile {
        DriftProfile::Zero => (Finite(0.0), Finite(0.0)),
        DriftProfile::Linear => (PlusInfinity, PlusInfinity),
        DriftProfile::LogCorrected { n_dim, .. } => (Finite(n_dim as f64), Finite(n_dim as f64)),
        DriftProfile::PowerLaw {
            amplitude, exponent, ..
        } => {
            let full = if amplitude == 0.0 || exponent < -1.0 {
                Finite(0.0)
            } else if exponent == -1.0 {
                Finite(amplitude)
            } else if amplitude > 0.0 {
                PlusInfinity
            } else {
                MinusInfinity
            };
            let positive = if amplitude <= 0.0 { Finite(0.0) } else { full };
            (full, positive)
        }
        DriftProfile::Tabulated(ref t) => {
            let estimate = |positive: bool| {
                let radii = t.radii();
                let start = radii.len() / 2;
                let ratios: Vec<f64> = radii[start..]
                    .iter()
                    .filter(|&&r| r > 1.0)
                    .filter_map(|&r| t.integral(r, positive).ok().map(|v| v / r.ln()))
                    .collect();
                if ratios.is_empty() {
                    Range {
                        liminf: f64::NAN,
                        limsup: f64::NAN,
                    }
                } else {
                    Range {
                        liminf: ratios.iter().copied().fold(f64::INFINITY, f64::min),
                        limsup: ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                    }
                }
            };
            (estimate(false), estimate(true))
        }
    }
}

/// Decides lift-off versus decay from the far-field growth of ψ.
///
/// `L > n` gives lift-off, `L₊ < n` gives decay, and `L = n` is settled by
/// whether `∫ φ(r) r^{n-1} dr` converges. Tabulated profiles are never
/// assigned an asymptotic verdict.
pub fn classify(profile: &DriftProfile, n_dim: usize) -> Result<ClassificationResult, WeightError> {
    let n = n_dim as f64;
    let (growth_limit, positive_growth_limit) = growth_limits(profile);

    if let DriftProfile::Tabulated(_) = profile {
        return Ok(ClassificationResult {
            verdict: Verdict::Undetermined,
            growth_limit,
            positive_growth_limit,
            phi_mass: PhiMass::Unknown,
            note: "undetermined at r -> infinity: finite samples cannot certify the growth condition".into(),
        });
    }

    if growth_limit.exceeds(n) {
        let phi_mass = phi_mass(&WeightFunction::full(profile), n_dim)?;
        return Ok(ClassificationResult {
            verdict: Verdict::LiftOff,
            growth_limit,
            positive_growth_limit,
            phi_mass,
            note: format!("growth limit {growth_limit} exceeds n = {n_dim}; weight is integrable"),
        });
    }
    if positive_growth_limit.below(n) {
        let phi_mass = phi_mass(&WeightFunction::positive_part(profile), n_dim)?;
        return Ok(ClassificationResult {
            verdict: Verdict::Decay,
            growth_limit,
            positive_growth_limit,
            phi_mass,
            note: format!("positive-part growth limit {positive_growth_limit} below n = {n_dim}; weight mass diverges"),
        });
    }

    // critical: L = n, far field positive
    let (outcome, reason) = match *profile {
        DriftProfile::PowerLaw { .. } => (
            Outcome::Decay,
            "psi = n/r: phi r^{n-1} ~ 1/r is not integrable".to_string(),
        ),
        DriftProfile::LogCorrected { alpha, .. } if alpha > 1.0 => (
            Outcome::LiftOff,
            format!("phi r^{{n-1}} ~ 1/(r (ln r)^{alpha}) is integrable since alpha > 1"),
        ),
        DriftProfile::LogCorrected { alpha, .. } => (
            Outcome::Decay,
            format!("phi r^{{n-1}} ~ 1/(r (ln r)^{alpha}) is not integrable since alpha <= 1"),
        ),
        _ => {
            return Ok(ClassificationResult {
                verdict: Verdict::Undetermined,
                growth_limit,
                positive_growth_limit,
                phi_mass: PhiMass::Unknown,
                note: "growth limits straddle the dimension".into(),
            })
        }
    };
    let phi_mass = phi_mass(&WeightFunction::full(profile), n_dim)?;
    debug_assert_eq!(phi_mass.is_finite(), outcome == Outcome::LiftOff);
    Ok(ClassificationResult {
        verdict: Verdict::CriticalResolved(outcome),
        growth_limit,
        positive_growth_limit,
        phi_mass,
        note: format!("critical growth L = n = {n_dim}; {reason}"),
    })
}

/// Predicted limit `h = I(0) / ∫φ` of a lifting-off solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftoffPrediction {
    /// `I_{r_max}(u0) / (ω ∫_0^{r_max} φ r^{n-1})`, both on the solver grid.
    pub level: f64,
    /// `ω ∫_{r_max}^∞ φ r^{n-1}` (exact or an upper bound).
    pub tail_mass: f64,
    /// `tail_mass` relative to the truncated weight mass.
    pub relative_tail: f64,
    /// Level with the weight tail included (field assumed zero beyond `r_max`).
    pub level_with_tail: f64,
}

pub fn predict_liftoff_level(u0: &RadialField, w: &WeightFunction) -> Result<LiftoffPrediction, WeightError> {
    let grid = u0.grid();
    let r_max = grid.r_max();
    let n_dim = grid.n_dim();
    let k = n_dim as i32 - 1;
    let start = w.tail_start();
    let tail = match w.tail(r_max.max(start), n_dim)? {
        // the analytic tail starts beyond r_max; fill the gap by quadrature
        Tail::Exact(v) if start > r_max => {
            Tail::Exact(v + trapezoid(|r| Ok(w.eval(r)? * r.powi(k)), r_max, start, w.options.panels_per_unit)?)
        }
        Tail::Bound(v) if start > r_max => {
            Tail::Bound(v + trapezoid(|r| Ok(w.eval(r)? * r.powi(k)), r_max, start, w.options.panels_per_unit)?)
        }
        other => other,
    };
    let tail_value = match tail {
        Tail::Exact(v) | Tail::Bound(v) if v.is_finite() => v,
        Tail::Infinite => return Err(WeightError::InfiniteMass),
        _ => return Err(WeightError::UncertifiedMass),
    };
    let quad = MassQuadrature::new(grid, w, r_max)?;
    let numerator = quad.apply(u0.values());
    let denominator = quad.weights.iter().sum::<f64>();
    let tail_mass = unit_sphere_area(n_dim) * tail_value;
    Ok(LiftoffPrediction {
        level: numerator / denominator,
        tail_mass,
        relative_tail: tail_mass / denominator,
        level_with_tail: numerator / (denominator + tail_mass),
    })
}

/// Per-snapshot diagnostics of a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticSeries {
    pub radius: f64,
    pub times: Vec<f64>,
    /// `I_R(t)`.
    pub weighted_mass: Vec<f64>,
    pub sup: Vec<f64>,
    pub center: Vec<f64>,
    /// Unweighted `∫_{B_{r_max}} u`.
    pub mass: Vec<f64>,
}

impl DiagnosticSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `max_t |I_R(t) / I_R(0) - 1|`.
    pub fn max_relative_drift(&self) -> f64 {
        let i0 = self.weighted_mass[0];
        self.weighted_mass
            .iter()
            .map(|&v| ((v - i0) / i0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest increase `I_R(t_{k+1}) - I_R(t_k)` relative to `I_R(t_k)`;
    /// non-positive when the series is non-increasing.
    pub fn max_relative_increase(&self) -> f64 {
        self.weighted_mass
            .windows(2)
            .map(|w| (w[1] - w[0]) / w[0].abs().max(f64::MIN_POSITIVE))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest framewise increase of `sup u`.
    pub fn max_sup_increase(&self) -> f64 {
        self.sup
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn diagnostics(traj: &Trajectory, w: &WeightFunction, radius: f64) -> Result<DiagnosticSeries, WeightError> {
    let mut series = DiagnosticSeries {
        radius,
        times: Vec::with_capacity(traj.len()),
        weighted_mass: Vec::with_capacity(traj.len()),
        sup: Vec::with_capacity(traj.len()),
        center: Vec::with_capacity(traj.len()),
        mass: Vec::with_capacity(traj.len()),
    };
    let quad = MassQuadrature::new(traj.grid(), w, radius)?;
    for (t, u) in traj.iter() {
        series.times.push(t);
        series.weighted_mass.push(quad.apply(u.values()));
        series.sup.push(u.sup());
        series.center.push(u.center());
        series.mass.push(crate::oracles::radial_mass(u));
    }
    Ok(series)
}
