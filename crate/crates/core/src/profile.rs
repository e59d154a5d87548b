//! Radial drift profiles ψ.
//!
//! The simulated drift field is `b(x) = -(x/|x|) ψ(|x|)`. Every profile
//! vanishes at the origin so that `b` extends continuously to `x = 0`.
//! The singular far-field families (`PowerLaw`, `LogCorrected`) are
//! replaced on `[0, r0]` by the cubic Hermite interpolant that matches
//! value and slope of the formula at `r0` and has `ψ(0) = ψ'(0) = 0`.

use crate::error::ProfileError;

/// Scalar drift profile ψ: [0, ∞) → ℝ.
#[derive(Debug, Clone, PartialEq)]
pub enum DriftProfile {
    /// `ψ(r) = A r^β` for `r ≥ r0`.
    PowerLaw {
        amplitude: f64,
        exponent: f64,
        ramp_radius: f64,
    },
    /// `ψ(r) = (n + α / ln r) / r` for `r ≥ r0 > 1`.
    LogCorrected {
        n_dim: usize,
        alpha: f64,
        ramp_radius: f64,
    },
    /// `ψ(r) = r`, i.e. `b(x) = -x`.
    Linear,
    Zero,
    Tabulated(TabulatedProfile),
}

/// Piecewise-linear profile through sorted samples, starting at `(0, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedProfile {
    radii: Vec<f64>,
    values: Vec<f64>,
}

impl TabulatedProfile {
    pub fn new(radii: Vec<f64>, values: Vec<f64>) -> Result<Self, ProfileError> {
        if radii.len() != values.len() {
            return Err(ProfileError::Invalid(format!(
                "tabulated profile has {} radii but {} values",
                radii.len(),
                values.len()
            )));
        }
        if radii.len() < 2 {
            return Err(ProfileError::Invalid(
                "tabulated profile needs at least two samples".into(),
            ));
        }
        if radii.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(ProfileError::Invalid(
                "tabulated profile contains non-finite samples".into(),
            ));
        }
        if radii[0] != 0.0 || values[0] != 0.0 {
            return Err(ProfileError::Invalid(
                "tabulated profile must start at (r, psi) = (0, 0)".into(),
            ));
        }
        if radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ProfileError::Invalid(
                "tabulated radii must be strictly increasing".into(),
            ));
        }
        Ok(Self { radii, values })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest radius covered by the samples.
    pub fn max_radius(&self) -> f64 {
        *self.radii.last().expect("at least two samples")
    }

    fn eval(&self, r: f64) -> Result<f64, ProfileError> {
        let max = self.max_radius();
        if !(0.0..=max).contains(&r) {
            return Err(ProfileError::OutOfRange { r, max });
        }
        // index of the segment [r_k, r_{k+1}] containing r
        let k = match self.radii.partition_point(|&x| x <= r) {
            0 => 0,
            p => (p - 1).min(self.radii.len() - 2),
        };
        let (r0, r1) = (self.radii[k], self.radii[k + 1]);
        let (v0, v1) = (self.values[k], self.values[k + 1]);
        Ok(v0 + (v1 - v0) * (r - r0) / (r1 - r0))
    }

    /// Exact `∫_0^r ψ` (or `∫_0^r ψ₊`) of the piecewise-linear interpolant.
    pub(crate) fn integral(&self, r: f64, positive_part: bool) -> Result<f64, ProfileError> {
        let max = self.max_radius();
        if !(0.0..=max).contains(&r) {
            return Err(ProfileError::OutOfRange { r, max });
        }
        let mut acc = 0.0;
        for k in 0..self.radii.len() - 1 {
            let a = self.radii[k];
            if a >= r {
                break;
            }
            let b = self.radii[k + 1].min(r);
            let va = self.values[k];
            let vb = self.eval(b)?;
            acc += if positive_part {
                positive_linear_integral(a, b, va, vb)
            } else {
                0.5 * (va + vb) * (b - a)
            };
        }
        Ok(acc)
    }
}

/// `∫_a^b max(ℓ, 0)` for the linear function ℓ with `ℓ(a) = va`, `ℓ(b) = vb`.
fn positive_linear_integral(a: f64, b: f64, va: f64, vb: f64) -> f64 {
    let w = b - a;
    match (va >= 0.0, vb >= 0.0) {
        (true, true) => 0.5 * (va + vb) * w,
        (false, false) => 0.0,
        (true, false) => 0.5 * va * w * va / (va - vb),
        (false, true) => 0.5 * vb * w * vb / (vb - va),
    }
}

/// Cubic Hermite ramp on `[0, r0]` with `p(0) = p'(0) = 0`, `p(r0) = value`,
/// `p'(r0) = slope`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Ramp {
    pub r0: f64,
    pub value: f64,
    pub slope: f64,
}

impl Ramp {
    pub fn eval(&self, r: f64) -> f64 {
        let x = r / self.r0;
        self.value * x * x * (3.0 - 2.0 * x) + self.slope * self.r0 * x * x * (x - 1.0)
    }

    /// `∫_0^r p` for `r ≤ r0`.
    pub fn integral(&self, r: f64) -> f64 {
        let x = r / self.r0;
        let x3 = x * x * x;
        let x4 = x3 * x;
        self.r0 * (self.value * (x3 - 0.5 * x4) + self.slope * self.r0 * (0.25 * x4 - x3 / 3.0))
    }
}

impl DriftProfile {
    pub fn power_law(amplitude: f64, exponent: f64, ramp_radius: f64) -> Result<Self, ProfileError> {
        if !amplitude.is_finite() || !exponent.is_finite() {
            return Err(ProfileError::Invalid(
                "power law amplitude and exponent must be finite".into(),
            ));
        }
        if !(ramp_radius > 0.0 && ramp_radius.is_finite()) {
            return Err(ProfileError::Invalid(format!(
                "power law ramp radius must be positive, got {ramp_radius}"
            )));
        }
        Ok(Self::PowerLaw {
            amplitude,
            exponent,
            ramp_radius,
        })
    }

    pub fn log_corrected(n_dim: usize, alpha: f64, ramp_radius: f64) -> Result<Self, ProfileError> {
        if n_dim == 0 {
            return Err(ProfileError::Invalid("dimension must be at least 1".into()));
        }
        if !alpha.is_finite() {
            return Err(ProfileError::Invalid("alpha must be finite".into()));
        }
        if !(ramp_radius > 1.0 && ramp_radius.is_finite()) {
            return Err(ProfileError::Invalid(format!(
                "log-corrected ramp radius must exceed 1, got {ramp_radius}"
            )));
        }
        Ok(Self::LogCorrected {
            n_dim,
            alpha,
            ramp_radius,
        })
    }

    pub fn tabulated(radii: Vec<f64>, values: Vec<f64>) -> Result<Self, ProfileError> {
        TabulatedProfile::new(radii, values).map(Self::Tabulated)
    }

    /// Short lowercase family name, as used in configuration files.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::PowerLaw { .. } => "powerlaw",
            Self::LogCorrected { .. } => "logcorrected",
            Self::Linear => "linear",
            Self::Zero => "zero",
            Self::Tabulated(_) => "tabulated",
        }
    }

    /// Far-field formula and its derivative at `r > 0`.
    fn far_field(&self, r: f64) -> (f64, f64) {
        match *self {
            Self::PowerLaw {
                amplitude, exponent, ..
            } => (
                amplitude * r.powf(exponent),
                amplitude * exponent * r.powf(exponent - 1.0),
            ),
            Self::LogCorrected { n_dim, alpha, .. } => {
                let n = n_dim as f64;
                let l = r.ln();
                (
                    (n + alpha / l) / r,
                    -(n + alpha / l) / (r * r) - alpha / (r * r * l * l),
                )
            }
            Self::Linear => (r, 1.0),
            Self::Zero | Self::Tabulated(_) => (0.0, 0.0),
        }
    }

    pub(crate) fn ramp(&self) -> Option<Ramp> {
        let r0 = match *self {
            Self::PowerLaw { ramp_radius, .. } | Self::LogCorrected { ramp_radius, .. } => ramp_radius,
            _ => return None,
        };
        let (value, slope) = self.far_field(r0);
        Some(Ramp { r0, value, slope })
    }

    /// Evaluates ψ(r).
    pub fn eval(&self, r: f64) -> Result<f64, ProfileError> {
        if !(r >= 0.0) {
            return Err(ProfileError::NegativeRadius(r));
        }
        match self {
            Self::Zero => Ok(0.0),
            Self::Linear => Ok(r),
            Self::Tabulated(t) => t.eval(r),
            _ => {
                let ramp = self.ramp().expect("ramped family");
                if r < ramp.r0 {
                    Ok(ramp.eval(r))
                } else {
                    Ok(self.far_field(r).0)
                }
            }
        }
    }

    /// Exact `Ψ(r) = ∫_0^r ψ` for every family.
    pub fn antiderivative(&self, r: f64) -> Result<f64, ProfileError> {
        if !(r >= 0.0) {
            return Err(ProfileError::NegativeRadius(r));
        }
        Ok(match *self {
            Self::Zero => 0.0,
            Self::Linear => 0.5 * r * r,
            Self::Tabulated(ref t) => return t.integral(r, false),
            Self::PowerLaw {
                amplitude,
                exponent,
                ramp_radius,
            } => {
                let ramp = self.ramp().expect("ramped family");
                if r < ramp_radius {
                    ramp.integral(r)
                } else {
                    let q = exponent + 1.0;
                    let tail = if q == 0.0 {
                        amplitude * (r / ramp_radius).ln()
                    } else {
                        amplitude * (r.powf(q) - ramp_radius.powf(q)) / q
                    };
                    ramp.integral(ramp_radius) + tail
                }
            }
            Self::LogCorrected {
                n_dim,
                alpha,
                ramp_radius,
            } => {
                let ramp = self.ramp().expect("ramped family");
                if r < ramp_radius {
                    ramp.integral(r)
                } else {
                    let n = n_dim as f64;
                    ramp.integral(ramp_radius) + n * (r / ramp_radius).ln() + alpha * (r.ln() / ramp_radius.ln()).ln()
                }
            }
        })
    }

    /// Radius beyond which ψ keeps one sign, with that sign (`true` for `ψ ≥ 0`).
    ///
    /// Returns `None` for tabulated profiles, whose sign pattern is handled
    /// exactly segment by segment.
    pub(crate) fn far_sign(&self) -> Option<(f64, bool)> {
        match *self {
            Self::Zero => Some((0.0, true)),
            Self::Linear => Some((0.0, true)),
            Self::Tabulated(_) => None,
            Self::PowerLaw {
                amplitude, ramp_radius, ..
            } => Some((ramp_radius, amplitude >= 0.0)),
            Self::LogCorrected {
                n_dim,
                alpha,
                ramp_radius,
            } => {
                // n + α/ln r changes sign at ln r = -α/n when α < 0
                let n = n_dim as f64;
                let crossing = if alpha < 0.0 { (-alpha / n).exp() } else { 0.0 };
                Some((ramp_radius.max(crossing), true))
            }
        }
    }

    /// Whether ψ ≥ 0 on all of `[0, ∞)` (or on the whole table).
    pub fn is_nonnegative(&self) -> bool {
        match self {
            Self::Zero | Self::Linear => true,
            Self::Tabulated(t) => t.values.iter().all(|&v| v >= 0.0),
            Self::PowerLaw { amplitude, .. } if *amplitude < 0.0 => false,
            Self::PowerLaw { .. } | Self::LogCorrected { .. } => {
                let ramp = self.ramp().expect("ramped family");
                let (start, positive) = self.far_sign().expect("analytic family");
                if !positive || ramp.value < 0.0 {
                    return false;
                }
                if start > ramp.r0 {
                    return false;
                }
                // p(x)/x² = value (3 - 2x) + slope r0 (x - 1) is linear in x,
                // so checking both ends of [0, 1] suffices
                let at_zero = 3.0 * ramp.value - ramp.slope * ramp.r0;
                at_zero >= 0.0 && ramp.value >= 0.0
            }
        }
    }
}

/// Free-function form of [`DriftProfile::eval`].
pub fn eval_psi(profile: &DriftProfile, r: f64) -> Result<f64, ProfileError> {
    profile.eval(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_profile_is_zero() {
        assert_eq!(eval_psi(&DriftProfile::Zero, 7.3).unwrap(), 0.0);
    }

    #[test]
    fn power_law_far_field() {
        let p = DriftProfile::power_law(3.0, -1.0, 1.0).unwrap();
        assert_relative_eq!(p.eval(2.0).unwrap(), 1.5, max_relative = 1e-15);
    }

    #[test]
    fn log_corrected_far_field() {
        let e = std::f64::consts::E;
        let p = DriftProfile::log_corrected(2, 2.0, e).unwrap();
        let expected = (2.0 + 2.0 / 2.0) / (e * e);
        assert_relative_eq!(p.eval(e * e).unwrap(), expected, max_relative = 1e-14);
        assert!((expected - 0.40601).abs() < 5e-6);
    }

    #[test]
    fn every_family_vanishes_at_origin() {
        let profiles = [
            DriftProfile::power_law(3.0, -1.0, 1.0).unwrap(),
            DriftProfile::power_law(5.0, -2.0, 0.5).unwrap(),
            DriftProfile::power_law(1.0, -3.5, 2.0).unwrap(),
            DriftProfile::log_corrected(3, 0.5, 2.0).unwrap(),
            DriftProfile::Linear,
            DriftProfile::Zero,
            DriftProfile::tabulated(vec![0.0, 1.0], vec![0.0, 2.0]).unwrap(),
        ];
        for p in &profiles {
            assert_eq!(p.eval(0.0).unwrap(), 0.0, "{p:?}");
        }
    }

    #[test]
    fn ramp_is_c1_at_knot() {
        for p in [
            DriftProfile::power_law(3.0, -1.0, 1.0).unwrap(),
            DriftProfile::power_law(0.7, 0.4, 1.5).unwrap(),
            DriftProfile::log_corrected(2, 1.0, 3.0).unwrap(),
        ] {
            let r0 = p.ramp().unwrap().r0;
            let eps = 1e-7;
            let left = p.eval(r0 - eps).unwrap();
            let right = p.eval(r0 + eps).unwrap();
            assert!((left - right).abs() < 1e-5, "{p:?}");
            let dl = (p.eval(r0 - eps).unwrap() - p.eval(r0 - 2.0 * eps).unwrap()) / eps;
            let dr = (p.eval(r0 + 2.0 * eps).unwrap() - p.eval(r0 + eps).unwrap()) / eps;
            assert!((dl - dr).abs() < 1e-4 * (1.0 + dl.abs()), "{p:?}: {dl} vs {dr}");
        }
    }

    #[test]
    fn antiderivative_matches_trapezoid() {
        let profiles = [
            DriftProfile::power_law(3.0, -1.0, 1.0).unwrap(),
            DriftProfile::power_law(2.0, 0.5, 0.8).unwrap(),
            DriftProfile::log_corrected(2, -1.5, 1.5).unwrap(),
            DriftProfile::tabulated(vec![0.0, 1.0, 2.0, 4.0], vec![0.0, -1.0, 3.0, 1.0]).unwrap(),
        ];
        for p in &profiles {
            let r = 3.7;
            let panels = 200_000;
            let h = r / panels as f64;
            let mut acc = 0.0;
            for k in 0..panels {
                let a = p.eval(k as f64 * h).unwrap();
                let b = p.eval((k + 1) as f64 * h).unwrap();
                acc += 0.5 * (a + b) * h;
            }
            assert_relative_eq!(p.antiderivative(r).unwrap(), acc, max_relative = 1e-8);
        }
    }

    #[test]
    fn tabulated_interpolates_and_rejects_out_of_range() {
        let p = DriftProfile::tabulated(vec![0.0, 1.0, 3.0], vec![0.0, 2.0, 0.0]).unwrap();
        assert_relative_eq!(p.eval(0.5).unwrap(), 1.0);
        assert_relative_eq!(p.eval(2.0).unwrap(), 1.0);
        assert_relative_eq!(p.eval(3.0).unwrap(), 0.0);
        assert!(matches!(p.eval(3.5), Err(ProfileError::OutOfRange { .. })));
    }

    #[test]
    fn tabulated_validation() {
        assert!(DriftProfile::tabulated(vec![0.0, 1.0, 1.0], vec![0.0, 1.0, 2.0]).is_err());
        assert!(DriftProfile::tabulated(vec![0.0, 1.0], vec![0.5, 1.0]).is_err());
        assert!(DriftProfile::tabulated(vec![0.0], vec![0.0]).is_err());
        assert!(DriftProfile::log_corrected(2, 1.0, 1.0).is_err());
        assert!(DriftProfile::power_law(1.0, -1.0, 0.0).is_err());
    }

    #[test]
    fn positive_part_integral_of_tabulated() {
        let t = TabulatedProfile::new(vec![0.0, 1.0, 2.0], vec![0.0, -1.0, 1.0]).unwrap();
        // ψ₊ is the triangle on [1.5, 2] with height 1
        assert_relative_eq!(t.integral(2.0, true).unwrap(), 0.25, max_relative = 1e-15);
        assert_relative_eq!(t.integral(2.0, false).unwrap(), -0.5, max_relative = 1e-15);
    }

    #[test]
    fn sign_classification() {
        assert!(DriftProfile::power_law(3.0, -1.0, 1.0).unwrap().is_nonnegative());
        assert!(!DriftProfile::power_law(-1.0, -1.0, 1.0).unwrap().is_nonnegative());
        // steep positive exponent makes the Hermite ramp dip below zero
        assert!(!DriftProfile::power_law(1.0, 5.0, 1.0).unwrap().is_nonnegative());
        assert!(!DriftProfile::log_corrected(2, -4.0, 1.5).unwrap().is_nonnegative());
    }
}
