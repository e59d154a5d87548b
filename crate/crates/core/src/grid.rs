//! Uniform radial grid on `[0, r_max]` and scalar fields on it.

use crate::error::GridError;

/// Nodes `r_i = i h`, `h = r_max / (num_nodes - 1)`, for ambient dimension `n_dim`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    r_max: f64,
    num_nodes: usize,
    n_dim: usize,
}

impl RadialGrid {
    pub fn new(r_max: f64, num_nodes: usize, n_dim: usize) -> Result<Self, GridError> {
        if !(r_max > 0.0 && r_max.is_finite()) {
            return Err(GridError::Invalid(format!("r_max must be positive, got {r_max}")));
        }
        if num_nodes < 3 {
            return Err(GridError::Invalid(format!(
                "num_nodes must be at least 3, got {num_nodes}"
            )));
        }
        if n_dim == 0 {
            return Err(GridError::Invalid("dimension must be at least 1".into()));
        }
        Ok(Self {
            r_max,
            num_nodes,
            n_dim,
        })
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn n_dim(&self) -> usize {
        self.n_dim
    }

    pub fn spacing(&self) -> f64 {
        self.r_max / (self.num_nodes - 1) as f64
    }

    #[inline]
    pub fn radius(&self, i: usize) -> f64 {
        if i + 1 == self.num_nodes {
            self.r_max
        } else {
            i as f64 * self.spacing()
        }
    }

    pub fn radii(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.num_nodes).map(move |i| self.radius(i))
    }
}

/// Values of a rotationally symmetric function at the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialField {
    grid: RadialGrid,
    values: Vec<f64>,
}

impl RadialField {
    pub fn new(grid: RadialGrid, values: Vec<f64>) -> Result<Self, GridError> {
        if values.len() != grid.num_nodes() {
            return Err(GridError::LengthMismatch {
                expected: grid.num_nodes(),
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(GridError::NonFinite { index });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: RadialGrid, f: impl Fn(f64) -> f64) -> Result<Self, GridError> {
        Self::new(grid, grid.radii().map(f).collect())
    }

    pub fn constant(grid: RadialGrid, c: f64) -> Result<Self, GridError> {
        Self::new(grid, vec![c; grid.num_nodes()])
    }

    pub(crate) fn from_raw(grid: RadialGrid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.num_nodes());
        Self { grid, values }
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Value at the origin.
    pub fn center(&self) -> f64 {
        self.values[0]
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn inf(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Linear interpolation at radius `r ∈ [0, r_max]`.
    pub fn interpolate(&self, r: f64) -> f64 {
        let h = self.grid.spacing();
        let last = self.grid.num_nodes() - 1;
        let x = (r / h).clamp(0.0, last as f64);
        let i = (x.floor() as usize).min(last - 1);
        let s = x - i as f64;
        self.values[i] * (1.0 - s) + self.values[i + 1] * s
    }

    /// `a·self + b·other` on the same grid.
    pub fn linear_combination(&self, a: f64, other: &Self, b: f64) -> Result<Self, GridError> {
        if self.grid != other.grid {
            return Err(GridError::Invalid("fields live on different grids".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Self::new(self.grid, values)
    }
}

/// Surface area `2 π^{n/2} / Γ(n/2)` of the unit sphere in ℝⁿ.
///
/// Γ at integers and half-integers is evaluated with the exact recursion
/// from Γ(1) = 1 and Γ(1/2) = √π.
pub fn unit_sphere_area(n_dim: usize) -> f64 {
    assert!(n_dim >= 1, "dimension must be at least 1");
    let pi = std::f64::consts::PI;
    // Γ(n/2)
    let gamma_half = if n_dim.is_multiple_of(2) {
        (1..n_dim / 2).map(|k| k as f64).product::<f64>()
    } else {
        let mut g = pi.sqrt();
        let mut x = 0.5;
        while x < n_dim as f64 / 2.0 {
            g *= x;
            x += 1.0;
        }
        g
    };
    2.0 * pi.powf(n_dim as f64 / 2.0) / gamma_half
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn sphere_areas() {
        assert_relative_eq!(unit_sphere_area(1), 2.0, max_relative = 1e-15);
        assert_relative_eq!(unit_sphere_area(2), 2.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(unit_sphere_area(3), 4.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(unit_sphere_area(4), 2.0 * PI * PI, max_relative = 1e-15);
        assert_relative_eq!(unit_sphere_area(5), 8.0 * PI * PI / 3.0, max_relative = 1e-14);
    }

    #[test]
    fn grid_endpoints() {
        let g = RadialGrid::new(20.0, 2001, 2).unwrap();
        assert_eq!(g.radius(0), 0.0);
        assert_eq!(g.radius(2000), 20.0);
        assert_relative_eq!(g.spacing(), 0.01);
        assert!(RadialGrid::new(1.0, 2, 2).is_err());
        assert!(RadialGrid::new(-1.0, 10, 2).is_err());
        assert!(RadialGrid::new(1.0, 10, 0).is_err());
    }

    #[test]
    fn field_validation() {
        let g = RadialGrid::new(1.0, 3, 1).unwrap();
        assert!(RadialField::new(g, vec![1.0, 2.0]).is_err());
        assert!(matches!(
            RadialField::new(g, vec![1.0, f64::NAN, 0.0]),
            Err(GridError::NonFinite { index: 1 })
        ));
    }

    #[test]
    fn interpolation_is_exact_for_linear_data() {
        let g = RadialGrid::new(2.0, 5, 1).unwrap();
        let f = RadialField::from_fn(g, |r| 3.0 * r - 1.0).unwrap();
        for r in [0.0, 0.3, 1.0, 1.77, 2.0] {
            assert_relative_eq!(f.interpolate(r), 3.0 * r - 1.0, epsilon = 1e-14);
        }
    }
}
