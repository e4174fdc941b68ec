//! Forward problem for `-u'' + q(r) u = E u` on the half-line with `u(0) = 0`.
//!
//! Potentials are sampled on a uniform grid starting at `r = 0`. The regular
//! solution is integrated with Numerov's method, bound states come from
//! shooting on the Dirichlet condition at `r_max`.

mod numerov;
mod shooting;

pub use numerov::regular_solution;
pub use numerov::{regular_solution_capped, DEFAULT_OVERFLOW_CAP};
pub use shooting::{bound_states, bound_states_with, shoot_endpoint, ShootingConfig};

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Uniform grid `r_i = i h`, `i = 0..n`, `h = r_max / (n - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    r_max: f64,
    n: usize,
    h: f64,
}

impl RadialGrid {
    pub fn new(r_max: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("grid needs at least 2 points, got {n}")));
        }
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(Error::invalid(format!("r_max must be positive and finite, got {r_max}")));
        }
        Ok(RadialGrid {
            r_max,
            n,
            h: r_max / (n - 1) as f64,
        })
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    #[inline]
    pub fn r(&self, i: usize) -> f64 {
        i as f64 * self.h
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.r(i))
    }

    /// Largest node index with `r_i <= r` (clamped to the grid).
    pub fn index_at_or_below(&self, r: f64) -> usize {
        if r <= 0.0 {
            return 0;
        }
        let i = (r / self.h * (1.0 + 1e-12)).floor() as usize;
        i.min(self.n - 1)
    }
}

/// Default tolerance on `|q(r_max) - r_max|` when the tail flag is set.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-6;

/// Potential values at the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSamples {
    grid: RadialGrid,
    q: Vec<f64>,
    /// Producer asserts `q(r) - r -> 0` by `r_max`.
    tail_flag: bool,
}

impl PotentialSamples {
    pub fn new(grid: RadialGrid, q: Vec<f64>, tail_flag: bool) -> Result<Self> {
        if q.len() != grid.len() {
            return Err(Error::invalid(format!(
                "potential has {} samples for a grid of {} nodes",
                q.len(),
                grid.len()
            )));
        }
        if let Some(i) = q.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("potential sample {i} is not finite")));
        }
        Ok(PotentialSamples { grid, q, tail_flag })
    }

    pub fn from_fn(grid: RadialGrid, f: impl Fn(f64) -> f64, tail_flag: bool) -> Result<Self> {
        let q = grid.nodes().map(f).collect();
        Self::new(grid, q, tail_flag)
    }

    /// The unperturbed potential `q(r) = r`.
    pub fn linear(grid: RadialGrid) -> Self {
        PotentialSamples {
            grid,
            q: grid.nodes().collect(),
            tail_flag: true,
        }
    }

    /// Fails if the tail flag is set but `q(r_max)` is not within `tol` of `r_max`.
    pub fn check_tail(&self, tol: f64) -> Result<()> {
        if !self.tail_flag {
            return Ok(());
        }
        let last = self.q.len() - 1;
        let dev = (self.q[last] - self.grid.r(last)).abs();
        if dev > tol {
            return Err(Error::invalid(format!(
                "potential asserted to approach r but q(r_max) - r_max = {dev:e}"
            )));
        }
        Ok(())
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.q
    }

    pub fn tail_flag(&self) -> bool {
        self.tail_flag
    }

    /// `p(r) = q(r) - r` at each node.
    pub fn perturbation(&self) -> Vec<f64> {
        self.q
            .iter()
            .enumerate()
            .map(|(i, q)| q - self.grid.r(i))
            .collect()
    }

    pub fn min_value(&self) -> f64 {
        self.q.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `φ(·, E)` with `φ(0) = 0`, `φ'(0) = 1`, sampled on the leading nodes of a grid.
///
/// Solutions cut short by a magnitude cap hold fewer values than the grid
/// has nodes; see [`RegularSolution::is_complete`].
#[derive(Debug, Clone, PartialEq)]
pub struct RegularSolution {
    pub energy: f64,
    pub grid: RadialGrid,
    pub phi: Vec<f64>,
    pub phi_prime: Vec<f64>,
}

impl RegularSolution {
    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.phi.len() == self.grid.len()
    }
}

/// A normalized bound state.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenstate {
    pub index: usize,
    pub energy: f64,
    /// `u = s φ`, unit L² norm.
    pub u: Vec<f64>,
    /// `s = u'(0) > 0`.
    pub slope: f64,
    /// `α = ∫ φ² = 1 / s²`.
    pub norm: f64,
}

/// Composite trapezoid rule on uniform spacing.
pub fn trapezoid(h: f64, values: &[f64]) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => h * (0.5 * (values[0] + values[n - 1]) + values[1..n - 1].iter().sum::<f64>()),
    }
}

/// Semiclassical counting function `(1/π) ∫_{q<λ} (λ - q)^{1/2} dr`.
///
/// `q` is treated as piecewise linear between nodes and each cell is
/// integrated exactly, so turning points inside a cell are handled.
pub fn weyl_count(pot: &PotentialSamples, lambda: f64) -> f64 {
    let h = pot.grid.spacing();
    let q = &pot.q;
    let mut total = 0.0;
    for w in q.windows(2) {
        let (a, b) = (lambda - w[0], lambda - w[1]);
        if a <= 0.0 && b <= 0.0 {
            continue;
        }
        let slope = (w[1] - w[0]) / h;
        if slope.abs() < 1e-300 {
            total += a.max(0.0).sqrt() * h;
        } else {
            // ∫ sqrt(λ - q) dr over the cell with q linear
            let pa = a.max(0.0).powf(1.5);
            let pb = b.max(0.0).powf(1.5);
            total += 2.0 / 3.0 * (pa - pb) / slope;
        }
    }
    total / PI
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::ai_negative_zeros;

    #[test]
    fn grid_basics() {
        let g = RadialGrid::new(20.0, 4001).unwrap();
        assert_eq!(g.r(0), 0.0);
        assert!((g.spacing() - 0.005).abs() < 1e-15);
        assert!((g.r(4000) - 20.0).abs() < 1e-12);
        assert_eq!(g.index_at_or_below(16.0), 3200);
        assert!(RadialGrid::new(20.0, 1).is_err());
        assert!(RadialGrid::new(-1.0, 10).is_err());
    }

    #[test]
    fn tail_check() {
        let g = RadialGrid::new(20.0, 101).unwrap();
        let ok = PotentialSamples::from_fn(g, |r| r + 0.3 * (-r).exp(), true).unwrap();
        assert!(ok.check_tail(DEFAULT_TAIL_TOLERANCE).is_ok());
        let bad = PotentialSamples::from_fn(g, |r| r + 0.5, true).unwrap();
        assert!(bad.check_tail(DEFAULT_TAIL_TOLERANCE).is_err());
        let unflagged = PotentialSamples::from_fn(g, |r| r + 0.5, false).unwrap();
        assert!(unflagged.check_tail(DEFAULT_TAIL_TOLERANCE).is_ok());
        assert!(PotentialSamples::from_fn(g, |_| f64::NAN, false).is_err());
    }

    #[test]
    fn weyl_count_linear_potential() {
        let g = RadialGrid::new(20.0, 4001).unwrap();
        let pot = PotentialSamples::linear(g);
        let n = weyl_count(&pot, 10.0);
        let exact = 2.0 / (3.0 * PI) * 10f64.powf(1.5);
        assert!((n / exact - 1.0).abs() < 0.01);
        assert!((exact - 6.71).abs() < 0.01);
        let below = ai_negative_zeros(10)
            .unwrap()
            .iter()
            .filter(|z| z.value < 10.0)
            .count();
        assert_eq!(below, 6);
    }

    #[test]
    fn weyl_count_empty_region() {
        let g = RadialGrid::new(10.0, 101).unwrap();
        let pot = PotentialSamples::from_fn(g, |r| 3.0 + r * r, false).unwrap();
        assert_eq!(weyl_count(&pot, 3.0), 0.0);
        assert_eq!(weyl_count(&pot, -1.0), 0.0);
    }

    #[test]
    fn trapezoid_is_exact_for_lines() {
        let v: Vec<f64> = (0..11).map(|i| 2.0 * i as f64 * 0.1 + 1.0).collect();
        assert!((trapezoid(0.1, &v) - 2.0).abs() < 1e-14);
    }
}
