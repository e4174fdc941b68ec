//! Exact spectral data of the unperturbed operator `q0(r) = r`.
//!
//! Eigenvalues are the negative zeros of Ai, eigenfunctions are
//! `cA_j Ai(r - E0_j)` with `cA_j = 1 / Ai'(-E0_j)`, and the regular
//! solution at any energy is `π [Ai(-E) Bi(x-E) - Bi(-E) Ai(x-E)]`.

use crate::error::{Error, Result};
use crate::specfun::{ai_negative_zeros_up_to, airy_eval, DEFAULT_MAX_ZEROS};
use crate::sturm::{trapezoid, RadialGrid, RegularSolution};
use std::f64::consts::PI;

/// Magnitude cap used when no other is requested.
pub const DEFAULT_MAGNITUDE_CAP: f64 = 1e8;

#[derive(Debug, Clone, PartialEq)]
pub struct BaseLevel {
    pub index: usize,
    pub energy: f64,
    /// Slope of the normalized eigenfunction; 1 analytically.
    pub slope: f64,
    /// Airy normalization `cA = 1 / Ai'(-E0)`.
    pub airy_norm: f64,
}

/// Leading levels of `q0 = r` together with their sampled eigenfunctions.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseSpectrum {
    pub grid: RadialGrid,
    pub levels: Vec<BaseLevel>,
    /// `φ_j = cA_j Ai(r - E0_j)` on the full grid.
    pub eigenfunctions: Vec<RegularSolution>,
}

impl BaseSpectrum {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Level with 1-based index `j`.
    pub fn level(&self, j: usize) -> Option<&BaseLevel> {
        j.checked_sub(1).and_then(|k| self.levels.get(k))
    }

    pub fn eigenfunction(&self, j: usize) -> Option<&RegularSolution> {
        j.checked_sub(1).and_then(|k| self.eigenfunctions.get(k))
    }
}

/// The first `n` levels of `q0 = r`, eigenfunctions sampled on `grid`.
pub fn base_spectrum(n: usize, grid: RadialGrid) -> Result<BaseSpectrum> {
    let zeros = ai_negative_zeros_up_to(n, DEFAULT_MAX_ZEROS.max(n))?;
    let h = grid.spacing();
    let mut levels = Vec::with_capacity(n);
    let mut eigenfunctions = Vec::with_capacity(n);
    for z in zeros {
        let airy_norm = airy_eval(-z.value)?.ai_prime.recip();
        let mut phi = Vec::with_capacity(grid.len());
        let mut phi_prime = Vec::with_capacity(grid.len());
        for x in grid.nodes() {
            let a = airy_eval(x - z.value)?;
            phi.push(airy_norm * a.ai);
            phi_prime.push(airy_norm * a.ai_prime);
        }
        // the zero is only accurate to rounding; pin the boundary data
        phi[0] = 0.0;
        phi_prime[0] = 1.0;
        let sq: Vec<f64> = phi.iter().map(|p| p * p).collect();
        let slope = trapezoid(h, &sq).sqrt().recip();
        levels.push(BaseLevel {
            index: z.index,
            energy: z.value,
            slope,
            airy_norm,
        });
        eigenfunctions.push(RegularSolution {
            energy: z.value,
            grid,
            phi,
            phi_prime,
        });
    }
    Ok(BaseSpectrum {
        grid,
        levels,
        eigenfunctions,
    })
}

/// Closed-form regular solution of `q0 = r` and its derivative at one point.
#[derive(Debug, Clone, Copy)]
pub struct AiryRegular {
    energy: f64,
    ai: f64,
    bi: f64,
}

impl AiryRegular {
    pub fn new(energy: f64) -> Result<Self> {
        if !energy.is_finite() {
            return Err(Error::invalid(format!("energy must be finite, got {energy}")));
        }
        let a = airy_eval(-energy)?;
        Ok(AiryRegular {
            energy,
            ai: a.ai,
            bi: a.bi,
        })
    }

    /// `(φ(x,E), φ'(x,E))`.
    pub fn eval(&self, x: f64) -> Result<(f64, f64)> {
        let a = airy_eval(x - self.energy)?;
        Ok((
            PI * (self.ai * a.bi - self.bi * a.ai),
            PI * (self.ai * a.bi_prime - self.bi * a.ai_prime),
        ))
    }
}

/// `φ(·,E)` for `q0 = r` on the full grid; errors if the Bi branch passes
/// [`DEFAULT_MAGNITUDE_CAP`].
pub fn base_regular(energy: f64, grid: RadialGrid) -> Result<RegularSolution> {
    let sol = base_regular_capped(energy, grid, DEFAULT_MAGNITUDE_CAP)?;
    if !sol.is_complete() {
        let last_valid = sol.len() - 1;
        return Err(Error::Truncated {
            last_valid,
            r: grid.r(last_valid),
        });
    }
    Ok(sol)
}

/// Like [`base_regular`] but returns the leading nodes up to the last one
/// where `|φ| <= cap` instead of failing.
pub fn base_regular_capped(energy: f64, grid: RadialGrid, cap: f64) -> Result<RegularSolution> {
    let form = AiryRegular::new(energy)?;
    let mut phi = Vec::with_capacity(grid.len());
    let mut phi_prime = Vec::with_capacity(grid.len());
    for x in grid.nodes() {
        let (v, d) = form.eval(x)?;
        if !(v.abs() <= cap) {
            break;
        }
        phi.push(v);
        phi_prime.push(d);
    }
    Ok(RegularSolution {
        energy,
        grid,
        phi,
        phi_prime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sturm::{regular_solution, PotentialSamples};

    fn grid() -> RadialGrid {
        RadialGrid::new(20.0, 4001).unwrap()
    }

    #[test]
    fn ground_level() {
        let b = base_spectrum(1, grid()).unwrap();
        assert!((b.levels[0].energy - 2.33810741).abs() < 1e-8);
        assert!((b.levels[0].slope - 1.0).abs() < 1e-5);
    }

    #[test]
    fn eigenfunction_boundary_data_exact() {
        let b = base_spectrum(4, grid()).unwrap();
        for f in &b.eigenfunctions {
            assert_eq!(f.phi[0], 0.0);
            assert_eq!(f.phi_prime[0], 1.0);
            assert!(f.is_complete());
        }
    }

    #[test]
    fn sixth_level() {
        let b = base_spectrum(6, grid()).unwrap();
        assert!((b.levels[5].energy - 9.02265085).abs() < 1e-8);
        assert_eq!(b.level(6).unwrap().index, 6);
        assert!(b.level(0).is_none());
    }

    #[test]
    fn regular_solution_boundary_data() {
        for e in [-3.0, 0.5, 1.0, 2.0, 7.3, 15.0] {
            let s = base_regular_capped(e, grid(), f64::INFINITY).unwrap();
            assert_eq!(s.phi[0], 0.0);
            assert!((s.phi_prime[0] - 1.0).abs() <= 1e-10, "E = {e}");
        }
    }

    #[test]
    fn at_eigenvalue_proportional_to_ai() {
        let b = base_spectrum(1, grid()).unwrap();
        let e = b.levels[0].energy;
        let form = AiryRegular::new(e).unwrap();
        let mut ratios = Vec::new();
        // Ai(-E0) is zero only to rounding, and that residue times Bi(x-E0)
        // reaches 1e-8 of Ai(x-E0) near x = 8
        for i in 1..=1400 {
            let x = grid().r(i);
            let ai = airy_eval(x - e).unwrap().ai;
            ratios.push(form.eval(x).unwrap().0 / ai);
        }
        let r0 = ratios[0];
        for r in &ratios {
            assert!(((r - r0) / r0).abs() < 1e-8);
        }
    }

    #[test]
    fn agrees_with_ode_integration() {
        let g = grid();
        let ode = regular_solution(&PotentialSamples::linear(g), 1.0).unwrap();
        let airy = base_regular_capped(1.0, g, f64::INFINITY).unwrap();
        assert!((ode.phi[400] - airy.phi[400]).abs() < 1e-6);
    }

    #[test]
    fn cap_truncates() {
        let g = grid();
        let s = base_regular_capped(1.0, g, DEFAULT_MAGNITUDE_CAP).unwrap();
        assert!(!s.is_complete());
        assert!(s.phi.iter().all(|v| v.abs() <= DEFAULT_MAGNITUDE_CAP));
        assert!(matches!(base_regular(1.0, g), Err(Error::Truncated { .. })));
    }
}
