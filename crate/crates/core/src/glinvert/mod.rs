//! Gelfand-Levitan inversion for finitely many perturbed levels.
//!
//! Data `{(E_j, s_j)}` are compared with the base spectrum of `q0 = r`; the
//! difference of spectral measures is a finite sum of point masses, so the
//! Gelfand-Levitan kernel is degenerate and the integral equation reduces to
//! a small linear system at every grid node.
//!
//! Each datum carries the index of the base level it replaces. Index `0`
//! marks an inserted level that replaces nothing.

mod kernel;
mod recover;

pub use kernel::{build_kernel, BasisFunction, BasisOrigin, DegenerateKernel, NodeSolution};
pub use recover::{recover_potential, single_level_potential, DomainLimit, RecoveryResult};

use crate::baseline::{BaseSpectrum, DEFAULT_MAGNITUDE_CAP};
use crate::error::{Error, Result};
use crate::sturm::Eigenstate;

/// One measured pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDatum {
    /// Base level this datum stands in for; `0` for an inserted level.
    pub index: usize,
    pub energy: f64,
    pub slope: f64,
}

/// Data sorted by strictly increasing energy.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDataset {
    items: Vec<SpectralDatum>,
}

impl SpectralDataset {
    pub fn new(items: Vec<SpectralDatum>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::invalid("dataset needs at least one level"));
        }
        for d in &items {
            if !d.energy.is_finite() {
                return Err(Error::invalid(format!("level {}: energy is not finite", d.index)));
            }
            if !(d.slope.is_finite() && d.slope > 0.0) {
                return Err(Error::invalid(format!(
                    "level {}: slope must be positive, got {}",
                    d.index, d.slope
                )));
            }
        }
        for w in items.windows(2) {
            if !(w[1].energy > w[0].energy) {
                return Err(Error::invalid(format!(
                    "energies must be strictly increasing ({} then {})",
                    w[0].energy, w[1].energy
                )));
            }
        }
        let mut seen: Vec<usize> = items.iter().map(|d| d.index).collect();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("level indices must be distinct"));
        }
        Ok(SpectralDataset { items })
    }

    /// First `count` base levels, i.e. data that change nothing.
    pub fn from_base(base: &BaseSpectrum, count: usize) -> Result<Self> {
        if count > base.len() {
            return Err(Error::invalid(format!(
                "requested {count} levels from a base spectrum of {}",
                base.len()
            )));
        }
        Self::new(
            base.levels[..count]
                .iter()
                .map(|l| SpectralDatum {
                    index: l.index,
                    energy: l.energy,
                    slope: l.slope,
                })
                .collect(),
        )
    }

    pub fn from_eigenstates(states: &[Eigenstate]) -> Result<Self> {
        Self::new(
            states
                .iter()
                .map(|s| SpectralDatum {
                    index: s.index,
                    energy: s.energy,
                    slope: s.slope,
                })
                .collect(),
        )
    }

    pub fn items(&self) -> &[SpectralDatum] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Largest base index referenced.
    pub fn max_index(&self) -> usize {
        self.items.iter().map(|d| d.index).max().unwrap_or(0)
    }

    /// Keep the first `count` levels.
    pub fn truncated(&self, count: usize) -> Result<Self> {
        Self::new(self.items.iter().take(count).copied().collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump {
    pub location: f64,
    pub size: f64,
}

/// Right-continuous-from-the-left step function `Σ_{λ_j < λ} size_j`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StepSpectralFunction {
    jumps: Vec<Jump>,
}

impl StepSpectralFunction {
    /// Builds from jumps in any order, merging those closer than `tol`.
    pub fn from_jumps(mut jumps: Vec<Jump>, tol: f64) -> Self {
        jumps.sort_by(|a, b| a.location.total_cmp(&b.location));
        let mut merged: Vec<Jump> = Vec::with_capacity(jumps.len());
        for j in jumps {
            match merged.last_mut() {
                Some(last) if (j.location - last.location).abs() <= tol => last.size += j.size,
                _ => merged.push(j),
            }
        }
        StepSpectralFunction { jumps: merged }
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        self.jumps
            .iter()
            .take_while(|j| j.location < lambda)
            .map(|j| j.size)
            .sum()
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.jumps.iter().all(|j| j.size >= 0.0)
    }

    /// Largest absolute jump, zero for the empty function.
    pub fn max_abs_jump(&self) -> f64 {
        self.jumps.iter().fold(0.0, |m, j| m.max(j.size.abs()))
    }
}

/// Energies closer than this to a base eigenvalue are taken to equal it.
pub const DEFAULT_COINCIDENCE_TOL: f64 = 1e-10;

/// Tunables shared by kernel assembly and recovery.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionOptions {
    /// Basis functions above this magnitude end the usable domain.
    pub magnitude_cap: f64,
    /// Recovery is reported on `[0, report_fraction * r_max]` at most.
    pub report_fraction: f64,
    /// The domain ends before the first node whose condition estimate exceeds this.
    pub domain_condition: f64,
    /// Condition estimates above this are treated as singular.
    pub condition_limit: f64,
    pub coincidence_tol: f64,
}

impl Default for InversionOptions {
    fn default() -> Self {
        InversionOptions {
            magnitude_cap: DEFAULT_MAGNITUDE_CAP,
            report_fraction: 0.8,
            domain_condition: 1e6,
            condition_limit: 1e12,
            coincidence_tol: DEFAULT_COINCIDENCE_TOL,
        }
    }
}

/// `ρ(λ) = Σ_{E_j<λ} s_j²`.
pub fn spectral_function(data: &SpectralDataset) -> StepSpectralFunction {
    StepSpectralFunction::from_jumps(
        data.items
            .iter()
            .map(|d| Jump {
                location: d.energy,
                size: d.slope * d.slope,
            })
            .collect(),
        0.0,
    )
}

/// Base levels replaced by `data`, in index order.
pub(crate) fn replaced_levels<'a>(
    data: &SpectralDataset,
    base: &'a BaseSpectrum,
) -> Result<Vec<&'a crate::baseline::BaseLevel>> {
    let mut idx: Vec<usize> = data.items.iter().map(|d| d.index).filter(|&j| j > 0).collect();
    idx.sort_unstable();
    idx.into_iter()
        .map(|j| {
            base.level(j).ok_or_else(|| {
                Error::invalid(format!(
                    "datum replaces base level {j} but only {} base levels are available",
                    base.len()
                ))
            })
        })
        .collect()
}

/// `σ = ρ - ρ0`, with `ρ0` restricted to the base levels the data replace.
pub fn spectral_difference(data: &SpectralDataset, base: &BaseSpectrum) -> Result<StepSpectralFunction> {
    spectral_difference_with(data, base, DEFAULT_COINCIDENCE_TOL)
}

pub fn spectral_difference_with(
    data: &SpectralDataset,
    base: &BaseSpectrum,
    tol: f64,
) -> Result<StepSpectralFunction> {
    let mut jumps: Vec<Jump> = data
        .items
        .iter()
        .map(|d| Jump {
            location: d.energy,
            size: d.slope * d.slope,
        })
        .collect();
    for level in replaced_levels(data, base)? {
        jumps.push(Jump {
            location: level.energy,
            size: -level.slope * level.slope,
        });
    }
    Ok(StepSpectralFunction::from_jumps(jumps, tol))
}
