//! Recovery strategies keyed by name.

use crate::baseline::BaseSpectrum;
use crate::error::{Error, Result};
use crate::glinvert::{recover_potential, single_level_potential, InversionOptions, RecoveryResult, SpectralDataset};
use std::collections::BTreeMap;

pub trait RecoveryMethod: Send + Sync {
    fn name(&self) -> &'static str;

    /// Recovers `q` on the grid of `base`.
    fn recover(&self, data: &SpectralDataset, base: &BaseSpectrum, opts: &InversionOptions) -> Result<RecoveryResult>;
}

/// The degenerate-kernel solver for any finite dataset.
#[derive(Debug, Clone, Copy, Default)]
pub struct GelfandLevitan;

impl RecoveryMethod for GelfandLevitan {
    fn name(&self) -> &'static str {
        "gelfand-levitan"
    }

    fn recover(&self, data: &SpectralDataset, base: &BaseSpectrum, opts: &InversionOptions) -> Result<RecoveryResult> {
        recover_potential(data, base, base.grid, opts)
    }
}

/// Closed form for one inserted level below the base spectrum.
#[derive(Debug, Clone, Copy, Default)]
pub struct SingleLevel;

impl RecoveryMethod for SingleLevel {
    fn name(&self) -> &'static str {
        "single-level"
    }

    fn recover(&self, data: &SpectralDataset, base: &BaseSpectrum, _opts: &InversionOptions) -> Result<RecoveryResult> {
        match data.items() {
            [d] if d.index == 0 => single_level_potential(d.energy, d.slope, base.grid),
            _ => Err(Error::invalid(
                "single-level recovery needs exactly one inserted level (j = 0)",
            )),
        }
    }
}

pub struct MethodRegistry {
    methods: BTreeMap<&'static str, Box<dyn RecoveryMethod>>,
}

impl Default for MethodRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

impl MethodRegistry {
    pub fn empty() -> Self {
        MethodRegistry {
            methods: BTreeMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(GelfandLevitan));
        reg.register(Box::new(SingleLevel));
        reg
    }

    pub fn register(&mut self, method: Box<dyn RecoveryMethod>) {
        self.methods.insert(method.name(), method);
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.methods.keys().copied().collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn RecoveryMethod> {
        self.methods.get(name).map(|m| m.as_ref()).ok_or_else(|| Error::UnknownName {
            kind: "recovery method",
            name: name.to_string(),
            available: self.names().join(", "),
        })
    }
}
