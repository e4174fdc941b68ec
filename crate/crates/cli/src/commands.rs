use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::io::read_table;
use confine::baseline::{base_spectrum, BaseSpectrum};
use confine::glinvert::{InversionOptions, RecoveryResult, SpectralDataset};
use confine::methods::MethodRegistry;
use confine::models::{ModelRegistry, PotentialModel};
use confine::sturm::{bound_states_with, PotentialSamples, RadialGrid, ShootingConfig};
use serde::Serialize;
use std::path::Path;

pub const DEFAULT_METHOD: &str = "gelfand-levitan";
pub const SINGLE_LEVEL_METHOD: &str = "single-level";

/// A registry name, or the path of an `r,p` table.
pub fn resolve_model(spec: &str) -> CliResult<Box<dyn PotentialModel>> {
    let path = Path::new(spec);
    if path.is_file() {
        return Ok(Box::new(read_table(path)?));
    }
    Ok(ModelRegistry::with_builtins().parse(spec)?)
}

fn grid(cfg: &RunConfig) -> CliResult<RadialGrid> {
    Ok(RadialGrid::new(cfg.r_max, cfg.n)?)
}

fn shooting(cfg: &RunConfig) -> ShootingConfig {
    ShootingConfig {
        energy_margin: cfg.margin,
        ..ShootingConfig::default()
    }
}

fn solve_levels(pot: &PotentialSamples, count: usize, cfg: &RunConfig) -> CliResult<SpectralDataset> {
    let states = bound_states_with(pot, count, &shooting(cfg))?;
    Ok(SpectralDataset::from_eigenstates(&states)?)
}

/// First `levels` levels of `q = r`.
pub fn base_table(cfg: &RunConfig, levels: usize) -> CliResult<SpectralDataset> {
    if levels == 0 {
        return Err(CliError::usage("number of levels must be at least 1"));
    }
    let b = base_spectrum(levels, grid(cfg)?)?;
    Ok(SpectralDataset::from_base(&b, levels)?)
}

pub fn forward(model: &dyn PotentialModel, cfg: &RunConfig) -> CliResult<SpectralDataset> {
    let levels = cfg.require_levels()?;
    let pot = model.sample(grid(cfg)?)?;
    solve_levels(&pot, levels, cfg)
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Level {
    pub j: usize,
    pub energy: f64,
    pub slope: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Discrepancy {
    pub j: usize,
    pub energy_error: f64,
    pub slope_error: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct InvertReport {
    #[serde(rename = "J")]
    pub levels: usize,
    pub method: String,
    pub retained_r_max: f64,
    pub domain_limit: String,
    pub max_condition: f64,
    /// Largest residual of the reduced linear systems.
    pub null_residual: f64,
    /// Recovered minus input, from forward-solving the recovered potential.
    pub data_space_residuals: Option<Vec<Discrepancy>>,
}

fn levels_of(data: &SpectralDataset) -> Vec<Level> {
    data.items()
        .iter()
        .map(|d| Level {
            j: d.index,
            energy: d.energy,
            slope: d.slope,
        })
        .collect()
}

fn discrepancies(input: &SpectralDataset, recovered: &SpectralDataset) -> Vec<Discrepancy> {
    input
        .items()
        .iter()
        .zip(recovered.items())
        .map(|(a, b)| Discrepancy {
            j: a.index,
            energy_error: b.energy - a.energy,
            slope_error: b.slope - a.slope,
        })
        .collect()
}

fn base_for(data: &SpectralDataset, g: RadialGrid) -> CliResult<BaseSpectrum> {
    Ok(base_spectrum(data.max_index().max(data.len()) + 2, g)?)
}

#[derive(Debug)]
pub struct Inversion {
    pub result: RecoveryResult,
    pub report: InvertReport,
    /// Levels of the recovered potential, when the forward solve succeeded.
    pub recovered: Option<SpectralDataset>,
}

pub fn invert(data: &SpectralDataset, cfg: &RunConfig, method: &str) -> CliResult<Inversion> {
    let data = match cfg.levels {
        Some(j) if j > data.len() => {
            return Err(CliError::usage(format!("--J {j} exceeds the {} levels in the dataset", data.len())));
        }
        Some(j) => data.truncated(j)?,
        None => data.clone(),
    };
    let methods = MethodRegistry::with_builtins();
    let recovery = methods.get(method)?;
    let g = grid(cfg)?;
    let base = base_for(&data, g)?;
    let opts = InversionOptions {
        magnitude_cap: cfg.magnitude_cap,
        ..InversionOptions::default()
    };
    let result = recovery.recover(&data, &base, &opts)?;
    let recovered = solve_levels(&result.extended_potential(), data.len(), cfg).ok();
    let report = InvertReport {
        levels: data.len(),
        method: recovery.name().to_string(),
        retained_r_max: result.retained_r_max(),
        domain_limit: result.limit.as_str().to_string(),
        max_condition: result.max_condition(),
        null_residual: result.max_residual(),
        data_space_residuals: recovered.as_ref().map(|r| discrepancies(&data, r)),
    };
    Ok(Inversion {
        result,
        report,
        recovered,
    })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RoundtripReport {
    pub potential: String,
    #[serde(rename = "J")]
    pub levels: usize,
    pub r_max: f64,
    pub n: usize,
    pub input: Vec<Level>,
    pub recovered: Vec<Level>,
    pub discrepancies: Vec<Discrepancy>,
    pub max_energy_error: f64,
    pub max_slope_error: f64,
    pub retained_r_max: f64,
    pub domain_limit: String,
    pub max_condition: f64,
    /// `sup |q_recovered - q|` on the retained interval; diagnostic only.
    pub potential_sup_error: f64,
}

pub fn roundtrip(model: &dyn PotentialModel, cfg: &RunConfig) -> CliResult<RoundtripReport> {
    let levels = cfg.require_levels()?;
    let truth = model.sample(grid(cfg)?)?;
    let data = solve_levels(&truth, levels, cfg)?;
    let inv = invert(&data, cfg, DEFAULT_METHOD)?;
    let recovered = match inv.recovered {
        Some(r) => r,
        None => solve_levels(&inv.result.extended_potential(), levels, cfg)?,
    };
    let disc = discrepancies(&data, &recovered);
    let potential_sup_error = inv
        .result
        .q
        .iter()
        .zip(truth.values())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    Ok(RoundtripReport {
        potential: model.describe(),
        levels,
        r_max: cfg.r_max,
        n: cfg.n,
        input: levels_of(&data),
        recovered: levels_of(&recovered),
        max_energy_error: disc.iter().fold(0.0, |m, d| m.max(d.energy_error.abs())),
        max_slope_error: disc.iter().fold(0.0, |m, d| m.max(d.slope_error.abs())),
        discrepancies: disc,
        retained_r_max: inv.report.retained_r_max,
        domain_limit: inv.report.domain_limit,
        max_condition: inv.report.max_condition,
        potential_sup_error,
    })
}
