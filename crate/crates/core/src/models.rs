//! Named potential families `q(r) = r + p(r)`, selected at runtime from a
//! spec string like `linear+gauss:0.2,1.0,0.5`.

use crate::error::{Error, Result};
use crate::sturm::{PotentialSamples, RadialGrid};
use std::collections::BTreeMap;

pub trait PotentialModel: Send + Sync {
    /// Canonical spec string that reproduces this model.
    fn describe(&self) -> String;

    /// `p(r) = q(r) - r`.
    fn perturbation(&self, r: f64) -> f64;

    fn sample(&self, grid: RadialGrid) -> Result<PotentialSamples> {
        PotentialSamples::from_fn(grid, |r| r + self.perturbation(r), true)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Linear;

impl PotentialModel for Linear {
    fn describe(&self) -> String {
        "linear".into()
    }

    fn perturbation(&self, _r: f64) -> f64 {
        0.0
    }
}

/// `p = a e^{-k r}`.
#[derive(Debug, Clone, Copy)]
pub struct Exponential {
    pub amplitude: f64,
    pub rate: f64,
}

impl PotentialModel for Exponential {
    fn describe(&self) -> String {
        format!("linear+exp:{},{}", self.amplitude, self.rate)
    }

    fn perturbation(&self, r: f64) -> f64 {
        self.amplitude * (-self.rate * r).exp()
    }
}

/// `p = a exp(-((r - mu) / w)²)`.
#[derive(Debug, Clone, Copy)]
pub struct Gaussian {
    pub amplitude: f64,
    pub center: f64,
    pub width: f64,
}

impl PotentialModel for Gaussian {
    fn describe(&self) -> String {
        format!("linear+gauss:{},{},{}", self.amplitude, self.center, self.width)
    }

    fn perturbation(&self, r: f64) -> f64 {
        let z = (r - self.center) / self.width;
        self.amplitude * (-z * z).exp()
    }
}

/// Piecewise-linear `p` through `(r_k, p_k)`, held constant outside the table.
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    label: String,
    r: Vec<f64>,
    p: Vec<f64>,
}

impl Tabulated {
    pub fn new(label: impl Into<String>, r: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if r.is_empty() || r.len() != p.len() {
            return Err(Error::invalid(format!(
                "table needs matching nonempty columns, got {} and {}",
                r.len(),
                p.len()
            )));
        }
        if r.iter().chain(&p).any(|v| !v.is_finite()) {
            return Err(Error::invalid("table holds a non-finite value"));
        }
        if r.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("table abscissae must be strictly increasing"));
        }
        Ok(Tabulated {
            label: label.into(),
            r,
            p,
        })
    }
}

impl PotentialModel for Tabulated {
    fn describe(&self) -> String {
        self.label.clone()
    }

    fn perturbation(&self, r: f64) -> f64 {
        let n = self.r.len();
        if r <= self.r[0] {
            return self.p[0];
        }
        if r >= self.r[n - 1] {
            return self.p[n - 1];
        }
        let k = self.r.partition_point(|&x| x <= r);
        let (r0, r1) = (self.r[k - 1], self.r[k]);
        let t = (r - r0) / (r1 - r0);
        self.p[k - 1] + t * (self.p[k] - self.p[k - 1])
    }
}

type Builder = fn(&[f64]) -> Result<Box<dyn PotentialModel>>;

struct Family {
    params: &'static [&'static str],
    build: Builder,
}

/// Potential families keyed by name.
pub struct ModelRegistry {
    families: BTreeMap<String, Family>,
}

impl Default for ModelRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

impl ModelRegistry {
    pub fn empty() -> Self {
        ModelRegistry {
            families: BTreeMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut reg = Self::empty();
        reg.register("linear", &[], |_| Ok(Box::new(Linear)));
        reg.register("linear+exp", &["a", "k"], |v| {
            Ok(Box::new(Exponential {
                amplitude: v[0],
                rate: v[1],
            }))
        });
        reg.register("linear+gauss", &["a", "mu", "w"], |v| {
            if !(v[2] > 0.0) {
                return Err(Error::invalid(format!("gaussian width must be positive, got {}", v[2])));
            }
            Ok(Box::new(Gaussian {
                amplitude: v[0],
                center: v[1],
                width: v[2],
            }))
        });
        reg
    }

    pub fn register(&mut self, name: &str, params: &'static [&'static str], build: Builder) {
        self.families.insert(name.to_string(), Family { params, build });
    }

    pub fn names(&self) -> Vec<&str> {
        self.families.keys().map(String::as_str).collect()
    }

    /// Parses `name` or `name:v1,v2,...`.
    pub fn parse(&self, spec: &str) -> Result<Box<dyn PotentialModel>> {
        let spec = spec.trim();
        let (name, args) = match spec.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a)),
            None => (spec, None),
        };
        let family = self.families.get(name).ok_or_else(|| Error::UnknownName {
            kind: "potential",
            name: name.to_string(),
            available: self.names().join(", "),
        })?;
        let values: Vec<f64> = match args {
            None => Vec::new(),
            Some(a) => a
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| Error::invalid(format!("bad parameter '{t}' in '{spec}'")))
                })
                .collect::<Result<_>>()?,
        };
        if values.len() != family.params.len() {
            let sig = if family.params.is_empty() {
                name.to_string()
            } else {
                format!("{name}:{}", family.params.join(","))
            };
            return Err(Error::invalid(format!("'{spec}' does not match '{sig}'")));
        }
        (family.build)(&values)
    }
}
