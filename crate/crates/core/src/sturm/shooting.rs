use super::numerov::{integrate, DEFAULT_OVERFLOW_CAP};
use super::{trapezoid, Eigenstate, PotentialSamples};
use crate::error::{Error, Result};

/// Knobs for the bound-state search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingConfig {
    /// Energies are sought below `q(r_max) - energy_margin`.
    pub energy_margin: f64,
    /// Step of the sign-change scan.
    pub scan_step: f64,
    /// Absolute tolerance on refined energies.
    pub energy_tol: f64,
    pub overflow_cap: f64,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        ShootingConfig {
            energy_margin: 5.0,
            scan_step: 0.25,
            energy_tol: 1e-12,
            overflow_cap: DEFAULT_OVERFLOW_CAP,
        }
    }
}

/// `φ(r_max, E)` from outward integration; its zeros are the Dirichlet
/// eigenvalues on `[0, r_max]`.
///
/// Forward shooting alone cannot resolve an eigenvalue to full accuracy
/// because the growing solution amplifies any energy error by up to
/// `Bi(r_max - E)`; [`bound_states`] uses the two-sided form below.
pub fn shoot_endpoint(pot: &PotentialSamples, energy: f64, cap: f64) -> Result<f64> {
    let (phi, overflow) = integrate(pot, energy, cap);
    match overflow {
        Some(last_valid) => Err(Error::Truncated {
            last_valid,
            r: pot.grid().r(last_valid),
        }),
        None => Ok(phi[phi.len() - 1]),
    }
}

/// Outward solution up to `m + 1` and inward solution (with `ψ(r_max) = 0`,
/// `ψ'(r_max) = -1`) down to `m - 1`, matched at the outermost turning point.
struct Matched {
    m: usize,
    outward: Vec<f64>,
    /// indexed by node; entries below `m - 1` are unused
    inward: Vec<f64>,
}

fn matching_node(pot: &PotentialSamples, energy: f64) -> usize {
    let q = pot.values();
    let n = q.len();
    let turning = q.iter().rposition(|&v| v <= energy).unwrap_or(n / 2);
    turning.clamp(2, n - 3)
}

fn integrate_inward(pot: &PotentialSamples, energy: f64, stop: usize, cap: f64) -> Result<Vec<f64>> {
    let grid = pot.grid();
    let q = pot.values();
    let n = q.len();
    let h = grid.spacing();
    let h2 = h * h;
    let g = |i: usize| q[i] - energy;
    let w = |i: usize| 1.0 - h2 * g(i) / 12.0;

    let mut psi = vec![0.0; n];
    let dq = (3.0 * q[n - 1] - 4.0 * q[n - 2] + q[n - 3]) / (2.0 * h);
    psi[n - 2] = h + g(n - 1) * h2 * h / 6.0 - dq * h2 * h2 / 12.0;
    for i in (stop + 1..n - 1).rev() {
        let prev = (2.0 * (1.0 + 5.0 * h2 * g(i) / 12.0) * psi[i] - w(i + 1) * psi[i + 1]) / w(i - 1);
        if !(prev.abs() <= cap) {
            return Err(Error::Truncated { last_valid: i, r: grid.r(i) });
        }
        psi[i - 1] = prev;
    }
    Ok(psi)
}

fn matched(pot: &PotentialSamples, energy: f64, cap: f64) -> Result<Matched> {
    let m = matching_node(pot, energy);
    let (mut outward, overflow) = integrate(pot, energy, cap);
    if let Some(last_valid) = overflow {
        if last_valid < m + 1 {
            return Err(Error::Truncated { last_valid, r: pot.grid().r(last_valid) });
        }
    }
    outward.truncate(m + 2);
    let inward = integrate_inward(pot, energy, m - 1, cap)?;
    Ok(Matched { m, outward, inward })
}

/// Scale-free Wronskian of the outward and inward solutions at the matching
/// node; vanishes exactly at the Dirichlet eigenvalues.
fn mismatch(pot: &PotentialSamples, energy: f64, cap: f64) -> Result<f64> {
    let Matched { m, outward, inward } = matched(pot, energy, cap)?;
    let h = pot.grid().spacing();
    let q = pot.values();
    let g = q[m] - energy;
    let dg = (q[m + 1] - q[m - 1]) / (2.0 * h);
    let deriv = |y: &[f64]| {
        let d = (y[m + 1] - y[m - 1]) / (2.0 * h);
        (d - h * h * dg * y[m] / 6.0) / (1.0 + h * h * g / 6.0)
    };
    let (a, da) = (outward[m], deriv(&outward));
    let (b, db) = (inward[m], deriv(&inward));
    let scale = (a.hypot(da) * b.hypot(db)).max(f64::MIN_POSITIVE);
    Ok((a * db - da * b) / scale)
}

/// The `count` lowest bound states with default settings.
pub fn bound_states(pot: &PotentialSamples, count: usize) -> Result<Vec<Eigenstate>> {
    bound_states_with(pot, count, &ShootingConfig::default())
}

pub fn bound_states_with(pot: &PotentialSamples, count: usize, cfg: &ShootingConfig) -> Result<Vec<Eigenstate>> {
    if count == 0 {
        return Err(Error::invalid("number of bound states must be at least 1"));
    }
    if pot.grid().len() < 6 {
        return Err(Error::invalid("bound-state search needs at least 6 grid nodes"));
    }
    let q = pot.values();
    let q_min = pot.min_value();
    let e_lo = q_min + 1e-6 * q_min.abs().max(1.0);
    let e_hi = q[q.len() - 1] - cfg.energy_margin;
    let insufficient = |found| Error::InsufficientDomain {
        found,
        wanted: count,
        energy_cap: e_hi,
    };
    if e_hi <= e_lo {
        return Err(insufficient(0));
    }

    let f = |e: f64| mismatch(pot, e, cfg.overflow_cap);
    let mut energies = Vec::with_capacity(count);
    let mut a = e_lo;
    let mut fa = f(a)?;
    while energies.len() < count && a < e_hi {
        let b = (a + cfg.scan_step).min(e_hi);
        let fb = f(b)?;
        if fa == 0.0 {
            energies.push(a);
        } else if fa.signum() != fb.signum() {
            energies.push(refine(&f, a, b, fa, fb, cfg.energy_tol)?);
        }
        a = b;
        fa = fb;
    }
    if energies.len() < count {
        return Err(insufficient(energies.len()));
    }

    let h = pot.grid().spacing();
    energies
        .into_iter()
        .enumerate()
        .map(|(k, energy)| {
            let phi = eigenfunction(pot, energy, cfg.overflow_cap)?;
            let sq: Vec<f64> = phi.iter().map(|p| p * p).collect();
            let norm = trapezoid(h, &sq);
            let slope = norm.sqrt().recip();
            Ok(Eigenstate {
                index: k + 1,
                energy,
                u: phi.iter().map(|p| p * slope).collect(),
                slope,
                norm,
            })
        })
        .collect()
}

/// Regular solution at an eigenvalue: outward part up to the matching node,
/// inward part rescaled to continue it.
fn eigenfunction(pot: &PotentialSamples, energy: f64, cap: f64) -> Result<Vec<f64>> {
    let Matched { m, mut outward, inward } = matched(pot, energy, cap)?;
    if inward[m] == 0.0 {
        return Err(Error::Bracketing { index: m });
    }
    let scale = outward[m] / inward[m];
    outward.truncate(m + 1);
    outward.extend(inward[m + 1..].iter().map(|v| v * scale));
    Ok(outward)
}

/// Bisection to a narrow bracket, then secant steps that stay inside it.
fn refine(
    f: &impl Fn(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    mut fb: f64,
    tol: f64,
) -> Result<f64> {
    while b - a > 1e-8 {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    for _ in 0..50 {
        let mut x = b - fb * (b - a) / (fb - fa);
        if !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        let fx = f(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        if b - a <= tol || (x - a).min(b - x) <= 0.25 * tol {
            break;
        }
    }
    Ok(if fa.abs() < fb.abs() { a } else { b })
}
