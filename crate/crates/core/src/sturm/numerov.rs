use super::{PotentialSamples, RegularSolution};
use crate::error::{Error, Result};

/// Magnitude at which the forward integrator gives up.
pub const DEFAULT_OVERFLOW_CAP: f64 = 1e250;

/// Numerov recursion for `φ'' = (q - E) φ`, `φ(0) = 0`, `φ'(0) = 1`.
///
/// Returns the values up to the last node below `cap`; the second element
/// is `Some(i)` when node `i + 1` would have exceeded it.
pub(crate) fn integrate(pot: &PotentialSamples, energy: f64, cap: f64) -> (Vec<f64>, Option<usize>) {
    let grid = pot.grid();
    let n = grid.len();
    let h = grid.spacing();
    let h2 = h * h;
    let q = pot.values();

    let mut phi = Vec::with_capacity(n);
    phi.push(0.0);
    if n == 1 {
        return (phi, None);
    }

    // Taylor start: φ''' (0) = q(0) - E, φ''''(0) = 2 q'(0)
    let dq0 = if n >= 3 {
        (-3.0 * q[0] + 4.0 * q[1] - q[2]) / (2.0 * h)
    } else {
        (q[1] - q[0]) / h
    };
    phi.push(h + (q[0] - energy) * h2 * h / 6.0 + dq0 * h2 * h2 / 12.0);

    let w = |i: usize| 1.0 - h2 * (q[i] - energy) / 12.0;
    for i in 1..n - 1 {
        let next = (2.0 * (1.0 + 5.0 * h2 * (q[i] - energy) / 12.0) * phi[i] - w(i - 1) * phi[i - 1]) / w(i + 1);
        if !(next.abs() <= cap) {
            return (phi, Some(i));
        }
        phi.push(next);
    }
    (phi, None)
}

/// Fourth-order derivative recovered from Numerov samples.
///
/// Central difference corrected by `φ''' = g' φ + g φ'` with `g = q - E`.
fn derivative(pot: &PotentialSamples, energy: f64, phi: &[f64]) -> Vec<f64> {
    let h = pot.grid().spacing();
    let h2 = h * h;
    let q = pot.values();
    let n = phi.len();
    let mut out = vec![0.0; n];
    out[0] = 1.0;
    if n < 3 {
        if n == 2 {
            out[1] = (phi[1] - phi[0]) / h;
        }
        return out;
    }
    for i in 1..n - 1 {
        let g = q[i] - energy;
        let dg = (q[i + 1] - q[i - 1]) / (2.0 * h);
        let d = (phi[i + 1] - phi[i - 1]) / (2.0 * h);
        out[i] = (d - h2 * dg * phi[i] / 6.0) / (1.0 + h2 * g / 6.0);
    }
    let i = n - 1;
    let g = q[i] - energy;
    let dg = (3.0 * q[i] - 4.0 * q[i - 1] + q[i - 2]) / (2.0 * h);
    let d = (3.0 * phi[i] - 4.0 * phi[i - 1] + phi[i - 2]) / (2.0 * h);
    out[i] = (d + h2 * dg * phi[i] / 3.0) / (1.0 - h2 * g / 3.0);
    out
}

/// Regular solution on the full grid of `pot`.
///
/// Fails with [`Error::Truncated`] when `|φ|` passes [`DEFAULT_OVERFLOW_CAP`].
pub fn regular_solution(pot: &PotentialSamples, energy: f64) -> Result<RegularSolution> {
    regular_solution_capped(pot, energy, DEFAULT_OVERFLOW_CAP)
}

pub fn regular_solution_capped(pot: &PotentialSamples, energy: f64, cap: f64) -> Result<RegularSolution> {
    if !energy.is_finite() {
        return Err(Error::invalid(format!("energy must be finite, got {energy}")));
    }
    let (phi, overflow) = integrate(pot, energy, cap);
    if let Some(last_valid) = overflow {
        return Err(Error::Truncated {
            last_valid,
            r: pot.grid().r(last_valid),
        });
    }
    let phi_prime = derivative(pot, energy, &phi);
    Ok(RegularSolution {
        energy,
        grid: *pot.grid(),
        phi,
        phi_prime,
    })
}
