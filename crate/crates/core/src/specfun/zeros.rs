use super::{airy_eval, AiryQuad};
use crate::error::{Error, Result};

/// Default upper limit on the number of zeros one call may request.
pub const DEFAULT_MAX_ZEROS: usize = 64;

/// The `index`-th root `value > 0` of `Ai(-E) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiZero {
    pub index: usize,
    pub value: f64,
}

fn eval_neg(e: f64) -> Result<AiryQuad> {
    airy_eval(-e)
}

/// First `n` zeros, `n <= DEFAULT_MAX_ZEROS`.
pub fn ai_negative_zeros(n: usize) -> Result<Vec<AiZero>> {
    ai_negative_zeros_up_to(n, DEFAULT_MAX_ZEROS)
}

/// First `n` zeros with an explicit limit on `n`.
pub fn ai_negative_zeros_up_to(n: usize, max: usize) -> Result<Vec<AiZero>> {
    if n == 0 || n > max {
        return Err(Error::invalid(format!(
            "number of Airy zeros must be in 1..={max}, got {n}"
        )));
    }
    let mut zeros = Vec::with_capacity(n);
    let mut lo = 1.0f64;
    let mut f_lo = eval_neg(lo)?.ai;
    while zeros.len() < n {
        let index = zeros.len() + 1;
        // zero spacing shrinks like π/√E; keep several steps per gap
        let step = (0.5 / lo.sqrt()).min(1.0);
        let hi = lo + step;
        let f_hi = eval_neg(hi).map_err(|_| Error::Bracketing { index })?.ai;
        if f_lo == 0.0 {
            zeros.push(AiZero { index, value: lo });
        } else if f_lo.signum() != f_hi.signum() {
            let value = refine(lo, hi, f_lo, index)?;
            zeros.push(AiZero { index, value });
        }
        lo = hi;
        f_lo = f_hi;
        if lo > -super::AIRY_MIN {
            return Err(Error::Bracketing { index });
        }
    }
    Ok(zeros)
}

/// Bisection down to a narrow bracket, then Newton steps on `Ai(-E)` using
/// the available derivative, kept inside the bracket.
fn refine(mut lo: f64, mut hi: f64, mut f_lo: f64, index: usize) -> Result<f64> {
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        let f_mid = eval_neg(mid)?.ai;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let mut e = 0.5 * (lo + hi);
    for _ in 0..20 {
        let q = eval_neg(e)?;
        // d/dE Ai(-E) = -Ai'(-E)
        let step = q.ai / -q.ai_prime;
        let next = e - step;
        if !(lo - 1e-9..=hi + 1e-9).contains(&next) {
            return Err(Error::Bracketing { index });
        }
        e = next;
        if step.abs() <= 4.0 * f64::EPSILON * e {
            break;
        }
    }
    Ok(e)
}
