//! Airy functions on the real line and the negative zeros of Ai.
//!
//! `|x| <= SERIES_SWITCH` uses the Maclaurin expansion summed in
//! double-double arithmetic, which keeps the cancellation between the two
//! auxiliary series from eating the result. Beyond the switch the standard
//! asymptotic expansions are used, truncated at their smallest term
//! (DLMF 9.7.5-9.7.12).

mod dd;
mod zeros;

pub use zeros::{ai_negative_zeros, ai_negative_zeros_up_to, AiZero, DEFAULT_MAX_ZEROS};

use crate::error::{Error, Result};
use dd::Dd;
use std::f64::consts::{FRAC_1_PI, FRAC_PI_4};

/// Supported argument interval of [`airy_eval`].
pub const AIRY_MIN: f64 = -100.0;
pub const AIRY_MAX: f64 = 100.0;

/// Crossover between the Maclaurin and asymptotic branches.
pub const SERIES_SWITCH: f64 = 8.0;

const INV_SQRT_PI: f64 = 0.564_189_583_547_756_3;

// Ai(0), -Ai'(0), Bi(0), Bi'(0) as double-double pairs.
const AI0: Dd = Dd::new(0.3550280538878172, 2.05233632436212e-17);
const MINUS_AI1: Dd = Dd::new(0.2588194037928068, -2.522243111610832e-17);
const BI0: Dd = Dd::new(0.6149266274460007, 5.0899207794891416e-17);
const BI1: Dd = Dd::new(0.4482883573538264, -2.5363237774417305e-17);

/// Ai, Ai', Bi, Bi' at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryQuad {
    pub ai: f64,
    pub ai_prime: f64,
    pub bi: f64,
    pub bi_prime: f64,
}

impl AiryQuad {
    /// Ai·Bi' − Ai'·Bi, identically 1/π.
    pub fn wronskian(&self) -> f64 {
        self.ai * self.bi_prime - self.ai_prime * self.bi
    }
}

/// Evaluate all four Airy values at `x`.
pub fn airy_eval(x: f64) -> Result<AiryQuad> {
    if !(AIRY_MIN..=AIRY_MAX).contains(&x) {
        return Err(Error::OutOfRange {
            x,
            min: AIRY_MIN,
            max: AIRY_MAX,
        });
    }
    if x.abs() <= SERIES_SWITCH {
        Ok(airy_maclaurin(x))
    } else {
        Ok(airy_asymptotic(x))
    }
}

/// Ai(x) alone.
pub fn ai(x: f64) -> Result<f64> {
    airy_eval(x).map(|q| q.ai)
}

/// Maclaurin branch, valid for any `x` but only accurate for moderate `|x|`.
pub fn airy_maclaurin(x: f64) -> AiryQuad {
    let x2 = Dd::square(x);
    let x3 = x2.mul_f64(x);

    // f = Σ 3^k (1/3)_k x^{3k} / (3k)!,  g = Σ 3^k (2/3)_k x^{3k+1} / (3k+1)!
    let mut f = Dd::from_f64(1.0);
    let mut g = Dd::from_f64(x);
    let mut fp = Dd::ZERO;
    let mut gp = Dd::from_f64(1.0);

    let mut tf = Dd::from_f64(1.0);
    let mut tg = Dd::from_f64(x);
    let mut tfp = x2.div_f64(2.0);
    let mut tgp = Dd::from_f64(1.0);
    fp = fp.add(tfp);

    for k in 1..400usize {
        let kf = k as f64;
        tf = tf.mul(x3).div_f64((3.0 * kf - 1.0) * (3.0 * kf));
        tg = tg.mul(x3).div_f64((3.0 * kf) * (3.0 * kf + 1.0));
        tgp = tgp.mul(x3).div_f64((3.0 * kf - 2.0) * (3.0 * kf));
        if k >= 2 {
            tfp = tfp.mul(x3).div_f64((3.0 * kf - 3.0) * (3.0 * kf - 1.0));
            fp = fp.add(tfp);
        }
        f = f.add(tf);
        g = g.add(tg);
        gp = gp.add(tgp);

        let scale = f.hi.abs() + g.hi.abs() + fp.hi.abs() + gp.hi.abs();
        let last = tf.hi.abs() + tg.hi.abs() + tfp.hi.abs() + tgp.hi.abs();
        // terms keep growing while 3k < |x|, so only stop once past that
        if 3.0 * kf > x.abs() && last <= 1e-34 * scale {
            break;
        }
    }

    AiryQuad {
        ai: AI0.mul(f).sub(MINUS_AI1.mul(g)).to_f64(),
        ai_prime: AI0.mul(fp).sub(MINUS_AI1.mul(gp)).to_f64(),
        bi: BI0.mul(f).add(BI1.mul(g)).to_f64(),
        bi_prime: BI0.mul(fp).add(BI1.mul(gp)).to_f64(),
    }
}

/// Terms `u_k ζ^{-k}` and `v_k ζ^{-k}` up to (excluding) the point where
/// the `u` terms stop decreasing.
fn asymptotic_terms(zeta: f64) -> (Vec<f64>, Vec<f64>) {
    let mut us: Vec<f64> = vec![1.0];
    let mut vs: Vec<f64> = vec![1.0];
    let mut u = 1.0f64;
    let mut zk = 1.0f64;
    for k in 1..200usize {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -u * (6.0 * kf + 1.0) / (6.0 * kf - 1.0);
        zk /= zeta;
        let tu = u * zk;
        let tv = v * zk;
        let prev_u = us[us.len() - 1];
        let prev_v = vs[vs.len() - 1];
        if tu.abs() >= prev_u.abs() || tv.abs() >= prev_v.abs() {
            break;
        }
        us.push(tu);
        vs.push(tv);
        if tu.abs() < 1e-17 && tv.abs() < 1e-17 {
            break;
        }
    }
    (us, vs)
}

/// Asymptotic branch; meaningful only for `|x|` well away from zero.
pub fn airy_asymptotic(x: f64) -> AiryQuad {
    let z = x.abs();
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let z14 = z.sqrt().sqrt();
    let (us, vs) = asymptotic_terms(zeta);

    if x > 0.0 {
        let alt = |ts: &[f64]| {
            ts.iter()
                .enumerate()
                .map(|(k, t)| if k % 2 == 0 { *t } else { -*t })
                .sum::<f64>()
        };
        let plain = |ts: &[f64]| ts.iter().sum::<f64>();
        let decay = (-zeta).exp();
        let grow = zeta.exp();
        AiryQuad {
            ai: 0.5 * INV_SQRT_PI / z14 * decay * alt(&us),
            ai_prime: -0.5 * INV_SQRT_PI * z14 * decay * alt(&vs),
            bi: INV_SQRT_PI / z14 * grow * plain(&us),
            bi_prime: INV_SQRT_PI * z14 * grow * plain(&vs),
        }
    } else {
        // even/odd parts with alternating signs
        let split = |ts: &[f64]| {
            let mut even = 0.0;
            let mut odd = 0.0;
            for (k, t) in ts.iter().enumerate() {
                let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
                if k % 2 == 0 {
                    even += sign * t;
                } else {
                    odd += sign * t;
                }
            }
            (even, odd)
        };
        let (pu, qu) = split(&us);
        let (pv, qv) = split(&vs);
        let (s, c) = (zeta - FRAC_PI_4).sin_cos();
        AiryQuad {
            ai: INV_SQRT_PI / z14 * (c * pu + s * qu),
            ai_prime: INV_SQRT_PI * z14 * (s * pv - c * qv),
            bi: INV_SQRT_PI / z14 * (-s * pu + c * qu),
            bi_prime: INV_SQRT_PI * z14 * (c * pv + s * qv),
        }
    }
}

/// The constant value of the Wronskian, 1/π.
pub const WRONSKIAN: f64 = FRAC_1_PI;
