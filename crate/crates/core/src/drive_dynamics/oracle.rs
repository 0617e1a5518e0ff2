//! Classical driven oscillator integrated with fixed-step RK4, used as an
//! independent check of the displacement integrals.

use num_complex::Complex64;

use super::waveform::DriveProfile;
use crate::constants::HBAR;
use crate::error::{Error, Result};

pub const MIN_STEPS_PER_PERIOD: usize = 200;
pub const DEFAULT_STEPS_PER_PERIOD: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OraclePoint {
    pub t: f64,
    /// Position in units of the oscillator length (times two).
    pub q: f64,
    /// Momentum in the same units.
    pub p: f64,
    /// Interaction-frame displacement built from `(q, p)`.
    pub beta: Complex64,
}

/// Integrates `q' = w p`, `p' = -w q - 2 f(t)/hbar` from rest and samples
/// it at `samples` (ascending, inside `[0, T]`).
pub fn ode_oracle(
    f_const: f64,
    f_osc: f64,
    profile: &DriveProfile,
    mode_omega: f64,
    samples: &[f64],
    steps_per_period: usize,
) -> Result<Vec<OraclePoint>> {
    if steps_per_period < MIN_STEPS_PER_PERIOD {
        return Err(Error::InvalidInput(format!(
            "oracle needs at least {MIN_STEPS_PER_PERIOD} steps per period, got {steps_per_period}"
        )));
    }
    if mode_omega.is_nan() || mode_omega <= 0.0 {
        return Err(Error::InvalidInput("oracle needs a positive mode frequency".into()));
    }
    super::check_samples(samples, profile)?;
    let force = |t: f64| 2.0 * (f_const + f_osc * profile.g(t)) / HBAR;
    let rhs = |t: f64, q: f64, p: f64| (mode_omega * p, -mode_omega * q - force(t));
    let max_step = 2.0 * std::f64::consts::PI / mode_omega / steps_per_period as f64;

    let point = |t: f64, q: f64, p: f64| OraclePoint {
        t,
        q,
        p,
        beta: Complex64::i() * Complex64::from_polar(1.0, -mode_omega * t) * Complex64::new(q, -p) / 2.0,
    };

    let mut out = Vec::with_capacity(samples.len());
    let (mut t, mut q, mut p) = (0.0, 0.0, 0.0);
    for &target in samples {
        let span = target - t;
        let steps = (span / max_step).ceil() as usize;
        if steps > 0 {
            let h = span / steps as f64;
            for k in 0..steps {
                let t0 = t + k as f64 * h;
                let (k1q, k1p) = rhs(t0, q, p);
                let (k2q, k2p) = rhs(t0 + h / 2.0, q + h / 2.0 * k1q, p + h / 2.0 * k1p);
                let (k3q, k3p) = rhs(t0 + h / 2.0, q + h / 2.0 * k2q, p + h / 2.0 * k2p);
                let (k4q, k4p) = rhs(t0 + h, q + h * k3q, p + h * k3p);
                q += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
                p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            }
        }
        t = target;
        out.push(point(t, q, p));
    }
    Ok(out)
}
