//! The polarization-rotation waveform `g(t) = sin(W t)` on `[0, T]` and its
//! Fourier transform.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::constants::HBAR;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveProfile {
    /// Gate length in trap periods.
    pub n: u32,
    /// Full modulation periods during the gate (`n - 1` by default).
    pub cycles: u32,
    pub omega_z: f64,
    /// Modulation frequency W, rad/s.
    pub omega_mod: f64,
    /// Gate time T, s.
    pub gate_time: f64,
}

impl DriveProfile {
    /// `T = 2 pi n / wz`, `W = (1 - 1/n) wz`.
    pub fn new(n: u32, omega_z: f64) -> Result<Self> {
        Self::with_cycles(n, n.saturating_sub(1), omega_z)
    }

    /// Same gate time, `W = (cycles / n) wz`. Any integer number of cycles
    /// keeps the time average of `g` at zero.
    pub fn with_cycles(n: u32, cycles: u32, omega_z: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("n must be at least 2, got {n}")));
        }
        if cycles == 0 {
            return Err(Error::InvalidInput("modulation needs at least one cycle".into()));
        }
        if !(omega_z.is_finite() && omega_z > 0.0) {
            return Err(Error::InvalidInput(format!(
                "axial frequency must be positive, got {omega_z:e}"
            )));
        }
        Ok(Self {
            n,
            cycles,
            omega_z,
            omega_mod: cycles as f64 / n as f64 * omega_z,
            gate_time: 2.0 * PI * n as f64 / omega_z,
        })
    }

    pub fn g(&self, t: f64) -> f64 {
        if (0.0..=self.gate_time).contains(&t) {
            (self.omega_mod * t).sin()
        } else {
            0.0
        }
    }

    /// `int_0^t g`, clamped to the gate window.
    pub fn g_integral(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.gate_time);
        let half = (0.5 * self.omega_mod * t).sin();
        2.0 * half * half / self.omega_mod
    }
}

/// `sin(x)/x`.
pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `int_0^t exp(i mu s) ds`, without cancellation near `mu = 0`.
pub fn exp_integral(mu: f64, t: f64) -> Complex64 {
    let x = 0.5 * mu * t;
    Complex64::from_polar(t * sinc(x), x)
}

/// `(2 pi)^(-1/2) int_0^T sin(W t) exp(-i w t) dt` in closed form.
pub fn drive_fourier(profile: &DriveProfile, omega: f64) -> Complex64 {
    let t = profile.gate_time;
    let w = profile.omega_mod;
    let bracket = exp_integral(w - omega, t) - exp_integral(-w - omega, t);
    bracket / Complex64::new(0.0, 2.0) / (2.0 * PI).sqrt()
}

/// Mode displacement at the end of the gate for the drive
/// `f_const + f_osc g(t)` on a mode of frequency `mode_omega`.
pub fn displacement_closed(f_const: f64, f_osc: f64, profile: &DriveProfile, mode_omega: f64) -> Complex64 {
    let t = profile.gate_time;
    let constant = if mode_omega == 0.0 {
        Complex64::new(-f_const * t / HBAR, 0.0)
    } else {
        Complex64::i() * (f_const / (HBAR * mode_omega)) * (1.0 - Complex64::from_polar(1.0, -mode_omega * t))
    };
    let oscillating = -(f_osc / HBAR) * (2.0 * PI).sqrt() * drive_fourier(profile, mode_omega);
    constant + oscillating
}
