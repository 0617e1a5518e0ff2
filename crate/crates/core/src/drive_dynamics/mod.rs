//! Driven-oscillator dynamics of the two axial modes: displacement `beta(t)`
//! and geometric phase `phi(t)` for each two-ion basis state.

pub mod exact;
pub mod numeric;
pub mod oracle;
pub mod waveform;

use std::io::Write;

use num_complex::Complex64;

pub use oracle::{ode_oracle, OraclePoint, DEFAULT_STEPS_PER_PERIOD};
pub use waveform::{displacement_closed, drive_fourier, exp_integral, DriveProfile};

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::numerics::QuadSettings;
use crate::trap_mechanics::{BasisState, ForceCoefficients, Mode};

/// Trajectory samples per trap period used when none is requested.
pub const DEFAULT_POINTS_PER_PERIOD: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub beta: Complex64,
    pub phi: f64,
}

/// Output of a single-mode integration.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeTrajectory {
    pub beta_final: Complex64,
    pub phi_final: f64,
    pub samples: Vec<TrajectoryPoint>,
}

impl ModeTrajectory {
    pub fn max_displacement(&self) -> f64 {
        self.samples
            .iter()
            .map(|p| p.beta.norm())
            .fold(self.beta_final.norm(), f64::max)
    }
}

/// A trajectory labelled with its mode and basis state.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeResult {
    pub mode: Mode,
    pub basis_state: BasisState,
    pub beta_final: Complex64,
    pub phi_final: f64,
    pub trajectory: Vec<TrajectoryPoint>,
}

/// `n * points_per_period + 1` equally spaced times covering `[0, T]`.
pub fn uniform_grid(profile: &DriveProfile, points_per_period: usize) -> Vec<f64> {
    let intervals = profile.n as usize * points_per_period.max(1);
    uniform_times(profile.gate_time, intervals)
}

/// `intervals + 1` equally spaced times on `[0, t_end]`.
pub fn uniform_times(t_end: f64, intervals: usize) -> Vec<f64> {
    (0..=intervals)
        .map(|k| {
            if k == intervals {
                t_end
            } else {
                t_end * k as f64 / intervals as f64
            }
        })
        .collect()
}

pub(crate) fn check_samples(samples: &[f64], profile: &DriveProfile) -> Result<()> {
    let mut prev = 0.0;
    for &t in samples {
        if !(t >= prev && t <= profile.gate_time) {
            return Err(Error::InvalidInput(format!(
                "sample times must be ascending inside [0, {:e}] s, got {t:e}",
                profile.gate_time
            )));
        }
        prev = t;
    }
    Ok(())
}

/// Integrates the drive `f_const + f_osc g(t)` on a mode of frequency
/// `mode_omega` from closed-form antiderivatives.
pub fn integrate_mode(
    f_const: f64,
    f_osc: f64,
    profile: &DriveProfile,
    mode_omega: f64,
    samples: &[f64],
) -> Result<ModeTrajectory> {
    check_samples(samples, profile)?;
    let drive = exact::ExponentialDrive::from_profile(f_const, f_osc, profile);
    let at = |t: f64| TrajectoryPoint {
        t,
        beta: drive.beta(mode_omega, t),
        phi: drive.phase(mode_omega, t),
    };
    let end = at(profile.gate_time);
    Ok(ModeTrajectory {
        beta_final: end.beta,
        phi_final: end.phi,
        samples: samples.iter().map(|&t| at(t)).collect(),
    })
}

/// Same as [`integrate_mode`] but by adaptive quadrature of the defining
/// integrals between consecutive sample times.
pub fn integrate_mode_quadrature(
    f_const: f64,
    f_osc: f64,
    profile: &DriveProfile,
    mode_omega: f64,
    samples: &[f64],
    settings: &QuadSettings,
) -> Result<ModeTrajectory> {
    check_samples(samples, profile)?;
    let h = numeric::integrand(f_const, f_osc, *profile, mode_omega);
    let mut state = numeric::QuadratureState {
        h: Complex64::new(0.0, 0.0),
        phi: 0.0,
    };
    let mut t = 0.0;
    let mut out = Vec::with_capacity(samples.len());
    for &s in samples {
        state = numeric::advance(state, &h, t, s, settings)?;
        t = s;
        out.push(TrajectoryPoint {
            t,
            beta: -state.h,
            phi: state.phi,
        });
    }
    state = numeric::advance(state, &h, t, profile.gate_time, settings)?;
    Ok(ModeTrajectory {
        beta_final: -state.h,
        phi_final: state.phi,
        samples: out,
    })
}

/// Runs one mode for one basis state with the drive implied by `coeffs`.
pub fn simulate_mode(
    coeffs: &ForceCoefficients,
    profile: &DriveProfile,
    mode: Mode,
    basis_state: BasisState,
    samples: &[f64],
) -> Result<ModeResult> {
    let (f_const, f_osc) = coeffs.drive(mode, basis_state);
    let r = integrate_mode(f_const, f_osc, profile, mode.frequency(profile.omega_z), samples)?;
    Ok(ModeResult {
        mode,
        basis_state,
        beta_final: r.beta_final,
        phi_final: r.phi_final,
        trajectory: r.samples,
    })
}

/// Per-mode, per-basis-state phases (indexed by [`BasisState::index`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSet {
    pub com: [f64; 4],
    pub breathing: [f64; 4],
    /// `sum over modes of phi(dd) - phi(du) - phi(ud) + phi(uu)`.
    pub effective_phase: f64,
}

impl PhaseSet {
    pub fn from_phases(com: [f64; 4], breathing: [f64; 4]) -> Self {
        Self {
            com,
            breathing,
            effective_phase: zz(&com) + zz(&breathing),
        }
    }

    pub fn mode(&self, mode: Mode) -> &[f64; 4] {
        match mode {
            Mode::CenterOfMass => &self.com,
            Mode::Breathing => &self.breathing,
        }
    }

    pub fn get(&self, mode: Mode, state: BasisState) -> f64 {
        self.mode(mode)[state.index()]
    }

    /// Entangling contribution of one mode.
    pub fn mode_effective(&self, mode: Mode) -> f64 {
        zz(self.mode(mode))
    }
}

/// `phi(dd) - phi(du) - phi(ud) + phi(uu)`.
pub fn zz(p: &[f64; 4]) -> f64 {
    p[0] - p[1] - p[2] + p[3]
}

/// Leading-order end-of-gate phases in terms of the f-coefficients.
pub fn mode_phases_closed(coeffs: &ForceCoefficients, profile: &DriveProfile) -> PhaseSet {
    let wz = profile.omega_z;
    let w = profile.omega_mod;
    let t = profile.gate_time;
    let com_factor = 2.0 * wz * t / (wz * wz - w * w) / (4.0 * HBAR * HBAR);
    let wb = 3f64.sqrt() * wz;
    let breathing_factor = 2.0 * wb * t / (wb * wb - w * w) / (4.0 * HBAR * HBAR);
    let c_same = coeffs.f1_plus.powi(2) * com_factor;
    let c_mixed = coeffs.f2_plus.powi(2) * com_factor;
    let b_same = coeffs.f1_minus.powi(2) * breathing_factor;
    let b_mixed = coeffs.f2_minus.powi(2) * breathing_factor;
    PhaseSet::from_phases(
        [c_same, c_mixed, c_mixed, c_same],
        [b_same, b_mixed, b_mixed, b_same],
    )
}

/// End-of-gate phases from the exact antiderivatives, including the
/// state-independent force.
pub fn mode_phases_exact(coeffs: &ForceCoefficients, profile: &DriveProfile) -> PhaseSet {
    let mut out = [[0.0; 4]; 2];
    for (m, mode) in Mode::ALL.into_iter().enumerate() {
        let omega = mode.frequency(profile.omega_z);
        for state in BasisState::ALL {
            let (fc, fo) = coeffs.drive(mode, state);
            out[m][state.index()] =
                exact::ExponentialDrive::from_profile(fc, fo, profile).phase(omega, profile.gate_time);
        }
    }
    PhaseSet::from_phases(out[0], out[1])
}

/// End-of-gate phases by adaptive quadrature on `intervals` equal pieces.
pub fn mode_phases_quadrature(
    coeffs: &ForceCoefficients,
    profile: &DriveProfile,
    intervals: usize,
    settings: &QuadSettings,
) -> Result<PhaseSet> {
    let grid = uniform_times(profile.gate_time, intervals.max(1));
    let mut out = [[0.0; 4]; 2];
    for (m, mode) in Mode::ALL.into_iter().enumerate() {
        let omega = mode.frequency(profile.omega_z);
        for state in BasisState::ALL {
            let (fc, fo) = coeffs.drive(mode, state);
            out[m][state.index()] =
                integrate_mode_quadrature(fc, fo, profile, omega, &grid, settings)?.phi_final;
        }
    }
    Ok(PhaseSet::from_phases(out[0], out[1]))
}

/// Phase `-U_const T / hbar` from the time-independent light shift.
pub fn stark_phase(u_const: f64, profile: &DriveProfile) -> f64 {
    -u_const * profile.gate_time / HBAR
}

/// Phase from a light shift `u_osc g(t)`; zero for any profile because the
/// modulation completes whole cycles.
pub fn oscillatory_stark_phase(u_osc: f64, profile: &DriveProfile) -> f64 {
    -u_osc * profile.g_integral(profile.gate_time) / HBAR
}

/// `-2 x` the signed area swept by the polyline `beta_0, beta_1, ...` as
/// seen from the origin (positive for clockwise motion).
pub fn shoelace_phase(points: &[Complex64]) -> f64 {
    let twice_area: f64 = points
        .windows(2)
        .map(|w| w[0].re * w[1].im - w[1].re * w[0].im)
        .sum();
    -twice_area
}

/// Writes `t,re_beta,im_beta,phi` rows with round-trip precision.
pub fn write_trajectory_csv<W: Write>(mut out: W, samples: &[TrajectoryPoint]) -> std::io::Result<()> {
    writeln!(out, "t,re_beta,im_beta,phi")?;
    // Adding 0.0 turns -0 into 0.
    for p in samples {
        writeln!(
            out,
            "{:e},{:e},{:e},{:e}",
            p.t + 0.0,
            p.beta.re + 0.0,
            p.beta.im + 0.0,
            p.phi + 0.0
        )?;
    }
    Ok(())
}
