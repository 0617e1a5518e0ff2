//! Laser parameters for the Controlled-Z condition, scattering-limited
//! fidelity and wavelength sweeps.

use std::f64::consts::{E, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::atomic_physics::{
    dipole_coefficients_guarded, scattering_coefficient_guarded, DipoleCoefficients, GuardBand, IonSpecies,
};
use crate::constants::{angular_frequency, HBAR};
use crate::drive_dynamics::{displacement_closed, mode_phases_closed, mode_phases_exact, DriveProfile, PhaseSet};
use crate::error::{Error, Result};
use crate::numerics::{brent, RootSettings};
use crate::trap_mechanics::{
    resolve_placement, BasisState, BeamConfig, ForceCoefficients, Geometry, IonPlacement, Mode, TrapConfig,
};

/// Scattering probabilities above this trigger a warning: `P = Gamma T`
/// only holds for `Gamma T << 1`.
pub const SCATTERING_WARNING: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignOptions {
    pub guard: GuardBand,
    /// Per-beam power above which a design is declared unreachable, W.
    pub power_cap: f64,
    pub root: RootSettings,
}

impl Default for DesignOptions {
    fn default() -> Self {
        Self {
            guard: GuardBand::default(),
            power_cap: 1e6,
            root: RootSettings::default(),
        }
    }
}

/// Total power of a Gaussian beam with peak intensity `i0`, per beam.
pub fn required_power(i0: f64, waist: f64, _geometry: Geometry) -> f64 {
    i0 * PI * waist * waist / 2.0
}

fn differential(species: &IonSpecies, omega_laser: f64, guard: GuardBand) -> Result<DipoleCoefficients> {
    let d = dipole_coefficients_guarded(species, omega_laser, guard)?;
    if d.differential() == 0.0 || !d.differential().is_finite() {
        return Err(Error::DifferentialCancellation {
            omega_laser,
            differential: d.differential(),
        });
    }
    Ok(d)
}

/// Leading-order peak intensity `sqrt(2 e hbar wz^3 m W^2 / (n dpsi)^2)`
/// for the single-flank geometries.
pub fn required_intensity(
    species: &IonSpecies,
    trap: &TrapConfig,
    waist: f64,
    n: u32,
    omega_laser: f64,
) -> Result<f64> {
    required_intensity_with(species, trap, waist, n, omega_laser, &DesignOptions::default())
}

pub fn required_intensity_with(
    species: &IonSpecies,
    trap: &TrapConfig,
    waist: f64,
    n: u32,
    omega_laser: f64,
    options: &DesignOptions,
) -> Result<f64> {
    let d = differential(species, omega_laser, options.guard)?;
    let i0 = leading_intensity(species, trap, waist, n, d.differential());
    if required_power(i0, waist, Geometry::A) > options.power_cap {
        return Err(Error::DifferentialCancellation {
            omega_laser,
            differential: d.differential(),
        });
    }
    Ok(i0)
}

fn leading_intensity(species: &IonSpecies, trap: &TrapConfig, waist: f64, n: u32, dpsi: f64) -> f64 {
    (2.0 * E * HBAR * trap.omega_z.powi(3) * species.mass * waist * waist / ((n as f64 * dpsi).powi(2))).sqrt()
}

/// Scattering probability during one gate at the leading-order intensity,
/// summed over both ions: `Gamma~ / |dpsi| sqrt(32 pi^2 hbar wz m W^2)`.
/// Independent of the gate length.
pub fn scattering_probability(
    species: &IonSpecies,
    omega_laser: f64,
    trap: &TrapConfig,
    waist: f64,
) -> Result<f64> {
    let guard = GuardBand::default();
    let gamma = scattering_coefficient_guarded(species, omega_laser, guard)?;
    if gamma == 0.0 {
        return Ok(0.0);
    }
    let d = differential(species, omega_laser, guard)?;
    Ok(gamma / d.differential().abs() * (32.0 * PI * PI * HBAR * trap.omega_z * species.mass * waist * waist).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateDesign {
    pub species: IonSpecies,
    pub trap: TrapConfig,
    pub beam: BeamConfig,
    pub profile: DriveProfile,
    pub geometry: Geometry,
    pub dipole: DipoleCoefficients,
    pub placement: IonPlacement,
    pub forces: ForceCoefficients,
    pub peak_intensity: f64,
    /// Leading-order intensity used as the root-solve seed.
    pub seed_intensity: f64,
    /// Per beam, W.
    pub power: f64,
    pub beam_count: u32,
    /// Scattering rate per unit intensity.
    pub gamma_sc: f64,
    /// Probability of a photon scattering event during the gate (`Gamma_sc T`).
    pub p_sc: f64,
    /// Effective phase of the leading-order phase formulas at the solution.
    pub effective_phase_check: f64,
    pub closed_phases: PhaseSet,
    /// Phases from the exact antiderivatives.
    pub exact_phases: PhaseSet,
    /// End-of-gate displacement per mode and basis state.
    pub residual_displacements: [[Complex64; 4]; 2],
    pub warnings: Vec<String>,
}

impl GateDesign {
    pub fn total_power(&self) -> f64 {
        self.power * self.beam_count as f64
    }

    pub fn gate_time(&self) -> f64 {
        self.profile.gate_time
    }

    pub fn wavelength(&self) -> f64 {
        crate::constants::wavelength(self.beam.omega_laser)
    }

    pub fn residual(&self, mode: Mode, state: BasisState) -> Complex64 {
        self.residual_displacements[mode_index(mode)][state.index()]
    }

    /// Largest `|beta(T)|^2` over basis states, per mode.
    pub fn max_residual_sq(&self, mode: Mode) -> f64 {
        self.residual_displacements[mode_index(mode)]
            .iter()
            .map(|b| b.norm_sqr())
            .fold(0.0, f64::max)
    }

    /// Mean intensity over the two ions.
    pub fn ion_intensity(&self) -> f64 {
        0.5 * (self.placement.intensity_1 + self.placement.intensity_2)
    }
}

fn mode_index(mode: Mode) -> usize {
    match mode {
        Mode::CenterOfMass => 0,
        Mode::Breathing => 1,
    }
}

/// Beam, placement and force coefficients at peak intensity `i0`.
pub fn forces_at(
    trap: &TrapConfig,
    geometry: Geometry,
    waist: f64,
    dipole: &DipoleCoefficients,
    i0: f64,
) -> Result<(BeamConfig, IonPlacement, ForceCoefficients)> {
    let beam = BeamConfig::new(waist, 0.0, i0, dipole.omega_laser, geometry)?;
    let placement = resolve_placement(&beam, trap.spacing())?;
    let forces = ForceCoefficients::from_scales(placement.f_tilde_1, placement.f_tilde_2, dipole, trap);
    Ok((beam, placement, forces))
}

/// Solves the full Controlled-Z condition `|phi_eff(I0)| = pi` (both modes)
/// for the peak intensity.
pub fn design_gate(
    trap: &TrapConfig,
    geometry: Geometry,
    waist: f64,
    n: u32,
    omega_laser: f64,
) -> Result<GateDesign> {
    design_gate_with(trap, geometry, waist, n, omega_laser, &DesignOptions::default())
}

pub fn design_gate_with(
    trap: &TrapConfig,
    geometry: Geometry,
    waist: f64,
    n: u32,
    omega_laser: f64,
    options: &DesignOptions,
) -> Result<GateDesign> {
    let species = &trap.species;
    let dipole = differential(species, omega_laser, options.guard)?;
    let gamma_sc = scattering_coefficient_guarded(species, omega_laser, options.guard)?;
    let profile = DriveProfile::new(n, trap.omega_z)?;
    // Fails early for an unplaceable geometry.
    forces_at(trap, geometry, waist, &dipole, 1.0)?;

    let seed = leading_intensity(species, trap, waist, n, dipole.differential());
    let cap_intensity = 2.0 * options.power_cap / (PI * waist * waist);
    if seed > cap_intensity {
        return Err(Error::DifferentialCancellation {
            omega_laser,
            differential: dipole.differential(),
        });
    }

    let residual = |i0: f64| -> Result<f64> {
        let (_, _, f) = forces_at(trap, geometry, waist, &dipole, i0)?;
        Ok(mode_phases_closed(&f, &profile).effective_phase.abs() - PI)
    };
    let (mut lo, mut hi) = (seed / 2.0, seed * 2.0);
    while residual(lo)? > 0.0 {
        lo /= 4.0;
        if lo < seed * 1e-12 {
            return Err(Error::NoSolution(format!("no intensity below {:e} W/m^2 reaches pi", seed)));
        }
    }
    while residual(hi)? < 0.0 {
        hi *= 4.0;
        if hi > cap_intensity {
            return Err(Error::NoSolution(format!(
                "effective phase stays below pi up to the power cap of {:e} W",
                options.power_cap
            )));
        }
    }
    let i0 = brent(residual, lo, hi, "|effective phase| - pi", &options.root)?;
    let power = required_power(i0, waist, geometry);
    if power > options.power_cap {
        return Err(Error::NoSolution(format!(
            "required power {power:e} W exceeds the cap of {:e} W",
            options.power_cap
        )));
    }

    let (beam, placement, forces) = forces_at(trap, geometry, waist, &dipole, i0)?;
    let closed_phases = mode_phases_closed(&forces, &profile);
    let exact_phases = mode_phases_exact(&forces, &profile);
    let mut residual_displacements = [[Complex64::new(0.0, 0.0); 4]; 2];
    for mode in Mode::ALL {
        for state in BasisState::ALL {
            let (fc, fo) = forces.drive(mode, state);
            residual_displacements[mode_index(mode)][state.index()] =
                displacement_closed(fc, fo, &profile, mode.frequency(trap.omega_z));
        }
    }
    let p_sc = gamma_sc * (placement.intensity_1 + placement.intensity_2) * profile.gate_time;
    let mut warnings = Vec::new();
    if p_sc > SCATTERING_WARNING {
        warnings.push(format!(
            "scattering probability {p_sc:e} is not small; the linear estimate Gamma_sc T is unreliable"
        ));
    }
    Ok(GateDesign {
        species: species.clone(),
        trap: trap.clone(),
        beam,
        profile,
        geometry,
        dipole,
        placement,
        forces,
        peak_intensity: i0,
        seed_intensity: seed,
        power,
        beam_count: geometry.beam_count(),
        gamma_sc,
        p_sc,
        effective_phase_check: closed_phases.effective_phase,
        closed_phases,
        exact_phases,
        residual_displacements,
        warnings,
    })
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y == -PI {
        PI
    } else {
        y
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfidelityBreakdown {
    pub scattering: f64,
    pub displacement: f64,
    pub phase: f64,
    pub total: f64,
}

/// Ground-state motional model; thermal occupation is not included.
pub const INFIDELITY_NOTE: &str =
    "motional ground state assumed; thermal enhancement of residual displacement is not modeled";

pub fn infidelity_terms(p_sc: f64, residual_sq: f64, effective_phase: f64) -> InfidelityBreakdown {
    let scattering = p_sc;
    let displacement = -(-residual_sq).exp_m1();
    let phase = wrap_angle(effective_phase - PI).powi(2) / 4.0;
    InfidelityBreakdown {
        scattering,
        displacement,
        phase,
        total: scattering + displacement + phase,
    }
}

pub fn infidelity_estimate(design: &GateDesign) -> InfidelityBreakdown {
    let residual_sq: f64 = Mode::ALL.iter().map(|&m| design.max_residual_sq(m)).sum();
    infidelity_terms(design.p_sc, residual_sq, design.effective_phase_check)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// m
    pub lambda: f64,
    /// Per-beam power, W; NaN when no design exists.
    pub power: f64,
    pub gamma_sc_t: f64,
    pub status: SweepStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepStatus {
    Ok,
    GuardBand,
    Unreachable,
    Failed,
}

impl SweepStatus {
    pub fn label(self) -> &'static str {
        match self {
            SweepStatus::Ok => "ok",
            SweepStatus::GuardBand => "guard_band",
            SweepStatus::Unreachable => "unreachable",
            SweepStatus::Failed => "failed",
        }
    }
}

/// One design per wavelength (m), evaluated in parallel, rows in input order.
pub fn wavelength_sweep(
    trap: &TrapConfig,
    geometry: Geometry,
    waist: f64,
    n: u32,
    lambdas: &[f64],
    options: &DesignOptions,
) -> Vec<SweepRow> {
    lambdas
        .par_iter()
        .map(|&lambda| {
            match design_gate_with(trap, geometry, waist, n, angular_frequency(lambda), options) {
                Ok(d) => SweepRow {
                    lambda,
                    power: d.power,
                    gamma_sc_t: d.p_sc,
                    status: SweepStatus::Ok,
                },
                Err(e) => SweepRow {
                    lambda,
                    power: f64::NAN,
                    gamma_sc_t: f64::NAN,
                    status: match e {
                        Error::GuardBandViolation { .. } => SweepStatus::GuardBand,
                        Error::DifferentialCancellation { .. } | Error::NoSolution(_) => SweepStatus::Unreachable,
                        _ => SweepStatus::Failed,
                    },
                },
            }
        })
        .collect()
}
