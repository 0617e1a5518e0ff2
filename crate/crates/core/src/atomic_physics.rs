//! Dipole-potential and scattering coefficients of an alkaline-earth ion in
//! a far-detuned laser field, from the two S-P fine-structure lines.

use std::f64::consts::PI;

use crate::constants::{angular_frequency, wavelength, ATOMIC_MASS_UNIT, C, HBAR};
use crate::error::{Error, Result};
use crate::numerics::{brent, RootSettings};

/// Ion species described by its mass and the S1/2-P1/2 and S1/2-P3/2 lines.
#[derive(Debug, Clone, PartialEq)]
pub struct IonSpecies {
    pub name: String,
    /// kg
    pub mass: f64,
    /// S1/2-P1/2 angular frequency, rad/s.
    pub omega_half: f64,
    /// S1/2-P3/2 angular frequency, rad/s.
    pub omega_threehalf: f64,
    /// rad/s
    pub gamma_half: f64,
    /// rad/s
    pub gamma_threehalf: f64,
}

/// Minimum ratio between a transition frequency and its linewidth.
pub const MIN_QUALITY_FACTOR: f64 = 1e4;

impl IonSpecies {
    pub fn new(
        name: impl Into<String>,
        mass: f64,
        omega_half: f64,
        omega_threehalf: f64,
        gamma_half: f64,
        gamma_threehalf: f64,
    ) -> Result<Self> {
        let name = name.into();
        let bad = |what: &str| Err(Error::InvalidInput(format!("species {name}: {what}")));
        if !(mass.is_finite() && mass > 0.0) {
            return bad("mass must be positive");
        }
        if !(omega_half.is_finite() && omega_half > 0.0 && omega_threehalf.is_finite()) {
            return bad("transition frequencies must be positive");
        }
        if omega_threehalf <= omega_half {
            return bad("the P3/2 line must lie above the P1/2 line");
        }
        for (g, w) in [(gamma_half, omega_half), (gamma_threehalf, omega_threehalf)] {
            if !(g.is_finite() && g >= 0.0) {
                return bad("linewidths must be non-negative");
            }
            if g * MIN_QUALITY_FACTOR > w {
                return bad("linewidth is not small compared to its transition frequency");
            }
        }
        Ok(Self {
            name,
            mass,
            omega_half,
            omega_threehalf,
            gamma_half,
            gamma_threehalf,
        })
    }

    /// Builds a species from the units used in the atomic-data file:
    /// mass in u, vacuum wavelengths in nm, linewidths as Gamma/2pi in MHz.
    pub fn from_spectroscopic(
        name: impl Into<String>,
        mass_u: f64,
        lambda_half_nm: f64,
        lambda_threehalf_nm: f64,
        gamma_half_2pi_mhz: f64,
        gamma_threehalf_2pi_mhz: f64,
    ) -> Result<Self> {
        Self::new(
            name,
            mass_u * ATOMIC_MASS_UNIT,
            angular_frequency(lambda_half_nm * 1e-9),
            angular_frequency(lambda_threehalf_nm * 1e-9),
            2.0 * PI * gamma_half_2pi_mhz * 1e6,
            2.0 * PI * gamma_threehalf_2pi_mhz * 1e6,
        )
    }

    /// Same species with the linewidths replaced.
    pub fn with_linewidths(&self, gamma_half: f64, gamma_threehalf: f64) -> Result<Self> {
        Self::new(
            self.name.clone(),
            self.mass,
            self.omega_half,
            self.omega_threehalf,
            gamma_half,
            gamma_threehalf,
        )
    }
}

/// Refused band around each resonance, in units of the line's own width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuardBand {
    pub linewidths: f64,
}

impl Default for GuardBand {
    fn default() -> Self {
        Self { linewidths: 1e3 }
    }
}

impl GuardBand {
    pub fn check(&self, species: &IonSpecies, omega_laser: f64) -> Result<()> {
        if !(omega_laser.is_finite() && omega_laser > 0.0) {
            return Err(Error::InvalidInput(format!(
                "laser frequency must be positive, got {omega_laser:e}"
            )));
        }
        for (omega, gamma, transition) in [
            (species.omega_half, species.gamma_half, "S1/2-P1/2"),
            (species.omega_threehalf, species.gamma_threehalf, "S1/2-P3/2"),
        ] {
            let detuning = (omega_laser - omega).abs();
            if detuning == 0.0 || detuning <= self.linewidths * gamma {
                return Err(Error::GuardBandViolation {
                    omega_laser,
                    transition,
                    guard_linewidths: self.linewidths,
                });
            }
        }
        Ok(())
    }
}

/// State-dependent light-shift coefficients psi+ and psi- (J m^2 / W).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleCoefficients {
    pub psi_plus: f64,
    pub psi_minus: f64,
    pub omega_laser: f64,
}

impl DipoleCoefficients {
    /// psi+ - psi-, the coefficient of the state-dependent force.
    pub fn differential(&self) -> f64 {
        self.psi_plus - self.psi_minus
    }

    /// psi+ + psi-, the coefficient of the state-independent force.
    pub fn sum(&self) -> f64 {
        self.psi_plus + self.psi_minus
    }

    /// Light shifts of the two qubit levels for sigma+/sigma- intensities.
    pub fn potentials(&self, i_plus: f64, i_minus: f64) -> (f64, f64) {
        state_potentials(self, i_plus, i_minus)
    }
}

const PREFACTOR: f64 = 1.5 * PI * C * C;

/// Rotating plus counter-rotating two-level denominator.
fn two_sided(omega: f64, omega_laser: f64) -> f64 {
    1.0 / (omega - omega_laser) + 1.0 / (omega + omega_laser)
}

/// Fine-structure terms of psi+ - psi-: (P1/2 part, P3/2 part).
fn split(species: &IonSpecies, omega_laser: f64) -> (f64, f64) {
    let (w1, w3) = (species.omega_half, species.omega_threehalf);
    let half = PREFACTOR * 2.0 * species.gamma_half / (3.0 * w1.powi(3)) * two_sided(w1, omega_laser);
    let threehalf =
        -PREFACTOR * 2.0 * species.gamma_threehalf / (3.0 * w3.powi(3)) * two_sided(w3, omega_laser);
    (half, threehalf)
}

fn unguarded_coefficients(species: &IonSpecies, omega_laser: f64) -> DipoleCoefficients {
    let (w1, w3) = (species.omega_half, species.omega_threehalf);
    let d1 = two_sided(w1, omega_laser);
    let d3 = two_sided(w3, omega_laser);
    let psi_plus = PREFACTOR
        * (2.0 * species.gamma_half / (3.0 * w1.powi(3)) * d1
            + species.gamma_threehalf / (3.0 * w3.powi(3)) * d3);
    let psi_minus = PREFACTOR * species.gamma_threehalf / w3.powi(3) * d3;
    DipoleCoefficients {
        psi_plus,
        psi_minus,
        omega_laser,
    }
}

pub fn dipole_coefficients(species: &IonSpecies, omega_laser: f64) -> Result<DipoleCoefficients> {
    dipole_coefficients_guarded(species, omega_laser, GuardBand::default())
}

pub fn dipole_coefficients_guarded(
    species: &IonSpecies,
    omega_laser: f64,
    guard: GuardBand,
) -> Result<DipoleCoefficients> {
    guard.check(species, omega_laser)?;
    Ok(unguarded_coefficients(species, omega_laser))
}

/// The P1/2 and P3/2 contributions whose sum is psi+ - psi-.
pub fn fine_structure_contributions(species: &IonSpecies, omega_laser: f64) -> Result<(f64, f64)> {
    GuardBand::default().check(species, omega_laser)?;
    Ok(split(species, omega_laser))
}

/// Light shifts `(u_down, u_up)` in J. Intensities are expected to be >= 0.
pub fn state_potentials(coeffs: &DipoleCoefficients, i_plus: f64, i_minus: f64) -> (f64, f64) {
    let u_down = coeffs.psi_plus * i_plus + coeffs.psi_minus * i_minus;
    let u_up = coeffs.psi_minus * i_plus + coeffs.psi_plus * i_minus;
    (u_down, u_up)
}

/// Off-resonant photon scattering rate per unit intensity, (1/s) / (W/m^2).
pub fn scattering_coefficient(species: &IonSpecies, omega_laser: f64) -> Result<f64> {
    scattering_coefficient_guarded(species, omega_laser, GuardBand::default())
}

pub fn scattering_coefficient_guarded(
    species: &IonSpecies,
    omega_laser: f64,
    guard: GuardBand,
) -> Result<f64> {
    guard.check(species, omega_laser)?;
    let (w1, w3) = (species.omega_half, species.omega_threehalf);
    let t1 = (species.gamma_half / w1.powi(3) * two_sided(w1, omega_laser)).powi(2);
    let t3 = (species.gamma_threehalf / w3.powi(3) * two_sided(w3, omega_laser)).powi(2);
    Ok(PREFACTOR * omega_laser.powi(3) / HBAR * (t1 + t3))
}

/// Wavelength (m) inside `[lambda_lo, lambda_hi]` where psi+ = psi-.
pub fn cancellation_wavelength(species: &IonSpecies, lambda_lo: f64, lambda_hi: f64) -> Result<f64> {
    if !(lambda_lo > 0.0 && lambda_hi > lambda_lo) {
        return Err(Error::InvalidInput(format!(
            "wavelength interval [{lambda_lo:e}, {lambda_hi:e}] is empty"
        )));
    }
    let guard = GuardBand::default();
    let diff = |lambda: f64| -> Result<f64> {
        dipole_coefficients_guarded(species, angular_frequency(lambda), guard).map(|c| c.differential())
    };
    let (f_lo, f_hi) = (diff(lambda_lo)?, diff(lambda_hi)?);
    if f_lo.signum() == f_hi.signum() && f_lo != 0.0 && f_hi != 0.0 {
        return Err(Error::NoSignChange {
            quantity: "psi+ - psi-",
            lo: lambda_lo,
            hi: lambda_hi,
        });
    }
    // A resonance inside the bracket would masquerade as a root.
    for w in [species.omega_half, species.omega_threehalf] {
        let l = wavelength(w);
        if l > lambda_lo && l < lambda_hi {
            return Err(Error::InvalidInput(format!(
                "wavelength interval contains the resonance at {l:e} m"
            )));
        }
    }
    let settings = RootSettings {
        rel_tol: 1e-9,
        ..RootSettings::default()
    };
    brent(diff, lambda_lo, lambda_hi, "psi+ - psi-", &settings)
}
