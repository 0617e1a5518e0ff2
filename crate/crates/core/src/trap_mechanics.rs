//! Two-ion crystal statics, Gaussian beam profiles and the force
//! coefficients that drive the two axial modes.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::atomic_physics::{DipoleCoefficients, IonSpecies};
use crate::constants::{ELEMENTARY_CHARGE, EPSILON_0, HBAR};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TrapConfig {
    /// Single-ion axial frequency, rad/s.
    pub omega_z: f64,
    pub species: IonSpecies,
}

impl TrapConfig {
    pub fn new(species: IonSpecies, omega_z: f64) -> Result<Self> {
        if !(omega_z.is_finite() && omega_z > 0.0) {
            return Err(Error::InvalidInput(format!(
                "axial frequency must be positive, got {omega_z:e}"
            )));
        }
        Ok(Self { omega_z, species })
    }

    pub fn mass(&self) -> f64 {
        self.species.mass
    }

    pub fn spacing(&self) -> f64 {
        equilibrium_spacing(&self.species, self.omega_z)
    }
}

/// Beam arrangement relative to the crystal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Geometry {
    /// One wide beam; both ions sit on the same flank.
    A,
    /// One beam with waist equal to the ion spacing, centered on the crystal.
    B,
    /// One beam per ion, each ion on the same flank of its own beam.
    C,
}

impl Geometry {
    pub const ALL: [Geometry; 3] = [Geometry::A, Geometry::B, Geometry::C];

    pub fn label(self) -> &'static str {
        match self {
            Geometry::A => "a",
            Geometry::B => "b",
            Geometry::C => "c",
        }
    }

    pub fn beam_count(self) -> u32 {
        match self {
            Geometry::C => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Geometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" => Ok(Geometry::A),
            "b" => Ok(Geometry::B),
            "c" => Ok(Geometry::C),
            other => Err(Error::InvalidInput(format!(
                "unknown geometry `{other}` (expected a, b or c)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamConfig {
    /// 1/e^2 intensity radius W, m.
    pub waist: f64,
    /// Beam center z0, m.
    pub center: f64,
    /// Peak intensity I0, W/m^2.
    pub peak_intensity: f64,
    /// rad/s
    pub omega_laser: f64,
    pub geometry: Geometry,
}

impl BeamConfig {
    pub fn new(
        waist: f64,
        center: f64,
        peak_intensity: f64,
        omega_laser: f64,
        geometry: Geometry,
    ) -> Result<Self> {
        if !(waist.is_finite() && waist > 0.0) {
            return Err(Error::InvalidInput(format!("waist must be positive, got {waist:e}")));
        }
        if !(peak_intensity.is_finite() && peak_intensity >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "peak intensity must be non-negative, got {peak_intensity:e}"
            )));
        }
        Ok(Self {
            waist,
            center,
            peak_intensity,
            omega_laser,
            geometry,
        })
    }

    pub fn with_intensity(self, peak_intensity: f64) -> Self {
        Self {
            peak_intensity,
            ..self
        }
    }
}

/// Ion spacing `(e^2 / (2 pi eps0 m wz^2))^(1/3)` where trap and Coulomb
/// forces balance.
pub fn equilibrium_spacing(species: &IonSpecies, omega_z: f64) -> f64 {
    (ELEMENTARY_CHARGE.powi(2) / (2.0 * PI * EPSILON_0 * species.mass * omega_z.powi(2))).cbrt()
}

/// `(com, breathing) = (wz, sqrt(3) wz)`.
pub fn mode_frequencies(omega_z: f64) -> (f64, f64) {
    (omega_z, 3f64.sqrt() * omega_z)
}

pub fn beam_intensity(beam: &BeamConfig, z: f64) -> f64 {
    let x = z - beam.center;
    beam.peak_intensity * (-2.0 * x * x / (beam.waist * beam.waist)).exp()
}

/// Half the negative intensity gradient at `z_eq`.
pub fn beam_force_scale(beam: &BeamConfig, z_eq: f64) -> f64 {
    let x = z_eq - beam.center;
    let w2 = beam.waist * beam.waist;
    2.0 * beam.peak_intensity * x / w2 * (-2.0 * x * x / w2).exp()
}

/// Ion positions and the gradient scale each ion sees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IonPlacement {
    pub z1: f64,
    pub z2: f64,
    pub f_tilde_1: f64,
    pub f_tilde_2: f64,
    /// Total light intensity at each ion, W/m^2.
    pub intensity_1: f64,
    pub intensity_2: f64,
    pub beam_count: u32,
}

/// Relative tolerance on W = delta_z for geometry B.
pub const GEOMETRY_B_TOLERANCE: f64 = 1e-9;

pub fn resolve_placement(beam: &BeamConfig, delta_z: f64) -> Result<IonPlacement> {
    let (w, z0) = (beam.waist, beam.center);
    match beam.geometry {
        Geometry::A => {
            let (z1, z2) = (z0 - w / 2.0 - delta_z / 2.0, z0 - w / 2.0 + delta_z / 2.0);
            Ok(IonPlacement {
                z1,
                z2,
                f_tilde_1: beam_force_scale(beam, z1),
                f_tilde_2: beam_force_scale(beam, z2),
                intensity_1: beam_intensity(beam, z1),
                intensity_2: beam_intensity(beam, z2),
                beam_count: 1,
            })
        }
        Geometry::B => {
            if (w - delta_z).abs() > GEOMETRY_B_TOLERANCE * w {
                return Err(Error::GeometryUnresolvable {
                    geometry: "b",
                    reason: format!("waist {w:e} m differs from ion spacing {delta_z:e} m"),
                });
            }
            let (z1, z2) = (z0 - w / 2.0, z0 + w / 2.0);
            Ok(IonPlacement {
                z1,
                z2,
                f_tilde_1: beam_force_scale(beam, z1),
                f_tilde_2: beam_force_scale(beam, z2),
                intensity_1: beam_intensity(beam, z1),
                intensity_2: beam_intensity(beam, z2),
                beam_count: 1,
            })
        }
        Geometry::C => {
            // Crystal centered on z0; beam i is centered W/2 above ion i.
            let (z1, z2) = (z0 - delta_z / 2.0, z0 + delta_z / 2.0);
            let own = |z: f64| BeamConfig {
                center: z + w / 2.0,
                ..*beam
            };
            Ok(IonPlacement {
                z1,
                z2,
                f_tilde_1: beam_force_scale(&own(z1), z1),
                f_tilde_2: beam_force_scale(&own(z2), z2),
                intensity_1: beam_intensity(&own(z1), z1),
                intensity_2: beam_intensity(&own(z2), z2),
                beam_count: 2,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    CenterOfMass,
    Breathing,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::CenterOfMass, Mode::Breathing];

    pub fn frequency(self, omega_z: f64) -> f64 {
        match self {
            Mode::CenterOfMass => omega_z,
            Mode::Breathing => 3f64.sqrt() * omega_z,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Mode::CenterOfMass => "com",
            Mode::Breathing => "breathing",
        }
    }
}

/// Qubit level of one ion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Down,
    Up,
}

impl Spin {
    pub fn flip(self) -> Self {
        match self {
            Spin::Down => Spin::Up,
            Spin::Up => Spin::Down,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisState(pub Spin, pub Spin);

impl BasisState {
    pub const DD: BasisState = BasisState(Spin::Down, Spin::Down);
    pub const DU: BasisState = BasisState(Spin::Down, Spin::Up);
    pub const UD: BasisState = BasisState(Spin::Up, Spin::Down);
    pub const UU: BasisState = BasisState(Spin::Up, Spin::Up);
    pub const ALL: [BasisState; 4] = [Self::DD, Self::DU, Self::UD, Self::UU];

    /// Both ions' levels exchanged, as after a pi pulse on each ion.
    pub fn flip(self) -> Self {
        BasisState(self.0.flip(), self.1.flip())
    }

    pub fn label(self) -> &'static str {
        match (self.0, self.1) {
            (Spin::Down, Spin::Down) => "dd",
            (Spin::Down, Spin::Up) => "du",
            (Spin::Up, Spin::Down) => "ud",
            (Spin::Up, Spin::Up) => "uu",
        }
    }

    pub fn index(self) -> usize {
        match (self.0, self.1) {
            (Spin::Down, Spin::Down) => 0,
            (Spin::Down, Spin::Up) => 1,
            (Spin::Up, Spin::Down) => 2,
            (Spin::Up, Spin::Up) => 3,
        }
    }
}

/// Zero-point length scales sqrt(hbar / (8 m w)) of the two modes.
pub fn mode_scales(trap: &TrapConfig) -> (f64, f64) {
    let (wc, wb) = mode_frequencies(trap.omega_z);
    (
        (HBAR / (8.0 * trap.mass() * wc)).sqrt(),
        (HBAR / (8.0 * trap.mass() * wb)).sqrt(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceCoefficients {
    pub f0_plus: f64,
    pub f1_plus: f64,
    pub f2_plus: f64,
    pub f0_minus: f64,
    pub f1_minus: f64,
    pub f2_minus: f64,
    pub f_tilde_1: f64,
    pub f_tilde_2: f64,
}

impl ForceCoefficients {
    /// Coefficients from the gradient scales at the two ions.
    pub fn from_scales(
        f_tilde_1: f64,
        f_tilde_2: f64,
        coeffs: &DipoleCoefficients,
        trap: &TrapConfig,
    ) -> Self {
        let (sp, sm) = mode_scales(trap);
        let (sum, diff) = (coeffs.sum(), coeffs.differential());
        let (plus, minus) = (f_tilde_1 + f_tilde_2, f_tilde_2 - f_tilde_1);
        Self {
            f0_plus: sp * plus * sum,
            f1_plus: sp * plus * diff,
            f2_plus: sp * (f_tilde_1 - f_tilde_2) * diff,
            f0_minus: sm * minus * sum,
            f1_minus: sm * minus * diff,
            f2_minus: -sm * plus * diff,
            f_tilde_1,
            f_tilde_2,
        }
    }

    /// `(f_const, f_osc)` of the drive `f_const + f_osc sin(Wt)` on `mode`
    /// when the ions are in `state`.
    pub fn drive(&self, mode: Mode, state: BasisState) -> (f64, f64) {
        let (f0, f1, f2) = match mode {
            Mode::CenterOfMass => (self.f0_plus, self.f1_plus, self.f2_plus),
            Mode::Breathing => (self.f0_minus, self.f1_minus, self.f2_minus),
        };
        match (state.0, state.1) {
            (Spin::Down, Spin::Down) => (-f0, -f1),
            (Spin::Down, Spin::Up) => (-f0, -f2),
            (Spin::Up, Spin::Down) => (-f0, f2),
            (Spin::Up, Spin::Up) => (-f0, f1),
        }
    }
}

pub fn force_coefficients(
    beam: &BeamConfig,
    delta_z: f64,
    coeffs: &DipoleCoefficients,
    trap: &TrapConfig,
) -> Result<ForceCoefficients> {
    let p = resolve_placement(beam, delta_z)?;
    Ok(ForceCoefficients::from_scales(p.f_tilde_1, p.f_tilde_2, coeffs, trap))
}

/// Drive `(f_const, f_osc)` on `mode` for `state` with a polarization
/// imbalance `epsilon`, i.e. sigma+/sigma- intensities
/// `I/2 (1 +- epsilon)(1 +- sin Wt)`. Reduces to
/// [`ForceCoefficients::drive`] at `epsilon = 0`.
pub fn imbalanced_drive(
    f_tilde_1: f64,
    f_tilde_2: f64,
    coeffs: &DipoleCoefficients,
    epsilon: f64,
    trap: &TrapConfig,
    mode: Mode,
    state: BasisState,
) -> (f64, f64) {
    let (sum, diff) = (coeffs.sum(), coeffs.differential());
    let amplitudes = |s: Spin| match s {
        Spin::Down => (sum + epsilon * diff, diff + epsilon * sum),
        Spin::Up => (sum - epsilon * diff, -diff + epsilon * sum),
    };
    let (a1, b1) = amplitudes(state.0);
    let (a2, b2) = amplitudes(state.1);
    let (sp, sm) = mode_scales(trap);
    match mode {
        Mode::CenterOfMass => (
            -sp * (f_tilde_1 * a1 + f_tilde_2 * a2),
            -sp * (f_tilde_1 * b1 + f_tilde_2 * b2),
        ),
        Mode::Breathing => (
            -sm * (f_tilde_2 * a2 - f_tilde_1 * a1),
            -sm * (f_tilde_2 * b2 - f_tilde_1 * b1),
        ),
    }
}
