//! CODATA 2018 constants in SI units and a couple of unit conversions.

use std::f64::consts::PI;

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum, m/s.
pub const C: f64 = 299_792_458.0;
/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Unified atomic mass unit, kg.
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;

/// Angular frequency (rad/s) of light with vacuum wavelength `lambda` (m).
pub fn angular_frequency(lambda: f64) -> f64 {
    2.0 * PI * C / lambda
}

/// Vacuum wavelength (m) of light with angular frequency `omega` (rad/s).
pub fn wavelength(omega: f64) -> f64 {
    2.0 * PI * C / omega
}

/// Converts an ordinary frequency in Hz to rad/s.
pub fn hz_to_angular(f: f64) -> f64 {
    2.0 * PI * f
}
