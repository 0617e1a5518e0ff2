// Three independent evaluations of one driven mode: closed-form
// antiderivatives, adaptive quadrature and a classical RK4 integration.

use iongate::drive_dynamics::{
    integrate_mode, integrate_mode_quadrature, ode_oracle, uniform_grid, DriveProfile, DEFAULT_STEPS_PER_PERIOD,
};
use iongate::constants::hz_to_angular;
use iongate::numerics::QuadSettings;

pub fn run_example() -> iongate::Result<()> {
    let omega_z = hz_to_angular(200e3);
    let profile = DriveProfile::new(15, omega_z)?;
    // Typical oscillating force for a milliwatt beam.
    let f = 1e-29;
    let (fc, fo) = (0.0, f);
    let samples = uniform_grid(&profile, 40);

    let exact = integrate_mode(fc, fo, &profile, omega_z, &samples)?;
    let quad = integrate_mode_quadrature(fc, fo, &profile, omega_z, &samples, &QuadSettings::default())?;
    let ode = ode_oracle(fc, fo, &profile, omega_z, &samples, DEFAULT_STEPS_PER_PERIOD)?;

    let scale = exact.max_displacement();
    let worst = |other: &mut dyn Iterator<Item = num_complex::Complex64>| {
        exact
            .samples
            .iter()
            .zip(other)
            .map(|(a, b)| (a.beta - b).norm() / scale)
            .fold(0.0, f64::max)
    };
    println!("drive f = {f:e} N on a {:.0} kHz mode", omega_z / (2.0 * std::f64::consts::PI * 1e3));
    println!("max |beta| = {scale:.6}");
    println!("quadrature vs exact: {:.2e}", worst(&mut quad.samples.iter().map(|p| p.beta)));
    println!("RK4 vs exact:        {:.2e}", worst(&mut ode.iter().map(|p| p.beta)));
    println!(
        "final phase: exact {:+.10}, quadrature {:+.10}",
        exact.phi_final, quad.phi_final
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> iongate::Result<()> {
    run_example()
}
