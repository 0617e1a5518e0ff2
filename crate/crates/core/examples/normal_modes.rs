// Two-ion crystal spacing, normal modes and the force coefficients each
// beam geometry produces.

use iongate::atomic_data::{barium138, calcium40};
use iongate::atomic_physics::dipole_coefficients;
use iongate::constants::{angular_frequency, hz_to_angular};
use iongate::gate_designer::forces_at;
use iongate::trap_mechanics::{mode_frequencies, Geometry, TrapConfig};

pub fn run_example() -> iongate::Result<()> {
    for species in [calcium40(), barium138()] {
        for khz in [200.0, 1000.0] {
            let trap = TrapConfig::new(species.clone(), hz_to_angular(khz * 1e3))?;
            let (com, breathing) = mode_frequencies(trap.omega_z);
            println!(
                "{:>7} wz/2pi = {:>6} kHz: dz = {:.2} um, breathing/com = {:.6}",
                species.name,
                khz,
                trap.spacing() * 1e6,
                breathing / com
            );
        }
    }

    let trap = TrapConfig::new(calcium40(), hz_to_angular(200e3))?;
    let dipole = dipole_coefficients(&trap.species, angular_frequency(395.1e-9))?;
    println!("force coefficients at 1e8 W/m^2, 395.1 nm (N)");
    for geometry in Geometry::ALL {
        let waist = match geometry {
            Geometry::B => trap.spacing(),
            _ => 5e-6,
        };
        let (_, placement, f) = forces_at(&trap, geometry, waist, &dipole, 1e8)?;
        println!(
            "  {geometry}: z = ({:+.2}, {:+.2}) um  f0+ {:+.3e} f1+ {:+.3e} f2+ {:+.3e} f0- {:+.3e} f1- {:+.3e} f2- {:+.3e}",
            placement.z1 * 1e6,
            placement.z2 * 1e6,
            f.f0_plus,
            f.f1_plus,
            f.f2_plus,
            f.f0_minus,
            f.f1_minus,
            f.f2_minus
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> iongate::Result<()> {
    run_example()
}
