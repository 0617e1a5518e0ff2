// Dipole-potential and scattering coefficients across wavelength, and the
// wavelength where the two circular polarizations see the same potential.

use iongate::atomic_data::AtomicDatabase;
use iongate::atomic_physics::{cancellation_wavelength, dipole_coefficients, scattering_coefficient};
use iongate::constants::angular_frequency;

pub fn run_example() -> iongate::Result<()> {
    let db = AtomicDatabase::builtin();
    for key in ["Ca40", "Ba138", "Sr88"] {
        let species = db.species(key)?;
        println!("{} (data version {})", species.name, db.version);
        println!("  lambda_nm  psi_plus         psi_minus        gamma_sc");
        for nm in [355.0, 400.0, 532.0, 1064.0, 2000.0] {
            let w = angular_frequency(nm * 1e-9);
            let d = match dipole_coefficients(&species, w) {
                Ok(d) => d,
                Err(e) => {
                    println!("  {nm:>8}   {e}");
                    continue;
                }
            };
            let g = scattering_coefficient(&species, w)?;
            println!("  {nm:>8}   {:+.6e}  {:+.6e}  {:.6e}", d.psi_plus, d.psi_minus, g);
        }
    }

    let ca = db.species("Ca40")?;
    let lambda = cancellation_wavelength(&ca, 850e-9, 950e-9)?;
    println!("Ca+ psi_plus = psi_minus at {:.3} nm", lambda * 1e9);
    Ok(())
}

#[allow(dead_code)]
fn main() -> iongate::Result<()> {
    run_example()
}
