// Power and scattering probability needed for a Controlled-Z gate in each
// beam geometry.

use iongate::atomic_data::{barium138, calcium40};
use iongate::atomic_physics::IonSpecies;
use iongate::constants::{angular_frequency, hz_to_angular};
use iongate::gate_designer::{design_gate, infidelity_estimate};
use iongate::trap_mechanics::{Geometry, TrapConfig};

fn row(species: &IonSpecies, khz: f64, geometry: Geometry, waist: Option<f64>, n: u32, nm: f64) -> iongate::Result<()> {
    let trap = TrapConfig::new(species.clone(), hz_to_angular(khz * 1e3))?;
    let waist = waist.unwrap_or(trap.spacing());
    let d = design_gate(&trap, geometry, waist, n, angular_frequency(nm * 1e-9))?;
    let inf = infidelity_estimate(&d);
    println!(
        "{:>7} {geometry} {:>5} kHz W {:>5.2} um n {:>3} {:>7.1} nm: P {:>10.4e} W  P_sc {:.3e}  1-F {:.3e}",
        species.name,
        khz,
        waist * 1e6,
        n,
        nm,
        d.power,
        d.p_sc,
        inf.total
    );
    Ok(())
}

pub fn run_example() -> iongate::Result<()> {
    let (ca, ba) = (calcium40(), barium138());
    println!("geometry a (single beam on one flank)");
    row(&ca, 1000.0, Geometry::A, Some(30e-6), 15, 395.1)?;
    row(&ba, 1000.0, Geometry::A, Some(30e-6), 15, 474.5)?;
    println!("geometry b (waist equal to the ion spacing)");
    row(&ca, 200.0, Geometry::B, None, 15, 395.1)?;
    row(&ba, 200.0, Geometry::B, None, 15, 474.5)?;
    println!("geometry c (one beam per ion)");
    row(&ca, 200.0, Geometry::C, Some(5e-6), 15, 395.1)?;
    row(&ca, 200.0, Geometry::C, Some(5e-6), 15, 1500.0)?;
    row(&ca, 200.0, Geometry::C, Some(5e-6), 209, 1500.0)?;
    row(&ba, 200.0, Geometry::C, Some(5e-6), 15, 2000.0)?;
    row(&ba, 200.0, Geometry::C, Some(5e-6), 15, 1064.0)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> iongate::Result<()> {
    run_example()
}
