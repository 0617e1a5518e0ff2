// Required power across wavelength for Ca+ in geometry c, evaluated in
// parallel, printed as CSV.

use iongate::atomic_data::calcium40;
use iongate::constants::hz_to_angular;
use iongate::gate_designer::{wavelength_sweep, DesignOptions};
use iongate::report::sweep_csv;
use iongate::trap_mechanics::{Geometry, TrapConfig};

pub fn run_example() -> iongate::Result<()> {
    let trap = TrapConfig::new(calcium40(), hz_to_angular(200e3))?;
    let grid_nm: Vec<f64> = (0..=46).map(|k| 380.0 + 20.0 * k as f64).collect();
    let lambdas: Vec<f64> = grid_nm.iter().map(|x| x / 1e9).collect();
    let rows = wavelength_sweep(&trap, Geometry::C, 5e-6, 15, &lambdas, &DesignOptions::default());
    print!("{}", sweep_csv(&grid_nm, &rows));

    let peak = rows
        .iter()
        .filter(|r| r.lambda > 600e-9)
        .max_by(|a, b| a.power.total_cmp(&b.power))
        .expect("non-empty grid");
    println!("# largest power beyond 600 nm: {:.3e} W at {:.0} nm", peak.power, peak.lambda * 1e9);
    Ok(())
}

#[allow(dead_code)]
fn main() -> iongate::Result<()> {
    run_example()
}
