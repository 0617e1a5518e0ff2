// Phase-space trajectories of both modes during the flagship gate (Ca+,
// geometry c, 200 kHz, n = 15) and the running ZZ phase.

use iongate::atomic_data::calcium40;
use iongate::constants::{angular_frequency, hz_to_angular};
use iongate::drive_dynamics::{shoelace_phase, simulate_mode, uniform_grid, zz};
use iongate::gate_designer::design_gate;
use iongate::trap_mechanics::{BasisState, Geometry, Mode, TrapConfig};

pub fn run_example() -> iongate::Result<()> {
    let trap = TrapConfig::new(calcium40(), hz_to_angular(200e3))?;
    let design = design_gate(&trap, Geometry::C, 5e-6, 15, angular_frequency(395.1e-9))?;
    println!(
        "T = {:.1} us, I0 = {:.4e} W/m^2, P = {:.3} mW per beam",
        design.gate_time() * 1e6,
        design.peak_intensity,
        design.power * 1e3
    );

    let samples = uniform_grid(&design.profile, 200);
    let mut phases = [[0.0; 4]; 2];
    for (m, mode) in Mode::ALL.into_iter().enumerate() {
        for state in BasisState::ALL {
            let r = simulate_mode(&design.forces, &design.profile, mode, state, &samples)?;
            let loop_: Vec<_> = r.trajectory.iter().map(|p| p.beta).collect();
            let max = loop_.iter().map(|b| b.norm()).fold(0.0, f64::max);
            phases[m][state.index()] = r.phi_final;
            println!(
                "  {:>9} {}: max|beta| {:.4}  |beta(T)| {:.2e}  phi {:+.5}  area {:+.5}",
                mode.label(),
                state.label(),
                max,
                r.beta_final.norm(),
                r.phi_final,
                shoelace_phase(&loop_)
            );
        }
    }
    println!(
        "ZZ phase: com {:+.5}, breathing {:+.5}, total {:+.5} (pi = {:.5})",
        zz(&phases[0]),
        zz(&phases[1]),
        zz(&phases[0]) + zz(&phases[1]),
        std::f64::consts::PI
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> iongate::Result<()> {
    run_example()
}
