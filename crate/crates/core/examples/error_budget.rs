// Technical-noise budget of the flagship design and the spin-echo
// suppression of polarization imbalance.

use iongate::atomic_data::calcium40;
use iongate::constants::{angular_frequency, hz_to_angular};
use iongate::error_budget::{error_budget, spin_echo_simulate, timing_threshold, ErrorModel, DEFAULT_SAFETY_FACTOR};
use iongate::gate_designer::design_gate;
use iongate::trap_mechanics::{Geometry, TrapConfig};

pub fn run_example() -> iongate::Result<()> {
    let trap = TrapConfig::new(calcium40(), hz_to_angular(200e3))?;
    let design = design_gate(&trap, Geometry::C, 5e-6, 15, angular_frequency(395.1e-9))?;
    let report = error_budget(&design, &ErrorModel::default(), DEFAULT_SAFETY_FACTOR)?;
    for c in &report.channels {
        println!(
            "{:>12}: phase error {:>10.3e} rad, perturbation {:.3e}, bound {:.3e}, {}  {}",
            c.name,
            c.phase_error,
            c.perturbation,
            c.bound,
            if c.pass { "pass" } else { "FAIL" },
            c.note
        );
    }
    println!("timing threshold {:.3} us", timing_threshold(&design) * 1e6);

    println!("spin echo, residual phase error vs polarization imbalance");
    for eps in [1e-3, 3e-3, 1e-2, 3e-2] {
        let e = spin_echo_simulate(&design, eps);
        println!(
            "  eps {:.0e}: echo {:.3e} rad, without echo {:.3e} rad",
            eps, e.residual, e.control_residual
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> iongate::Result<()> {
    run_example()
}
