//! Text output: sectioned key/value reports and CSV tables. Floats are
//! written with `{:e}`, the shortest representation that round-trips.

use std::fmt::Write as _;

use crate::drive_dynamics::ModeResult;
use crate::error_budget::ErrorReport;
use crate::gate_designer::{infidelity_estimate, GateDesign, SweepRow, INFIDELITY_NOTE};
use crate::trap_mechanics::{BasisState, Mode};

/// Where the atomic data came from, echoed into reports.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSource {
    pub origin: String,
    pub version: u32,
    pub species_key: String,
}

#[derive(Default)]
struct Doc {
    out: String,
}

impl Doc {
    fn comment(&mut self, text: &str) {
        let _ = writeln!(self.out, "# {text}");
    }

    fn section(&mut self, name: &str) {
        if !self.out.is_empty() {
            self.out.push('\n');
        }
        let _ = writeln!(self.out, "[{name}]");
    }

    fn num(&mut self, key: &str, v: f64) {
        let _ = writeln!(self.out, "{key} = {v:e}");
    }

    fn int(&mut self, key: &str, v: impl std::fmt::Display) {
        let _ = writeln!(self.out, "{key} = {v}");
    }

    fn boolean(&mut self, key: &str, v: bool) {
        let _ = writeln!(self.out, "{key} = {v}");
    }

    fn text(&mut self, key: &str, v: &str) {
        let escaped = v
            .replace('\\', "\\\\")
            .replace('"', "\\\"")
            .replace('\n', "\\n")
            .replace('\t', "\\t");
        let _ = writeln!(self.out, "{key} = \"{escaped}\"");
    }
}

fn input_section(doc: &mut Doc, design: &GateDesign, source: &DataSource) {
    doc.section("input");
    doc.text("species", &source.species_key);
    doc.text("species_name", &design.species.name);
    doc.text("atomic_data", &source.origin);
    doc.int("atomic_data_version", source.version);
    doc.text("geometry", design.geometry.label());
    doc.num("omega_z_rad_s", design.trap.omega_z);
    doc.num("waist_m", design.beam.waist);
    doc.int("n", design.profile.n);
    doc.num("lambda_m", design.wavelength());
    doc.num("omega_laser_rad_s", design.beam.omega_laser);
}

/// Every design field plus the infidelity breakdown.
pub fn design_report(design: &GateDesign, source: &DataSource) -> String {
    let mut doc = Doc::default();
    doc.comment("iongate gate design");
    doc.comment("peak intensity solves |phi_com + phi_breathing| = pi with the leading-order phase formulas");
    doc.comment("power per beam P = I0 pi W^2 / 2; p_sc = Gamma_sc (I_1 + I_2) T");
    input_section(&mut doc, design, source);

    doc.section("trap");
    doc.num("mass_kg", design.species.mass);
    doc.num("spacing_m", design.trap.spacing());
    doc.num("omega_com_rad_s", Mode::CenterOfMass.frequency(design.trap.omega_z));
    doc.num("omega_breathing_rad_s", Mode::Breathing.frequency(design.trap.omega_z));

    doc.section("drive");
    doc.num("gate_time_s", design.gate_time());
    doc.num("omega_mod_rad_s", design.profile.omega_mod);
    doc.int("modulation_cycles", design.profile.cycles);

    doc.section("dipole");
    doc.num("psi_plus_J_m2_per_W", design.dipole.psi_plus);
    doc.num("psi_minus_J_m2_per_W", design.dipole.psi_minus);
    doc.num("psi_difference_J_m2_per_W", design.dipole.differential());
    doc.num("gamma_sc_m2_per_W_s", design.gamma_sc);

    doc.section("beam");
    doc.num("peak_intensity_W_m2", design.peak_intensity);
    doc.num("seed_intensity_W_m2", design.seed_intensity);
    doc.num("power_per_beam_W", design.power);
    doc.int("beam_count", design.beam_count);
    doc.num("total_power_W", design.total_power());
    doc.num("beam_center_m", design.beam.center);

    let p = &design.placement;
    doc.section("placement");
    doc.num("z1_m", p.z1);
    doc.num("z2_m", p.z2);
    doc.num("f_tilde_1", p.f_tilde_1);
    doc.num("f_tilde_2", p.f_tilde_2);
    doc.num("intensity_1_W_m2", p.intensity_1);
    doc.num("intensity_2_W_m2", p.intensity_2);

    let f = &design.forces;
    doc.section("forces");
    doc.num("f0_plus_N", f.f0_plus);
    doc.num("f1_plus_N", f.f1_plus);
    doc.num("f2_plus_N", f.f2_plus);
    doc.num("f0_minus_N", f.f0_minus);
    doc.num("f1_minus_N", f.f1_minus);
    doc.num("f2_minus_N", f.f2_minus);

    doc.section("result");
    doc.num("p_sc", design.p_sc);
    doc.num("effective_phase_check_rad", design.effective_phase_check);
    doc.num("exact_effective_phase_rad", design.exact_phases.effective_phase);

    for (name, set) in [("phases.closed", &design.closed_phases), ("phases.exact", &design.exact_phases)] {
        doc.section(name);
        for mode in Mode::ALL {
            for state in BasisState::ALL {
                doc.num(&format!("{}_{}_rad", mode.label(), state.label()), set.get(mode, state));
            }
        }
    }

    doc.section("residual_displacement");
    for mode in Mode::ALL {
        for state in BasisState::ALL {
            let b = design.residual(mode, state);
            let key = format!("{}_{}", mode.label(), state.label());
            doc.num(&format!("{key}_re"), b.re);
            doc.num(&format!("{key}_im"), b.im);
        }
    }

    let inf = infidelity_estimate(design);
    doc.section("infidelity");
    doc.comment("1 - F ~ p_sc + (1 - exp(-sum_modes max|beta(T)|^2)) + (phi - pi)^2 / 4");
    doc.num("scattering", inf.scattering);
    doc.num("displacement", inf.displacement);
    doc.num("phase", inf.phase);
    doc.num("total", inf.total);
    doc.text("note", INFIDELITY_NOTE);

    doc.section("warnings");
    doc.int("count", design.warnings.len());
    for (k, w) in design.warnings.iter().enumerate() {
        doc.text(&format!("warning_{k}"), w);
    }
    doc.out
}

pub fn error_report(design: &GateDesign, report: &ErrorReport, source: &DataSource) -> String {
    let mut doc = Doc::default();
    doc.comment("iongate error budget");
    doc.comment("a channel passes when its phase error is below pi / safety_factor");
    input_section(&mut doc, design, source);
    doc.num("peak_intensity_W_m2", design.peak_intensity);
    doc.num("gate_time_s", design.gate_time());

    let m = &report.model;
    doc.section("model");
    doc.num("epsilon_p", m.epsilon_p);
    doc.num("delta_t_s", m.delta_t);
    doc.num("epsilon_f", m.epsilon_f);
    doc.num("omega_f_rad_s", m.omega_f);
    doc.num("position_jitter_m", m.position_jitter);
    doc.num("safety_factor", report.safety_factor);

    doc.section("summary");
    doc.boolean("all_pass", report.all_pass());

    for c in &report.channels {
        doc.section(&format!("channel.{}", c.name));
        doc.num("phase_error_rad", c.phase_error);
        doc.num("perturbation", c.perturbation);
        doc.num("bound", c.bound);
        doc.boolean("pass", c.pass);
        doc.text("formula", c.formula);
        doc.text("note", &c.note);
    }

    let e = &report.spin_echo;
    doc.section("spin_echo");
    doc.comment("half gate, pi pulses, half gate, pi pulses; each half tuned to an effective phase of pi/2");
    doc.num("epsilon_p", e.epsilon_p);
    doc.num("step_intensity_W_m2", e.step_intensity);
    doc.num("intensity_ratio", e.intensity_ratio);
    doc.num("total_time_s", e.total_time);
    doc.num("net_effective_phase_rad", e.net_effective_phase);
    doc.num("local_phase_1_rad", e.local_phases[0]);
    doc.num("local_phase_2_rad", e.local_phases[1]);
    doc.num("residual_rad", e.residual);
    doc.num("control_residual_rad", e.control_residual);
    doc.num("stark_step_differential_rad", e.stark_step_differential);
    doc.out
}

pub const SWEEP_HEADER: &str = "lambda_nm,power_W,gamma_sc_T,status";

/// Rows in input order; `power_W` and `gamma_sc_T` are NaN unless `status`
/// is `ok`.
pub fn sweep_csv(lambdas_nm: &[f64], rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for (nm, row) in lambdas_nm.iter().zip(rows) {
        let _ = writeln!(out, "{nm:e},{:e},{:e},{}", row.power, row.gamma_sc_t, row.status.label());
    }
    out
}

pub const EFFECTIVE_PHASE_HEADER: &str = "t,effective_phase,com_contribution";

/// Running ZZ phase `phi(dd) - phi(du) - phi(ud) + phi(uu)` summed over both
/// modes, and the center-of-mass part alone. `results` must hold all eight
/// mode/state runs on a shared time grid.
pub fn effective_phase_csv(results: &[ModeResult]) -> String {
    let mut out = String::from(EFFECTIVE_PHASE_HEADER);
    out.push('\n');
    let Some(first) = results.first() else {
        return out;
    };
    let sign = |s: BasisState| match s {
        BasisState::DD | BasisState::UU => 1.0,
        _ => -1.0,
    };
    for (k, point) in first.trajectory.iter().enumerate() {
        let (mut total, mut com) = (0.0, 0.0);
        for r in results {
            let v = sign(r.basis_state) * r.trajectory[k].phi;
            total += v;
            if r.mode == Mode::CenterOfMass {
                com += v;
            }
        }
        let _ = writeln!(out, "{:e},{total:e},{com:e}", point.t);
    }
    out
}
