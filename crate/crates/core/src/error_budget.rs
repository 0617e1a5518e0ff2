//! Technical-noise budget: polarization imbalance, timing, power and
//! position errors, plus a four-step spin-echo simulation.

use std::f64::consts::PI;

use crate::constants::HBAR;
use crate::drive_dynamics::exact::ExponentialDrive;
use crate::drive_dynamics::zz;
use crate::error::{Error, Result};
use crate::gate_designer::{wrap_angle, GateDesign};
use crate::trap_mechanics::{imbalanced_drive, BasisState, Mode, Spin, TrapConfig};

/// Default "much smaller than" margin: a channel passes when its phase
/// error stays below pi / safety factor.
pub const DEFAULT_SAFETY_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorModel {
    /// Intensity imbalance between the two polarization components.
    pub epsilon_p: f64,
    /// Gate-duration mismatch, s.
    pub delta_t: f64,
    /// Fractional amplitude of total-power fluctuations.
    pub epsilon_f: f64,
    /// Power-fluctuation frequency, rad/s.
    pub omega_f: f64,
    /// Beam-pointing jitter, m.
    pub position_jitter: f64,
}

impl Default for ErrorModel {
    fn default() -> Self {
        Self {
            epsilon_p: 1e-2,
            delta_t: 10e-9,
            epsilon_f: 3e-4,
            omega_f: 2.0 * PI * 1e3,
            position_jitter: 10e-9,
        }
    }
}

impl ErrorModel {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("epsilon_p", self.epsilon_p),
            ("delta_t", self.delta_t),
            ("epsilon_f", self.epsilon_f),
            ("omega_f", self.omega_f),
            ("position_jitter", self.position_jitter),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidInput(format!("{name} must be non-negative, got {v:e}")));
            }
        }
        if self.epsilon_p >= 1.0 || self.epsilon_f >= 1.0 {
            return Err(Error::InvalidInput("epsilon_p and epsilon_f must be below 1".into()));
        }
        Ok(())
    }
}

/// `sqrt(hbar / (8 wz m W^2))`: the imbalance that alone produces a phase
/// error of pi at the leading-order operating point.
pub fn polarization_tolerance(trap: &TrapConfig, waist: f64) -> f64 {
    (HBAR / (8.0 * trap.omega_z * trap.mass() * waist * waist)).sqrt()
}

/// Light intensity `e^(-1/2) I0` at an ion half a waist from the beam center.
pub fn nominal_ion_intensity(design: &GateDesign) -> f64 {
    (-0.5f64).exp() * design.peak_intensity
}

/// `eps I (psi+ - psi-) T / hbar`, per ion.
pub fn polarization_phase_error(epsilon_p: f64, design: &GateDesign) -> f64 {
    epsilon_p * nominal_ion_intensity(design) * design.dipole.differential().abs() * design.gate_time() / HBAR
}

/// Equivalent imbalance `dT^2 W / (2T)` of a gate-duration mismatch.
pub fn timing_equivalent_imbalance(delta_t: f64, design: &GateDesign) -> f64 {
    delta_t * delta_t * design.profile.omega_mod / (2.0 * design.gate_time())
}

pub fn timing_phase_error(delta_t: f64, design: &GateDesign) -> f64 {
    polarization_phase_error(timing_equivalent_imbalance(delta_t, design), design)
}

/// Mismatch at which the equivalent imbalance equals the polarization
/// tolerance.
pub fn timing_threshold(design: &GateDesign) -> f64 {
    let bound = polarization_tolerance(&design.trap, design.beam.waist);
    (2.0 * design.gate_time() * bound / design.profile.omega_mod).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluctuationRegime {
    /// `w_f <= W / 10`.
    Slow,
    Resonant,
    /// `w_f >= 10 W`; bounded by the slow value.
    Fast,
}

impl FluctuationRegime {
    pub fn label(self) -> &'static str {
        match self {
            FluctuationRegime::Slow => "slow",
            FluctuationRegime::Resonant => "resonant",
            FluctuationRegime::Fast => "fast",
        }
    }
}

pub fn fluctuation_regime(omega_f: f64, design: &GateDesign) -> FluctuationRegime {
    let w = design.profile.omega_mod;
    if omega_f <= w / 10.0 {
        FluctuationRegime::Slow
    } else if omega_f >= 10.0 * w {
        FluctuationRegime::Fast
    } else {
        FluctuationRegime::Resonant
    }
}

pub fn power_fluctuation_error(epsilon_f: f64, omega_f: f64, design: &GateDesign) -> f64 {
    let resonant = polarization_phase_error(epsilon_f, design);
    match fluctuation_regime(omega_f, design) {
        FluctuationRegime::Resonant => resonant,
        FluctuationRegime::Slow | FluctuationRegime::Fast => resonant / (2.0 * PI * design.profile.n as f64),
    }
}

/// One percent of the waist.
pub fn position_jitter_bound(design: &GateDesign) -> f64 {
    position_jitter_bound_for(design.beam.waist)
}

pub fn position_jitter_bound_for(waist: f64) -> f64 {
    0.01 * waist
}

pub const FREQUENCY_NOTE: &str =
    "laser frequency drifts change psi+ - psi- negligibly for a far-detuned beam; not modeled";

/// Phase error from laser-frequency fluctuations, taken as zero.
pub fn frequency_fluctuation_error(_design: &GateDesign) -> f64 {
    0.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinEchoReport {
    pub epsilon_p: f64,
    /// Peak intensity of each echo half, W/m^2.
    pub step_intensity: f64,
    /// `step_intensity / design peak intensity`.
    pub intensity_ratio: f64,
    pub step_time: f64,
    pub total_time: f64,
    /// Phase of each basis state after one half (index by `BasisState::index`).
    pub theta_step: [f64; 4],
    pub theta_echo: [f64; 4],
    pub theta_control: [f64; 4],
    /// ZZ phase after the full sequence.
    pub net_effective_phase: f64,
    /// Differential (down minus up) single-ion phases after the sequence.
    pub local_phases: [f64; 2],
    pub control_local_phases: [f64; 2],
    /// Light-shift part of the single-ion phases, echo and control.
    pub stark_local: [f64; 2],
    pub control_stark_local: [f64; 2],
    /// Single-half light-shift phase difference of ion 1.
    pub stark_step_differential: f64,
    /// Largest of the ZZ error and the single-ion phases.
    pub residual: f64,
    pub control_residual: f64,
}

fn spin_sign(s: Spin) -> f64 {
    match s {
        Spin::Down => 1.0,
        Spin::Up => -1.0,
    }
}

/// Down-minus-up phase of each ion.
fn local_phases(theta: &[f64; 4]) -> [f64; 2] {
    [
        0.5 * (theta[0] + theta[1] - theta[2] - theta[3]),
        0.5 * (theta[0] - theta[1] + theta[2] - theta[3]),
    ]
}

/// Motional and light-shift phases of every basis state for one gate half
/// at peak intensity `ratio * I0`.
fn step_phases(design: &GateDesign, epsilon: f64, ratio: f64) -> ([f64; 4], [f64; 4]) {
    let p = &design.placement;
    let (f1, f2) = (p.f_tilde_1 * ratio, p.f_tilde_2 * ratio);
    let t = design.gate_time();
    let dpsi = design.dipole.differential();
    let mut motional = [0.0; 4];
    let mut stark = [0.0; 4];
    for state in BasisState::ALL {
        for mode in Mode::ALL {
            let (fc, fo) = imbalanced_drive(f1, f2, &design.dipole, epsilon, &design.trap, mode, state);
            motional[state.index()] += ExponentialDrive::from_profile(fc, fo, &design.profile)
                .phase(mode.frequency(design.trap.omega_z), t);
        }
        // State-dependent light shift: +-(I_i / 2) eps dpsi for down/up.
        let shift = |s: Spin, intensity: f64| spin_sign(s) * 0.5 * intensity * ratio * epsilon * dpsi;
        let u = shift(state.0, p.intensity_1) + shift(state.1, p.intensity_2);
        stark[state.index()] = -u * t / HBAR;
    }
    (motional, stark)
}

/// Four-step sequence: half gate, pi pulses on both ions, half gate,
/// pi pulses. Each half runs at the intensity that gives an effective
/// phase of pi/2 with perfect polarization.
pub fn spin_echo_simulate(design: &GateDesign, epsilon_p: f64) -> SpinEchoReport {
    let (ideal, _) = step_phases(design, 0.0, 1.0);
    let ratio = (0.5 * PI / zz(&ideal).abs()).sqrt();
    let (motional, stark) = step_phases(design, epsilon_p, ratio);

    let add = |a: &[f64; 4], b: &[f64; 4]| std::array::from_fn::<f64, 4, _>(|k| a[k] + b[k]);
    let theta_step = add(&motional, &stark);
    let echo = |x: &[f64; 4]| {
        std::array::from_fn::<f64, 4, _>(|k| x[k] + x[BasisState::ALL[k].flip().index()])
    };
    let doubled = |x: &[f64; 4]| std::array::from_fn::<f64, 4, _>(|k| 2.0 * x[k]);
    let theta_echo = echo(&theta_step);
    let theta_control = doubled(&theta_step);

    let residual_of = |theta: &[f64; 4]| {
        let zz_error = wrap_angle(zz(theta).abs() - PI).abs();
        let local = local_phases(theta);
        zz_error.max(local[0].abs()).max(local[1].abs())
    };
    let stark_step = local_phases(&stark);
    SpinEchoReport {
        epsilon_p,
        step_intensity: ratio * design.peak_intensity,
        intensity_ratio: ratio,
        step_time: design.gate_time(),
        total_time: 2.0 * design.gate_time(),
        theta_step,
        theta_echo,
        theta_control,
        net_effective_phase: zz(&theta_echo),
        local_phases: local_phases(&theta_echo),
        control_local_phases: local_phases(&theta_control),
        stark_local: local_phases(&echo(&stark)),
        control_stark_local: local_phases(&doubled(&stark)),
        stark_step_differential: stark_step[0].abs(),
        residual: residual_of(&theta_echo),
        control_residual: residual_of(&theta_control),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelReport {
    pub name: &'static str,
    /// Gate phase error caused by the channel, rad.
    pub phase_error: f64,
    /// The perturbation itself, in its own units.
    pub perturbation: f64,
    /// Tolerance on the perturbation.
    pub bound: f64,
    pub pass: bool,
    pub formula: &'static str,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub model: ErrorModel,
    pub safety_factor: f64,
    pub channels: Vec<ChannelReport>,
    pub spin_echo: SpinEchoReport,
}

impl ErrorReport {
    pub fn channel(&self, name: &str) -> Option<&ChannelReport> {
        self.channels.iter().find(|c| c.name == name)
    }

    pub fn all_pass(&self) -> bool {
        self.channels.iter().all(|c| c.pass)
    }
}

pub fn error_budget(design: &GateDesign, model: &ErrorModel, safety_factor: f64) -> Result<ErrorReport> {
    model.validate()?;
    if !(safety_factor.is_finite() && safety_factor >= 1.0) {
        return Err(Error::InvalidInput(format!("safety factor must be at least 1, got {safety_factor:e}")));
    }
    let limit = PI / safety_factor;
    let bound_p = polarization_tolerance(&design.trap, design.beam.waist);
    let mut channels = Vec::new();

    let phi = polarization_phase_error(model.epsilon_p, design);
    channels.push(ChannelReport {
        name: "polarization",
        phase_error: phi,
        perturbation: model.epsilon_p,
        bound: bound_p / safety_factor,
        pass: phi < limit,
        formula: "dphi = eps_p I (psi+ - psi-) T / hbar; bound sqrt(hbar / (8 wz m W^2))",
        note: format!("uncorrected; spin echo residual {:e} rad", spin_echo_simulate(design, model.epsilon_p).residual),
    });

    let phi = timing_phase_error(model.delta_t, design);
    let mut note = String::new();
    if model.delta_t * design.profile.omega_mod > 0.1 {
        note.push_str("W dT exceeds 0.1, small-mismatch expansion unreliable");
    }
    channels.push(ChannelReport {
        name: "timing",
        phase_error: phi,
        perturbation: model.delta_t,
        bound: timing_threshold(design) / safety_factor.sqrt(),
        pass: phi < limit,
        formula: "eps_p -> dT^2 W / (2T)",
        note,
    });

    let phi = power_fluctuation_error(model.epsilon_f, model.omega_f, design);
    let regime = fluctuation_regime(model.omega_f, design);
    let bound_f = match regime {
        FluctuationRegime::Resonant => bound_p,
        _ => bound_p * 2.0 * PI * design.profile.n as f64,
    };
    channels.push(ChannelReport {
        name: "power",
        phase_error: phi,
        perturbation: model.epsilon_f,
        bound: bound_f / safety_factor,
        pass: phi < limit,
        formula: "eps_p -> eps_f, divided by 2 pi n away from w_f ~ W",
        note: format!("{} regime", regime.label()),
    });

    let bound_z = position_jitter_bound(design);
    let mut note = String::from("1% of the waist");
    if bound_z == 0.0 {
        note.push_str("; degenerate zero waist");
    }
    channels.push(ChannelReport {
        name: "position",
        phase_error: f64::NAN,
        perturbation: model.position_jitter,
        bound: bound_z,
        pass: model.position_jitter <= bound_z,
        formula: "dz <= 0.01 W",
        note,
    });

    channels.push(ChannelReport {
        name: "frequency",
        phase_error: frequency_fluctuation_error(design),
        perturbation: 0.0,
        bound: f64::INFINITY,
        pass: true,
        formula: "none",
        note: FREQUENCY_NOTE.to_string(),
    });

    Ok(ErrorReport {
        model: *model,
        safety_factor,
        channels,
        spin_echo: spin_echo_simulate(design, model.epsilon_p),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atomic_data::{barium138, calcium40};
    use crate::constants::{angular_frequency, hz_to_angular};
    use crate::gate_designer::design_gate;
    use crate::trap_mechanics::Geometry;

    fn design(n: u32) -> GateDesign {
        let t = TrapConfig::new(calcium40(), hz_to_angular(200e3)).unwrap();
        design_gate(&t, Geometry::C, 5e-6, n, angular_frequency(395.1e-9)).unwrap()
    }

    #[test]
    fn polarization_bounds() {
        let ca = TrapConfig::new(calcium40(), hz_to_angular(200e3)).unwrap();
        let ba = TrapConfig::new(barium138(), hz_to_angular(200e3)).unwrap();
        let bca = polarization_tolerance(&ca, 5e-6);
        let bba = polarization_tolerance(&ba, 5e-6);
        assert!((bca * 400.0 - 1.0).abs() < 0.2, "{}", 1.0 / bca);
        assert!((bba * 700.0 - 1.0).abs() < 0.2, "{}", 1.0 / bba);
        assert!(((bca / bba) / (ba.mass() / ca.mass()).sqrt() - 1.0).abs() < 0.01);
        assert!((polarization_tolerance(&ca, 20e-6) * 4.0 / bca - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phase_error_at_bound_is_order_pi() {
        let d = design(15);
        assert_eq!(polarization_phase_error(0.0, &d), 0.0);
        let b = polarization_tolerance(&d.trap, 5e-6);
        let phi = polarization_phase_error(b, &d);
        assert!(phi > 0.5 * PI && phi < 2.0 * PI, "{}", phi / PI);
        assert!((polarization_phase_error(b / 2.0, &d) * 2.0 / phi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn timing_threshold_values() {
        let d15 = design(15);
        assert_eq!(timing_phase_error(0.0, &d15), 0.0);
        let t15 = timing_threshold(&d15);
        assert!((t15 / 0.5e-6 - 1.0).abs() < 0.2, "{t15:e}");
        let t60 = timing_threshold(&design(60));
        assert!((t60 / t15 / 2.0 - 1.0).abs() < 0.05, "{}", t60 / t15);
        // At the threshold the mapped imbalance sits on the bound.
        let b = polarization_tolerance(&d15.trap, 5e-6);
        assert!((timing_equivalent_imbalance(t15, &d15) / b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn power_fluctuation_regimes() {
        let d = design(15);
        assert_eq!(power_fluctuation_error(0.0, 1.0, &d), 0.0);
        let w = d.profile.omega_mod;
        let resonant = power_fluctuation_error(1e-3, w, &d);
        let slow = power_fluctuation_error(1e-3, w / 100.0, &d);
        let fast = power_fluctuation_error(1e-3, w * 100.0, &d);
        assert!((resonant / slow / (2.0 * PI * 15.0) - 1.0).abs() < 1e-12);
        assert_eq!(fast, slow);
        // The resonant channel shares the polarization bound.
        let b = polarization_tolerance(&d.trap, 5e-6);
        assert!((power_fluctuation_error(b, w, &d) - polarization_phase_error(b, &d)).abs() < 1e-15);
    }

    #[test]
    fn position_bounds() {
        let d = design(15);
        assert!((position_jitter_bound(&d) - 50e-9).abs() < 1e-22);
        assert!((position_jitter_bound_for(30e-6) - 300e-9).abs() < 1e-21);
        assert_eq!(position_jitter_bound_for(0.0), 0.0);
    }

    #[test]
    fn echo_without_imbalance_is_perfect() {
        let r = spin_echo_simulate(&design(15), 0.0);
        assert!((r.net_effective_phase.abs() - PI).abs() < 1e-9, "{}", r.net_effective_phase / PI);
        assert!(r.residual < 1e-9);
        assert_eq!(r.total_time, 2.0 * r.step_time);
    }

    #[test]
    fn echo_pairs_steps_exactly() {
        // The swap maps each state onto its partner, whose phase is equal.
        let r = spin_echo_simulate(&design(15), 0.0);
        let th = r.theta_step;
        let scale = th.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        assert!((th[0] - th[3]).abs() <= 1e-12 * scale);
        assert!((th[1] - th[2]).abs() <= 1e-12 * scale);
    }

    #[test]
    fn echo_cancels_light_shift() {
        let d = design(15);
        let r = spin_echo_simulate(&d, 1e-2);
        assert!(r.stark_local[0].abs() < 1e-12 * r.stark_step_differential);
        assert!((r.control_stark_local[0].abs() / (2.0 * r.stark_step_differential) - 1.0).abs() < 1e-12);
        assert!(r.residual < 1e-2 * r.control_residual, "{} {}", r.residual, r.control_residual);
        // Light-shift difference per half equals the analytic expression.
        let analytic = polarization_phase_error(1e-2, &d) * r.intensity_ratio;
        assert!((r.stark_step_differential / analytic - 1.0).abs() < 1e-12);
    }

    #[test]
    fn echo_residual_scaling() {
        let d = design(15);
        let a = spin_echo_simulate(&d, 1e-3).residual;
        let b = spin_echo_simulate(&d, 1e-2).residual;
        let exponent = (b / a).log10();
        assert!((exponent - 2.0).abs() < 0.1, "{exponent}");
        let r15 = spin_echo_simulate(&design(15), 1e-2).residual;
        let r30 = spin_echo_simulate(&design(30), 1e-2).residual;
        assert!((r30 / r15 / 0.5 - 1.0).abs() < 0.15, "{}", r30 / r15);
    }

    #[test]
    fn budget_report() {
        let d = design(15);
        let r = error_budget(&d, &ErrorModel::default(), DEFAULT_SAFETY_FACTOR).unwrap();
        assert_eq!(r.channels.len(), 5);
        assert_eq!(r.channel("frequency").unwrap().phase_error, 0.0);
        let zero = ErrorModel { epsilon_p: 0.0, delta_t: 0.0, epsilon_f: 0.0, omega_f: 0.0, position_jitter: 0.0 };
        let z = error_budget(&d, &zero, DEFAULT_SAFETY_FACTOR).unwrap();
        for c in &z.channels {
            assert!(c.phase_error == 0.0 || c.phase_error.is_nan(), "{}", c.name);
            assert!(c.pass);
        }
        assert!(error_budget(&d, &ErrorModel { epsilon_p: 1.5, ..zero }, 10.0).is_err());
        assert!(error_budget(&d, &zero, 0.5).is_err());
    }
}
