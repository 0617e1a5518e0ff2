//! Displacement and phase by adaptive quadrature, interval by interval.

use std::cell::RefCell;

use num_complex::Complex64;

use super::waveform::DriveProfile;
use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::numerics::{integrate, QuadSettings};

/// Running state of the two integrals.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureState {
    /// `H(t) = int_0^t f e^{-i w s} ds / hbar`, so `beta = -H`.
    pub h: Complex64,
    pub phi: f64,
}

/// Advances `state` from `a` to `b`. `h` is the scaled integrand
/// `f(t) exp(-i w t) / hbar`.
pub fn advance<F>(state: QuadratureState, h: &F, a: f64, b: f64, settings: &QuadSettings) -> Result<QuadratureState>
where
    F: Fn(f64) -> Complex64,
{
    if b <= a {
        return Ok(state);
    }
    let delta = integrate(h, a, b, settings)?;
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let nested = integrate(
        |t| {
            match integrate(h, a, t, settings) {
                Ok(inner) => h(t) * inner.conj(),
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    Complex64::new(f64::NAN, f64::NAN)
                }
            }
        },
        a,
        b,
        settings,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let nested = nested?;
    let increment = state.h.conj() * delta + nested;
    Ok(QuadratureState {
        h: state.h + delta,
        phi: state.phi - increment.im,
    })
}

pub fn integrand(f_const: f64, f_osc: f64, profile: DriveProfile, omega: f64) -> impl Fn(f64) -> Complex64 {
    move |t| Complex64::from_polar((f_const + f_osc * profile.g(t)) / HBAR, -omega * t)
}
