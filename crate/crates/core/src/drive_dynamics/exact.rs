//! Displacement and phase at arbitrary times from antiderivatives.
//!
//! The drive is written as `f(t) = sum_k c_k exp(i nu_k t)`. Then
//! `beta(t) = -(1/hbar) sum_k c_k E(nu_k - w, t)` and
//! `phi(t) = -(1/hbar^2) Im sum_jk c_j c_k D(nu_j - w, nu_k + w, t)` with
//! `E(mu, t) = int_0^t exp(i mu s) ds` and
//! `D(mu, lambda, t) = int_0^t exp(i mu s) E(lambda, s) ds`.

use num_complex::Complex64;

use super::waveform::{exp_integral, DriveProfile};
use crate::constants::HBAR;

/// `int_0^t exp(i mu s) E(lambda, s) ds`.
pub fn nested_exp_integral(mu: f64, lambda: f64, t: f64) -> Complex64 {
    let i = Complex64::i();
    if (lambda * t).abs() >= 1e-3 {
        (exp_integral(mu + lambda, t) - exp_integral(mu, t)) / (i * lambda)
    } else if (mu * t).abs() >= 1e-3 {
        // Integration by parts swaps the roles of mu and lambda.
        exp_integral(lambda, t) * exp_integral(mu, t)
            - (exp_integral(lambda + mu, t) - exp_integral(lambda, t)) / (i * mu)
    } else {
        // Both phases small: double power series, sum over a + b <= 5.
        let (im, il) = (i * mu, i * lambda);
        let mut total = Complex64::new(0.0, 0.0);
        let mut fact_a = 1.0;
        for a in 0..6 {
            if a > 0 {
                fact_a *= a as f64;
            }
            let mut fact_b1 = 1.0;
            for b in 0..(6 - a) {
                fact_b1 *= (b + 1) as f64;
                let power = a + b + 2;
                let coeff = im.powi(a) * il.powi(b) / (fact_a * fact_b1);
                total += coeff * t.powi(power) / power as f64;
            }
        }
        total
    }
}

/// A real drive `f_const + f_osc sin(W t)` as a sum of three exponentials,
/// scaled by 1/hbar.
#[derive(Debug, Clone, Copy)]
pub struct ExponentialDrive {
    terms: [(Complex64, f64); 3],
}

impl ExponentialDrive {
    pub fn new(f_const: f64, f_osc: f64, omega_mod: f64) -> Self {
        let half = Complex64::new(0.0, -0.5 * f_osc / HBAR);
        Self {
            terms: [
                (Complex64::new(f_const / HBAR, 0.0), 0.0),
                (half, omega_mod),
                (-half, -omega_mod),
            ],
        }
    }

    pub fn from_profile(f_const: f64, f_osc: f64, profile: &DriveProfile) -> Self {
        Self::new(f_const, f_osc, profile.omega_mod)
    }

    pub fn beta(&self, omega: f64, t: f64) -> Complex64 {
        -self
            .terms
            .iter()
            .map(|&(c, nu)| c * exp_integral(nu - omega, t))
            .sum::<Complex64>()
    }

    pub fn phase(&self, omega: f64, t: f64) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(cj, nj) in &self.terms {
            if cj == Complex64::new(0.0, 0.0) {
                continue;
            }
            for &(ck, nk) in &self.terms {
                if ck == Complex64::new(0.0, 0.0) {
                    continue;
                }
                acc += cj * ck * nested_exp_integral(nj - omega, nk + omega, t);
            }
        }
        -acc.im
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate, QuadSettings};
    use proptest::prelude::*;

    fn reference(mu: f64, lambda: f64, t: f64) -> Complex64 {
        let s = QuadSettings { rel_tol: 1e-13, ..Default::default() };
        integrate(|s| Complex64::from_polar(1.0, mu * s) * exp_integral(lambda, s), 0.0, t, &s).unwrap()
    }

    #[test]
    fn nested_integral_branches() {
        let t = 1e-5;
        for (mu, lambda) in [(3e6, 2e6), (3e6, 1.0), (1.0, 3e6), (1.0, 2.0), (0.0, 0.0), (-5e5, 5e5)] {
            let a = nested_exp_integral(mu, lambda, t);
            let b = reference(mu, lambda, t);
            assert!((a - b).norm() <= 1e-11 * (t * t), "{mu} {lambda}: {a} {b}");
        }
    }

    proptest! {
        #[test]
        fn nested_integral_matches_quadrature(mu in -2e7f64..2e7, lambda in -2e7f64..2e7, t in 1e-8f64..2e-5) {
            let a = nested_exp_integral(mu, lambda, t);
            let b = reference(mu, lambda, t);
            prop_assert!((a - b).norm() <= 1e-9 * (t * t));
        }
    }
}
