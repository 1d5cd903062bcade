//! Diagonal expectation values in coherent states.
//!
//! `Q` is multiplication by `phi` on `[-pi, pi)`; `P^theta = -i d/dphi - theta`
//! acts as a formal differential operator on the closed-form branches.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::kinematics::{coherent_state, gaussian, normalization_constant, wrap_angle, Angle, CoherentLabel, FluxParameter};
use crate::numerics::{erf_real, QuadratureRule};

/// `pi^{3/2}`.
const PI_3_2: f64 = 5.568_327_996_831_707_845_284_817_982_118_8;

/// Expectation values, corrections and dispersions of one coherent state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectationReport {
    pub q1: f64,
    pub q2: f64,
    pub p2: f64,
    pub mean_q: f64,
    pub mean_q2: f64,
    pub mean_p: f64,
    pub mean_p2: f64,
    pub disp_q: f64,
    pub disp_p: f64,
    pub uncertainty_product: f64,
}

fn a_squared() -> f64 {
    normalization_constant(FluxParameter::ZERO).powi(2)
}

/// `<Q> - alpha`. Odd in `alpha`:
/// `-sgn(alpha) A^2 pi^{3/2} (erf(pi) - erf(pi - |alpha|))`.
///
/// `|psi|^2 = A^2 e^{-u^2}` for every flux, so the value does not depend on
/// `theta`.
pub fn correction_q1(alpha: Angle, _theta: FluxParameter) -> f64 {
    let a = alpha.value();
    if a == 0.0 {
        return 0.0;
    }
    -a.signum() * a_squared() * PI_3_2 * (erf_real(PI) - erf_real(PI - a.abs()))
}

/// `<Q^2> - alpha^2 - 1/2`. Even in `alpha`:
/// `A^2 [pi (e^{-pi^2} - 2 e^{-(pi-|alpha|)^2}) + 2 pi^{3/2} (pi-|alpha|)(erf(pi) - erf(pi-|alpha|))]`.
pub fn correction_q2(alpha: Angle, _theta: FluxParameter) -> f64 {
    let r = PI - alpha.value().abs();
    a_squared()
        * (PI * ((-PI * PI).exp() - 2.0 * (-r * r).exp())
            + 2.0 * PI_3_2 * r * (erf_real(PI) - erf_real(r)))
}

/// `<(P^theta)^2> - m^2 - 1/2 = A^2 pi e^{-pi^2}`.
pub fn correction_p2(_theta: FluxParameter) -> f64 {
    a_squared() * PI * (-PI * PI).exp()
}

/// Closed-form report for `label`.
pub fn expectations(label: CoherentLabel) -> ExpectationReport {
    let alpha = label.alpha.value();
    let m = label.m as f64;
    let q1 = correction_q1(label.alpha, label.theta);
    let q2 = correction_q2(label.alpha, label.theta);
    let p2 = correction_p2(label.theta);
    let disp_q = (0.5 + q2 - 2.0 * alpha * q1 - q1 * q1).max(0.0).sqrt();
    let disp_p = (0.5 + p2).sqrt();
    ExpectationReport {
        q1,
        q2,
        p2,
        mean_q: alpha + q1,
        mean_q2: alpha * alpha + 0.5 + q2,
        mean_p: m,
        mean_p2: m * m + 0.5 + p2,
        disp_q,
        disp_p,
        uncertainty_product: disp_q * disp_p,
    }
}

/// `Delta Q * Delta P` for a state centred at `alpha`.
pub fn uncertainty_product(alpha: Angle, theta: FluxParameter) -> f64 {
    expectations(CoherentLabel { m: 0, alpha, theta }).uncertainty_product
}

/// `sqrt(1/4 - k pi^2 e^{-2 pi^2})`.
///
/// The product at `alpha = 0` is `sqrt((1/2 + q2(0)) (1/2 + p2))`, which is
/// this expression with `k = A^4`. The frequently quoted form uses `k = A^2`.
pub fn heisenberg_formula(k: f64) -> f64 {
    (0.25 - k * PI * PI * (-2.0 * PI * PI).exp()).sqrt()
}

/// The same report computed by quadrature over the two branches of the
/// state, with `P^theta` applied to the analytic branch expression.
pub fn expectations_by_quadrature(label: CoherentLabel, rule: &QuadratureRule) -> ExpectationReport {
    let alpha = label.alpha.value();
    let theta = label.theta.value();
    let m = label.m as f64;
    let at = normalization_constant(label.theta);
    let gauge = Complex64::from_polar(1.0, alpha * theta);
    let i = Complex64::i();
    // psi, psi' and psi'' on the branch that contains phi
    let branch = move |phi: f64| {
        let u = wrap_angle(phi - alpha);
        let psi = Complex64::from_polar(1.0, m * phi) * at * gauge * gaussian(u, theta);
        let g = i * m - Complex64::new(u, -theta);
        let d1 = g * psi;
        let d2 = (g * g - 1.0) * psi;
        (psi, d1, d2)
    };
    let breaks = [wrap_angle(alpha - PI)];
    let mean_q = rule
        .integrate_panels(&breaks, |phi| Complex64::new(phi * branch(phi).0.norm_sqr(), 0.0))
        .re;
    let mean_q2 = rule
        .integrate_panels(&breaks, |phi| Complex64::new(phi * phi * branch(phi).0.norm_sqr(), 0.0))
        .re;
    let mean_p = rule
        .integrate_panels(&breaks, |phi| {
            let (psi, d1, _) = branch(phi);
            psi.conj() * (-i * d1 - theta * psi)
        })
        .re;
    let mean_p2 = rule
        .integrate_panels(&breaks, |phi| {
            let (psi, d1, d2) = branch(phi);
            psi.conj() * (-d2 + 2.0 * i * theta * d1 + theta * theta * psi)
        })
        .re;
    let disp_q = (mean_q2 - mean_q * mean_q).max(0.0).sqrt();
    let disp_p = (mean_p2 - mean_p * mean_p).max(0.0).sqrt();
    ExpectationReport {
        q1: mean_q - alpha,
        q2: mean_q2 - alpha * alpha - 0.5,
        p2: mean_p2 - m * m - 0.5,
        mean_q,
        mean_q2,
        mean_p,
        mean_p2,
        disp_q,
        disp_p,
        uncertainty_product: disp_q * disp_p,
    }
}

/// `<label| e^{iQ} |label>` by quadrature.
pub fn unitary_position_expectation(label: CoherentLabel, rule: &QuadratureRule) -> Complex64 {
    let state = coherent_state(label);
    rule.integrate_panels(state.seam_points(), |phi| {
        Complex64::from_polar(state.eval(phi).norm_sqr(), phi)
    })
}

/// `<m,alpha| e^{iQ} |m,alpha> / <0,0| e^{iQ} |0,0>` at the same flux.
pub fn relative_position_expectation(label: CoherentLabel, rule: &QuadratureRule) -> Complex64 {
    let origin = CoherentLabel { m: 0, alpha: Angle::new(0.0), theta: label.theta };
    unitary_position_expectation(label, rule) / unitary_position_expectation(origin, rule)
}
