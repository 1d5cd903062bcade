//! Inner products `<m, alpha, theta | n, beta, theta>` of coherent states.
//!
//! For `0 <= alpha <= beta < pi` the integral splits into the part where
//! exactly one of the two states sits on its wrapped branch (`I_1`, supported
//! on `[alpha - pi, beta - pi)`) and the rest (`I_2`). Both
//! pieces have closed forms in terms of `erf` of complex argument.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::kinematics::{coherent_state, normalization_constant, wrap_angle, CoherentLabel, FluxParameter};
use crate::numerics::{erf_scaled, panel_bounds, QuadratureRule, DEFAULT_ORDER};

const SQRT_PI_2: f64 = 0.886_226_925_452_758_013_649_083_741_671; // sqrt(pi) / 2

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapMethod {
    Analytic,
    Quadrature,
}

/// An overlap together with its two pieces, scaled so that
/// `value = A_theta^2 * (i1 + i2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapResult {
    pub value: Complex64,
    pub i1: Complex64,
    pub i2: Complex64,
    pub method: OverlapMethod,
}

impl OverlapResult {
    fn conj(self) -> Self {
        Self {
            value: self.value.conj(),
            i1: self.i1.conj(),
            i2: self.i2.conj(),
            method: self.method,
        }
    }
}

/// One cell of an overlap table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCell {
    pub alpha: f64,
    pub beta: f64,
    pub value: Complex64,
    pub method: OverlapMethod,
}

impl GridCell {
    pub fn abs(&self) -> f64 {
        self.value.norm()
    }
}

/// The wrapped-branch piece, without the `A^2` and flux factors.
///
/// `(sqrt(pi)/2) e^{-(pi-d)^2} e^{i(s-pi)k} e^{-k^2/4} [erf(d + ik/2) + erf(d - ik/2)]`
/// with `d = (beta - alpha)/2`, `s = (alpha + beta)/2`, `k = n - m`.
pub fn i1_integral(alpha: f64, beta: f64, n_minus_m: i64) -> Result<Complex64> {
    if alpha == beta {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let d = 0.5 * (beta - alpha);
    let s = 0.5 * (alpha + beta);
    let k = n_minus_m as f64;
    let y = 0.5 * k;
    let bracket = erf_scaled(Complex64::new(d, y))? + erf_scaled(Complex64::new(d, -y))?;
    let phase = Complex64::from_polar(1.0, (s - PI) * k);
    Ok(SQRT_PI_2 * (-(PI - d) * (PI - d)).exp() * phase * bracket)
}

/// The principal-branch piece, without the `A^2` factor.
///
/// `(sqrt(pi)/2) e^{-d^2} e^{isk} e^{-k^2/4} [erf(pi - d + ik/2) + erf(pi - d - ik/2)]`.
pub fn i2_integral(alpha: f64, beta: f64, n_minus_m: i64) -> Result<Complex64> {
    let d = 0.5 * (beta - alpha);
    let s = 0.5 * (alpha + beta);
    let k = n_minus_m as f64;
    let y = 0.5 * k;
    let plus = erf_scaled(Complex64::new(PI - d, y))?;
    let minus = erf_scaled(Complex64::new(PI - d, -y))?;
    let bracket = plus + minus;
    debug_assert!(n_minus_m != 0 || bracket.im.abs() <= 1e-13 * bracket.norm().max(1.0));
    let phase = Complex64::from_polar(1.0, s * k);
    Ok(SQRT_PI_2 * (-d * d).exp() * phase * bracket)
}

/// Closed-form overlap `<a|b>`.
///
/// Pairs with both angles in `[0, pi)` use the formulas directly (swapping
/// and conjugating if `alpha > beta`); pairs with both angles in `(-pi, 0]`
/// are mapped there by the reflection `phi -> -phi`. Mixed-sign pairs have
/// no reduction and return [`Error::UnsupportedRange`].
pub fn overlap_analytic(a: CoherentLabel, b: CoherentLabel) -> Result<OverlapResult> {
    check_pair(a, b)?;
    let alpha = a.alpha.value();
    let beta = b.alpha.value();
    if alpha >= 0.0 && beta >= 0.0 {
        return ordered(a, b);
    }
    if alpha <= 0.0 && beta <= 0.0 && alpha > -PI && beta > -PI {
        // conjugation composed with phi -> -phi maps |m,alpha> to |m,-alpha>
        // up to a phase that cancels in the overlap
        let ra = CoherentLabel { alpha: (-alpha).into(), ..a };
        let rb = CoherentLabel { alpha: (-beta).into(), ..b };
        return Ok(ordered(ra, rb)?.conj());
    }
    Err(Error::UnsupportedRange { alpha, beta })
}

fn ordered(a: CoherentLabel, b: CoherentLabel) -> Result<OverlapResult> {
    if a.alpha.value() <= b.alpha.value() {
        restricted(a, b)
    } else {
        Ok(restricted(b, a)?.conj())
    }
}

/// `0 <= alpha <= beta < pi`.
fn restricted(a: CoherentLabel, b: CoherentLabel) -> Result<OverlapResult> {
    let alpha = a.alpha.value();
    let beta = b.alpha.value();
    let k = b.m - a.m;
    let theta = a.theta.value();
    let raw1 = i1_integral(alpha, beta, k)?;
    let raw2 = i2_integral(alpha, beta, k)?;
    let a2 = normalization_constant(FluxParameter::ZERO).powi(2);
    let flux = Complex64::from_polar(1.0, 2.0 * PI * theta);
    let value = a2 * (flux * raw1 + raw2);
    let scale = (theta * theta).exp();
    Ok(OverlapResult {
        value,
        i1: scale * flux * raw1,
        i2: scale * raw2,
        method: OverlapMethod::Analytic,
    })
}

fn check_pair(a: CoherentLabel, b: CoherentLabel) -> Result<()> {
    if a.theta != b.theta {
        return Err(Error::InvalidPair(a.theta.value(), b.theta.value()));
    }
    Ok(())
}

fn on_wrapped_branch(phi: f64, alpha: f64) -> bool {
    !(-PI..PI).contains(&(phi - alpha))
}

/// `<a|b>` by Gauss–Legendre quadrature split at both seams. Works for any
/// pair of labels. `i1` collects the panels where exactly one state is on
/// its wrapped branch.
pub fn overlap_quadrature(
    a: CoherentLabel,
    b: CoherentLabel,
    rule: &QuadratureRule,
) -> Result<OverlapResult> {
    check_pair(a, b)?;
    let sa = coherent_state(a);
    let sb = coherent_state(b);
    let alpha = a.alpha.value();
    let beta = b.alpha.value();
    let breaks = [wrap_angle(alpha - PI), wrap_angle(beta - PI)];
    let mut mixed = Complex64::new(0.0, 0.0);
    let mut rest = Complex64::new(0.0, 0.0);
    for (lo, hi) in panel_bounds(&breaks) {
        let piece = rule.integrate_over(lo, hi, |phi| sa.eval(phi).conj() * sb.eval(phi));
        let mid = 0.5 * (lo + hi);
        if on_wrapped_branch(mid, alpha) != on_wrapped_branch(mid, beta) {
            mixed += piece;
        } else {
            rest += piece;
        }
    }
    let at2 = normalization_constant(a.theta).powi(2);
    Ok(OverlapResult {
        value: mixed + rest,
        i1: mixed / at2,
        i2: rest / at2,
        method: OverlapMethod::Quadrature,
    })
}

fn fallback_rule() -> &'static QuadratureRule {
    static RULE: OnceLock<QuadratureRule> = OnceLock::new();
    RULE.get_or_init(|| QuadratureRule::gauss_legendre(DEFAULT_ORDER).expect("positive order"))
}

/// Closed form where available, quadrature otherwise.
pub fn overlap(a: CoherentLabel, b: CoherentLabel) -> Result<OverlapResult> {
    match overlap_analytic(a, b) {
        Err(Error::UnsupportedRange { .. } | Error::Domain { .. }) => {
            overlap_quadrature(a, b, fallback_rule())
        }
        other => other,
    }
}

/// Overlaps `<m_minus_n, alpha, theta | 0, beta, theta>` on an `alphas x betas`
/// grid, alpha-major.
pub fn overlap_grid(
    m_minus_n: i64,
    alphas: &[f64],
    betas: &[f64],
    theta: FluxParameter,
) -> Result<Vec<GridCell>> {
    let rows: Vec<Vec<GridCell>> = alphas
        .par_iter()
        .map(|&alpha| {
            betas
                .iter()
                .map(|&beta| {
                    let a = CoherentLabel { m: m_minus_n, alpha: alpha.into(), theta };
                    let b = CoherentLabel { m: 0, alpha: beta.into(), theta };
                    let r = overlap(a, b)?;
                    Ok(GridCell {
                        alpha,
                        beta,
                        value: r.value,
                        method: r.method,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// `steps` uniformly spaced angles `i pi / steps` in `[0, pi)`.
pub fn half_circle_grid(steps: usize) -> Vec<f64> {
    (0..steps).map(|i| i as f64 * PI / steps as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rule() -> QuadratureRule {
        QuadratureRule::gauss_legendre(DEFAULT_ORDER).unwrap()
    }

    fn label(m: i64, alpha: f64, theta: f64) -> CoherentLabel {
        CoherentLabel::new(m, alpha, theta).unwrap()
    }

    #[test]
    fn diagonal_is_one() {
        for &(m, alpha, theta) in &[(0, 0.0, 0.0), (3, 1.1, 0.0), (-2, 2.9, 0.7), (1, -2.0, 0.4)] {
            let l = label(m, alpha, theta);
            let r = overlap_analytic(l, l).unwrap();
            assert!((r.value - 1.0).norm() <= 1e-13, "{l:?}: {}", r.value);
            assert_eq!(r.i1, Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn equal_angles_kill_the_wrapped_piece() {
        assert_eq!(i1_integral(0.8, 0.8, 3).unwrap(), Complex64::new(0.0, 0.0));
        let q = overlap_quadrature(label(0, 0.8, 0.0), label(3, 0.8, 0.0), &rule()).unwrap();
        assert!(q.i1.norm() < 1e-15);
    }

    #[test]
    fn spot_values_match_quadrature() {
        let rule = rule();
        let cases = [
            (label(0, 0.0, 0.0), label(0, 0.8, 0.0)),
            (label(2, 0.3, 0.25), label(5, 1.1, 0.25)),
            (label(1, 0.5, 0.0), label(0, 1.5, 0.0)),
            (label(4, 2.8, 0.7), label(-1, 0.1, 0.7)),
            (label(-3, -0.4, 0.3), label(2, -2.7, 0.3)),
        ];
        for (a, b) in cases {
            let exact = overlap_analytic(a, b).unwrap();
            let quad = overlap_quadrature(a, b, &rule).unwrap();
            assert!((exact.value - quad.value).norm() <= 1e-10, "{a:?} {b:?}");
            assert!((exact.i1 - quad.i1).norm() <= 1e-10);
            assert!((exact.i2 - quad.i2).norm() <= 1e-10);
        }
    }

    #[test]
    fn analytic_pieces_assemble() {
        let a = label(1, 0.4, 0.6);
        let b = label(4, 2.2, 0.6);
        let r = overlap_analytic(a, b).unwrap();
        let at2 = normalization_constant(a.theta).powi(2);
        assert!((r.value - at2 * (r.i1 + r.i2)).norm() <= 1e-15);
    }

    #[test]
    fn errors() {
        let a = label(0, 0.1, 0.2);
        let b = label(0, 0.1, 0.3);
        assert!(matches!(overlap_analytic(a, b), Err(Error::InvalidPair(..))));
        assert!(matches!(overlap_quadrature(a, b, &rule()), Err(Error::InvalidPair(..))));
        let mixed = overlap_analytic(label(0, -0.5, 0.0), label(0, 0.5, 0.0));
        assert!(matches!(mixed, Err(Error::UnsupportedRange { .. })));
        let fallback = overlap(label(0, -0.5, 0.0), label(0, 0.5, 0.0)).unwrap();
        assert_eq!(fallback.method, OverlapMethod::Quadrature);
    }

    #[test]
    fn magnitude_depends_on_flux_off_the_diagonal() {
        // the wrapped piece carries e^{2 pi i theta} relative to the other one
        let m0 = overlap_analytic(label(0, 0.2, 0.0), label(1, 2.9, 0.0)).unwrap().value.norm();
        let m5 = overlap_analytic(label(0, 0.2, 0.5), label(1, 2.9, 0.5)).unwrap().value.norm();
        assert!((m0 - m5).abs() > 1e-3);
        let d0 = overlap_analytic(label(0, 1.0, 0.0), label(3, 1.0, 0.0)).unwrap().value.norm();
        let d5 = overlap_analytic(label(0, 1.0, 0.5), label(3, 1.0, 0.5)).unwrap().value.norm();
        assert!((d0 - d5).abs() <= 1e-14);
    }

    #[test]
    fn grid_layout() {
        let alphas = half_circle_grid(4);
        let cells = overlap_grid(0, &alphas, &alphas, FluxParameter::ZERO).unwrap();
        assert_eq!(cells.len(), 16);
        assert_eq!((cells[1].alpha, cells[1].beta), (0.0, alphas[1]));
        for c in cells.iter().filter(|c| c.alpha == c.beta) {
            assert!((c.abs() - 1.0).abs() <= 1e-10);
        }
        assert!(cells.iter().all(|c| c.abs() > 0.0));
        let q = overlap_quadrature(label(0, 0.0, 0.0), label(0, PI / 2.0, 0.0), &rule()).unwrap();
        let cell = overlap_grid(0, &[0.0], &[PI / 2.0], FluxParameter::ZERO).unwrap()[0];
        assert!((cell.abs() - q.value.norm()).abs() <= 1e-10);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn hermitian_symmetry(
            m in -5i64..5, n in -5i64..5,
            alpha in -PI..PI, beta in -PI..PI,
            theta in 0.0f64..1.0,
        ) {
            let rule = QuadratureRule::gauss_legendre(256).unwrap();
            let a = label(m, alpha, theta);
            let b = label(n, beta, theta);
            let ab = overlap_quadrature(a, b, &rule).unwrap().value;
            let ba = overlap_quadrature(b, a, &rule).unwrap().value;
            prop_assert!((ab - ba.conj()).norm() <= 1e-12);
            prop_assert!(ab.norm() <= 1.0 + 1e-10);
        }

        #[test]
        fn translation_covariance(
            k in -5i64..5,
            alpha in 0.0f64..PI, width in 0.0f64..PI, shift in 0.0f64..1.0,
            theta in 0.0f64..1.0,
        ) {
            let beta = (alpha + width).min(PI - 1e-9);
            let gamma = shift * (PI - 1e-9 - beta);
            let base = overlap_analytic(label(0, alpha, theta), label(k, beta, theta)).unwrap();
            let moved = overlap_analytic(label(0, alpha + gamma, theta), label(k, beta + gamma, theta)).unwrap();
            prop_assert!((base.value.norm() - moved.value.norm()).abs() <= 1e-10);
        }

        #[test]
        fn reflection_reduction_matches_quadrature(
            m in -4i64..4, n in -4i64..4,
            alpha in 0.01f64..3.1, beta in 0.01f64..3.1,
            theta in 0.0f64..1.0,
        ) {
            let rule = QuadratureRule::gauss_legendre(256).unwrap();
            let a = label(m, -alpha, theta);
            let b = label(n, -beta, theta);
            let exact = overlap_analytic(a, b).unwrap().value;
            let quad = overlap_quadrature(a, b, &rule).unwrap().value;
            prop_assert!((exact - quad).norm() <= 1e-10);
        }
    }
}
