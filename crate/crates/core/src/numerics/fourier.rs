//! Fourier analysis and synthesis of periodic wavefunctions.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::quadrature::{panel_bounds, QuadratureRule};
use crate::error::{Error, Result};
use crate::kinematics::CircleWavefunction;

/// Default truncation index for Fourier work.
pub const DEFAULT_MAX_INDEX: usize = 64;

/// Coefficients `a_n`, `|n| <= max_index`, of `psi(phi) = sum a_n e^{i n phi}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    max_index: usize,
    coeffs: Vec<Complex64>,
}

impl FourierSeries {
    /// Builds a series from coefficients ordered `a_{-N}, ..., a_N`.
    pub fn from_coefficients(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len().is_multiple_of(2) {
            return Err(Error::Config(
                "a Fourier series needs an odd number of coefficients".into(),
            ));
        }
        Ok(Self {
            max_index: coeffs.len() / 2,
            coeffs,
        })
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    /// `a_n`, or zero for `|n| > max_index`.
    pub fn coeff(&self, n: i64) -> Complex64 {
        let idx = n + self.max_index as i64;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[idx as usize]
        }
    }

    /// Coefficients ordered `a_{-N}, ..., a_N`.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `sum_n |a_n|^2`, i.e. `||psi||^2 / 2pi` for the truncated series.
    pub fn power(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// `a_n = (1/2pi) * integral e^{-i n phi} psi(phi) dphi` for `|n| <= max_index`.
///
/// The integral is split at the seams of `psi`. The rule must carry at least
/// four nodes per retained harmonic (`order >= 4 * max_index`).
pub fn fourier_analyze(
    psi: &CircleWavefunction,
    max_index: usize,
    rule: &QuadratureRule,
) -> Result<FourierSeries> {
    if rule.order() < 4 * max_index {
        return Err(Error::Config(format!(
            "quadrature order {} is below 4N = {} for Fourier analysis",
            rule.order(),
            4 * max_index
        )));
    }
    let n = max_index as i64;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * max_index + 1];
    for (a, b) in panel_bounds(psi.seam_points()) {
        rule.for_each_node(a, b, |phi, w| {
            let value = psi.eval(phi) * (w / (2.0 * PI));
            let step = Complex64::from_polar(1.0, -phi);
            // e^{-i n phi} for n >= 0 by recurrence, negative n by conjugation.
            let mut up = value;
            let mut down = value;
            coeffs[max_index] += value;
            for k in 1..=n as usize {
                up *= step;
                down *= step.conj();
                coeffs[max_index + k] += up;
                coeffs[max_index - k] += down;
            }
        });
    }
    FourierSeries::from_coefficients(coeffs)
}

/// `sum_{|n| <= N} a_n e^{i n phi}`.
pub fn fourier_synthesize(series: &FourierSeries, phi: f64) -> Complex64 {
    let n = series.max_index();
    let step = Complex64::from_polar(1.0, phi);
    let mut up = Complex64::new(1.0, 0.0);
    let mut down = Complex64::new(1.0, 0.0);
    let mut acc = series.coeffs[n];
    for k in 1..=n {
        up *= step;
        down *= step.conj();
        acc += series.coeffs[n + k] * up + series.coeffs[n - k] * down;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule() -> QuadratureRule {
        QuadratureRule::gauss_legendre(256).unwrap()
    }

    #[test]
    fn single_mode() {
        let psi = CircleWavefunction::from_fn(|phi| Complex64::from_polar(1.0, 3.0 * phi));
        let s = fourier_analyze(&psi, 5, &rule()).unwrap();
        for n in -5..=5 {
            let want = if n == 3 { 1.0 } else { 0.0 };
            assert!((s.coeff(n) - want).norm() <= 1e-12, "n = {n}");
        }
        assert_eq!(s.coeff(6), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn cosine() {
        let psi = CircleWavefunction::from_fn(|phi| Complex64::new(phi.cos(), 0.0));
        let s = fourier_analyze(&psi, 2, &rule()).unwrap();
        for n in -2i64..=2 {
            let want = if n.abs() == 1 { 0.5 } else { 0.0 };
            assert!((s.coeff(n) - want).norm() <= 1e-12);
        }
    }

    #[test]
    fn order_precondition() {
        let psi = CircleWavefunction::from_fn(|_| Complex64::new(1.0, 0.0));
        let small = QuadratureRule::gauss_legendre(31).unwrap();
        assert!(matches!(
            fourier_analyze(&psi, 8, &small),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn constant_series() {
        let s = FourierSeries::from_coefficients(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ])
        .unwrap();
        for &phi in &[-PI, -1.0, 0.0, 2.5] {
            assert_eq!(fourier_synthesize(&s, phi), Complex64::new(1.0, 0.0));
        }
        assert!(FourierSeries::from_coefficients(vec![Complex64::new(1.0, 0.0); 4]).is_err());
    }

    #[test]
    fn roundtrip_mode() {
        let psi = CircleWavefunction::from_fn(|phi| Complex64::from_polar(1.0, 2.0 * phi));
        let s = fourier_analyze(&psi, 4, &rule()).unwrap();
        let v = fourier_synthesize(&s, 0.4);
        assert!((v - Complex64::from_polar(1.0, 0.8)).norm() <= 1e-12);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(32))]

        #[test]
        fn trig_polynomial_roundtrip(
            coeffs in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=17),
            phi in -PI..PI,
        ) {
            let mut c: Vec<Complex64> = coeffs.into_iter().map(|(r, i)| Complex64::new(r, i)).collect();
            if c.len().is_multiple_of(2) {
                c.pop();
            }
            let degree = c.len() / 2;
            let series = FourierSeries::from_coefficients(c).unwrap();
            let direct = fourier_synthesize(&series, phi);
            let psi = CircleWavefunction::from_series(series);
            let again = fourier_analyze(&psi, degree.max(8), &rule()).unwrap();
            proptest::prop_assert!((fourier_synthesize(&again, phi) - direct).norm() <= 1e-10);
        }
    }
}
