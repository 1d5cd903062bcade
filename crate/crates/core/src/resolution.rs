//! Numerical check of the resolution of unity
//! `sum_k integral dalpha |k,alpha,theta><k,alpha,theta| = 2 pi`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::kinematics::{gaussian, normalization_constant, wrap_angle, CircleWavefunction, FluxParameter};
use crate::numerics::{panel_bounds, FourierSeries, QuadratureRule};

const TWO_PI: f64 = 2.0 * PI;

/// Uniform panels of the alpha integral.
pub const ALPHA_PANELS: usize = 64;
/// Sample points used to measure residuals; they sit on panel boundaries
/// of the alpha integral, so the kink of the kernel never falls inside one.
pub const SAMPLE_POINTS: usize = 64;
/// Seed of the random test polynomials.
pub const TEST_SEED: u64 = 0x5eed_c1c1e;
/// Largest mode `|d|` in the test set.
pub const MAX_TEST_MODE: i64 = 10;
/// Number and degree of the random test polynomials.
pub const RANDOM_TESTS: usize = 3;
pub const RANDOM_DEGREE: usize = 8;

const BOUNDARY_TOL: f64 = 1e-12;

/// Nodes per alpha panel for a given inner quadrature order.
fn alpha_nodes_per_panel(order: usize) -> usize {
    (order / 32).max(8)
}

struct AlphaNode {
    alpha: f64,
    weight: f64,
    // <k, alpha, theta | eta> for k = -K..=K
    coeffs: Vec<Complex64>,
}

struct RouKernel {
    eta: CircleWavefunction,
    theta: f64,
    a_theta: f64,
    k_cutoff: usize,
    rule: QuadratureRule,
    alpha_rule: QuadratureRule,
    panels: Vec<(f64, f64)>,
    // nodes grouped by panel
    nodes: Vec<Vec<AlphaNode>>,
}

impl RouKernel {
    fn new(eta: CircleWavefunction, theta: FluxParameter, k_cutoff: usize, rule: &QuadratureRule) -> Result<Self> {
        let alpha_rule = QuadratureRule::gauss_legendre(alpha_nodes_per_panel(rule.order()))?;
        let panels: Vec<(f64, f64)> = (0..ALPHA_PANELS)
            .map(|p| {
                let lo = -PI + TWO_PI * p as f64 / ALPHA_PANELS as f64;
                let hi = -PI + TWO_PI * (p + 1) as f64 / ALPHA_PANELS as f64;
                (lo, hi)
            })
            .collect();
        let mut kernel = Self {
            eta,
            theta: theta.value(),
            a_theta: normalization_constant(theta),
            k_cutoff,
            rule: rule.clone(),
            alpha_rule,
            panels,
            nodes: Vec::new(),
        };
        let panels = kernel.panels.clone();
        kernel.nodes = panels
            .par_iter()
            .map(|&(lo, hi)| kernel.panel_nodes(lo, hi))
            .collect();
        Ok(kernel)
    }

    fn panel_nodes(&self, lo: f64, hi: f64) -> Vec<AlphaNode> {
        let mut out = Vec::with_capacity(self.alpha_rule.order());
        self.alpha_rule.for_each_node(lo, hi, |alpha, weight| {
            out.push(AlphaNode {
                alpha,
                weight,
                coeffs: self.coefficients(alpha),
            });
        });
        out
    }

    /// `<k, alpha, theta | eta>` for `|k| <= K`, by quadrature in `phi`.
    fn coefficients(&self, alpha: f64) -> Vec<Complex64> {
        let k = self.k_cutoff;
        let mut acc = vec![Complex64::new(0.0, 0.0); 2 * k + 1];
        let mut breaks = self.eta.seam_points().to_vec();
        breaks.push(wrap_angle(alpha - PI));
        for (lo, hi) in panel_bounds(&breaks) {
            self.rule.for_each_node(lo, hi, |phi, w| {
                let u = wrap_angle(phi - alpha);
                let h = w * gaussian(u, self.theta).conj() * self.eta.eval(phi);
                let step = Complex64::from_polar(1.0, -phi);
                let mut up = h;
                let mut down = h;
                acc[k] += h;
                for j in 1..=k {
                    up *= step;
                    down *= step.conj();
                    acc[k + j] += up;
                    acc[k - j] += down;
                }
            });
        }
        let prefactor = self.a_theta * Complex64::from_polar(1.0, -alpha * self.theta);
        acc.iter_mut().for_each(|c| *c *= prefactor);
        acc
    }

    /// Contribution of one alpha node at `omega`, summing `k` in the order
    /// `0, 1, -1, 2, -2, ...`.
    fn node_term(&self, alpha: f64, weight: f64, coeffs: &[Complex64], omega: f64) -> Complex64 {
        let k = self.k_cutoff;
        let step = Complex64::from_polar(1.0, omega);
        let mut up = Complex64::new(1.0, 0.0);
        let mut down = Complex64::new(1.0, 0.0);
        let mut sum = coeffs[k];
        for j in 1..=k {
            up *= step;
            down *= step.conj();
            sum += coeffs[k + j] * up;
            sum += coeffs[k - j] * down;
        }
        let u = wrap_angle(omega - alpha);
        let state = self.a_theta * Complex64::from_polar(1.0, alpha * self.theta) * gaussian(u, self.theta);
        weight * state * sum
    }

    fn eval(&self, omega: f64) -> Complex64 {
        let kink = wrap_angle(omega - PI);
        let mut total = Complex64::new(0.0, 0.0);
        for (p, &(lo, hi)) in self.panels.iter().enumerate() {
            if kink > lo + BOUNDARY_TOL && kink < hi - BOUNDARY_TOL {
                for (a, b) in [(lo, kink), (kink, hi)] {
                    for node in self.panel_nodes(a, b) {
                        total += self.node_term(node.alpha, node.weight, &node.coeffs, omega);
                    }
                }
            } else {
                for node in &self.nodes[p] {
                    total += self.node_term(node.alpha, node.weight, &node.coeffs, omega);
                }
            }
        }
        total
    }
}

/// The truncated operator `sum_{|k| <= K} integral dalpha |k,alpha,theta><k,alpha,theta|`
/// applied to `eta`. With `K -> infinity` the result is `2 pi eta`.
///
/// The inner products are precomputed on a fixed alpha grid; evaluating the
/// returned function at a point whose kernel kink falls inside an alpha
/// panel refines that panel on the fly.
pub fn apply_rou_operator(
    eta: &CircleWavefunction,
    theta: FluxParameter,
    k_cutoff: usize,
    rule: &QuadratureRule,
) -> Result<CircleWavefunction> {
    let kernel = Arc::new(RouKernel::new(eta.clone(), theta, k_cutoff, rule)?);
    Ok(CircleWavefunction::from_fn(move |omega| kernel.eval(omega)))
}

/// A member of the standard test set.
#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    /// `e^{i d phi}`.
    Mode(i64),
    /// Seeded random trigonometric polynomial.
    Random { index: usize, coeffs: Vec<Complex64> },
}

impl TestFunction {
    pub fn wavefunction(&self) -> CircleWavefunction {
        match self {
            Self::Mode(d) => {
                let d = *d as f64;
                CircleWavefunction::from_fn(move |phi| Complex64::from_polar(1.0, d * phi))
            }
            Self::Random { coeffs, .. } => CircleWavefunction::from_series(
                FourierSeries::from_coefficients(coeffs.clone()).expect("odd length"),
            ),
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Mode(d) => write!(f, "mode({d})"),
            Self::Random { index, .. } => write!(f, "random({index})"),
        }
    }
}

/// `e^{i d phi}` for `|d| <= 10` followed by three seeded random
/// polynomials of degree at most 8.
pub fn standard_test_set() -> Vec<TestFunction> {
    let mut set: Vec<TestFunction> = (-MAX_TEST_MODE..=MAX_TEST_MODE).map(TestFunction::Mode).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(TEST_SEED);
    for index in 0..RANDOM_TESTS {
        let coeffs = (0..2 * RANDOM_DEGREE + 1)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        set.push(TestFunction::Random { index, coeffs });
    }
    set
}

/// Outcome of [`verify_rou`].
#[derive(Debug, Clone, PartialEq)]
pub struct RoUReport {
    pub theta: FluxParameter,
    pub k_cutoff: usize,
    pub quad_order: usize,
    pub test_functions: Vec<String>,
    /// `||O eta - 2 pi eta|| / ||2 pi eta||` per test function.
    pub residuals: Vec<f64>,
    /// `<eta|O eta> / <eta|eta>` per test function.
    pub constants: Vec<Complex64>,
    pub max_residual: f64,
    /// `max |c - 2 pi|`.
    pub max_constant_error: f64,
    /// `<eta|O eta>` has real part `>= 0` and imaginary part within `1e-10`
    /// of zero (relative to `<eta|eta>`) for every test function.
    pub positive: bool,
}

impl RoUReport {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.max_residual <= tolerance && self.max_constant_error <= tolerance && self.positive
    }
}

/// Residual and fitted constant of `O eta` against `2 pi eta`, sampled at
/// `SAMPLE_POINTS` uniform points.
fn measure(eta: &CircleWavefunction, image: &CircleWavefunction) -> (f64, Complex64) {
    let mut diff = 0.0;
    let mut reference = 0.0;
    let mut cross = Complex64::new(0.0, 0.0);
    let mut power = 0.0;
    for j in 0..SAMPLE_POINTS {
        let omega = -PI + TWO_PI * j as f64 / SAMPLE_POINTS as f64;
        let e = eta.eval(omega);
        let o = image.eval(omega);
        diff += (o - TWO_PI * e).norm_sqr();
        reference += (TWO_PI * e).norm_sqr();
        cross += e.conj() * o;
        power += e.norm_sqr();
    }
    ((diff / reference).sqrt(), cross / power)
}

/// Applies the truncated operator to the standard test set.
pub fn verify_rou(theta: FluxParameter, k_cutoff: usize, rule: &QuadratureRule) -> Result<RoUReport> {
    let set = standard_test_set();
    let mut residuals = Vec::with_capacity(set.len());
    let mut constants = Vec::with_capacity(set.len());
    let mut positive = true;
    for test in &set {
        let eta = test.wavefunction();
        let image = apply_rou_operator(&eta, theta, k_cutoff, rule)?;
        let (residual, c) = measure(&eta, &image);
        positive &= c.re >= 0.0 && c.im.abs() <= 1e-10;
        residuals.push(residual);
        constants.push(c);
    }
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    let max_constant_error = constants.iter().map(|c| (c - TWO_PI).norm()).fold(0.0, f64::max);
    Ok(RoUReport {
        theta,
        k_cutoff,
        quad_order: rule.order(),
        test_functions: set.iter().map(ToString::to_string).collect(),
        residuals,
        constants,
        max_residual: if max_residual.is_nan() { f64::INFINITY } else { max_residual },
        max_constant_error: if max_constant_error.is_nan() { f64::INFINITY } else { max_constant_error },
        positive,
    })
}
