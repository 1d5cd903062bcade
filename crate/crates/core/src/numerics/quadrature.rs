//! Gauss–Legendre quadrature on the circle interval `[-pi, pi)`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Default number of nodes per integration panel.
pub const DEFAULT_ORDER: usize = 512;

/// Node/weight table for integrals over `[-pi, pi)`.
///
/// The same reference rule is reused on sub-intervals by
/// [`QuadratureRule::integrate_over`] and
/// [`QuadratureRule::integrate_panels`]; integrands that are smooth only
/// piecewise must be split at their seams to keep spectral accuracy.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    // Legendre nodes/weights on [-1, 1].
    reference_nodes: Vec<f64>,
    reference_weights: Vec<f64>,
}

impl QuadratureRule {
    /// Gauss–Legendre rule with `order` nodes mapped onto `[-pi, pi)`.
    pub fn gauss_legendre(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::Config("quadrature order must be positive".into()));
        }
        let (reference_nodes, reference_weights) = legendre_nodes(order);
        let nodes = reference_nodes.iter().map(|&x| PI * x).collect();
        let weights = reference_weights.iter().map(|&w| PI * w).collect();
        Ok(Self {
            order,
            nodes,
            weights,
            reference_nodes,
            reference_weights,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `sum_i w_i f(x_i)` over the whole circle.
    pub fn integrate<F>(&self, f: F) -> Complex64
    where
        F: Fn(f64) -> Complex64,
    {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(x) * w)
            .sum()
    }

    /// Integral over `[a, b]` with the rule rescaled to that interval.
    pub fn integrate_over<F>(&self, a: f64, b: f64, f: F) -> Complex64
    where
        F: Fn(f64) -> Complex64,
    {
        let mut acc = Complex64::new(0.0, 0.0);
        self.for_each_node(a, b, |x, w| acc += f(x) * w);
        acc
    }

    /// Integral over `[-pi, pi)` split at the given interior breakpoints.
    ///
    /// Breakpoints outside `(-pi, pi)` are ignored; the rest are sorted and
    /// deduplicated, so callers may pass the union of several seam lists.
    pub fn integrate_panels<F>(&self, breaks: &[f64], f: F) -> Complex64
    where
        F: Fn(f64) -> Complex64,
    {
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, b) in panel_bounds(breaks) {
            acc += self.integrate_over(a, b, &f);
        }
        acc
    }

    /// Visits every node of the rule mapped onto `[a, b]` with its weight.
    pub fn for_each_node<G>(&self, a: f64, b: f64, mut visit: G)
    where
        G: FnMut(f64, f64),
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (&x, &w) in self.reference_nodes.iter().zip(&self.reference_weights) {
            visit(mid + half * x, half * w);
        }
    }
}

/// Free-function form of [`QuadratureRule::integrate`].
pub fn integrate<F>(f: F, rule: &QuadratureRule) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    rule.integrate(f)
}

/// Consecutive `(a, b)` panels covering `[-pi, pi]` with the given interior
/// breakpoints.
pub fn panel_bounds(breaks: &[f64]) -> Vec<(f64, f64)> {
    let mut points: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&s| s > -PI && s < PI)
        .collect();
    points.sort_by(f64::total_cmp);
    points.dedup_by(|a, b| (*a - *b).abs() <= 1e-15);
    let mut bounds = Vec::with_capacity(points.len() + 1);
    let mut left = -PI;
    for s in points {
        bounds.push((left, s));
        left = s;
    }
    bounds.push((left, PI));
    bounds
}

/// Gauss–Legendre nodes (ascending) and weights on `[-1, 1]`.
fn legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi's initial guess for the i-th largest root.
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut derivative = 0.0;
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            derivative = dp;
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        if dp.is_finite() {
            derivative = dp;
        }
        let w = 2.0 / ((1.0 - x * x) * derivative * derivative);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_invariants() {
        for &order in &[1usize, 2, 7, 64, 512] {
            let rule = QuadratureRule::gauss_legendre(order).unwrap();
            assert_eq!(rule.nodes().len(), order);
            assert_eq!(rule.weights().len(), order);
            assert!(rule.nodes().iter().all(|&x| (-PI..PI).contains(&x)));
            assert!(rule.nodes().windows(2).all(|p| p[0] < p[1]));
            let total: f64 = rule.weights().iter().sum();
            assert!((total - 2.0 * PI).abs() <= 1e-12, "order {order}: {total}");
        }
    }

    #[test]
    fn zero_order_rejected() {
        assert!(QuadratureRule::gauss_legendre(0).is_err());
    }

    #[test]
    fn polynomial_exactness() {
        let rule = QuadratureRule::gauss_legendre(5).unwrap();
        // degree 9 = 2*5 - 1 on [0, 2]: integral of x^9 is 2^10 / 10
        let got = rule.integrate_over(0.0, 2.0, |x| Complex64::new(x.powi(9), 0.0));
        assert!((got.re - 102.4).abs() < 1e-11);
    }

    #[test]
    fn constant_and_odd_integrands() {
        let rule = QuadratureRule::gauss_legendre(DEFAULT_ORDER).unwrap();
        let one = integrate(|_| Complex64::new(1.0, 0.0), &rule);
        assert!((one.re - 2.0 * PI).abs() < 1e-12);
        let sine = integrate(|x| Complex64::new(x.sin(), 0.0), &rule);
        assert!(sine.norm() < 1e-14);
    }

    #[test]
    fn panels_cover_the_interval() {
        let bounds = panel_bounds(&[1.0, -PI, 0.5, 0.5, 4.0, -1.0]);
        assert_eq!(bounds, vec![(-PI, -1.0), (-1.0, 0.5), (0.5, 1.0), (1.0, PI)]);
        let rule = QuadratureRule::gauss_legendre(16).unwrap();
        let v = rule.integrate_panels(&[0.3, -2.0], |x| Complex64::new(x * x, 0.0));
        assert!((v.re - 2.0 * PI.powi(3) / 3.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_against_bisection_oracle() {
        // Adaptive Simpson oracle, independent of the Legendre machinery.
        fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, whole: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let left = (m - a) / 6.0 * (f(a) + 4.0 * f(lm) + f(m));
            let right = (b - m) / 6.0 * (f(m) + 4.0 * f(rm) + f(b));
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                left + right + (left + right - whole) / 15.0
            } else {
                simpson(f, a, m, 0.5 * tol, left, depth - 1) + simpson(f, m, b, 0.5 * tol, right, depth - 1)
            }
        }
        let g = |x: f64| (-x * x).exp();
        let whole = 2.0 * PI / 6.0 * (g(-PI) + 4.0 * g(0.0) + g(PI));
        let oracle = simpson(&g, -PI, PI, 1e-14, whole, 40);
        assert!((oracle - 1.772_438_118_345_705_5).abs() < 1e-12);

        let rule = QuadratureRule::gauss_legendre(DEFAULT_ORDER).unwrap();
        let got = integrate(|x| Complex64::new(g(x), 0.0), &rule);
        assert!((got.re - oracle).abs() < 1e-12);
    }

    #[test]
    fn fourier_modes_integrate_exactly() {
        for &order in &[128usize, 256, 512] {
            let rule = QuadratureRule::gauss_legendre(order).unwrap();
            for n in -(order as i64 / 2 - 1)..=(order as i64 / 2 - 1) {
                let v = integrate(|x| Complex64::from_polar(1.0, n as f64 * x), &rule);
                let want = if n == 0 { 2.0 * PI } else { 0.0 };
                assert!((v - want).norm() <= 1e-12, "order {order}, n {n}: {v}");
            }
        }
    }
}
