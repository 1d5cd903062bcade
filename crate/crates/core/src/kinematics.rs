//! States and operators on `L^2(S^1)` in the periodic gauge.
//!
//! Angles live on `[-pi, pi)` with the seam at `+-pi`; `+pi` wraps to `-pi`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::numerics::{erf_real, fourier_analyze, fourier_synthesize, FourierSeries, QuadratureRule};

const TWO_PI: f64 = 2.0 * PI;

/// Canonical representative of `x` in `[-pi, pi)`.
pub fn wrap_angle(x: f64) -> f64 {
    if (-PI..PI).contains(&x) {
        return x;
    }
    let r = if (PI..3.0 * PI).contains(&x) {
        x - TWO_PI
    } else if (-3.0 * PI..-PI).contains(&x) {
        x + TWO_PI
    } else {
        (x + PI).rem_euclid(TWO_PI) - PI
    };
    if (-PI..PI).contains(&r) || r.is_nan() {
        r
    } else {
        -PI
    }
}

/// An angle in radians, stored in canonical form.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Angle(f64);

impl Angle {
    pub fn new(value: f64) -> Self {
        Self(wrap_angle(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<f64> for Angle {
    fn from(value: f64) -> Self {
        Self::new(value)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Aharonov–Bohm flux parameter `theta` in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct FluxParameter(f64);

impl FluxParameter {
    pub const ZERO: Self = Self(0.0);

    pub fn new(theta: f64) -> Result<Self> {
        if (0.0..1.0).contains(&theta) {
            Ok(Self(theta))
        } else {
            Err(Error::InvalidFlux(theta))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Label `(m, alpha, theta)` of the coherent state `|m, alpha, theta>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentLabel {
    pub m: i64,
    pub alpha: Angle,
    pub theta: FluxParameter,
}

impl CoherentLabel {
    pub fn new(m: i64, alpha: f64, theta: f64) -> Result<Self> {
        Ok(Self {
            m,
            alpha: Angle::new(alpha),
            theta: FluxParameter::new(theta)?,
        })
    }

    /// Label with `theta = 0`.
    pub fn plain(m: i64, alpha: f64) -> Self {
        Self {
            m,
            alpha: Angle::new(alpha),
            theta: FluxParameter::ZERO,
        }
    }
}

type Eval = dyn Fn(f64) -> Complex64 + Send + Sync;

/// A complex wavefunction on `[-pi, pi)` with the interior points where it
/// is only piecewise smooth.
#[derive(Clone)]
pub struct CircleWavefunction {
    eval: Arc<Eval>,
    seams: Vec<f64>,
    series: Option<Arc<FourierSeries>>,
}

impl fmt::Debug for CircleWavefunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CircleWavefunction")
            .field("seams", &self.seams)
            .field("has_series", &self.series.is_some())
            .finish()
    }
}

impl CircleWavefunction {
    /// A wavefunction smooth on the open interval `(-pi, pi)`.
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        Self::with_seams(f, Vec::new())
    }

    /// A wavefunction with the given interior seams. Points outside
    /// `(-pi, pi)` are dropped; the rest are sorted and deduplicated.
    pub fn with_seams<F>(f: F, seams: Vec<f64>) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(f),
            seams: normalize_seams(seams),
            series: None,
        }
    }

    /// The trigonometric polynomial with the given coefficients.
    pub fn from_series(series: FourierSeries) -> Self {
        let series = Arc::new(series);
        let inner = Arc::clone(&series);
        Self {
            eval: Arc::new(move |phi| fourier_synthesize(&inner, phi)),
            seams: Vec::new(),
            series: Some(series),
        }
    }

    /// Value at `phi`, which is first wrapped into `[-pi, pi)`.
    pub fn eval(&self, phi: f64) -> Complex64 {
        (self.eval)(wrap_angle(phi))
    }

    pub fn seam_points(&self) -> &[f64] {
        &self.seams
    }

    /// Coefficient table, when the function was built from one.
    pub fn series(&self) -> Option<&FourierSeries> {
        self.series.as_deref()
    }

    /// `<self|other> = integral conj(self) * other`, split at both seam sets.
    pub fn inner_product(&self, other: &Self, rule: &QuadratureRule) -> Complex64 {
        let breaks: Vec<f64> = self.seams.iter().chain(&other.seams).copied().collect();
        rule.integrate_panels(&breaks, |phi| self.eval(phi).conj() * other.eval(phi))
    }

    pub fn norm(&self, rule: &QuadratureRule) -> f64 {
        self.inner_product(self, rule).re.max(0.0).sqrt()
    }
}

fn normalize_seams(mut seams: Vec<f64>) -> Vec<f64> {
    seams.retain(|&s| s > -PI && s < PI);
    seams.sort_by(f64::total_cmp);
    seams.dedup_by(|a, b| (*a - *b).abs() <= 1e-15);
    seams
}

/// `e^{-(u - i theta)^2 / 2}`. With `theta = 0` this is `e^{-u^2/2}` bit for bit.
pub(crate) fn gaussian(u: f64, theta: f64) -> Complex64 {
    Complex64::from_polar((-(u * u - theta * theta) / 2.0).exp(), u * theta)
}

fn base_constant() -> f64 {
    static A: OnceLock<f64> = OnceLock::new();
    *A.get_or_init(|| 1.0 / (PI.sqrt() * erf_real(PI)).sqrt())
}

/// `A_theta = A e^{-theta^2/2}` with `A = (integral e^{-phi^2})^{-1/2}`.
pub fn normalization_constant(theta: FluxParameter) -> f64 {
    let t = theta.value();
    base_constant() * (-(t * t) / 2.0).exp()
}

/// The vacuum `A_theta e^{-(phi - i theta)^2 / 2}`.
pub fn vacuum(theta: FluxParameter) -> CircleWavefunction {
    let a = normalization_constant(theta);
    let t = theta.value();
    CircleWavefunction::from_fn(move |phi| a * gaussian(phi, t))
}

/// `phi -> psi(phi - alpha)` with the argument wrapped into `[-pi, pi)`.
pub fn apply_rotation(psi: &CircleWavefunction, alpha: Angle) -> CircleWavefunction {
    let a = alpha.value();
    let mut seams: Vec<f64> = psi.seams.iter().map(|&s| wrap_angle(s + a)).collect();
    seams.push(wrap_angle(a - PI));
    let inner = Arc::clone(&psi.eval);
    CircleWavefunction::with_seams(move |phi| inner(wrap_angle(phi - a)), seams)
}

/// `e^{-i alpha P^theta}`: the wrapped shift times `e^{i alpha theta}`.
pub fn apply_rotation_theta(
    psi: &CircleWavefunction,
    alpha: Angle,
    theta: FluxParameter,
) -> CircleWavefunction {
    let gauge = Complex64::from_polar(1.0, alpha.value() * theta.value());
    let shifted = apply_rotation(psi, alpha);
    let inner = Arc::clone(&shifted.eval);
    CircleWavefunction::with_seams(move |phi| gauge * inner(phi), shifted.seams)
}

/// `phi -> e^{i m phi} psi(phi)`.
pub fn apply_phase(psi: &CircleWavefunction, m: i64) -> CircleWavefunction {
    let mf = m as f64;
    let inner = Arc::clone(&psi.eval);
    CircleWavefunction::with_seams(
        move |phi| Complex64::from_polar(1.0, mf * phi) * inner(phi),
        psi.seams.clone(),
    )
}

/// Weyl operator `W(m, alpha) = e^{i m Q} e^{-i alpha P^theta}`.
pub fn weyl(label: CoherentLabel, psi: &CircleWavefunction) -> CircleWavefunction {
    apply_phase(&apply_rotation_theta(psi, label.alpha, label.theta), label.m)
}

/// Closed-form coherent state
/// `A_theta e^{i alpha theta} e^{i m phi} e^{-(u - i theta)^2 / 2}`,
/// `u = phi - alpha` wrapped into `[-pi, pi)`.
pub fn coherent_state(label: CoherentLabel) -> CircleWavefunction {
    let a = normalization_constant(label.theta);
    let t = label.theta.value();
    let alpha = label.alpha.value();
    let mf = label.m as f64;
    let gauge = Complex64::from_polar(1.0, alpha * t);
    CircleWavefunction::with_seams(
        move |phi| {
            let u = wrap_angle(phi - alpha);
            Complex64::from_polar(1.0, mf * phi) * a * gauge * gaussian(u, t)
        },
        vec![wrap_angle(alpha - PI)],
    )
}

/// `theta = charge * flux / (2 pi hbar)` reduced into `[0, 1)`.
pub fn flux_to_theta(charge: f64, flux: f64, hbar: f64) -> Result<FluxParameter> {
    if hbar.is_nan() || hbar <= 0.0 || !charge.is_finite() || !flux.is_finite() {
        return Err(Error::Config(format!(
            "flux conversion needs finite inputs and hbar > 0 (got hbar = {hbar})"
        )));
    }
    let mut theta = (charge * flux / (TWO_PI * hbar)).rem_euclid(1.0);
    if theta >= 1.0 {
        theta = 0.0;
    }
    FluxParameter::new(theta)
}

/// `||e^{Q + iP}|0> - |0>||` for the `theta = 0` vacuum, computed in the
/// Fourier basis truncated to `|n| <= max_index`.
///
/// `Q` acts by multiplication with `phi` on `[-pi, pi)`, `P = -i d/dphi`.
pub fn vacuum_condition_residual(max_index: usize) -> Result<f64> {
    let order = (4 * max_index).max(512);
    let rule = QuadratureRule::gauss_legendre(order)?;
    let series = fourier_analyze(&vacuum(FluxParameter::ZERO), max_index, &rule)?;
    let dim = 2 * max_index + 1;
    let n0 = max_index as i64;
    let generator = DMatrix::from_fn(dim, dim, |row, col| {
        let k = row as i64 - col as i64;
        if k == 0 {
            // i P = d/dphi is diagonal with entries i n.
            Complex64::new(0.0, (row as i64 - n0) as f64)
        } else {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            Complex64::new(0.0, sign / k as f64)
        }
    });
    let evolved = generator.exp();
    let coeffs = nalgebra::DVector::from_column_slice(series.coefficients());
    let diff = &evolved * &coeffs - &coeffs;
    Ok(diff.norm() * TWO_PI.sqrt())
}
