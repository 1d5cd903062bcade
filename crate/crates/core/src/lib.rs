//! Coherent states on the circle.
//!
//! Weyl operators on the phase space `Z x S^1`, closed-form coherent-state
//! wavefunctions with an optional Aharonov–Bohm flux `theta`, analytic
//! overlaps through the complex error function, expectation values and
//! uncertainty products, and a numerical check of the resolution of unity.
//! Every closed form has an independent quadrature counterpart.

pub mod cli;
pub mod error;
pub mod kinematics;
pub mod numerics;
pub mod observables;
pub mod overlaps;
pub mod resolution;

pub use error::{Error, Result};
pub use kinematics::{
    apply_phase, apply_rotation, apply_rotation_theta, coherent_state, flux_to_theta,
    normalization_constant, vacuum, weyl, wrap_angle, Angle, CircleWavefunction, CoherentLabel,
    FluxParameter,
};
pub use numerics::{ComplexValue, FourierSeries, QuadratureRule};
pub use observables::{expectations, ExpectationReport};
pub use overlaps::{overlap_analytic, overlap_grid, overlap_quadrature, OverlapMethod, OverlapResult};
pub use resolution::{apply_rou_operator, verify_rou, RoUReport};
