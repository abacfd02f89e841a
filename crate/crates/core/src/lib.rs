//! Spin-dependent Coulomb potentials as exact Yang-Mills solutions.
//!
//! Closed-form fields, spectra and forces live next to the numerical oracles
//! that check them: finite-difference residuals, dense diagonalization, grid
//! eigensolvers and series termination.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`). The `*64`
//! aliases below pin the common double-precision types.

#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod angular_spectra;
pub mod classical_orbit;
pub mod error;
pub mod gauge_fields;
pub mod quadrature;
pub mod radial_spectra;
pub mod sampling;
pub mod scalar;
pub mod specfun;
pub mod spin_algebra;
pub mod spin_force;
pub mod tridiag;

pub use error::{Error, Result};
pub use scalar::Real;

pub type CMat64 = spin_algebra::CMat<f64>;
pub type SpinRep64 = spin_algebra::SpinRep<f64>;
pub type MatrixVec3_64 = spin_algebra::MatrixVec3<f64>;
pub type PotentialConfig64 = gauge_fields::PotentialConfig<f64>;
pub type OrbitState64 = classical_orbit::OrbitState<f64>;
pub type SpectrumLine64 = radial_spectra::SpectrumLine<f64>;
pub type LambdaEigen64 = angular_spectra::LambdaEigen<f64>;
pub type ForceDecomposition64 = spin_force::ForceDecomposition<f64>;
