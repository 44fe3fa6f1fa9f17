//! Radial calculus on the harmonic model manifolds ℝⁿ, Sⁿ, ℍⁿ, ℂHⁿ and ℚHⁿ.
//!
//! Everything is reduced to functions of the geodesic distance `r` from a
//! base point. Radial functions are evaluated as order-2 jets ([`Jet2`]), so
//! the radial Laplacian `f'' + H f'` is computed from exact derivatives.
//!
//! * [`model_spaces`]: the catalog of model geometries and their densities.
//! * [`jacobi`]: densities rebuilt from the radial curvature spectrum.
//! * [`radial_ops`]: mean curvature, radial Laplacian, eigenfunction checks.
//! * [`greens`]: radial Green's functions, flux and harmonicity.
//! * [`ledger_riccati`]: the Einstein constant by two independent routes.
//! * [`classify`]: match an observed radial profile against the catalog.

pub mod classify;
pub mod error;
pub mod greens;
pub mod jacobi;
pub mod jets;
pub mod ledger_riccati;
pub mod model_spaces;
mod quadrature;
pub mod radial_ops;

pub use error::{Error, Result};
pub use jets::Jet2;
pub use model_spaces::{CurvatureLevel, CurvatureSpectrum, ModelSpace, RadialFunction, SpaceKind};
