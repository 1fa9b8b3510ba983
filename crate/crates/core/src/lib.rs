//! Numerical differential geometry for hyperhermitian brane metrics with torsion.
//!
//! The crate builds conformally flat transverse brane solutions and their
//! eight-dimensional superpositions along affine quaternionic maps, then
//! certifies their geometric properties numerically: torsion compatibility of
//! the hypercomplex structures, holonomy algebras of the torsion connections,
//! comass and contact sets of the degree-four quaternionic calibrations, flux
//! charges, and residuals of the two-derivative field equations.
//!
//! Modules:
//! - [`quat`]: quaternion arithmetic and the commuting left/right triples of
//!   complex structures on R^4 and R^8.
//! - [`exterior`]: constant-coefficient alternating forms (wedge, interior
//!   product, derivation extension, Hodge star) and smooth fields on a chart
//!   with excluded singular sets, with finite-difference exterior calculus.
//! - [`geom`]: metric connections with totally antisymmetric torsion, their
//!   curvature, parallel transport, and holonomy-algebra membership tests.
//! - [`calib`]: the four degree-four calibration forms, Stiefel-manifold
//!   comass maximization, and contact-set dimension estimation.
//! - [`brane`]: the brane solution catalog, superposition construction,
//!   torsion-compatibility residuals, flux charges, and field-equation
//!   residuals.

pub mod brane;
pub mod calib;
pub mod error;
pub mod exterior;
pub mod geom;
pub mod quat;
pub mod sample;

pub use error::{Error, Result};
