//! Exact collision geometry and transport for two congruent hard spheres in
//! free space, together with the numerical machinery used to verify the
//! balance laws the dynamics must satisfy.
//!
//! The crate is organised around the life of a pair state `(X, V)`:
//!
//! * [`geometry`] classifies velocities against the collision cones, computes
//!   signed collision times and contact normals, and builds the orthogonal
//!   scattering reflections (including their smooth extension off the
//!   admissible configuration set).
//! * [`flow`] evolves states: the physical flow with a velocity jump at
//!   contact, the collision-free two-sheet flow that trades the jump for a
//!   sheet switch, and the fold map identifying the two.
//! * [`distribution`] carries densities along those flows (transported
//!   solutions, product data, the reflected companion datum, marginals).
//! * [`quadrature`] provides deterministic seeded Monte Carlo over phase
//!   boxes and over the contact set, plus smooth compactly supported test
//!   functions with exact derivatives.
//! * [`verify`] runs the distributional checks: interior transport against
//!   the contact flux, region-by-region integration-by-parts identities,
//!   the two-sheet pairing duality, and the first-marginal hierarchy
//!   identity.
//! * [`sinai`] is the planar analogue: a square table with a circular
//!   scatterer, evolved event-by-event and unfolded into a straight line
//!   through accumulated reflections.

pub mod distribution;
pub mod domain;
pub mod error;
pub mod flow;
pub mod geometry;
pub mod quadrature;
pub mod sinai;
pub mod verify;

pub use error::Error;

/// Crate result alias.
pub type Result<T> = std::result::Result<T, Error>;
