use thiserror::Error;

/// Errors surfaced by the geometry, flow, and verification layers.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// State lies outside the admissible configuration set (spheres overlap
    /// beyond tolerance), or contains non-finite components.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Operation requires a velocity inside the collision cone at the given
    /// configuration.
    #[error("velocity is not in the collision cone")]
    NotInCone,

    /// Relative position and relative velocity both vanish; no contact data
    /// can be assigned.
    #[error("degenerate state: zero relative position and velocity")]
    Degenerate,

    /// Datum fails the exchange-symmetry requirement beyond tolerance.
    #[error("datum is not exchange symmetric (max deviation {0:.3e})")]
    AsymmetricDatum(f64),

    /// Planar billiard trajectory hit a corner or grazed the scatterer within
    /// tolerance; the event-driven evolution is terminated.
    #[error("corner or tangential hit at t = {0}")]
    CornerHit(f64),
}
