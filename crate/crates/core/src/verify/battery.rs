//! Standard data and test functions used by the verification batteries: a
//! symmetric counter-propagating two-beam product datum whose cross pairs
//! collide head-on around unit time, a separated variant that never
//! collides, and test functions placed before, across, and after the
//! collision epoch.

use crate::distribution::{make_chaotic_datum, InitialDatum, OneParticleDatum, RadialBump};
use crate::geometry::{stack, Vec3, Vec6};
use crate::quadrature::{OneParticleTestFunction, TestFunction};

/// Two counter-propagating beams: bumps at `(-2 eps, +1.5)` and
/// `(+2 eps, -1.5)` along the first axis, joint radius 0.35. Cross pairs
/// collide around `t ~ eps`; the product is exchange symmetric.
pub fn two_beam_profile(eps: f64) -> OneParticleDatum {
    OneParticleDatum {
        bumps: vec![
            RadialBump::new(
                stack(&Vec3::new(-2.0 * eps, 0.0, 0.0), &Vec3::new(1.5, 0.0, 0.0)),
                0.35,
                1.0,
            ),
            RadialBump::new(
                stack(&Vec3::new(2.0 * eps, 0.0, 0.0), &Vec3::new(-1.5, 0.0, 0.0)),
                0.35,
                1.0,
            ),
        ],
    }
}

pub fn two_beam_datum(eps: f64) -> InitialDatum {
    make_chaotic_datum(two_beam_profile(eps), eps).0
}

/// Beams placed far apart and moving apart: no pair of support points ever
/// reaches contact.
pub fn separated_profile(eps: f64) -> OneParticleDatum {
    OneParticleDatum {
        bumps: vec![
            RadialBump::new(
                stack(&Vec3::new(-3.0 * eps, 0.0, 0.0), &Vec3::new(-1.5, 0.0, 0.0)),
                0.35,
                1.0,
            ),
            RadialBump::new(
                stack(&Vec3::new(3.0 * eps, 0.0, 0.0), &Vec3::new(1.5, 0.0, 0.0)),
                0.35,
                1.0,
            ),
        ],
    }
}

pub fn separated_datum(eps: f64) -> InitialDatum {
    make_chaotic_datum(separated_profile(eps), eps).0
}

/// Observation window before any cross pair reaches contact.
pub fn pre_collision_phi(eps: f64) -> TestFunction {
    TestFunction::new(
        stack(&Vec3::new(-1.7 * eps, 0.0, 0.0), &Vec3::new(1.7 * eps, 0.0, 0.0)),
        stack(&Vec3::new(1.5, 0.0, 0.0), &Vec3::new(-1.5, 0.0, 0.0)),
        0.0,
        stack(&Vec3::new(1.1, 0.7, 0.7), &Vec3::new(1.1, 0.7, 0.7)) * eps.max(0.5),
        Vec6::repeat(0.8),
        0.4 * eps,
    )
}

/// Window straddling the collision epoch, centered on the contact alley.
pub fn straddle_phi(eps: f64) -> TestFunction {
    TestFunction::new(
        stack(&Vec3::new(-0.5 * eps, 0.0, 0.0), &Vec3::new(0.5 * eps, 0.0, 0.0)),
        stack(&Vec3::new(1.5, 0.0, 0.0), &Vec3::new(-1.5, 0.0, 0.0)),
        1.05 * eps,
        stack(&Vec3::new(0.9, 0.7, 0.7), &Vec3::new(0.9, 0.7, 0.7)) * eps.max(0.5),
        Vec6::repeat(0.9),
        0.55 * eps,
    )
}

/// Window after the epoch, on the outgoing corridor of the first sphere.
pub fn post_collision_phi(eps: f64) -> TestFunction {
    TestFunction::new(
        stack(&Vec3::new(-2.75 * eps, 0.0, 0.0), &Vec3::new(2.75 * eps, 0.0, 0.0)),
        stack(&Vec3::new(-1.5, 0.0, 0.0), &Vec3::new(1.5, 0.0, 0.0)),
        2.6 * eps,
        stack(&Vec3::new(1.2, 0.7, 0.7), &Vec3::new(1.2, 0.7, 0.7)) * eps.max(0.5),
        Vec6::repeat(0.8),
        0.5 * eps,
    )
}

/// Window concentrated tightly around contact configurations during the
/// epoch.
pub fn contact_phi(eps: f64) -> TestFunction {
    TestFunction::new(
        stack(&Vec3::new(-0.5 * eps, 0.0, 0.0), &Vec3::new(0.5 * eps, 0.0, 0.0)),
        stack(&Vec3::new(1.5, 0.0, 0.0), &Vec3::new(-1.5, 0.0, 0.0)),
        1.05 * eps,
        Vec6::repeat(0.45 * eps.max(0.5)),
        Vec6::repeat(0.8),
        0.5 * eps,
    )
}

/// Window for the separated datum.
pub fn far_phi(eps: f64) -> TestFunction {
    TestFunction::new(
        stack(&Vec3::new(-3.0 * eps, 0.0, 0.0), &Vec3::new(3.0 * eps, 0.0, 0.0)),
        stack(&Vec3::new(-1.5, 0.0, 0.0), &Vec3::new(1.5, 0.0, 0.0)),
        0.0,
        stack(&Vec3::new(1.3, 0.7, 0.7), &Vec3::new(1.3, 0.7, 0.7)) * eps.max(0.5),
        Vec6::repeat(0.8),
        0.5 * eps,
    )
}

/// One-particle window over the incoming first-sphere beam across the epoch.
pub fn straddle_psi(eps: f64) -> OneParticleTestFunction {
    OneParticleTestFunction::new(
        Vec3::new(-0.55 * eps, 0.0, 0.0),
        Vec3::new(1.5, 0.0, 0.0),
        1.0 * eps,
        Vec3::new(0.8, 0.7, 0.7) * eps.max(0.5),
        Vec3::new(0.9, 0.7, 0.7),
        0.55 * eps,
    )
}

/// One-particle window before the epoch.
pub fn pre_psi(eps: f64) -> OneParticleTestFunction {
    OneParticleTestFunction::new(
        Vec3::new(-1.7 * eps, 0.0, 0.0),
        Vec3::new(1.5, 0.0, 0.0),
        0.0,
        Vec3::new(1.0, 0.7, 0.7) * eps.max(0.5),
        Vec3::new(0.8, 0.7, 0.7),
        0.35 * eps,
    )
}

/// Very wide, slowly varying one-particle window: both sides of the
/// hierarchy identity nearly vanish, expressing bulk flux balance.
pub fn bulk_psi(eps: f64) -> OneParticleTestFunction {
    OneParticleTestFunction::new(
        Vec3::zeros(),
        Vec3::zeros(),
        0.75 * eps,
        Vec3::repeat(12.0 * eps),
        Vec3::repeat(8.0),
        6.0 * eps,
    )
}

/// The five-scenario battery for the weak-form balance: name, datum, window.
pub fn weak_battery(eps: f64) -> Vec<(&'static str, InitialDatum, TestFunction)> {
    vec![
        ("separated", separated_datum(eps), far_phi(eps)),
        ("pre_collision", two_beam_datum(eps), pre_collision_phi(eps)),
        ("straddle", two_beam_datum(eps), straddle_phi(eps)),
        ("post_collision", two_beam_datum(eps), post_collision_phi(eps)),
        ("contact_window", two_beam_datum(eps), contact_phi(eps)),
    ]
}

/// Product-data battery for the duality checks.
pub fn chaos_battery(eps: f64) -> Vec<(&'static str, OneParticleDatum, TestFunction)> {
    vec![
        ("pre_collision", two_beam_profile(eps), pre_collision_phi(eps)),
        ("straddle", two_beam_profile(eps), straddle_phi(eps)),
        ("separated", separated_profile(eps), far_phi(eps)),
    ]
}

/// Hierarchy battery: symmetric product data with one-particle windows.
pub fn bbgky_battery(eps: f64) -> Vec<(&'static str, InitialDatum, OneParticleTestFunction)> {
    vec![
        ("separated", separated_datum(eps), pre_psi(eps)),
        ("straddle", two_beam_datum(eps), straddle_psi(eps)),
        ("bulk_flux", two_beam_datum(eps), bulk_psi(eps)),
    ]
}
