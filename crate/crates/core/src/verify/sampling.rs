//! Random state generators used by the verification suite and the tests.

use rand::Rng;

use crate::geometry::{classify_velocity, ConeClass, PhasePoint, Vec3};
use crate::quadrature::unit_sphere_sample;

fn uniform_in(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    lo + rng.gen::<f64>() * (hi - lo)
}

fn random_vec3(rng: &mut impl Rng, half: f64) -> Vec3 {
    Vec3::new(
        uniform_in(rng, -half, half),
        uniform_in(rng, -half, half),
        uniform_in(rng, -half, half),
    )
}

/// Unstructured admissible state: positions a few diameters apart,
/// velocities order one. Most draws are non-colliding.
pub fn random_state(rng: &mut impl Rng, eps: f64) -> PhasePoint {
    loop {
        let x = random_vec3(rng, 3.0 * eps);
        let xbar = random_vec3(rng, 3.0 * eps);
        if (xbar - x).norm() < 1.05 * eps {
            continue;
        }
        let v = random_vec3(rng, 2.0);
        let vbar = random_vec3(rng, 2.0);
        return PhasePoint::new(x, xbar, v, vbar);
    }
}

/// In-cone state built by aiming: choose the contact gap direction, an
/// incoming relative velocity that is not grazing, and back the state off
/// along the line. `min_normal_speed` bounds the normal component of the
/// unit relative velocity away from zero, keeping the contact transversal.
pub fn random_in_cone(
    rng: &mut impl Rng,
    eps: f64,
    class: ConeClass,
    min_normal_speed: f64,
) -> PhasePoint {
    assert!(class != ConeClass::NonColliding);
    loop {
        let m = unit_sphere_sample(rng);
        let w_dir = unit_sphere_sample(rng);
        if w_dir.dot(&m) >= -min_normal_speed.max(1e-3) {
            continue;
        }
        let speed = uniform_in(rng, 0.5, 3.0);
        let w = speed * w_dir;
        let back = uniform_in(rng, 0.2, 2.0);
        // Contact gap eps*m reached after time `back` along w.
        let y = eps * m - back * w;
        let x = random_vec3(rng, 2.0 * eps);
        let com = random_vec3(rng, 1.0);
        let (y, w, tau) = match class {
            ConeClass::PreCollisional => (y, w, back),
            ConeClass::PostCollisional => (y, -w, -back),
            ConeClass::NonColliding => unreachable!(),
        };
        let z = PhasePoint::new(x, x + y, com - 0.5 * w, com + 0.5 * w);
        debug_assert!({
            let c = classify_velocity(&z, eps).unwrap();
            let t = crate::geometry::collision_time(&z, eps).unwrap();
            c == class && (t - tau).abs() < 1e-9 * tau.abs().max(1.0)
        });
        return z;
    }
}

/// Admissible state guaranteed non-colliding.
pub fn random_non_colliding(rng: &mut impl Rng, eps: f64) -> PhasePoint {
    loop {
        let z = random_state(rng, eps);
        if classify_velocity(&z, eps) == Ok(ConeClass::NonColliding) {
            return z;
        }
    }
}

/// State drawn from all three cone classes with roughly equal weight.
pub fn random_mixed(rng: &mut impl Rng, eps: f64) -> PhasePoint {
    match rng.gen_range(0..3) {
        0 => random_in_cone(rng, eps, ConeClass::PreCollisional, 0.05),
        1 => random_in_cone(rng, eps, ConeClass::PostCollisional, 0.05),
        _ => random_non_colliding(rng, eps),
    }
}

/// In-cone state with a transversality guard suitable for finite-difference
/// stencils: classification is stable in an `h`-neighborhood.
pub fn random_in_cone_guarded(rng: &mut impl Rng, eps: f64, class: ConeClass) -> PhasePoint {
    random_in_cone(rng, eps, class, 0.15)
}
