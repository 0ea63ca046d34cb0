//! Event geometry of the two-sphere configuration set: cone classification,
//! signed collision times, contact normals, scattering reflections, and the
//! smooth extension of all of these to overlapping configurations.
//!
//! Conventions used throughout: `y = xbar - x` is the relative position,
//! `w = vbar - v` the relative velocity, and `dn = y · w/|w|` the signed
//! projection of the gap onto the relative direction of travel. A state is
//! admissible when `|y| >= eps`. Contact happens on `|y| = eps`.

use nalgebra::{Matrix6, Vector3, Vector6};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

pub type Vec3 = Vector3<f64>;
pub type Vec6 = Vector6<f64>;
pub type Mat6 = Matrix6<f64>;

/// Centers and velocities of the two spheres.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: Vec3,
    pub xbar: Vec3,
    pub v: Vec3,
    pub vbar: Vec3,
}

impl PhasePoint {
    pub fn new(x: Vec3, xbar: Vec3, v: Vec3, vbar: Vec3) -> Self {
        Self { x, xbar, v, vbar }
    }

    /// Build from stacked position/velocity 6-vectors `[x; xbar]`, `[v; vbar]`.
    pub fn from_vectors(positions: &Vec6, velocities: &Vec6) -> Self {
        Self {
            x: positions.fixed_rows::<3>(0).into(),
            xbar: positions.fixed_rows::<3>(3).into(),
            v: velocities.fixed_rows::<3>(0).into(),
            vbar: velocities.fixed_rows::<3>(3).into(),
        }
    }

    pub fn positions(&self) -> Vec6 {
        stack(&self.x, &self.xbar)
    }

    pub fn velocities(&self) -> Vec6 {
        stack(&self.v, &self.vbar)
    }

    /// Relative position `xbar - x`.
    pub fn rel_pos(&self) -> Vec3 {
        self.xbar - self.x
    }

    /// Relative velocity `vbar - v`.
    pub fn rel_vel(&self) -> Vec3 {
        self.vbar - self.v
    }

    pub fn separation(&self) -> f64 {
        self.rel_pos().norm()
    }

    pub fn is_finite(&self) -> bool {
        self.positions().iter().all(|c| c.is_finite()) && self.velocities().iter().all(|c| c.is_finite())
    }

    /// Exchange the two spheres (positions and velocities).
    pub fn transposed(&self) -> Self {
        Self { x: self.xbar, xbar: self.x, v: self.vbar, vbar: self.v }
    }
}

/// Stack two 3-vectors into a 6-vector.
pub fn stack(a: &Vec3, b: &Vec3) -> Vec6 {
    Vec6::new(a.x, a.y, a.z, b.x, b.y, b.z)
}

/// Split a 6-vector into its two 3-blocks.
pub fn split(u: &Vec6) -> (Vec3, Vec3) {
    (u.fixed_rows::<3>(0).into(), u.fixed_rows::<3>(3).into())
}

/// Where a configuration sits relative to the contact set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    Interior,
    Boundary,
    Exterior,
}

/// Classification of a velocity against the collision cones at a
/// configuration: does the straight line through the state touch contact,
/// and on which side in time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConeClass {
    NonColliding,
    PreCollisional,
    PostCollisional,
}

/// Tolerance used for boundary membership and root-sign decisions.
pub fn classification_tol(gap_norm: f64) -> f64 {
    1e-9 * gap_norm.max(1.0)
}

/// Classify a configuration against the contact set `|y| = eps`.
pub fn table_membership(z: &PhasePoint, eps: f64, tol: f64) -> Membership {
    let sep = z.separation();
    if (sep - eps).abs() <= tol {
        Membership::Boundary
    } else if sep > eps + tol {
        Membership::Interior
    } else {
        Membership::Exterior
    }
}

fn require_admissible(z: &PhasePoint, eps: f64) -> Result<()> {
    if !z.is_finite() {
        return Err(Error::InvalidState("non-finite component".into()));
    }
    let sep = z.separation();
    if sep < eps - classification_tol(sep) {
        return Err(Error::InvalidState(format!(
            "separation {sep:.6e} below sphere diameter {eps:.6e}"
        )));
    }
    Ok(())
}

/// Scaled root data of `|y + s w| = eps` along the relative line.
/// Roots in the length variable `u = s |w|` are `u = -dn -+ sqrt(disc)`.
struct LineRoots {
    wn: f64,
    dn: f64,
    disc: f64,
}

fn line_roots(z: &PhasePoint, eps: f64) -> Option<LineRoots> {
    let y = z.rel_pos();
    let w = z.rel_vel();
    let wn = w.norm();
    if wn < 1e-14 * (1.0 + z.v.norm() + z.vbar.norm()) {
        return None;
    }
    let dn = y.dot(&w) / wn;
    let disc = dn * dn + eps * eps - y.norm_squared();
    Some(LineRoots { wn, dn, disc })
}

/// Classify `V` against the collision cones at `X`.
///
/// A state whose relative line touches `|y| = eps` at some `s >= 0` is
/// pre-collisional, at some `s <= 0` post-collisional; double hits resolve to
/// the root of smaller `|s|`. Contact states (the root sits at `s = 0`)
/// classify by the sign of the radial speed: approaching is pre-collisional,
/// separating post-collisional, tangential non-colliding.
pub fn classify_velocity(z: &PhasePoint, eps: f64) -> Result<ConeClass> {
    require_admissible(z, eps)?;
    let Some(r) = line_roots(z, eps) else {
        return Ok(ConeClass::NonColliding);
    };
    if r.disc < 0.0 {
        return Ok(ConeClass::NonColliding);
    }
    let sq = r.disc.sqrt();
    let u_minus = -r.dn - sq;
    let u_plus = -r.dn + sq;
    let u_small = if u_minus.abs() <= u_plus.abs() { u_minus } else { u_plus };
    let tol = classification_tol(z.separation());
    if u_small > tol {
        Ok(ConeClass::PreCollisional)
    } else if u_small < -tol {
        Ok(ConeClass::PostCollisional)
    } else if r.dn < -tol {
        Ok(ConeClass::PreCollisional)
    } else if r.dn > tol {
        Ok(ConeClass::PostCollisional)
    } else {
        Ok(ConeClass::NonColliding)
    }
}

/// Signed time at which the relative line first (pre-collisional) or last
/// (post-collisional) touches contact: the root of `|y + s w| = eps` of
/// smaller magnitude, with the branch fixed by the cone class.
pub fn collision_time(z: &PhasePoint, eps: f64) -> Result<f64> {
    let class = classify_velocity(z, eps)?;
    collision_time_classified(z, eps, class)
}

pub(crate) fn collision_time_classified(z: &PhasePoint, eps: f64, class: ConeClass) -> Result<f64> {
    let r = line_roots(z, eps).ok_or(Error::NotInCone)?;
    let sq = r.disc.max(0.0).sqrt();
    let d = match class {
        ConeClass::PreCollisional => -r.dn - sq,
        ConeClass::PostCollisional => -r.dn + sq,
        ConeClass::NonColliding => return Err(Error::NotInCone),
    };
    Ok(d / r.wn)
}

/// Unit normal to the contact set seen from a state, stacked as
/// `(yc, -yc) / (sqrt(2) eps)` where `yc` is the relative position at
/// contact. Defined on the collision cones.
pub fn boundary_normal(z: &PhasePoint, eps: f64) -> Result<Vec6> {
    let tau = collision_time(z, eps)?;
    let yc = z.rel_pos() + tau * z.rel_vel();
    Ok(normal_from_contact_gap(&yc, eps))
}

/// Normal built directly from a contact-gap vector `yc` with `|yc| = eps`.
pub fn normal_from_contact_gap(yc: &Vec3, eps: f64) -> Vec6 {
    stack(yc, &-yc) / (std::f64::consts::SQRT_2 * eps)
}

/// Unit normal of the contact set pointing out of the admissible region
/// (toward smaller separation), at the contact point `[y, y + eps n]`.
/// This is the orientation that closes the divergence theorem with a plus
/// sign on the contact flux.
pub fn domain_outward_normal(n: &Vec3) -> Vec6 {
    stack(n, &-n) / std::f64::consts::SQRT_2
}

/// The opposite orientation, used in the weak-form boundary pairing: with
/// this normal the interior transport terms balance the contact term as
/// `interior + flux = 0`.
pub fn boundary_flux_normal(n: &Vec3) -> Vec6 {
    -domain_outward_normal(n)
}

/// Reflect a 6-vector through the hyperplane orthogonal to the unit `nu`.
pub fn reflect(nu: &Vec6, u: &Vec6) -> Vec6 {
    u - 2.0 * u.dot(nu) * nu
}

/// Orthogonal reflection `I - 2 nu nu^T` as a matrix.
pub fn reflection_matrix(nu: &Vec6) -> Mat6 {
    Mat6::identity() - 2.0 * nu * nu.transpose()
}

/// Scattering reflection at the contact reached from an in-cone state.
///
/// Applied to the velocity it exchanges the normal velocity components of
/// the two spheres, conserving total momentum, angular momentum and kinetic
/// energy.
pub fn scattering_matrix(z: &PhasePoint, eps: f64) -> Result<Mat6> {
    let nu = boundary_normal(z, eps)?;
    Ok(reflection_matrix(&nu))
}

/// Collision time extended to overlapping configurations.
///
/// Inside the contact sphere the two real roots of `|y + s w| = eps` have
/// opposite signs, and the branch assignment flips: states whose gap is
/// opening take the positive exit root, states whose gap is closing the
/// negative one. Coincident centers take `eps / |w|`. On admissible
/// configurations this agrees with [`collision_time`], continuously across
/// contact.
pub fn collision_time_extended(z: &PhasePoint, eps: f64) -> Result<f64> {
    let y = z.rel_pos();
    let sep = y.norm();
    if sep >= eps - classification_tol(sep) {
        return collision_time(z, eps);
    }
    let w = z.rel_vel();
    let wn = w.norm();
    if wn < 1e-14 * (1.0 + z.v.norm() + z.vbar.norm()) {
        return Err(Error::Degenerate);
    }
    if sep < 1e-14 * eps {
        return Ok(eps / wn);
    }
    let dn = y.dot(&w) / wn;
    let disc = dn * dn + eps * eps - sep * sep;
    let sq = disc.sqrt();
    let d = if y.dot(&w) >= 0.0 { -dn + sq } else { -dn - sq };
    Ok(d / wn)
}

/// Contact normal extended to all of phase space where a contact direction
/// can be assigned; `None` where the scattering reflection acts as the
/// identity (off the cones, or degenerate).
pub fn extended_contact_normal(z: &PhasePoint, eps: f64) -> Option<Vec6> {
    let sep = z.separation();
    if sep >= eps - classification_tol(sep) {
        match classify_velocity(z, eps) {
            Ok(ConeClass::NonColliding) | Err(_) => None,
            Ok(class) => {
                let tau = collision_time_classified(z, eps, class).ok()?;
                let yc = z.rel_pos() + tau * z.rel_vel();
                Some(normal_from_contact_gap(&yc, eps))
            }
        }
    } else {
        let tau = collision_time_extended(z, eps).ok()?;
        let yc = z.rel_pos() + tau * z.rel_vel();
        Some(normal_from_contact_gap(&yc, eps))
    }
}

/// Scattering reflection extended to every state: equals
/// [`scattering_matrix`] on the cones, the identity elsewhere, and uses the
/// extended collision time on overlapping configurations.
pub fn scattering_matrix_extended(z: &PhasePoint, eps: f64) -> Mat6 {
    match extended_contact_normal(z, eps) {
        Some(nu) => reflection_matrix(&nu),
        None => Mat6::identity(),
    }
}

/// Apply the extended scattering reflection to both the position and the
/// velocity block of a state. A smooth involution of phase space with unit
/// Jacobian that preserves the admissible set, the contact set, and their
/// complement.
pub fn scatter_reflect(z: &PhasePoint, eps: f64) -> PhasePoint {
    match extended_contact_normal(z, eps) {
        Some(nu) => PhasePoint::from_vectors(
            &reflect(&nu, &z.positions()),
            &reflect(&nu, &z.velocities()),
        ),
        None => *z,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    pub fn head_on(eps: f64) -> PhasePoint {
        let _ = eps;
        PhasePoint::new(
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(3.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(-1.0, 0.0, 0.0),
        )
    }

    #[test]
    fn classifies_head_on_approach_as_pre_collisional() {
        let z = head_on(1.0);
        assert_eq!(classify_velocity(&z, 1.0).unwrap(), ConeClass::PreCollisional);
    }

    #[test]
    fn zero_relative_velocity_is_non_colliding() {
        let z = PhasePoint::new(
            Vec3::zeros(),
            Vec3::new(3.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
        );
        assert_eq!(classify_velocity(&z, 1.0).unwrap(), ConeClass::NonColliding);
    }

    #[test]
    fn receding_along_a_past_contact_is_post_collisional() {
        let z = PhasePoint::new(
            Vec3::zeros(),
            Vec3::new(3.0, 0.0, 0.0),
            Vec3::new(-1.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
        );
        assert_eq!(classify_velocity(&z, 1.0).unwrap(), ConeClass::PostCollisional);
        assert_relative_eq!(collision_time(&z, 1.0).unwrap(), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn overlapping_configuration_is_rejected() {
        let z = PhasePoint::new(
            Vec3::zeros(),
            Vec3::new(0.5, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(-1.0, 0.0, 0.0),
        );
        assert!(matches!(classify_velocity(&z, 1.0), Err(Error::InvalidState(_))));
    }

    #[test]
    fn head_on_collision_time_and_normal() {
        let z = head_on(1.0);
        let tau = collision_time(&z, 1.0).unwrap();
        assert_relative_eq!(tau, 1.0, epsilon = 1e-12);
        let nu = boundary_normal(&z, 1.0).unwrap();
        let expected = stack(&Vec3::new(1.0, 0.0, 0.0), &Vec3::new(-1.0, 0.0, 0.0))
            / std::f64::consts::SQRT_2;
        assert_relative_eq!((nu - expected).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn grazing_line_is_pre_collisional_with_tangential_normal() {
        // Zero discriminant: 9 + 1 - 10 = 0.
        let z = PhasePoint::new(
            Vec3::zeros(),
            Vec3::new(-3.0, 1.0, 0.0),
            Vec3::new(-1.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
        );
        assert_eq!(classify_velocity(&z, 1.0).unwrap(), ConeClass::PreCollisional);
        let tau = collision_time(&z, 1.0).unwrap();
        assert_relative_eq!(tau, 1.5, epsilon = 1e-12);
        let nu = boundary_normal(&z, 1.0).unwrap();
        let expected = stack(&Vec3::new(0.0, 1.0, 0.0), &Vec3::new(0.0, -1.0, 0.0))
            / std::f64::consts::SQRT_2;
        assert_relative_eq!((nu - expected).norm(), 0.0, epsilon = 1e-12);
        // At tangency the reflection fixes the velocity.
        let s = scattering_matrix(&z, 1.0).unwrap();
        assert_relative_eq!((s * z.velocities() - z.velocities()).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn head_on_scattering_exchanges_velocities() {
        let z = head_on(1.0);
        let s = scattering_matrix(&z, 1.0).unwrap();
        let sv = s * z.velocities();
        let expected = stack(&Vec3::new(-1.0, 0.0, 0.0), &Vec3::new(1.0, 0.0, 0.0));
        assert_relative_eq!((sv - expected).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn contact_position_at_collision_time() {
        let z = PhasePoint::new(
            Vec3::zeros(),
            Vec3::new(3.0, 0.5, 0.0),
            Vec3::new(2.0, 0.0, 0.0),
            Vec3::new(0.0, 0.0, 0.0),
        );
        let tau = collision_time(&z, 1.0).unwrap();
        let gap = (z.rel_pos() + tau * z.rel_vel()).norm();
        assert!((gap - 1.0).abs() <= 1e-10 * z.separation().max(1.0));
    }

    #[test]
    fn extended_time_at_coincident_centers() {
        let z = PhasePoint::new(
            Vec3::new(1.0, 2.0, 3.0),
            Vec3::new(1.0, 2.0, 3.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(-1.0, 0.0, 0.0),
        );
        assert_relative_eq!(collision_time_extended(&z, 1.0).unwrap(), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn extended_time_is_continuous_across_contact() {
        // Separating pair just inside and just outside contact.
        for sep in [1.0 - 1e-7, 1.0, 1.0 + 1e-7] {
            let z = PhasePoint::new(
                Vec3::zeros(),
                Vec3::new(sep, 0.0, 0.0),
                Vec3::new(-1.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
            );
            let tau = collision_time_extended(&z, 1.0).unwrap();
            assert!(tau.abs() < 1e-6, "tau = {tau} at sep = {sep}");
        }
    }

    #[test]
    fn extended_scatter_is_identity_off_the_cones() {
        let z = PhasePoint::new(
            Vec3::zeros(),
            Vec3::new(3.0, 0.0, 0.0),
            Vec3::new(0.5, 0.0, 0.0),
            Vec3::new(0.5, 0.0, 0.0),
        );
        assert_relative_eq!(
            (scattering_matrix_extended(&z, 1.0) - Mat6::identity()).norm(),
            0.0,
            epsilon = 1e-15
        );
        assert_eq!(scatter_reflect(&z, 1.0), z);
    }

    #[test]
    fn scatter_reflect_is_an_involution_on_and_off_the_table() {
        let states = [
            head_on(1.0),
            // Overlapping, separating.
            PhasePoint::new(
                Vec3::new(0.2, 0.0, 0.0),
                Vec3::zeros(),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(-1.0, 0.0, 0.0),
            ),
        ];
        for z in states {
            let back = scatter_reflect(&scatter_reflect(&z, 1.0), 1.0);
            assert!((back.positions() - z.positions()).norm() < 1e-9);
            assert!((back.velocities() - z.velocities()).norm() < 1e-9);
        }
    }

    #[test]
    fn membership_examples() {
        let mk = |sep: f64| {
            PhasePoint::new(
                Vec3::zeros(),
                Vec3::new(sep, 0.0, 0.0),
                Vec3::zeros(),
                Vec3::zeros(),
            )
        };
        assert_eq!(table_membership(&mk(3.0), 1.0, 1e-9), Membership::Interior);
        assert_eq!(table_membership(&mk(1.0), 1.0, 1e-9), Membership::Boundary);
        assert_eq!(table_membership(&mk(0.5), 1.0, 1e-9), Membership::Exterior);
    }
}
