//! Planar analogue of the pair dynamics: a point particle in the square
//! `[-1, 1]^2` with a circular scatterer of radius `r` at the origin,
//! evolved event by event with specular reflections, and unfolded into a
//! single straight line by accumulating the event reflections.

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

pub type Vec2 = Vector2<f64>;

const EVENT_TOL: f64 = 1e-9;

/// Particle state on the table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SinaiState {
    pub position: Vec2,
    pub velocity: Vec2,
}

/// One specular reflection: the affine map fixing the mirror line through
/// `point` with unit normal `normal`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct EventReflection {
    pub time: f64,
    pub point: Vec2,
    pub normal: Vec2,
}

impl EventReflection {
    /// Apply the affine reflection to a point of the plane.
    pub fn apply(&self, z: &Vec2) -> Vec2 {
        z - 2.0 * (z - self.point).dot(&self.normal) * self.normal
    }

    /// Apply the linear part to a direction.
    pub fn apply_linear(&self, v: &Vec2) -> Vec2 {
        v - 2.0 * v.dot(&self.normal) * self.normal
    }
}

/// Ordered reflections accumulated along a trajectory. Applying the
/// composition to the tail of the straight unfolded line reproduces the
/// reflected trajectory.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct IsometryChain {
    pub reflections: Vec<EventReflection>,
}

impl IsometryChain {
    /// Fold an unfolded point back onto the table frame.
    pub fn fold_point(&self, z: &Vec2) -> Vec2 {
        let mut p = *z;
        for r in &self.reflections {
            p = r.apply(&p);
        }
        p
    }

    pub fn fold_direction(&self, v: &Vec2) -> Vec2 {
        let mut d = *v;
        for r in &self.reflections {
            d = r.apply_linear(&d);
        }
        d
    }
}

fn inside_table(p: &Vec2, r: f64, slack: f64) -> bool {
    p.x.abs() <= 1.0 + slack && p.y.abs() <= 1.0 + slack && p.norm() >= r - slack
}

/// Next event along the straight line `p + s v`, `s > tol`: the earliest
/// wall or scatterer hit, with its outward (into the table) unit normal.
fn next_event(p: &Vec2, v: &Vec2, r: f64) -> Result<Option<(f64, Vec2)>> {
    let mut best: Option<(f64, Vec2)> = None;
    let mut consider = |s: f64, normal: Vec2| {
        if s > EVENT_TOL {
            match best {
                Some((sb, _)) if sb <= s => {}
                _ => best = Some((s, normal)),
            }
        }
    };

    // Four walls.
    for axis in 0..2 {
        if v[axis].abs() > 0.0 {
            for sign in [-1.0f64, 1.0] {
                let s = (sign - p[axis]) / v[axis];
                let hit = p + s * v;
                let other = 1 - axis;
                if s > EVENT_TOL && hit[other].abs() <= 1.0 + EVENT_TOL {
                    let mut normal = Vec2::zeros();
                    normal[axis] = -sign;
                    consider(s, normal);
                }
            }
        }
    }

    // Scatterer: first positive root of |p + s v| = r.
    let a = v.norm_squared();
    let b = 2.0 * p.dot(v);
    let c = p.norm_squared() - r * r;
    let disc = b * b - 4.0 * a * c;
    if a > 0.0 && disc > 0.0 {
        let sq = disc.sqrt();
        for s in [(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)] {
            if s > EVENT_TOL {
                let hit = p + s * v;
                consider(s, hit / hit.norm());
                break;
            }
        }
    }

    let Some((s, normal)) = best else {
        return Ok(None);
    };
    let hit = p + s * v;

    // Reject corners and tangential scatterer hits.
    if hit.x.abs() > 1.0 - EVENT_TOL && hit.y.abs() > 1.0 - EVENT_TOL {
        return Err(Error::CornerHit(s));
    }
    let radial = hit.norm();
    if (radial - r).abs() < EVENT_TOL && v.dot(&normal).abs() < EVENT_TOL * v.norm() {
        return Err(Error::CornerHit(s));
    }
    // Simultaneous wall/scatterer hit.
    if (radial - r).abs() < EVENT_TOL && (hit.x.abs() > 1.0 - EVENT_TOL || hit.y.abs() > 1.0 - EVENT_TOL) {
        return Err(Error::CornerHit(s));
    }
    Ok(Some((s, normal)))
}

fn check_initial(x0: &Vec2, v0: &Vec2, r: f64) -> Result<()> {
    if !(0.0 < r && r < 1.0) {
        return Err(Error::InvalidState(format!("scatterer radius {r} outside (0, 1)")));
    }
    if v0.norm() == 0.0 {
        return Err(Error::InvalidState("zero velocity".into()));
    }
    if !inside_table(x0, r, EVENT_TOL) {
        return Err(Error::InvalidState(format!("start {x0:?} outside the table")));
    }
    Ok(())
}

/// Event-driven evolution for time `t >= 0`.
pub fn sinai_flow(x0: &Vec2, v0: &Vec2, t: f64, r: f64) -> Result<SinaiState> {
    Ok(sinai_unfold(x0, v0, t, r)?.0)
}

/// Evolve and also return the straight-line unfolding: the final state, the
/// unfolded endpoint `x0 + t v0`, and the reflection chain whose composition
/// carries the unfolded line onto the reflected trajectory.
pub fn sinai_unfold(x0: &Vec2, v0: &Vec2, t: f64, r: f64) -> Result<(SinaiState, Vec2, IsometryChain)> {
    check_initial(x0, v0, r)?;
    let mut chain = IsometryChain::default();
    let mut pos = *x0;
    let mut vel = *v0;
    let mut remaining = t;
    let mut elapsed = 0.0;

    loop {
        match next_event(&pos, &vel, r)? {
            Some((s, normal)) if s < remaining => {
                let hit = pos + s * vel;
                elapsed += s;
                remaining -= s;
                chain.reflections.push(EventReflection { time: elapsed, point: hit, normal });
                pos = hit;
                vel -= 2.0 * vel.dot(&normal) * normal;
            }
            _ => {
                let state = SinaiState { position: pos + remaining * vel, velocity: vel };
                let unfolded = x0 + t * v0;
                return Ok((state, unfolded, chain));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn axial_orbit_between_wall_and_scatterer_has_period_one() {
        // Events: wall x = 1 at t = 0.25, scatterer at t = 0.75, and so on.
        let x0 = Vec2::new(0.75, 0.0);
        let v0 = Vec2::new(1.0, 0.0);
        let (s, _, chain) = sinai_unfold(&x0, &v0, 1.0, 0.5).unwrap();
        assert_relative_eq!((s.position - x0).norm(), 0.0, epsilon = 1e-12);
        assert_relative_eq!((s.velocity - v0).norm(), 0.0, epsilon = 1e-12);
        assert_eq!(chain.reflections.len(), 2);
        assert_relative_eq!(chain.reflections[0].time, 0.25, epsilon = 1e-12);
        assert_relative_eq!(chain.reflections[1].time, 0.75, epsilon = 1e-12);
        assert!((chain.reflections[1].point - Vec2::new(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn axial_orbit_mid_period() {
        let x0 = Vec2::new(0.75, 0.0);
        let v0 = Vec2::new(1.0, 0.0);
        let s = sinai_flow(&x0, &v0, 1.5, 0.5).unwrap();
        assert_relative_eq!((s.position - Vec2::new(0.75, 0.0)).norm(), 0.0, epsilon = 1e-12);
        assert_relative_eq!((s.velocity - Vec2::new(-1.0, 0.0)).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn vertical_chord_clears_the_scatterer() {
        let x0 = Vec2::new(0.75, 0.0);
        let v0 = Vec2::new(0.0, 1.0);
        let s = sinai_flow(&x0, &v0, 1.0, 0.5).unwrap();
        assert_relative_eq!((s.position - Vec2::new(0.75, 1.0)).norm(), 0.0, epsilon = 1e-12);
        // The wall event sits exactly at the query time; the state still
        // carries the incoming velocity.
        assert_eq!(s.velocity, v0);
        let after = sinai_flow(&x0, &v0, 1.2, 0.5).unwrap();
        assert_relative_eq!((after.velocity - Vec2::new(0.0, -1.0)).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn single_wall_bounce_folds_the_mirror_image() {
        let x0 = Vec2::new(0.75, 0.4);
        let v0 = Vec2::new(0.0, 1.0);
        let t = 1.1;
        let (s, unfolded, chain) = sinai_unfold(&x0, &v0, t, 0.5).unwrap();
        assert_eq!(chain.reflections.len(), 1);
        assert_relative_eq!((unfolded - Vec2::new(0.75, 1.5)).norm(), 0.0, epsilon = 1e-12);
        assert_relative_eq!((chain.fold_point(&unfolded) - Vec2::new(0.75, 0.5)).norm(), 0.0, epsilon = 1e-12);
        assert_relative_eq!((s.position - chain.fold_point(&unfolded)).norm(), 0.0, epsilon = 1e-12);
        assert_relative_eq!((chain.fold_direction(&v0) - Vec2::new(0.0, -1.0)).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn empty_chain_for_event_free_window() {
        let x0 = Vec2::new(-0.8, -0.8);
        let v0 = Vec2::new(1.0, 0.3);
        let (s, unfolded, chain) = sinai_unfold(&x0, &v0, 0.1, 0.5).unwrap();
        assert!(chain.reflections.is_empty());
        assert_eq!(s.position, unfolded);
    }

    #[test]
    fn speed_is_preserved_across_many_events() {
        let x0 = Vec2::new(0.62, -0.37);
        let v0 = Vec2::new(0.83, 1.21);
        let (s, _, chain) = sinai_unfold(&x0, &v0, 25.0, 0.47).unwrap();
        assert!(chain.reflections.len() > 10);
        assert_relative_eq!(s.velocity.norm(), v0.norm(), epsilon = 1e-12);
        assert!(inside_table(&s.position, 0.47, 1e-9));
    }

    #[test]
    fn reversed_final_state_returns_home() {
        let x0 = Vec2::new(0.3, -0.7);
        let v0 = Vec2::new(1.1, 0.6);
        let t = 7.3;
        let s = sinai_flow(&x0, &v0, t, 0.4).unwrap();
        let back = sinai_flow(&s.position, &(-s.velocity), t, 0.4).unwrap();
        assert!((back.position - x0).norm() < 1e-9);
        assert!((back.velocity + v0).norm() < 1e-9);
    }

    #[test]
    fn corner_aimed_trajectory_reports_the_hit() {
        let x0 = Vec2::new(0.0, 0.0);
        let v0 = Vec2::new(1.0, 1.0);
        // Start on the scatterer edge aimed straight at the corner (1, 1).
        let start = Vec2::new(0.6, 0.6);
        let _ = x0;
        let err = sinai_flow(&start, &v0, 2.0, 0.5).unwrap_err();
        assert!(matches!(err, Error::CornerHit(_)));
    }
}
