//! The pair flows: the physical hard-sphere evolution with a velocity jump
//! at contact, the collision-free two-sheet evolution that replaces the jump
//! with a sheet switch, and the fold map identifying the two pictures.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::geometry::{
    classify_velocity, collision_time_classified, normal_from_contact_gap, reflect, scatter_reflect,
    split, stack, ConeClass, PhasePoint, Vec3, Vec6,
};
use crate::Result;

/// Sheet index of the doubled configuration set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sheet {
    One,
    Two,
}

impl Sheet {
    pub fn other(self) -> Sheet {
        match self {
            Sheet::One => Sheet::Two,
            Sheet::Two => Sheet::One,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Sheet::One => 1,
            Sheet::Two => 2,
        }
    }
}

/// A pair state tagged with its sheet.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SheetPoint {
    pub base: PhasePoint,
    pub sheet: Sheet,
}

impl SheetPoint {
    pub fn on_sheet(base: PhasePoint, sheet: Sheet) -> Self {
        Self { base, sheet }
    }
}

/// Exchange the two 3-blocks of a stacked position vector.
pub fn switch(positions: &Vec6) -> Vec6 {
    let (a, b) = split(positions);
    stack(&b, &a)
}

fn free(z: &PhasePoint, t: f64) -> PhasePoint {
    PhasePoint::new(z.x + t * z.v, z.xbar + t * z.vbar, z.v, z.vbar)
}

/// Contact data of a colliding state: time, contact point, and the velocity
/// after reflection there.
struct ContactData {
    tau: f64,
    contact_positions: Vec6,
    contact_normal: Vec6,
    scattered_velocity: Vec6,
}

fn contact_data(z: &PhasePoint, eps: f64, class: ConeClass) -> Result<ContactData> {
    let tau = collision_time_classified(z, eps, class)?;
    let yc = z.rel_pos() + tau * z.rel_vel();
    let nu = normal_from_contact_gap(&yc, eps);
    Ok(ContactData {
        tau,
        contact_positions: free(z, tau).positions(),
        contact_normal: nu,
        scattered_velocity: reflect(&nu, &z.velocities()),
    })
}

/// Evolve a state for time `t` (either sign).
///
/// Free flight off the collision cones; otherwise straight lines joined at
/// the contact time by the scattering reflection of the velocity. The
/// pre-collisional branch keeps the incoming velocity up to and including
/// the contact instant; the post-collisional branch is free from the contact
/// instant onward, so that evolving by `t = 0` is always the identity.
pub fn hard_sphere_flow(z0: &PhasePoint, t: f64, eps: f64) -> Result<PhasePoint> {
    let class = classify_velocity(z0, eps)?;
    match class {
        ConeClass::NonColliding => Ok(free(z0, t)),
        ConeClass::PreCollisional => {
            let c = contact_data(z0, eps, class)?;
            if t <= c.tau {
                Ok(free(z0, t))
            } else {
                let positions = c.contact_positions + (t - c.tau) * c.scattered_velocity;
                Ok(PhasePoint::from_vectors(&positions, &c.scattered_velocity))
            }
        }
        ConeClass::PostCollisional => {
            let c = contact_data(z0, eps, class)?;
            if t >= c.tau {
                Ok(free(z0, t))
            } else {
                let positions = c.contact_positions + (t - c.tau) * c.scattered_velocity;
                Ok(PhasePoint::from_vectors(&positions, &c.scattered_velocity))
            }
        }
    }
}

/// Evolve a sheet point for time `t`: straight-line motion, with a switch of
/// sheet at the contact time at which the position is swapped by [`switch`].
/// The velocity never changes.
pub fn doubled_flow(z0: &SheetPoint, t: f64, eps: f64) -> Result<SheetPoint> {
    let class = classify_velocity(&z0.base, eps)?;
    let velocities = z0.base.velocities();
    match class {
        ConeClass::NonColliding => Ok(SheetPoint::on_sheet(free(&z0.base, t), z0.sheet)),
        ConeClass::PreCollisional => {
            let tau = collision_time_classified(&z0.base, eps, class)?;
            if t <= tau {
                Ok(SheetPoint::on_sheet(free(&z0.base, t), z0.sheet))
            } else {
                let contact = free(&z0.base, tau).positions();
                let positions = switch(&contact) + (t - tau) * velocities;
                Ok(SheetPoint::on_sheet(
                    PhasePoint::from_vectors(&positions, &velocities),
                    z0.sheet.other(),
                ))
            }
        }
        ConeClass::PostCollisional => {
            let tau = collision_time_classified(&z0.base, eps, class)?;
            if t >= tau {
                Ok(SheetPoint::on_sheet(free(&z0.base, t), z0.sheet))
            } else {
                let contact = free(&z0.base, tau).positions();
                let positions = switch(&contact) + (t - tau) * velocities;
                Ok(SheetPoint::on_sheet(
                    PhasePoint::from_vectors(&positions, &velocities),
                    z0.sheet.other(),
                ))
            }
        }
    }
}

/// Send a sheet point back to the single configuration set: sheet one is
/// left alone, sheet two passes through the extended scattering reflection
/// of both blocks.
pub fn fold(z: &SheetPoint, eps: f64) -> PhasePoint {
    match z.sheet {
        Sheet::One => z.base,
        Sheet::Two => scatter_reflect(&z.base, eps),
    }
}

/// Total momentum, angular momentum about the origin, and kinetic energy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConservedQuantities {
    pub momentum: Vec3,
    pub angular_momentum: Vec3,
    pub kinetic_energy: f64,
}

pub fn conserved_quantities(z: &PhasePoint) -> ConservedQuantities {
    ConservedQuantities {
        momentum: z.v + z.vbar,
        angular_momentum: z.x.cross(&z.v) + z.xbar.cross(&z.vbar),
        kinetic_energy: 0.5 * z.velocities().norm_squared(),
    }
}

/// Angular momentum about an arbitrary point `a`.
pub fn angular_momentum_about(z: &PhasePoint, a: &Vec3) -> Vec3 {
    (z.x - a).cross(&z.v) + (z.xbar - a).cross(&z.vbar)
}

/// Record of the single scattering event along a sampled trajectory.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TrajectoryEvent {
    pub time: f64,
    pub pre_velocity: Vec6,
    pub post_velocity: Vec6,
    pub contact_normal: Vec6,
}

/// Time-ordered samples of a trajectory with the event record when the
/// collision time falls inside the sampled window.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<(f64, PhasePoint)>,
    pub event: Option<TrajectoryEvent>,
}

/// Sample the flow at the caller's times; the contact time is inserted into
/// the grid whenever it lies inside the sampled window.
pub fn sample_trajectory(z0: &PhasePoint, times: &[f64], eps: f64) -> Result<Trajectory> {
    if times.is_empty() {
        return Err(Error::InvalidState("empty time grid".into()));
    }
    let mut grid: Vec<f64> = times.to_vec();
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();

    let class = classify_velocity(z0, eps)?;
    let mut event = None;
    if class != ConeClass::NonColliding {
        let c = contact_data(z0, eps, class)?;
        let lo = *grid.first().unwrap();
        let hi = *grid.last().unwrap();
        if c.tau >= lo && c.tau <= hi {
            if grid.iter().all(|t| (t - c.tau).abs() > 0.0) {
                grid.push(c.tau);
                grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
            }
            event = Some(TrajectoryEvent {
                time: c.tau,
                pre_velocity: z0.velocities(),
                post_velocity: c.scattered_velocity,
                contact_normal: c.contact_normal,
            });
        }
    }

    let mut samples = Vec::with_capacity(grid.len());
    for &t in &grid {
        samples.push((t, hard_sphere_flow(z0, t, eps)?));
    }
    Ok(Trajectory { samples, event })
}
