//! Region-by-region integration-by-parts identities for the transported
//! density. The velocity-time cone over each configuration splits into four
//! regions by cone half (pre/post) and by whether the backward pullback has
//! passed through the contact; on each region the density has a smooth
//! representative, and pairing it with a time or space derivative of a test
//! function produces a contact-evaluation term, a transport term, and (for
//! the space side) a divergence term evaluated here by a directional finite
//! difference of a time integral.

use rand::Rng;

use crate::distribution::InitialDatum;
use crate::geometry::{
    classify_velocity, collision_time_classified, normal_from_contact_gap, reflect, ConeClass,
    PhasePoint, Vec6,
};
use crate::quadrature::{pairwise_sum, sample_rng, simpson, Estimate, QuadratureSpec, TestFunction};
use crate::verify::{CheckNotes, CheckReport};

/// Which half of the collision cone the velocity integral runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeSide {
    Pre,
    Post,
}

/// Whether the backward pullback on the region has passed the contact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PullbackSide {
    Free,
    Scattered,
}

/// Which derivative of the test function is paired with the density.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivativeSide {
    Time,
    Space,
}

fn cone_class(c: ConeSide) -> ConeClass {
    match c {
        ConeSide::Pre => ConeClass::PreCollisional,
        ConeSide::Post => ConeClass::PostCollisional,
    }
}

/// The region sits on the upper time interval `(-tau, inf)` when the cone
/// half and the pullback side agree with the flow's orientation; otherwise
/// on `(-inf, -tau)`.
fn is_upper(cone: ConeSide, pull: PullbackSide) -> bool {
    matches!(
        (cone, pull),
        (ConeSide::Pre, PullbackSide::Free) | (ConeSide::Post, PullbackSide::Scattered)
    )
}

struct RegionRep {
    tau: f64,
    contact_positions: Vec6,
    /// Transport velocity of the representative: `V` on free regions, the
    /// scattered velocity otherwise.
    carrier: Vec6,
    /// Datum velocity argument at the contact evaluation.
    boundary_velocity: Vec6,
}

fn region_rep(z: &PhasePoint, eps: f64, cone: ConeSide, pull: PullbackSide) -> Option<RegionRep> {
    let class = classify_velocity(z, eps).ok()?;
    if class != cone_class(cone) {
        return None;
    }
    let tau = collision_time_classified(z, eps, class).ok()?;
    let yc = z.rel_pos() + tau * z.rel_vel();
    let nu = normal_from_contact_gap(&yc, eps);
    let scattered = reflect(&nu, &z.velocities());
    let contact_positions = z.positions() + tau * z.velocities();
    let (carrier, boundary_velocity) = match pull {
        PullbackSide::Free => (z.velocities(), z.velocities()),
        PullbackSide::Scattered => (scattered, scattered),
    };
    Some(RegionRep { tau, contact_positions, carrier, boundary_velocity })
}

/// Density representative on the region at time `t`.
fn rep_value(f0: &InitialDatum, z: &PhasePoint, rep: &RegionRep, pull: PullbackSide, t: f64) -> f64 {
    match pull {
        PullbackSide::Free => f0.eval(&(z.positions() - t * z.velocities()), &z.velocities()),
        PullbackSide::Scattered => f0.eval(
            &(rep.contact_positions - (t + rep.tau) * rep.carrier),
            &rep.carrier,
        ),
    }
}

/// Transport-term integrand `W . grad F0` at the pulled-back argument.
fn rep_transport(f0: &InitialDatum, z: &PhasePoint, rep: &RegionRep, pull: PullbackSide, t: f64) -> f64 {
    match pull {
        PullbackSide::Free => {
            let arg = z.positions() - t * z.velocities();
            rep.carrier.dot(&f0.grad_x(&arg, &z.velocities()))
        }
        PullbackSide::Scattered => {
            let arg = rep.contact_positions - (t + rep.tau) * rep.carrier;
            rep.carrier.dot(&f0.grad_x(&arg, &rep.carrier))
        }
    }
}

/// Time integral of the representative against the test function over the
/// region's time interval clipped to the window.
fn time_integral(
    f0: &InitialDatum,
    z: &PhasePoint,
    eps: f64,
    cone: ConeSide,
    pull: PullbackSide,
    phi: &TestFunction,
    upper: bool,
    panels: usize,
) -> f64 {
    let Some(rep) = region_rep(z, eps, cone, pull) else {
        return 0.0;
    };
    let (w0, w1) = phi.t_window();
    let (a, b) = if upper {
        ((-rep.tau).max(w0), w1)
    } else {
        (w0, (-rep.tau).min(w1))
    };
    if b <= a {
        return 0.0;
    }
    simpson(
        |t| {
            let f = rep_value(f0, z, &rep, pull, t);
            if f == 0.0 {
                return 0.0;
            }
            f * phi.eval(&z.positions(), &z.velocities(), t)
        },
        a,
        b,
        panels,
    )
}

/// Guard for the directional stencil: the classification, and therefore the
/// smooth representative, must be stable along `X +- h V`.
fn stencil_stable(z: &PhasePoint, eps: f64, cone: ConeSide, h: f64) -> bool {
    let w = z.rel_vel();
    let wn = w.norm();
    if wn < 0.1 {
        return false;
    }
    let dn = z.rel_pos().dot(&w) / wn;
    let disc = dn * dn + eps * eps - z.rel_pos().norm_squared();
    if disc < 0.01 * eps * eps {
        return false;
    }
    for s in [-h, h] {
        let zs = PhasePoint::from_vectors(&(z.positions() + s * z.velocities()), &z.velocities());
        if classify_velocity(&zs, eps) != Ok(cone_class(cone)) {
            return false;
        }
    }
    true
}

/// Monte Carlo check of one of the eight region identities; the difference
/// of the two sides is accumulated per sample so the correlated error
/// cancels.
pub fn region_identity_check(
    name: &str,
    f0: &InitialDatum,
    phi: &TestFunction,
    cone: ConeSide,
    pull: PullbackSide,
    side: DerivativeSide,
    eps: f64,
    spec: &QuadratureSpec,
) -> CheckReport {
    let x_box = phi.x_box();
    let v_box = phi.v_box();
    let (t0, t1) = phi.t_window();
    let t_len = t1 - t0;
    let vol = x_box.volume() * v_box.volume();
    let upper = is_upper(cone, pull);
    let sgn_t = if upper { -1.0 } else { 1.0 };
    let panels = 32;

    let mut lhs_vals = Vec::with_capacity(spec.samples as usize);
    let mut diff_vals = Vec::with_capacity(spec.samples as usize);
    for i in 0..spec.samples {
        let mut rng = sample_rng(spec.seed, i);
        let x = x_box.sample(&mut rng);
        let v = v_box.sample(&mut rng);
        let t = t0 + rng.gen::<f64>() * t_len;
        let z = PhasePoint::from_vectors(&x, &v);

        if z.separation() < eps {
            lhs_vals.push(0.0);
            diff_vals.push(0.0);
            continue;
        }
        let h = 1e-5 * x.amax().max(1.0) / v.norm().max(1.0);
        if side == DerivativeSide::Space && !stencil_stable(&z, eps, cone, h) {
            lhs_vals.push(0.0);
            diff_vals.push(0.0);
            continue;
        }
        let Some(rep) = region_rep(&z, eps, cone, pull) else {
            lhs_vals.push(0.0);
            diff_vals.push(0.0);
            continue;
        };

        let in_region = if upper { t > -rep.tau } else { t < -rep.tau };
        let mut lhs = 0.0;
        let mut transport = 0.0;
        if in_region {
            let f = rep_value(f0, &z, &rep, pull, t);
            let pairing = match side {
                DerivativeSide::Time => phi.dt(&x, &v, t),
                DerivativeSide::Space => v.dot(&phi.grad_x(&x, &v, t)),
            };
            lhs = f * pairing;
            transport = rep_transport(f0, &z, &rep, pull, t) * phi.eval(&x, &v, t);
        }

        let boundary = f0.eval(&rep.contact_positions, &rep.boundary_velocity)
            * phi.eval(&x, &v, -rep.tau);

        let d = match side {
            // Identity: LHS = sgn_t * boundary + integral of transport.
            DerivativeSide::Time => t_len * (lhs - transport) - sgn_t * boundary,
            // Identity: LHS = directional term - sgn_t * boundary
            //                 - integral of transport.
            DerivativeSide::Space => {
                let gp = time_integral(
                    f0,
                    &PhasePoint::from_vectors(&(x + h * v), &v),
                    eps,
                    cone,
                    pull,
                    phi,
                    upper,
                    panels,
                );
                let gm = time_integral(
                    f0,
                    &PhasePoint::from_vectors(&(x - h * v), &v),
                    eps,
                    cone,
                    pull,
                    phi,
                    upper,
                    panels,
                );
                let directional = (gp - gm) / (2.0 * h);
                t_len * (lhs + transport) - directional + sgn_t * boundary
            }
        };
        lhs_vals.push(t_len * lhs);
        diff_vals.push(d);
    }

    let lhs_est = reduce(&lhs_vals, vol);
    let diff_est = reduce(&diff_vals, vol);
    let tol = 3.0 * diff_est.std_err + 1e-12;
    CheckReport::new(
        format!("region/{name}"),
        diff_est,
        Estimate::exact(0.0),
        tol,
        CheckNotes {
            seed: spec.seed,
            samples: spec.samples,
            epsilon: eps,
            detail: format!(
                "lhs {:.3e}+-{:.1e}; {:?} {:?} {:?}",
                lhs_est.value, lhs_est.std_err, cone, pull, side
            ),
        },
    )
}

fn reduce(values: &[f64], volume: f64) -> Estimate {
    let n = values.len() as f64;
    let mean = pairwise_sum(values) / n;
    let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = pairwise_sum(&sq) / n;
    Estimate { value: volume * mean, std_err: volume * (var / n).sqrt(), samples: values.len() as u64 }
}
