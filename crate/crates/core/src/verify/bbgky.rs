//! First-marginal hierarchy identity: the free-transport pairing of the
//! first marginal balances a contact integral of the pair density weighted
//! by the collision cross-section and the jump of the test function across
//! the scattering reflection.
//!
//! The contact side is sampled directly on contact configurations
//! `(x, x + eps n)` over incoming velocity pairs `(v - vbar) . n >= 0`, with
//! the cross-section `|(v - vbar) . n|` and the surface factor `eps^2`
//! validated by the divergence-theorem check.

use rand::Rng;

use crate::distribution::{mild_solution, require_symmetric, InitialDatum};
use crate::geometry::{PhasePoint, Vec3};
use crate::quadrature::{
    pairwise_sum, sample_rng, unit_sphere_sample, Estimate, OneParticleTestFunction, QuadratureSpec,
};
use crate::verify::{mc_tolerance, CheckNotes, CheckReport};
use crate::Result;

fn reduce(values: &[f64], volume: f64) -> Estimate {
    let n = values.len() as f64;
    let mean = pairwise_sum(values) / n;
    let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = pairwise_sum(&sq) / n;
    Estimate { value: volume * mean, std_err: volume * (var / n).sqrt(), samples: values.len() as u64 }
}

/// Free-transport pairing of the first marginal, fused into one Monte Carlo
/// over `(x, v, t)` from the test function and `(xbar, vbar)` from a
/// free-streaming-adapted mixture proposal.
fn marginal_side(
    f0: &InitialDatum,
    psi: &OneParticleTestFunction,
    eps: f64,
    spec: &QuadratureSpec,
) -> Estimate {
    let x_box = psi.x_box();
    let v_box = psi.v_box();
    let (t0, t1) = psi.t_window();
    let outer_vol = x_box.volume() * v_box.volume() * (t1 - t0);

    // Marginal boxes of the companion sphere.
    let (dx_box, dv_box) = f0.support();
    let xbar_base = crate::domain::Box3 {
        lo: dx_box.lo.fixed_rows::<3>(3).into(),
        hi: dx_box.hi.fixed_rows::<3>(3).into(),
    }
    .hull(&crate::domain::Box3 {
        lo: dx_box.lo.fixed_rows::<3>(0).into(),
        hi: dx_box.hi.fixed_rows::<3>(0).into(),
    });
    let vbar_base = crate::domain::Box3 {
        lo: dv_box.lo.fixed_rows::<3>(3).into(),
        hi: dv_box.hi.fixed_rows::<3>(3).into(),
    }
    .hull(&crate::domain::Box3 {
        lo: dv_box.lo.fixed_rows::<3>(0).into(),
        hi: dv_box.hi.fixed_rows::<3>(0).into(),
    });
    let speed = f0.max_pair_speed();
    let t_reach = t0.abs().max(t1.abs());
    let cloud_x = xbar_base.inflated(speed * t_reach + eps);
    let cloud_v = crate::domain::Box3::from_center_halfwidths(Vec3::zeros(), Vec3::repeat(speed));

    let mut values = Vec::with_capacity(spec.samples as usize);
    for i in 0..spec.samples {
        let mut rng = sample_rng(spec.seed, i);
        let x = x_box.sample(&mut rng);
        let v = v_box.sample(&mut rng);
        let t = t0 + rng.gen::<f64>() * (t1 - t0);
        let weight = psi.dt(&x, &v, t) + v.dot(&psi.grad_x(&x, &v, t));
        if weight == 0.0 {
            values.push(0.0);
            continue;
        }

        // Mixture over the companion coordinates: free-sheared support or
        // scattering cloud.
        let use_shear = rng.gen::<f64>() < 0.5;
        let (xbar, vbar) = if use_shear {
            let xb0 = xbar_base.sample(&mut rng);
            let vb = vbar_base.sample(&mut rng);
            (xb0 + t * vb, vb)
        } else {
            (cloud_x.sample(&mut rng), cloud_v.sample(&mut rng))
        };
        let mut density = 0.0;
        if xbar_base.contains(&(xbar - t * vbar)) && vbar_base.contains(&vbar) {
            density += 0.5 / (xbar_base.volume() * vbar_base.volume());
        }
        if cloud_x.contains(&xbar) && cloud_v.contains(&vbar) {
            density += 0.5 / (cloud_x.volume() * cloud_v.volume());
        }
        if density == 0.0 || (xbar - x).norm() < eps {
            values.push(0.0);
            continue;
        }
        let z = PhasePoint::new(x, xbar, v, vbar);
        let f = mild_solution(f0, &z, t, eps).unwrap_or(0.0);
        values.push(weight * f / density);
    }
    reduce(&values, outer_vol)
}

/// Contact side: cross-section-weighted jump of the test function across the
/// scattering reflection, paired with the pair density's contact trace.
fn contact_side(
    f0: &InitialDatum,
    psi: &OneParticleTestFunction,
    eps: f64,
    spec: &QuadratureSpec,
) -> Estimate {
    let x_box = psi.x_box();
    let (t0, t1) = psi.t_window();
    let speed = f0.max_pair_speed();
    let vel = crate::domain::Box3::from_center_halfwidths(Vec3::zeros(), Vec3::repeat(speed));
    let vol = x_box.volume()
        * (4.0 * std::f64::consts::PI)
        * vel.volume()
        * vel.volume()
        * (t1 - t0)
        * eps
        * eps;

    let mut values = Vec::with_capacity(spec.samples as usize);
    for i in 0..spec.samples {
        let mut rng = sample_rng(spec.seed, i);
        let x = x_box.sample(&mut rng);
        let n = unit_sphere_sample(&mut rng);
        let v = vel.sample(&mut rng);
        let vbar = vel.sample(&mut rng);
        let t = t0 + rng.gen::<f64>() * (t1 - t0);

        let beta = (v - vbar).dot(&n);
        if beta < 0.0 {
            values.push(0.0);
            continue;
        }
        let v_prime = v - beta * n;
        let jump = psi.eval(&x, &v, t) - psi.eval(&x, &v_prime, t);
        if jump == 0.0 {
            values.push(0.0);
            continue;
        }
        let z = PhasePoint::new(x, x + eps * n, v, vbar);
        let f = mild_solution(f0, &z, t, eps).unwrap_or(0.0);
        values.push(beta * jump * f);
    }
    reduce(&values, vol)
}

/// The hierarchy identity for a symmetric pair datum: marginal side equals
/// contact side within the combined Monte Carlo error.
pub fn bbgky_residual(
    name: &str,
    f0: &InitialDatum,
    psi: &OneParticleTestFunction,
    eps: f64,
    spec: &QuadratureSpec,
) -> Result<CheckReport> {
    require_symmetric(f0, 1e-9, &spec.derived(9))?;
    let left = marginal_side(f0, psi, eps, &spec.derived(1));
    let right = contact_side(f0, psi, eps, &spec.derived(2));
    let tol = mc_tolerance(&left, &right);
    Ok(CheckReport::new(
        format!("bbgky/{name}"),
        left,
        right,
        tol,
        CheckNotes {
            seed: spec.seed,
            samples: spec.samples,
            epsilon: eps,
            detail: "marginal transport pairing vs cross-section contact integral".to_string(),
        },
    ))
}
