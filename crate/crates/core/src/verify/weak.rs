//! Interior transport against the contact flux: the transported density
//! must balance its time and space derivative pairings with the flux of its
//! contact trace.

use crate::distribution::{mild_solution, InitialDatum};
use crate::geometry::{boundary_flux_normal, stack, PhasePoint, Vec6};
use crate::quadrature::{
    boundary_integrate, pairwise_sum, sample_rng, BoundaryDomain, Estimate, QuadratureSpec,
    TestFunction,
};
use crate::verify::{CheckNotes, CheckReport};

use rand::Rng;

/// The three pieces of the balance: the time pairing, the space pairing, and
/// the contact flux.
#[derive(Clone, Copy, Debug)]
pub struct WeakBalance {
    pub time_term: Estimate,
    pub space_term: Estimate,
    pub interior: Estimate,
    pub boundary: Estimate,
}

/// Interior pairings of the transported density with `(dt + V.grad)Phi`,
/// sampled jointly so the combined estimate carries the correlated error.
fn interior_terms(
    f0: &InitialDatum,
    phi: &TestFunction,
    eps: f64,
    spec: &QuadratureSpec,
) -> (Estimate, Estimate, Estimate) {
    let x_box = phi.x_box();
    let v_box = phi.v_box();
    let (t0, t1) = phi.t_window();
    let vol = x_box.volume() * v_box.volume() * (t1 - t0);

    let n = spec.samples;
    let mut time_vals = Vec::with_capacity(n as usize);
    let mut space_vals = Vec::with_capacity(n as usize);
    let mut joint_vals = Vec::with_capacity(n as usize);
    for i in 0..n {
        let mut rng = sample_rng(spec.seed, i);
        let x = x_box.sample(&mut rng);
        let v = v_box.sample(&mut rng);
        let t = t0 + rng.gen::<f64>() * (t1 - t0);
        let z = PhasePoint::from_vectors(&x, &v);
        let (a, b) = if z.separation() >= eps {
            match mild_solution(f0, &z, t, eps) {
                Ok(f) if f != 0.0 => (f * phi.dt(&x, &v, t), f * v.dot(&phi.grad_x(&x, &v, t))),
                _ => (0.0, 0.0),
            }
        } else {
            (0.0, 0.0)
        };
        time_vals.push(a);
        space_vals.push(b);
        joint_vals.push(a + b);
    }
    (reduce(&time_vals, vol), reduce(&space_vals, vol), reduce(&joint_vals, vol))
}

fn reduce(values: &[f64], volume: f64) -> Estimate {
    let n = values.len() as f64;
    let mean = pairwise_sum(values) / n;
    let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = pairwise_sum(&sq) / n;
    Estimate { value: volume * mean, std_err: volume * (var / n).sqrt(), samples: values.len() as u64 }
}

/// Contact-flux pairing of the trace of the transported density with the
/// test function.
fn boundary_term(
    f0: &InitialDatum,
    phi: &TestFunction,
    eps: f64,
    spec: &QuadratureSpec,
    flip: bool,
) -> Estimate {
    let x_box = phi.x_box();
    let dom = BoundaryDomain {
        y_box: crate::domain::Box3 {
            lo: x_box.lo.fixed_rows::<3>(0).into(),
            hi: x_box.hi.fixed_rows::<3>(0).into(),
        },
        v_box: phi.v_box(),
        t_window: phi.t_window(),
    };
    let sign = if flip { -1.0 } else { 1.0 };
    boundary_integrate(
        |y, n, v, t| {
            let positions = stack(y, &(y + eps * n));
            let p = phi.eval(&positions, v, t);
            if p == 0.0 {
                return 0.0;
            }
            let z = PhasePoint::from_vectors(&positions, v);
            let f = mild_solution(f0, &z, t, eps).unwrap_or(0.0);
            if f == 0.0 {
                return 0.0;
            }
            let nu = boundary_flux_normal(n) * sign;
            f * p * v.dot(&nu)
        },
        &dom,
        eps,
        spec,
    )
}

/// Full balance at the caller's sample counts.
pub fn weak_balance(
    f0: &InitialDatum,
    phi: &TestFunction,
    eps: f64,
    spec: &QuadratureSpec,
    flip: bool,
) -> WeakBalance {
    let (time_term, space_term, interior) = interior_terms(f0, phi, eps, &spec.derived(1));
    let boundary = boundary_term(f0, phi, eps, &spec.derived(2), flip);
    WeakBalance { time_term, space_term, interior, boundary }
}

/// The residual `interior + flux`, which must vanish within the combined
/// Monte Carlo error.
pub fn weak_liouville_residual(
    name: &str,
    f0: &InitialDatum,
    phi: &TestFunction,
    eps: f64,
    spec: &QuadratureSpec,
    flip: bool,
) -> CheckReport {
    let b = weak_balance(f0, phi, eps, spec, flip);
    let left = b.interior;
    let right = Estimate {
        value: -b.boundary.value,
        std_err: b.boundary.std_err,
        samples: b.boundary.samples,
    };
    let tol = crate::verify::mc_tolerance(&left, &right);
    CheckReport::new(
        format!("weak_liouville/{name}"),
        left,
        right,
        tol,
        CheckNotes {
            seed: spec.seed,
            samples: spec.samples,
            epsilon: eps,
            detail: format!(
                "time {:.3e}+-{:.1e}, space {:.3e}+-{:.1e}, flux {:.3e}+-{:.1e}",
                b.time_term.value,
                b.time_term.std_err,
                b.space_term.value,
                b.space_term.std_err,
                b.boundary.value,
                b.boundary.std_err
            ),
        },
    )
}

fn _type_assert(v: &Vec6) -> f64 {
    v.norm()
}
