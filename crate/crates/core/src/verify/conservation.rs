//! Mass, momentum, angular momentum and kinetic energy of the transported
//! density at several times against the initial datum's values.

use crate::distribution::{transported_moment, InitialDatum};
use crate::flow::conserved_quantities;
use crate::quadrature::QuadratureSpec;
use crate::verify::{mc_tolerance, CheckNotes, CheckReport};

/// The scalar moments checked, one report per time per quantity component.
fn moments() -> Vec<(&'static str, Box<dyn Fn(&crate::geometry::PhasePoint) -> f64>)> {
    let mut out: Vec<(&'static str, Box<dyn Fn(&crate::geometry::PhasePoint) -> f64>)> = Vec::new();
    out.push(("mass", Box::new(|_| 1.0)));
    for (k, name) in ["momentum_x", "momentum_y", "momentum_z"].iter().enumerate() {
        out.push((name, Box::new(move |z| conserved_quantities(z).momentum[k])));
    }
    for (k, name) in ["angular_x", "angular_y", "angular_z"].iter().enumerate() {
        out.push((name, Box::new(move |z| conserved_quantities(z).angular_momentum[k])));
    }
    out.push(("energy", Box::new(|z| conserved_quantities(z).kinetic_energy)));
    out
}

/// Compare moments of the transported density at each requested time with
/// the datum's moments, each side by its own independent Monte Carlo.
pub fn conservation_checks(
    f0: &InitialDatum,
    times: &[f64],
    eps: f64,
    spec: &QuadratureSpec,
) -> Vec<CheckReport> {
    let mut reports = Vec::new();
    let mut tag = 0u64;
    for (name, m) in moments() {
        tag += 1;
        let reference = transported_moment(f0, &*m, 0.0, eps, &spec.derived(1000 + tag));
        for (ti, &t) in times.iter().enumerate() {
            let est = transported_moment(f0, &*m, t, eps, &spec.derived(tag * 100 + ti as u64));
            let tol = mc_tolerance(&est, &reference);
            reports.push(CheckReport::new(
                format!("conservation/{name}/t={t}"),
                est,
                reference,
                tol,
                CheckNotes {
                    seed: spec.seed,
                    samples: spec.samples,
                    epsilon: eps,
                    detail: format!("moment {name} at t={t} vs t=0"),
                },
            ));
        }
    }
    reports
}
