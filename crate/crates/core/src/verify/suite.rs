//! The deterministic identity suite: pointwise transport identities,
//! scattering algebra and conservation, the reflection involution and its
//! Jacobian, collision-time symmetry, fold equivalence of the two flows,
//! flow group properties, measure preservation, and the divergence-theorem
//! orientation check.

use nalgebra::SMatrix;
use rand::Rng;

use crate::domain::{phase_box, Box12, PhaseRegion};
use crate::flow::{doubled_flow, fold, hard_sphere_flow, Sheet, SheetPoint};
use crate::geometry::{
    collision_time, domain_outward_normal, scatter_reflect, scattering_matrix,
    scattering_matrix_extended, stack, ConeClass, Mat6, PhasePoint, Vec3, Vec6,
};
use crate::quadrature::{
    boundary_integrate, mc_integrate, mc_integrate_mixture, sample_rng, BoundaryDomain, Estimate,
    QuadratureSpec, TestFunction,
};
use crate::verify::sampling::{random_in_cone, random_in_cone_guarded, random_mixed, random_non_colliding};
use crate::verify::{mc_tolerance, CheckNotes, CheckReport};

/// Sample counts, seed, and sphere radius for one run of the suite.
#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub epsilon: f64,
    pub seed: u64,
    pub n_transport: u64,
    pub n_scatter: u64,
    pub n_jacobian: u64,
    pub n_fold: u64,
    pub n_group: u64,
    pub n_measure: u64,
    pub n_divergence: u64,
    /// Debug switch: negate the contact orientation so the divergence check
    /// must fail.
    pub flip_orientation: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            epsilon: 1.0,
            seed: 42,
            n_transport: 1_000,
            n_scatter: 10_000,
            n_jacobian: 10_000,
            n_fold: 10_000,
            n_group: 1_000,
            n_measure: 1_000_000,
            n_divergence: 200_000,
            flip_orientation: false,
        }
    }
}

impl SuiteConfig {
    fn notes(&self, samples: u64, detail: &str) -> CheckNotes {
        CheckNotes {
            seed: self.seed,
            samples,
            epsilon: self.epsilon,
            detail: detail.to_string(),
        }
    }

    fn rng_for(&self, check: u64, i: u64) -> rand_chacha::ChaCha8Rng {
        sample_rng(self.seed ^ (0xc001_0000 + check), i)
    }
}

fn fd_step(scale: f64) -> f64 {
    1e-5 * scale.max(1.0)
}

/// Directional finite difference of the collision time along the velocity:
/// the exact identity value is -1.
fn transport_time_check(cfg: &SuiteConfig) -> CheckReport {
    let mut worst = 0.0f64;
    for i in 0..cfg.n_transport {
        let mut rng = cfg.rng_for(1, i);
        let class = if i % 2 == 0 { ConeClass::PreCollisional } else { ConeClass::PostCollisional };
        let z = random_in_cone_guarded(&mut rng, cfg.epsilon, class);
        let h = fd_step(z.positions().amax()) / z.velocities().norm().max(1.0);
        let zp = PhasePoint::from_vectors(&(z.positions() + h * z.velocities()), &z.velocities());
        let zm = PhasePoint::from_vectors(&(z.positions() - h * z.velocities()), &z.velocities());
        let tp = collision_time(&zp, cfg.epsilon).unwrap();
        let tm = collision_time(&zm, cfg.epsilon).unwrap();
        let fd = (tp - tm) / (2.0 * h);
        worst = worst.max((fd + 1.0).abs());
    }
    CheckReport::deviation(
        "transport_identity_time",
        worst,
        1e-6,
        cfg.notes(cfg.n_transport, "d/ds tau(X + sV, V) = -1, central differences"),
    )
}

/// The extended scattering matrix is constant along the velocity direction.
fn transport_scatter_check(cfg: &SuiteConfig) -> CheckReport {
    let mut worst = 0.0f64;
    for i in 0..cfg.n_transport {
        let mut rng = cfg.rng_for(2, i);
        let z = match i % 3 {
            0 => random_in_cone_guarded(&mut rng, cfg.epsilon, ConeClass::PreCollisional),
            1 => random_in_cone_guarded(&mut rng, cfg.epsilon, ConeClass::PostCollisional),
            _ => random_non_colliding(&mut rng, cfg.epsilon),
        };
        let h = fd_step(z.positions().amax()) / z.velocities().norm().max(1.0);
        let zp = PhasePoint::from_vectors(&(z.positions() + h * z.velocities()), &z.velocities());
        let zm = PhasePoint::from_vectors(&(z.positions() - h * z.velocities()), &z.velocities());
        let sp = scattering_matrix_extended(&zp, cfg.epsilon);
        let sm = scattering_matrix_extended(&zm, cfg.epsilon);
        let fd = (sp - sm) / (2.0 * h);
        worst = worst.max(fd.amax());
    }
    CheckReport::deviation(
        "transport_identity_scatter",
        worst,
        1e-6,
        cfg.notes(cfg.n_transport, "entrywise d/ds of the scattering matrix along V"),
    )
}

/// Symmetry, involutivity and determinant of the scattering matrices.
fn scatter_algebra_check(cfg: &SuiteConfig) -> CheckReport {
    let mut worst = 0.0f64;
    for i in 0..cfg.n_scatter {
        let mut rng = cfg.rng_for(3, i);
        let class = if i % 2 == 0 { ConeClass::PreCollisional } else { ConeClass::PostCollisional };
        let z = random_in_cone(&mut rng, cfg.epsilon, class, 0.01);
        let s = scattering_matrix(&z, cfg.epsilon).unwrap();
        worst = worst.max((s - s.transpose()).amax());
        worst = worst.max((s * s - Mat6::identity()).amax());
        worst = worst.max((s.determinant() + 1.0).abs());
    }
    CheckReport::deviation(
        "scatter_matrix_algebra",
        worst,
        1e-12,
        cfg.notes(cfg.n_scatter, "sigma = sigma^T, sigma^2 = I, det sigma = -1"),
    )
}

/// Momentum, angular momentum (about a random point) and kinetic energy of
/// the scattered velocity match the incoming one.
fn scatter_conservation_check(cfg: &SuiteConfig) -> CheckReport {
    let mut worst = 0.0f64;
    for i in 0..cfg.n_scatter {
        let mut rng = cfg.rng_for(4, i);
        let class = if i % 2 == 0 { ConeClass::PreCollisional } else { ConeClass::PostCollisional };
        let z = random_in_cone(&mut rng, cfg.epsilon, class, 0.01);
        let s = scattering_matrix(&z, cfg.epsilon).unwrap();
        let sv = s * z.velocities();
        let zs = PhasePoint::from_vectors(&z.positions(), &sv);
        let scale = 1.0
            + z.velocities().norm_squared()
            + z.positions().norm() * z.velocities().norm();

        let dp = (zs.v + zs.vbar - z.v - z.vbar).amax();
        let a = Vec3::new(
            2.0 * rng.gen::<f64>() - 1.0,
            2.0 * rng.gen::<f64>() - 1.0,
            2.0 * rng.gen::<f64>() - 1.0,
        );
        let dl = (crate::flow::angular_momentum_about(&zs, &a)
            - crate::flow::angular_momentum_about(&z, &a))
        .amax();
        let de = (0.5 * sv.norm_squared() - 0.5 * z.velocities().norm_squared()).abs();
        worst = worst.max(dp / scale).max(dl / scale).max(de / scale);
    }
    CheckReport::deviation(
        "scatter_conservation",
        worst,
        1e-12,
        cfg.notes(cfg.n_scatter, "momentum, angular momentum, kinetic energy of sigma V"),
    )
}

/// The two-block reflection applied twice returns the state.
fn involution_check(cfg: &SuiteConfig) -> CheckReport {
    let mut worst = 0.0f64;
    for i in 0..cfg.n_scatter {
        let mut rng = cfg.rng_for(5, i);
        let z = random_mixed(&mut rng, cfg.epsilon);
        let zz = scatter_reflect(&scatter_reflect(&z, cfg.epsilon), cfg.epsilon);
        worst = worst.max((zz.positions() - z.positions()).amax());
        worst = worst.max((zz.velocities() - z.velocities()).amax());
    }
    CheckReport::deviation(
        "scatter_involution",
        worst,
        1e-9,
        cfg.notes(cfg.n_scatter, "reflection of both blocks applied twice"),
    )
}

/// The reflected state reaches contact at the same signed time.
fn collision_time_symmetry_check(cfg: &SuiteConfig) -> CheckReport {
    let mut worst = 0.0f64;
    for i in 0..cfg.n_scatter {
        let mut rng = cfg.rng_for(6, i);
        let class = if i % 2 == 0 { ConeClass::PreCollisional } else { ConeClass::PostCollisional };
        let z = random_in_cone(&mut rng, cfg.epsilon, class, 0.01);
        let zr = scatter_reflect(&z, cfg.epsilon);
        let t0 = collision_time(&z, cfg.epsilon).unwrap();
        let t1 = collision_time(&zr, cfg.epsilon).unwrap();
        worst = worst.max((t1 - t0).abs() / t0.abs().max(1.0));
    }
    CheckReport::deviation(
        "collision_time_symmetry",
        worst,
        1e-9,
        cfg.notes(cfg.n_scatter, "tau of the reflected state equals tau"),
    )
}

/// Finite-difference Jacobian determinant of the two-block reflection.
fn jacobian_check(cfg: &SuiteConfig) -> CheckReport {
    let mut worst = 0.0f64;
    for i in 0..cfg.n_jacobian {
        let mut rng = cfg.rng_for(7, i);
        let z = match i % 3 {
            0 => random_in_cone_guarded(&mut rng, cfg.epsilon, ConeClass::PreCollisional),
            1 => random_in_cone_guarded(&mut rng, cfg.epsilon, ConeClass::PostCollisional),
            _ => random_non_colliding(&mut rng, cfg.epsilon),
        };
        let mut state = [0.0f64; 12];
        state[..6].copy_from_slice(z.positions().as_slice());
        state[6..].copy_from_slice(z.velocities().as_slice());
        let eval = |s: &[f64; 12]| -> [f64; 12] {
            let x = Vec6::from_column_slice(&s[..6]);
            let v = Vec6::from_column_slice(&s[6..]);
            let r = scatter_reflect(&PhasePoint::from_vectors(&x, &v), cfg.epsilon);
            let mut out = [0.0f64; 12];
            out[..6].copy_from_slice(r.positions().as_slice());
            out[6..].copy_from_slice(r.velocities().as_slice());
            out
        };
        let mut jac = SMatrix::<f64, 12, 12>::zeros();
        for j in 0..12 {
            let h = fd_step(state[j].abs());
            let mut sp = state;
            let mut sm = state;
            sp[j] += h;
            sm[j] -= h;
            let fp = eval(&sp);
            let fm = eval(&sm);
            for r in 0..12 {
                jac[(r, j)] = (fp[r] - fm[r]) / (2.0 * h);
            }
        }
        worst = worst.max((jac.determinant().abs() - 1.0).abs());
    }
    CheckReport::deviation(
        "scatter_jacobian",
        worst,
        1e-6,
        cfg.notes(cfg.n_jacobian, "|det| of the 12x12 finite-difference Jacobian"),
    )
}

/// Folded two-sheet evolution against the direct evolution, from both sheet
/// inclusions, across all cone classes.
fn fold_equivalence_check(cfg: &SuiteConfig) -> CheckReport {
    let mut worst = 0.0f64;
    for i in 0..cfg.n_fold {
        let mut rng = cfg.rng_for(8, i);
        let z = random_mixed(&mut rng, cfg.epsilon);
        let t = -10.0 + 20.0 * rng.gen::<f64>();

        let direct = hard_sphere_flow(&z, t, cfg.epsilon).unwrap();
        let folded = fold(
            &doubled_flow(&SheetPoint::on_sheet(z, Sheet::One), t, cfg.epsilon).unwrap(),
            cfg.epsilon,
        );
        worst = worst.max((folded.positions() - direct.positions()).amax());
        worst = worst.max((folded.velocities() - direct.velocities()).amax());

        // The sheet-two inclusion tracks the reflected base point.
        let zr = scatter_reflect(&z, cfg.epsilon);
        let direct2 = hard_sphere_flow(&zr, t, cfg.epsilon).unwrap();
        let folded2 = fold(
            &doubled_flow(&SheetPoint::on_sheet(z, Sheet::Two), t, cfg.epsilon).unwrap(),
            cfg.epsilon,
        );
        worst = worst.max((folded2.positions() - direct2.positions()).amax());
        worst = worst.max((folded2.velocities() - direct2.velocities()).amax());
    }
    CheckReport::deviation(
        "fold_equivalence",
        worst,
        1e-9,
        cfg.notes(cfg.n_fold, "fold of the two-sheet flow against the direct flow, both sheets"),
    )
}

/// Group property of both flows and velocity invariance of the doubled one.
fn group_property_check(cfg: &SuiteConfig) -> CheckReport {
    let mut worst = 0.0f64;
    for i in 0..cfg.n_group {
        let mut rng = cfg.rng_for(9, i);
        let z = random_mixed(&mut rng, cfg.epsilon);
        let s = -5.0 + 10.0 * rng.gen::<f64>();
        let t = -5.0 + 10.0 * rng.gen::<f64>();

        let step = hard_sphere_flow(&hard_sphere_flow(&z, s, cfg.epsilon).unwrap(), t, cfg.epsilon).unwrap();
        let joint = hard_sphere_flow(&z, s + t, cfg.epsilon).unwrap();
        worst = worst.max((step.positions() - joint.positions()).amax());
        worst = worst.max((step.velocities() - joint.velocities()).amax());

        let zeta = SheetPoint::on_sheet(z, if i % 2 == 0 { Sheet::One } else { Sheet::Two });
        let dstep = doubled_flow(&doubled_flow(&zeta, s, cfg.epsilon).unwrap(), t, cfg.epsilon).unwrap();
        let djoint = doubled_flow(&zeta, s + t, cfg.epsilon).unwrap();
        worst = worst.max((dstep.base.positions() - djoint.base.positions()).amax());
        worst = worst.max((dstep.base.velocities() - djoint.base.velocities()).amax());
        if dstep.sheet != djoint.sheet {
            worst = worst.max(1.0);
        }
        // The doubled flow never changes the velocity.
        worst = worst.max((djoint.base.velocities() - z.velocities()).amax());
    }
    CheckReport::deviation(
        "flow_group_property",
        worst,
        1e-9,
        cfg.notes(cfg.n_group, "composition of flows; doubled velocity invariance"),
    )
}

/// Volume of the evolved box against the volume of the box, by mixture
/// importance Monte Carlo over the image.
fn measure_preservation_check(cfg: &SuiteConfig) -> CheckReport {
    let eps = cfg.epsilon;
    let a_x = crate::domain::Box6::from_center_halfwidths(
        stack(&Vec3::new(-2.0 * eps, 0.0, 0.0), &Vec3::new(2.0 * eps, 0.0, 0.0)),
        Vec6::repeat(0.2 * eps),
    );
    let a_v = crate::domain::Box6::from_center_halfwidths(
        stack(&Vec3::new(1.0, 0.0, 0.0), &Vec3::new(-1.0, 0.0, 0.0)),
        Vec6::repeat(0.2),
    );
    let a = phase_box(&a_x, &a_v);
    let t = 2.5 * eps;
    let speed = crate::domain::max_pair_speed(&a_v);
    let cloud = phase_box(
        &a_x.inflated(t * speed + eps),
        &crate::domain::scattered_velocity_box(&a_v).inflated(1e-9),
    );
    let components = [PhaseRegion::Sheared { base: a, t }, PhaseRegion::Plain(cloud)];
    let spec = QuadratureSpec::monte_carlo(cfg.n_measure, cfg.seed ^ 0xbeef);
    let indicator = |x: &Vec6, v: &Vec6| -> f64 {
        let z = PhasePoint::from_vectors(x, v);
        if z.separation() < eps {
            return 0.0;
        }
        match hard_sphere_flow(&z, -t, eps) {
            Ok(back) if contains_pair(&a, &back) => 1.0,
            _ => 0.0,
        }
    };
    let est = mc_integrate_mixture(indicator, &components, &spec);
    let exact = Estimate::exact(a.volume());
    let tol = mc_tolerance(&est, &exact);
    CheckReport::new(
        "measure_preservation",
        est,
        exact,
        tol,
        cfg.notes(cfg.n_measure, "volume of the evolved box equals the box volume"),
    )
}

fn contains_pair(b: &Box12, z: &PhasePoint) -> bool {
    let x = z.positions();
    let v = z.velocities();
    for i in 0..6 {
        if x[i] < b.lo[i] || x[i] > b.hi[i] {
            return false;
        }
        if v[i] < b.lo[6 + i] || v[i] > b.hi[6 + i] {
            return false;
        }
    }
    true
}

/// Interior divergence of `g V` against the contact flux of `g`: pins the
/// orientation of the contact normal.
pub fn divergence_orientation_check(cfg: &SuiteConfig) -> CheckReport {
    let eps = cfg.epsilon;
    let g = TestFunction::new(
        stack(&Vec3::new(-0.5 * eps, 0.0, 0.0), &Vec3::new(0.5 * eps, 0.0, 0.0)),
        stack(&Vec3::new(1.0, 0.0, 0.0), &Vec3::new(-1.0, 0.0, 0.0)),
        0.0,
        Vec6::repeat(0.8 * eps),
        Vec6::repeat(0.9),
        0.4,
    );
    let spec = QuadratureSpec::monte_carlo(cfg.n_divergence, cfg.seed ^ 0xd17);

    let x_box = g.x_box();
    let v_box = g.v_box();
    let (t0, t1) = g.t_window();
    let mut lo = nalgebra::SVector::<f64, 13>::zeros();
    let mut hi = nalgebra::SVector::<f64, 13>::zeros();
    for i in 0..6 {
        lo[i] = x_box.lo[i];
        hi[i] = x_box.hi[i];
        lo[6 + i] = v_box.lo[i];
        hi[6 + i] = v_box.hi[i];
    }
    lo[12] = t0;
    hi[12] = t1;
    let dom13 = crate::domain::BoxDomain::<13>::new(lo, hi);

    let interior = mc_integrate(
        |p: &nalgebra::SVector<f64, 13>| {
            let x: Vec6 = p.fixed_rows::<6>(0).into();
            let v: Vec6 = p.fixed_rows::<6>(6).into();
            let t = p[12];
            let z = PhasePoint::from_vectors(&x, &v);
            if z.separation() < eps {
                return 0.0;
            }
            v.dot(&g.grad_x(&x, &v, t))
        },
        &dom13,
        &spec,
    );

    let y_box = crate::domain::Box3 {
        lo: x_box.lo.fixed_rows::<3>(0).into(),
        hi: x_box.hi.fixed_rows::<3>(0).into(),
    };
    let bdom = BoundaryDomain { y_box, v_box, t_window: (t0, t1) };
    let flip = if cfg.flip_orientation { -1.0 } else { 1.0 };
    let boundary = boundary_integrate(
        |y, n, v, t| {
            let positions = stack(y, &(y + eps * n));
            let nu = domain_outward_normal(n) * flip;
            g.eval(&positions, v, t) * v.dot(&nu)
        },
        &bdom,
        eps,
        &spec.derived(3),
    );

    let tol = mc_tolerance(&interior, &boundary);
    CheckReport::new(
        "divergence_orientation",
        interior,
        boundary,
        tol,
        cfg.notes(cfg.n_divergence, "interior div(gV) equals outward contact flux of g"),
    )
}

/// Run every identity check.
pub fn identity_suite(cfg: &SuiteConfig) -> Vec<CheckReport> {
    vec![
        transport_time_check(cfg),
        transport_scatter_check(cfg),
        scatter_algebra_check(cfg),
        scatter_conservation_check(cfg),
        involution_check(cfg),
        collision_time_symmetry_check(cfg),
        jacobian_check(cfg),
        fold_equivalence_check(cfg),
        group_property_check(cfg),
        measure_preservation_check(cfg),
        divergence_orientation_check(cfg),
    ]
}
