//! Initial data and their transport: radial mollifier bumps, product
//! (chaotic) data, densities carried along the pair flow and the two-sheet
//! flow, the reflected companion datum, free transport, and the first
//! marginal.

use nalgebra::SVector;

use crate::domain::{phase_box, Box6, PhaseRegion};
use crate::error::Error;
use crate::flow::{doubled_flow, hard_sphere_flow, Sheet, SheetPoint};
use crate::geometry::{scatter_reflect, split, stack, PhasePoint, Vec3, Vec6};
use crate::quadrature::{mc_integrate_mixture, Estimate, QuadratureSpec};
use crate::Result;

/// Radial mollifier `A exp(-1/(1 - s^2))`, `s = |u - center| / radius`,
/// supported on the open ball of the given radius.
#[derive(Clone, Copy, Debug)]
pub struct RadialBump<const N: usize> {
    pub center: SVector<f64, N>,
    pub radius: f64,
    pub amplitude: f64,
}

impl<const N: usize> RadialBump<N> {
    pub fn new(center: SVector<f64, N>, radius: f64, amplitude: f64) -> Self {
        assert!(radius > 0.0, "bump radius must be positive");
        Self { center, radius, amplitude }
    }

    pub fn eval(&self, u: &SVector<f64, N>) -> f64 {
        let s2 = (u - self.center).norm_squared() / (self.radius * self.radius);
        if s2 < 1.0 {
            self.amplitude * (-1.0 / (1.0 - s2)).exp()
        } else {
            0.0
        }
    }

    /// Closed-form gradient; smooth everywhere, zero at the center and
    /// outside the support.
    pub fn grad(&self, u: &SVector<f64, N>) -> SVector<f64, N> {
        let d = u - self.center;
        let s2 = d.norm_squared() / (self.radius * self.radius);
        if s2 < 1.0 {
            let g = 1.0 - s2;
            let scale = self.amplitude * (-1.0 / g).exp() * (-2.0 / (g * g)) / (self.radius * self.radius);
            d * scale
        } else {
            SVector::zeros()
        }
    }

    pub fn support(&self) -> crate::domain::BoxDomain<N> {
        crate::domain::BoxDomain::from_center_halfwidths(
            self.center,
            SVector::repeat(self.radius),
        )
    }
}

/// A one-particle density: a finite sum of radial bumps on `(q, p)` space.
#[derive(Clone, Debug)]
pub struct OneParticleDatum {
    pub bumps: Vec<RadialBump<6>>,
}

impl OneParticleDatum {
    pub fn single(center: SVector<f64, 6>, radius: f64, amplitude: f64) -> Self {
        Self { bumps: vec![RadialBump::new(center, radius, amplitude)] }
    }

    pub fn eval(&self, q: &Vec3, p: &Vec3) -> f64 {
        let u = stack(q, p);
        self.bumps.iter().map(|b| b.eval(&u)).sum()
    }

    pub fn grad(&self, q: &Vec3, p: &Vec3) -> SVector<f64, 6> {
        let u = stack(q, p);
        self.bumps.iter().map(|b| b.grad(&u)).sum()
    }

    /// Gradient with respect to the position argument only.
    pub fn grad_q(&self, q: &Vec3, p: &Vec3) -> Vec3 {
        self.grad(q, p).fixed_rows::<3>(0).into()
    }

    /// Bounding box of the support in `(q, p)`.
    pub fn support(&self) -> crate::domain::BoxDomain<6> {
        let mut b = self.bumps[0].support();
        for bump in &self.bumps[1..] {
            b = b.hull(&bump.support());
        }
        b
    }

    pub fn position_box(&self) -> crate::domain::BoxDomain<3> {
        let s = self.support();
        crate::domain::BoxDomain::new(s.lo.fixed_rows::<3>(0).into(), s.hi.fixed_rows::<3>(0).into())
    }

    pub fn velocity_box(&self) -> crate::domain::BoxDomain<3> {
        let s = self.support();
        crate::domain::BoxDomain::new(s.lo.fixed_rows::<3>(3).into(), s.hi.fixed_rows::<3>(3).into())
    }

    /// Total mass, by iterated Simpson over each bump's ball (radial form).
    pub fn mass(&self) -> f64 {
        // |S^5| = pi^3; integral of the profile over the 6-ball of radius R.
        let s5 = std::f64::consts::PI.powi(3);
        self.bumps
            .iter()
            .map(|b| {
                let profile = |r: f64| r.powi(5) * (-1.0 / (1.0 - r * r)).exp();
                let radial = crate::quadrature::simpson(
                    |r| if r < 1.0 { profile(r) } else { 0.0 },
                    0.0,
                    1.0,
                    512,
                );
                b.amplitude * b.radius.powi(6) * s5 * radial
            })
            .sum()
    }
}

/// Emitted when a product datum necessarily carries mass on overlapping
/// configurations. Evaluation is only ever performed on admissible states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupportWarning {
    pub min_gap: f64,
}

/// An evaluatable C^1 density on pair phase space with exact (or, for the
/// reflected variant, finite-difference) spatial gradient and a declared
/// support box.
#[derive(Clone, Debug)]
pub enum InitialDatum {
    PhaseBump(RadialBump<12>),
    Chaotic(OneParticleDatum),
    Reflected { inner: Box<InitialDatum>, eps: f64 },
}

impl InitialDatum {
    pub fn eval(&self, x: &Vec6, v: &Vec6) -> f64 {
        match self {
            InitialDatum::PhaseBump(b) => {
                let mut u = SVector::<f64, 12>::zeros();
                u.fixed_rows_mut::<6>(0).copy_from(x);
                u.fixed_rows_mut::<6>(6).copy_from(v);
                b.eval(&u)
            }
            InitialDatum::Chaotic(phi) => {
                let (q, qb) = split(x);
                let (p, pb) = split(v);
                phi.eval(&q, &p) * phi.eval(&qb, &pb)
            }
            InitialDatum::Reflected { inner, eps } => {
                let z = scatter_reflect(&PhasePoint::from_vectors(x, v), *eps);
                inner.eval(&z.positions(), &z.velocities())
            }
        }
    }

    pub fn eval_point(&self, z: &PhasePoint) -> f64 {
        self.eval(&z.positions(), &z.velocities())
    }

    /// Spatial gradient. Exact for bumps and products; central finite
    /// differences for the reflected datum.
    pub fn grad_x(&self, x: &Vec6, v: &Vec6) -> Vec6 {
        match self {
            InitialDatum::PhaseBump(b) => {
                let mut u = SVector::<f64, 12>::zeros();
                u.fixed_rows_mut::<6>(0).copy_from(x);
                u.fixed_rows_mut::<6>(6).copy_from(v);
                b.grad(&u).fixed_rows::<6>(0).into()
            }
            InitialDatum::Chaotic(phi) => {
                let (q, qb) = split(x);
                let (p, pb) = split(v);
                let a = phi.eval(&q, &p);
                let b = phi.eval(&qb, &pb);
                stack(&(phi.grad_q(&q, &p) * b), &(phi.grad_q(&qb, &pb) * a))
            }
            InitialDatum::Reflected { .. } => {
                let mut g = Vec6::zeros();
                for i in 0..6 {
                    let h = 1e-6 * x[i].abs().max(1.0);
                    let mut xp = *x;
                    let mut xm = *x;
                    xp[i] += h;
                    xm[i] -= h;
                    g[i] = (self.eval(&xp, v) - self.eval(&xm, v)) / (2.0 * h);
                }
                g
            }
        }
    }

    /// Bounding box of the support: positions and velocities separately.
    pub fn support(&self) -> (Box6, Box6) {
        match self {
            InitialDatum::PhaseBump(b) => {
                let s = b.support();
                (
                    Box6::new(s.lo.fixed_rows::<6>(0).into(), s.hi.fixed_rows::<6>(0).into()),
                    Box6::new(s.lo.fixed_rows::<6>(6).into(), s.hi.fixed_rows::<6>(6).into()),
                )
            }
            InitialDatum::Chaotic(phi) => {
                let s = phi.support();
                let q: Vec3 = s.lo.fixed_rows::<3>(0).into();
                let qh: Vec3 = s.hi.fixed_rows::<3>(0).into();
                let p: Vec3 = s.lo.fixed_rows::<3>(3).into();
                let ph: Vec3 = s.hi.fixed_rows::<3>(3).into();
                (Box6::new(stack(&q, &q), stack(&qh, &qh)), Box6::new(stack(&p, &p), stack(&ph, &ph)))
            }
            InitialDatum::Reflected { inner, .. } => {
                // The reflection preserves stacked norms; bound by the
                // enclosing centered box of the inner support.
                let (xb, vb) = inner.support();
                let rx = xb.lo.norm().max(xb.hi.norm());
                let rv = vb.lo.norm().max(vb.hi.norm());
                (
                    Box6::from_center_halfwidths(SVector::zeros(), SVector::repeat(rx)),
                    Box6::from_center_halfwidths(SVector::zeros(), SVector::repeat(rv)),
                )
            }
        }
    }

    /// Largest stacked velocity norm on the support.
    pub fn max_pair_speed(&self) -> f64 {
        let (_, vb) = self.support();
        crate::domain::max_pair_speed(&vb)
    }

    /// Whether the declared support avoids every configuration with gap
    /// below `eps`. Product data built from a common one-particle profile
    /// never do: the same-bump pairs reach zero gap.
    pub fn supported_in_table(&self, eps: f64) -> bool {
        match self {
            InitialDatum::Chaotic(phi) => {
                let mut min_gap = f64::INFINITY;
                for a in &phi.bumps {
                    for b in &phi.bumps {
                        let ca: Vec3 = a.center.fixed_rows::<3>(0).into();
                        let cb: Vec3 = b.center.fixed_rows::<3>(0).into();
                        let gap = (ca - cb).norm() - a.radius - b.radius;
                        min_gap = min_gap.min(gap);
                    }
                }
                min_gap >= eps
            }
            InitialDatum::PhaseBump(b) => {
                // Minimum gap over the support ball of the joint bump.
                let x: Vec3 = b.center.fixed_rows::<3>(0).into();
                let xb: Vec3 = b.center.fixed_rows::<3>(3).into();
                (x - xb).norm() - 2.0 * b.radius >= eps
            }
            InitialDatum::Reflected { inner, eps: e } => inner.supported_in_table(*e),
        }
    }
}

/// Product datum `F0(X, V) = phi(x, v) phi(xbar, vbar)`, with a warning when
/// the product necessarily carries mass on overlapping configurations.
pub fn make_chaotic_datum(phi: OneParticleDatum, eps: f64) -> (InitialDatum, Option<SupportWarning>) {
    let datum = InitialDatum::Chaotic(phi);
    let warning = if datum.supported_in_table(eps) {
        None
    } else {
        Some(SupportWarning { min_gap: 0.0 })
    };
    (datum, warning)
}

/// Joint bump datum on pair phase space.
pub fn make_phase_bump(x_center: Vec6, v_center: Vec6, radius: f64, amplitude: f64) -> InitialDatum {
    let mut c = SVector::<f64, 12>::zeros();
    c.fixed_rows_mut::<6>(0).copy_from(&x_center);
    c.fixed_rows_mut::<6>(6).copy_from(&v_center);
    InitialDatum::PhaseBump(RadialBump::new(c, radius, amplitude))
}

/// Companion datum obtained by composing with the extended scattering
/// reflection of both blocks. Applying it twice returns the original values.
pub fn twist_datum(f0: &InitialDatum, eps: f64) -> InitialDatum {
    InitialDatum::Reflected { inner: Box::new(f0.clone()), eps }
}

/// Transported solution: the initial datum evaluated at the state flowed
/// backward for time `t`.
pub fn mild_solution(f0: &InitialDatum, z: &PhasePoint, t: f64, eps: f64) -> Result<f64> {
    let back = hard_sphere_flow(z, -t, eps)?;
    Ok(f0.eval_point(&back))
}

/// Sheet-resolved pair of data carried by the two-sheet flow.
#[derive(Clone, Debug)]
pub struct DoubledDatum {
    pub sheet1: InitialDatum,
    pub sheet2: InitialDatum,
}

/// The canonical doubling: the datum itself on sheet one, its reflected
/// companion on sheet two.
pub fn doubled_from_twist(f0: &InitialDatum, eps: f64) -> DoubledDatum {
    DoubledDatum { sheet1: f0.clone(), sheet2: twist_datum(f0, eps) }
}

/// Transported solution on the doubled configuration set.
pub fn doubled_mild_solution(d: &DoubledDatum, z: &SheetPoint, t: f64, eps: f64) -> Result<f64> {
    let back = doubled_flow(z, -t, eps)?;
    Ok(match back.sheet {
        Sheet::One => d.sheet1.eval_point(&back.base),
        Sheet::Two => d.sheet2.eval_point(&back.base),
    })
}

/// Classical free transport of a one-particle density.
pub fn free_transport(phi: &OneParticleDatum, q: &Vec3, p: &Vec3, t: f64) -> f64 {
    phi.eval(&(q - t * p), p)
}

/// First marginal: integral of the transported pair density over the second
/// sphere's position (outside the exclusion ball of radius `eps` around `x`)
/// and velocity. Monte Carlo with a free-streaming-adapted proposal.
pub fn first_marginal(
    f0: &InitialDatum,
    x: &Vec3,
    v: &Vec3,
    t: f64,
    eps: f64,
    spec: &QuadratureSpec,
) -> Estimate {
    let (x_box, v_box) = f0.support();
    // Marginal support boxes for the second sphere.
    let xbar_box = crate::domain::BoxDomain::<3>::new(
        x_box.lo.fixed_rows::<3>(3).into(),
        x_box.hi.fixed_rows::<3>(3).into(),
    )
    .hull(&crate::domain::BoxDomain::<3>::new(
        x_box.lo.fixed_rows::<3>(0).into(),
        x_box.hi.fixed_rows::<3>(0).into(),
    ));
    let vbar_hull = crate::domain::BoxDomain::<3>::new(
        v_box.lo.fixed_rows::<3>(3).into(),
        v_box.hi.fixed_rows::<3>(3).into(),
    )
    .hull(&crate::domain::BoxDomain::<3>::new(
        v_box.lo.fixed_rows::<3>(0).into(),
        v_box.hi.fixed_rows::<3>(0).into(),
    ));
    let speed = f0.max_pair_speed();
    let reach = speed * t.abs() + eps;
    let vbar_r = crate::domain::max_pair_speed(&v_box);
    let pos = xbar_box.inflated(reach);
    let vel = vbar_hull.inflated(2.0 * vbar_r);

    let mut values = Vec::with_capacity(spec.samples as usize);
    for i in 0..spec.samples {
        let mut rng = crate::quadrature::sample_rng(spec.seed, i);
        let xbar = pos.sample(&mut rng);
        let vbar = vel.sample(&mut rng);
        let value = if (xbar - x).norm() >= eps {
            let z = PhasePoint::new(*x, xbar, *v, vbar);
            mild_solution(f0, &z, t, eps).unwrap_or(0.0)
        } else {
            0.0
        };
        values.push(value);
    }
    let vol = pos.volume() * vel.volume();
    let n = values.len() as f64;
    let sum = crate::quadrature::pairwise_sum(&values);
    let mean = sum / n;
    let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = crate::quadrature::pairwise_sum(&sq) / n;
    Estimate { value: vol * mean, std_err: vol * (var / n).sqrt(), samples: spec.samples }
}

/// Phase-space moment of the transported solution at time `t`:
/// `integral of m(Z) F(Z, t) dZ` with a proposal mixing the freely sheared
/// support box and a scattering cloud box, so that every reachable state is
/// covered.
pub fn transported_moment(
    f0: &InitialDatum,
    m: impl Fn(&PhasePoint) -> f64,
    t: f64,
    eps: f64,
    spec: &QuadratureSpec,
) -> Estimate {
    let (x_box, v_box) = f0.support();
    let base = phase_box(&x_box, &v_box);
    let speed = f0.max_pair_speed();
    let cloud_x = x_box.inflated(speed * t.abs() + eps);
    let cloud_v = crate::domain::scattered_velocity_box(&v_box).inflated(1e-9);
    let cloud = phase_box(&cloud_x, &cloud_v);
    let components = [PhaseRegion::Sheared { base, t }, PhaseRegion::Plain(cloud)];
    mc_integrate_mixture(
        |x, v| {
            let z = PhasePoint::from_vectors(x, v);
            if z.separation() < eps {
                return 0.0;
            }
            match mild_solution(f0, &z, t, eps) {
                Ok(f) if f != 0.0 => f * m(&z),
                _ => 0.0,
            }
        },
        &components,
        spec,
    )
}

/// Exchange-symmetry defect of a datum, probed at the support center and at
/// points shrunk toward it so that the probes actually carry mass.
pub fn symmetry_defect(f0: &InitialDatum, spec: &QuadratureSpec) -> f64 {
    use rand::Rng;
    let (x_box, v_box) = f0.support();
    let xc = x_box.center();
    let vc = v_box.center();
    let probe = |x: &Vec6, v: &Vec6| -> f64 {
        let z = PhasePoint::from_vectors(x, v);
        (f0.eval_point(&z) - f0.eval_point(&z.transposed())).abs()
    };
    let mut worst = probe(&xc, &vc);
    for i in 0..spec.samples.min(2000) {
        let mut rng = crate::quadrature::sample_rng(spec.seed, i);
        let x = x_box.sample(&mut rng);
        let v = v_box.sample(&mut rng);
        let s: f64 = rng.gen();
        let xs = xc + s * (x - xc);
        let vs = vc + s * (v - vc);
        worst = worst.max(probe(&xs, &vs)).max(probe(&x, &v));
    }
    worst
}

/// Require exchange symmetry within `tol`.
pub fn require_symmetric(f0: &InitialDatum, tol: f64, spec: &QuadratureSpec) -> Result<()> {
    let d = symmetry_defect(f0, spec);
    if d > tol {
        Err(Error::AsymmetricDatum(d))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn beam_datum() -> (InitialDatum, OneParticleDatum) {
        let phi = OneParticleDatum {
            bumps: vec![
                RadialBump::new(
                    stack(&Vec3::new(-2.0, 0.0, 0.0), &Vec3::new(1.5, 0.0, 0.0)),
                    0.35,
                    1.0,
                ),
                RadialBump::new(
                    stack(&Vec3::new(2.0, 0.0, 0.0), &Vec3::new(-1.5, 0.0, 0.0)),
                    0.35,
                    1.0,
                ),
            ],
        };
        let (f0, _) = make_chaotic_datum(phi.clone(), 1.0);
        (f0, phi)
    }

    #[test]
    fn bump_center_value_and_support() {
        let b = RadialBump::<6>::new(SVector::zeros(), 2.0, 3.0);
        let zero = SVector::<f64, 6>::zeros();
        assert_relative_eq!(b.eval(&zero), 3.0 * (-1.0f64).exp(), epsilon = 1e-15);
        assert_eq!(b.eval(&SVector::repeat(2.0)), 0.0);
        assert_eq!(b.grad(&zero), zero);
    }

    #[test]
    fn bump_gradient_matches_finite_differences() {
        let b = RadialBump::<6>::new(SVector::repeat(0.3), 1.7, 2.0);
        let u = SVector::<f64, 6>::repeat(0.8);
        let g = b.grad(&u);
        for i in 0..6 {
            let h = 1e-6;
            let mut up = u;
            let mut um = u;
            up[i] += h;
            um[i] -= h;
            let fd = (b.eval(&up) - b.eval(&um)) / (2.0 * h);
            assert!((fd - g[i]).abs() <= 1e-6 * fd.abs().max(1e-9), "coord {i}");
        }
    }

    #[test]
    fn chaotic_datum_is_a_product_and_symmetric() {
        let (f0, phi) = beam_datum();
        let x = stack(&Vec3::new(-1.9, 0.1, 0.0), &Vec3::new(2.1, 0.0, 0.1));
        let v = stack(&Vec3::new(1.4, 0.0, 0.0), &Vec3::new(-1.6, 0.1, 0.0));
        let (q, qb) = split(&x);
        let (p, pb) = split(&v);
        assert_relative_eq!(f0.eval(&x, &v), phi.eval(&q, &p) * phi.eval(&qb, &pb), epsilon = 1e-15);
        let z = PhasePoint::from_vectors(&x, &v);
        assert_relative_eq!(f0.eval_point(&z), f0.eval_point(&z.transposed()), epsilon = 1e-15);
    }

    #[test]
    fn product_of_a_common_profile_is_never_table_supported() {
        let (f0, _) = beam_datum();
        assert!(!f0.supported_in_table(1.0));
        let phi = OneParticleDatum::single(SVector::zeros(), 0.5, 1.0);
        let (_, warning) = make_chaotic_datum(phi, 1.0);
        assert!(warning.is_some());
    }

    #[test]
    fn chaotic_gradient_matches_finite_differences() {
        let (f0, _) = beam_datum();
        let x = stack(&Vec3::new(-2.1, 0.05, -0.1), &Vec3::new(1.9, -0.05, 0.1));
        let v = stack(&Vec3::new(1.45, 0.1, 0.0), &Vec3::new(-1.55, 0.0, 0.1));
        let g = f0.grad_x(&x, &v);
        for i in 0..6 {
            let h = 1e-6;
            let mut xp = x;
            let mut xm = x;
            xp[i] += h;
            xm[i] -= h;
            let fd = (f0.eval(&xp, &v) - f0.eval(&xm, &v)) / (2.0 * h);
            assert!((fd - g[i]).abs() <= 1e-6 * fd.abs().max(1e-9), "coord {i}");
        }
    }

    #[test]
    fn mild_solution_at_time_zero_is_the_datum() {
        let (f0, _) = beam_datum();
        let z = PhasePoint::new(
            Vec3::new(-2.0, 0.0, 0.0),
            Vec3::new(2.0, 0.0, 0.0),
            Vec3::new(1.5, 0.0, 0.0),
            Vec3::new(-1.5, 0.0, 0.0),
        );
        assert_relative_eq!(
            mild_solution(&f0, &z, 0.0, 1.0).unwrap(),
            f0.eval_point(&z),
            epsilon = 1e-15
        );
    }

    #[test]
    fn non_colliding_states_transport_freely() {
        let (f0, _) = beam_datum();
        let z = PhasePoint::new(
            Vec3::new(-1.4, 0.0, 0.0),
            Vec3::new(2.0, 2.0, 0.0),
            Vec3::new(1.5, 0.0, 0.0),
            Vec3::new(1.5, 0.0, 0.0),
        );
        let t = 0.4;
        let free = f0.eval(
            &(z.positions() - t * z.velocities()),
            &z.velocities(),
        );
        assert_relative_eq!(mild_solution(&f0, &z, t, 1.0).unwrap(), free, epsilon = 1e-15);
    }

    #[test]
    fn twist_is_an_involution_on_samples() {
        let (f0, _) = beam_datum();
        let twice = twist_datum(&twist_datum(&f0, 1.0), 1.0);
        let spec = QuadratureSpec::monte_carlo(200, 17);
        let (x_box, v_box) = f0.support();
        for i in 0..spec.samples {
            let mut rng = crate::quadrature::sample_rng(spec.seed, i);
            let x = x_box.sample(&mut rng);
            let v = v_box.sample(&mut rng);
            let z = PhasePoint::from_vectors(&x, &v);
            if z.separation() < 1.0 {
                continue;
            }
            assert!((twice.eval(&x, &v) - f0.eval(&x, &v)).abs() < 1e-9);
        }
    }

    #[test]
    fn twist_fixes_values_off_the_cones() {
        let (f0, _) = beam_datum();
        let g0 = twist_datum(&f0, 1.0);
        let z = PhasePoint::new(
            Vec3::new(-2.0, 0.0, 0.0),
            Vec3::new(2.0, 0.0, 0.0),
            Vec3::new(1.5, 0.0, 0.0),
            Vec3::new(1.5, 0.0, 0.0),
        );
        assert_relative_eq!(g0.eval_point(&z), f0.eval_point(&z), epsilon = 1e-15);
    }

    #[test]
    fn twisted_datum_glues_the_sheets_at_contact() {
        // Sheet-two values at the switched contact state reproduce the datum
        // at the outgoing contact state: the reflection sends the swapped
        // positions back and the incoming velocity forward.
        let z_in = PhasePoint::new(
            Vec3::new(-0.5, 0.0, 0.0),
            Vec3::new(0.5, 0.0, 0.0),
            Vec3::new(1.5, 0.0, 0.0),
            Vec3::new(-1.5, 0.0, 0.0),
        );
        let nu = crate::geometry::extended_contact_normal(&z_in, 1.0).unwrap();
        let v_out = crate::geometry::reflect(&nu, &z_in.velocities());
        let f0 = make_phase_bump(z_in.positions(), v_out, 0.4, 1.0);
        let g0 = twist_datum(&f0, 1.0);
        let switched = PhasePoint::from_vectors(
            &crate::flow::switch(&z_in.positions()),
            &z_in.velocities(),
        );
        assert_relative_eq!(
            g0.eval_point(&switched),
            f0.eval(&z_in.positions(), &v_out),
            epsilon = 1e-12
        );
        assert_relative_eq!(g0.eval_point(&switched), (-1.0f64).exp(), epsilon = 1e-12);
    }

    #[test]
    fn doubled_solution_matches_folded_solution_pointwise() {
        let (f0, _) = beam_datum();
        let doubled = doubled_from_twist(&f0, 1.0);
        let z = PhasePoint::new(
            Vec3::new(-1.7, 0.1, 0.0),
            Vec3::new(1.8, -0.1, 0.0),
            Vec3::new(1.5, 0.0, 0.05),
            Vec3::new(-1.45, 0.05, 0.0),
        );
        for t in [-1.0, 0.0, 0.7, 1.4, 2.5] {
            let lhs = doubled_mild_solution(&doubled, &SheetPoint::on_sheet(z, Sheet::One), t, 1.0).unwrap();
            let rhs = mild_solution(&f0, &z, t, 1.0).unwrap();
            assert!((lhs - rhs).abs() < 1e-12, "t = {t}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn free_transport_translates_the_support() {
        let phi = OneParticleDatum::single(
            stack(&Vec3::new(0.0, 0.0, 0.0), &Vec3::new(1.0, 0.0, 0.0)),
            0.5,
            1.0,
        );
        let q = Vec3::new(2.0, 0.0, 0.0);
        let p = Vec3::new(1.0, 0.0, 0.0);
        assert_relative_eq!(free_transport(&phi, &q, &p, 2.0), phi.eval(&Vec3::zeros(), &p), epsilon = 1e-15);
        assert_eq!(free_transport(&phi, &q, &p, 0.0), phi.eval(&q, &p));
        assert_eq!(free_transport(&phi, &Vec3::new(9.0, 0.0, 0.0), &p, 2.0), 0.0);
    }

    #[test]
    fn symmetry_check_flags_asymmetric_data() {
        let phi = OneParticleDatum::single(
            stack(&Vec3::new(-2.0, 0.0, 0.0), &Vec3::new(1.5, 0.0, 0.0)),
            0.35,
            1.0,
        );
        let asym = InitialDatum::PhaseBump(RadialBump::new(
            {
                let mut c = SVector::<f64, 12>::zeros();
                c[0] = -2.0;
                c[3] = 2.0;
                c[6] = 1.0;
                c[9] = 0.5; // breaks exchange symmetry
                c
            },
            0.5,
            1.0,
        ));
        assert!(require_symmetric(&asym, 1e-9, &QuadratureSpec::monte_carlo(500, 3)).is_err());
        let (sym, _) = make_chaotic_datum(phi, 1.0);
        assert!(require_symmetric(&sym, 1e-9, &QuadratureSpec::monte_carlo(500, 3)).is_ok());
    }
}
