//! Deterministic seeded Monte Carlo over phase boxes and over the contact
//! set, plus smooth compactly supported test functions with exact
//! derivatives.
//!
//! Every estimate is reproducible bit-for-bit: each sample draws from its own
//! counter-derived generator, and reductions use a fixed-order pairwise sum,
//! so results do not depend on evaluation order or worker count.

use nalgebra::SVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{BoxDomain, Box3, Box6, PhaseRegion};
use crate::geometry::{Vec3, Vec6};

/// Quadrature method selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    MonteCarlo,
    TensorGrid,
}

/// Reproducible sampling plan: same spec, bit-identical estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub samples: u64,
    pub seed: u64,
    pub method: Method,
}

impl QuadratureSpec {
    pub fn monte_carlo(samples: u64, seed: u64) -> Self {
        Self { samples, seed, method: Method::MonteCarlo }
    }

    /// Derive an independent stream for a sub-computation.
    pub fn derived(&self, tag: u64) -> Self {
        let mut s = self.seed ^ 0x9e37_79b9_7f4a_7c15u64.wrapping_mul(tag.wrapping_add(1));
        s = splitmix64(&mut s);
        Self { samples: self.samples, seed: s, method: self.method }
    }

    pub fn with_samples(&self, samples: u64) -> Self {
        Self { samples, ..*self }
    }
}

/// Monte Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_err: f64,
    pub samples: u64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self { value, std_err: 0.0, samples: 0 }
    }

    /// Pool two independent estimates of the same integral.
    pub fn merge(&self, other: &Estimate) -> Estimate {
        let n1 = self.samples as f64;
        let n2 = other.samples as f64;
        let n = n1 + n2;
        if n == 0.0 {
            return Estimate::exact(0.5 * (self.value + other.value));
        }
        let value = (n1 * self.value + n2 * other.value) / n;
        // Variances of the means combine with their squared weights.
        let var = (n1 / n).powi(2) * self.std_err.powi(2) + (n2 / n).powi(2) * other.std_err.powi(2);
        Estimate { value, std_err: var.sqrt(), samples: self.samples + other.samples }
    }

    /// Difference of two independent estimates.
    pub fn minus(&self, other: &Estimate) -> Estimate {
        Estimate {
            value: self.value - other.value,
            std_err: (self.std_err.powi(2) + other.std_err.powi(2)).sqrt(),
            samples: self.samples.max(other.samples),
        }
    }
}

pub(crate) fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-sample generator derived from `(seed, index)`; independent of the
/// order in which samples are evaluated.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut state = seed ^ index.wrapping_mul(0xd6e8_feb8_6659_fd93);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Fixed-order pairwise sum; associativity pattern depends only on length.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 32 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

fn reduce(values: &[f64], volume: f64) -> Estimate {
    let n = values.len() as f64;
    let sum = pairwise_sum(values);
    let mean = sum / n;
    let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = pairwise_sum(&sq) / n;
    Estimate {
        value: volume * mean,
        std_err: volume * (var / n).sqrt(),
        samples: values.len() as u64,
    }
}

/// Monte Carlo integral of `f` over an axis-aligned box.
pub fn mc_integrate<const N: usize>(
    f: impl Fn(&SVector<f64, N>) -> f64,
    domain: &BoxDomain<N>,
    spec: &QuadratureSpec,
) -> Estimate {
    let vol = domain.volume();
    let values: Vec<f64> = (0..spec.samples)
        .map(|i| {
            let mut rng = sample_rng(spec.seed, i);
            f(&domain.sample(&mut rng))
        })
        .collect();
    reduce(&values, vol)
}

/// Monte Carlo integral of `f(X, V)` over phase space against a mixture of
/// uniform box proposals. Unbiased whenever the union of the components
/// covers the support of `f`.
pub fn mc_integrate_mixture(
    f: impl Fn(&Vec6, &Vec6) -> f64,
    components: &[PhaseRegion],
    spec: &QuadratureSpec,
) -> Estimate {
    assert!(!components.is_empty());
    let k = components.len();
    let values: Vec<f64> = (0..spec.samples)
        .map(|i| {
            let mut rng = sample_rng(spec.seed, i);
            let pick = (rng.gen::<f64>() * k as f64) as usize;
            let (x, v) = components[pick.min(k - 1)].sample(&mut rng);
            let density: f64 = components
                .iter()
                .map(|c| if c.contains(&x, &v) { 1.0 / c.volume() } else { 0.0 })
                .sum::<f64>()
                / k as f64;
            if density > 0.0 {
                f(&x, &v) / density
            } else {
                0.0
            }
        })
        .collect();
    reduce(&values, 1.0)
}

/// Uniform point on the unit sphere from two uniforms.
pub fn unit_sphere_sample<R: Rng>(rng: &mut R) -> Vec3 {
    let z: f64 = 2.0 * rng.gen::<f64>() - 1.0;
    let phi = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
    let r = (1.0 - z * z).max(0.0).sqrt();
    Vec3::new(r * phi.cos(), r * phi.sin(), z)
}

/// Sampling domain for an integral over the contact set: the first sphere's
/// position ranges over `y_box`, the contact direction over the unit sphere,
/// velocities over `v_box`, time over `t_window`.
#[derive(Clone, Copy, Debug)]
pub struct BoundaryDomain {
    pub y_box: Box3,
    pub v_box: Box6,
    pub t_window: (f64, f64),
}

/// Gram factor of the contact-set parameterization `(y, n) -> [y, y + eps n]`.
pub fn contact_measure_scale(eps: f64) -> f64 {
    std::f64::consts::SQRT_2 * eps * eps
}

/// Monte Carlo integral over the contact set parameterized by
/// `(y, n, V, t)`, with surface measure `sqrt(2) eps^2 dy dOmega(n)` and
/// Lebesgue measure in `V` and `t`.
pub fn boundary_integrate(
    f: impl Fn(&Vec3, &Vec3, &Vec6, f64) -> f64,
    domain: &BoundaryDomain,
    eps: f64,
    spec: &QuadratureSpec,
) -> Estimate {
    let (t0, t1) = domain.t_window;
    let vol = domain.y_box.volume()
        * (4.0 * std::f64::consts::PI)
        * domain.v_box.volume()
        * (t1 - t0)
        * contact_measure_scale(eps);
    let values: Vec<f64> = (0..spec.samples)
        .map(|i| {
            let mut rng = sample_rng(spec.seed, i);
            let y = domain.y_box.sample(&mut rng);
            let n = unit_sphere_sample(&mut rng);
            let v = domain.v_box.sample(&mut rng);
            let t = t0 + rng.gen::<f64>() * (t1 - t0);
            f(&y, &n, &v, t)
        })
        .collect();
    reduce(&values, vol)
}

/// Composite Simpson rule on `[a, b]` with `panels` even subintervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    debug_assert!(panels >= 2 && panels % 2 == 0);
    if b <= a {
        return 0.0;
    }
    let h = (b - a) / panels as f64;
    let mut acc = f(a) + f(b);
    for k in 1..panels {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

/// Tensor-grid (iterated Simpson) integral over a low-dimensional box.
pub fn tensor_grid_integrate<const N: usize>(
    f: impl Fn(&SVector<f64, N>) -> f64 + Copy,
    domain: &BoxDomain<N>,
    points_per_dim: usize,
) -> f64 {
    fn recurse<const N: usize>(
        f: &impl Fn(&SVector<f64, N>) -> f64,
        domain: &BoxDomain<N>,
        p: &mut SVector<f64, N>,
        dim: usize,
        panels: usize,
    ) -> f64 {
        let a = domain.lo[dim];
        let b = domain.hi[dim];
        let h = (b - a) / panels as f64;
        let mut acc = 0.0;
        for k in 0..=panels {
            let w = if k == 0 || k == panels {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            p[dim] = a + k as f64 * h;
            let inner = if dim + 1 == N {
                f(p)
            } else {
                recurse(f, domain, p, dim + 1, panels)
            };
            acc += w * inner;
        }
        acc * h / 3.0
    }
    let panels = if points_per_dim % 2 == 0 { points_per_dim } else { points_per_dim + 1 };
    let mut p = domain.lo;
    recurse(&f, domain, &mut p, 0, panels.max(2))
}

// ---------------------------------------------------------------------------
// Smooth compactly supported test functions.
// ---------------------------------------------------------------------------

/// One-dimensional mollifier factor `exp(-1/(1 - s^2))` on `|s| < 1`.
fn bump1(s: f64) -> f64 {
    if s.abs() < 1.0 {
        (-1.0 / (1.0 - s * s)).exp()
    } else {
        0.0
    }
}

/// Derivative of [`bump1`] with respect to `s`.
fn bump1_ds(s: f64) -> f64 {
    if s.abs() < 1.0 {
        let d = 1.0 - s * s;
        bump1(s) * (-2.0 * s / (d * d))
    } else {
        0.0
    }
}

/// Product of one-dimensional mollifiers, one per coordinate.
#[derive(Clone, Copy, Debug)]
pub struct SeparableBump<const N: usize> {
    pub centers: SVector<f64, N>,
    pub half_widths: SVector<f64, N>,
}

impl<const N: usize> SeparableBump<N> {
    pub fn new(centers: SVector<f64, N>, half_widths: SVector<f64, N>) -> Self {
        assert!(half_widths.iter().all(|h| *h > 0.0), "half widths must be positive");
        Self { centers, half_widths }
    }

    pub fn support(&self) -> BoxDomain<N> {
        BoxDomain::from_center_halfwidths(self.centers, self.half_widths)
    }

    pub fn eval(&self, u: &SVector<f64, N>) -> f64 {
        let mut prod = 1.0;
        for i in 0..N {
            let s = (u[i] - self.centers[i]) / self.half_widths[i];
            let b = bump1(s);
            if b == 0.0 {
                return 0.0;
            }
            prod *= b;
        }
        prod
    }

    /// Partial derivative along coordinate `i`.
    pub fn partial(&self, u: &SVector<f64, N>, i: usize) -> f64 {
        let mut prod = 1.0;
        for j in 0..N {
            let s = (u[j] - self.centers[j]) / self.half_widths[j];
            let f = if j == i { bump1_ds(s) / self.half_widths[j] } else { bump1(s) };
            if f == 0.0 && j != i {
                return 0.0;
            }
            prod *= f;
        }
        prod
    }
}

/// Smooth compactly supported test function on pair phase space and time,
/// with exact time derivative and spatial gradient.
#[derive(Clone, Copy, Debug)]
pub struct TestFunction {
    bump: SeparableBump<13>,
}

impl TestFunction {
    /// Product of mollifiers in the twelve phase coordinates and time.
    pub fn new(x_center: Vec6, v_center: Vec6, t_center: f64, x_hw: Vec6, v_hw: Vec6, t_hw: f64) -> Self {
        let mut c = SVector::<f64, 13>::zeros();
        let mut h = SVector::<f64, 13>::zeros();
        for i in 0..6 {
            c[i] = x_center[i];
            h[i] = x_hw[i];
            c[6 + i] = v_center[i];
            h[6 + i] = v_hw[i];
        }
        c[12] = t_center;
        h[12] = t_hw;
        Self { bump: SeparableBump::new(c, h) }
    }

    fn pack(x: &Vec6, v: &Vec6, t: f64) -> SVector<f64, 13> {
        let mut u = SVector::<f64, 13>::zeros();
        u.fixed_rows_mut::<6>(0).copy_from(x);
        u.fixed_rows_mut::<6>(6).copy_from(v);
        u[12] = t;
        u
    }

    pub fn eval(&self, x: &Vec6, v: &Vec6, t: f64) -> f64 {
        self.bump.eval(&Self::pack(x, v, t))
    }

    pub fn dt(&self, x: &Vec6, v: &Vec6, t: f64) -> f64 {
        self.bump.partial(&Self::pack(x, v, t), 12)
    }

    pub fn grad_x(&self, x: &Vec6, v: &Vec6, t: f64) -> Vec6 {
        let u = Self::pack(x, v, t);
        Vec6::from_fn(|i, _| self.bump.partial(&u, i))
    }

    pub fn x_box(&self) -> Box6 {
        BoxDomain::from_center_halfwidths(
            self.bump.centers.fixed_rows::<6>(0).into(),
            self.bump.half_widths.fixed_rows::<6>(0).into(),
        )
    }

    pub fn v_box(&self) -> Box6 {
        BoxDomain::from_center_halfwidths(
            self.bump.centers.fixed_rows::<6>(6).into(),
            self.bump.half_widths.fixed_rows::<6>(6).into(),
        )
    }

    pub fn t_window(&self) -> (f64, f64) {
        (self.bump.centers[12] - self.bump.half_widths[12], self.bump.centers[12] + self.bump.half_widths[12])
    }
}

/// Smooth compactly supported test function on one-particle phase space and
/// time.
#[derive(Clone, Copy, Debug)]
pub struct OneParticleTestFunction {
    bump: SeparableBump<7>,
}

impl OneParticleTestFunction {
    pub fn new(x_center: Vec3, v_center: Vec3, t_center: f64, x_hw: Vec3, v_hw: Vec3, t_hw: f64) -> Self {
        let mut c = SVector::<f64, 7>::zeros();
        let mut h = SVector::<f64, 7>::zeros();
        for i in 0..3 {
            c[i] = x_center[i];
            h[i] = x_hw[i];
            c[3 + i] = v_center[i];
            h[3 + i] = v_hw[i];
        }
        c[6] = t_center;
        h[6] = t_hw;
        Self { bump: SeparableBump::new(c, h) }
    }

    fn pack(x: &Vec3, v: &Vec3, t: f64) -> SVector<f64, 7> {
        let mut u = SVector::<f64, 7>::zeros();
        u.fixed_rows_mut::<3>(0).copy_from(x);
        u.fixed_rows_mut::<3>(3).copy_from(v);
        u[6] = t;
        u
    }

    pub fn eval(&self, x: &Vec3, v: &Vec3, t: f64) -> f64 {
        self.bump.eval(&Self::pack(x, v, t))
    }

    pub fn dt(&self, x: &Vec3, v: &Vec3, t: f64) -> f64 {
        self.bump.partial(&Self::pack(x, v, t), 6)
    }

    pub fn grad_x(&self, x: &Vec3, v: &Vec3, t: f64) -> Vec3 {
        let u = Self::pack(x, v, t);
        Vec3::from_fn(|i, _| self.bump.partial(&u, i))
    }

    pub fn x_box(&self) -> Box3 {
        BoxDomain::from_center_halfwidths(
            self.bump.centers.fixed_rows::<3>(0).into(),
            self.bump.half_widths.fixed_rows::<3>(0).into(),
        )
    }

    pub fn v_box(&self) -> Box3 {
        BoxDomain::from_center_halfwidths(
            self.bump.centers.fixed_rows::<3>(3).into(),
            self.bump.half_widths.fixed_rows::<3>(3).into(),
        )
    }

    pub fn t_window(&self) -> (f64, f64) {
        (self.bump.centers[6] - self.bump.half_widths[6], self.bump.centers[6] + self.bump.half_widths[6])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_on_unit_box_is_exact() {
        let b = BoxDomain::<3>::new(SVector::<f64, 3>::zeros(), SVector::<f64, 3>::repeat(1.0));
        let e = mc_integrate(|_| 1.0, &b, &QuadratureSpec::monte_carlo(1000, 1));
        assert!((e.value - 1.0).abs() < 1e-12);
        assert_eq!(e.std_err, 0.0);
    }

    #[test]
    fn odd_function_on_symmetric_box_vanishes() {
        let b = BoxDomain::<3>::from_center_halfwidths(
            SVector::<f64, 3>::zeros(),
            SVector::<f64, 3>::repeat(1.0),
        );
        let e = mc_integrate(|p| p[0], &b, &QuadratureSpec::monte_carlo(40_000, 2));
        assert!(e.value.abs() <= 3.0 * e.std_err + 1e-12);
    }

    #[test]
    fn half_box_indicator_is_one_half() {
        let b = BoxDomain::<2>::new(SVector::<f64, 2>::zeros(), SVector::<f64, 2>::repeat(1.0));
        let e = mc_integrate(
            |p| if p[0] < 0.5 { 1.0 } else { 0.0 },
            &b,
            &QuadratureSpec::monte_carlo(40_000, 3),
        );
        assert!((e.value - 0.5).abs() <= 3.0 * e.std_err);
    }

    #[test]
    fn identical_spec_gives_bit_identical_estimates() {
        let b = BoxDomain::<6>::from_center_halfwidths(
            SVector::<f64, 6>::zeros(),
            SVector::<f64, 6>::repeat(2.0),
        );
        let spec = QuadratureSpec::monte_carlo(10_000, 99);
        let f = |p: &SVector<f64, 6>| (p.norm_squared()).sin();
        let a = mc_integrate(f, &b, &spec);
        let c = mc_integrate(f, &b, &spec);
        assert_eq!(a.value.to_bits(), c.value.to_bits());
        assert_eq!(a.std_err.to_bits(), c.std_err.to_bits());
    }

    #[test]
    fn merged_halves_agree_with_full_run() {
        let b = BoxDomain::<3>::from_center_halfwidths(
            SVector::<f64, 3>::zeros(),
            SVector::<f64, 3>::repeat(1.0),
        );
        let f = |p: &SVector<f64, 3>| (1.0 + p[0]).exp() * p[1].cos();
        let full = mc_integrate(f, &b, &QuadratureSpec::monte_carlo(20_000, 5));
        let h1 = mc_integrate(f, &b, &QuadratureSpec::monte_carlo(10_000, 41));
        let h2 = mc_integrate(f, &b, &QuadratureSpec::monte_carlo(10_000, 42));
        let merged = h1.merge(&h2);
        let tol = 3.0 * (full.std_err.powi(2) + merged.std_err.powi(2)).sqrt();
        assert!((merged.value - full.value).abs() <= tol);
    }

    #[test]
    fn sphere_sampling_moments() {
        let n_samples = 200_000u64;
        let mut first = Vec3::zeros();
        let mut second = nalgebra::Matrix3::<f64>::zeros();
        for i in 0..n_samples {
            let mut rng = sample_rng(11, i);
            let n = unit_sphere_sample(&mut rng);
            first += n;
            second += n * n.transpose();
        }
        let inv = 1.0 / n_samples as f64;
        first *= inv;
        second *= inv;
        let se = (1.0 / n_samples as f64).sqrt();
        assert!(first.norm() < 3.0 * se * 2.0);
        let dev = second - nalgebra::Matrix3::identity() / 3.0;
        assert!(dev.norm() < 3.0 * se * 2.0);
    }

    #[test]
    fn boundary_area_matches_parameterization() {
        // Unit integrand, unit y box, unit v box and unit window: the surface
        // factor sqrt(2) eps^2 times 4 pi.
        let dom = BoundaryDomain {
            y_box: BoxDomain::new(SVector::<f64, 3>::zeros(), SVector::<f64, 3>::repeat(1.0)),
            v_box: BoxDomain::new(SVector::<f64, 6>::zeros(), SVector::<f64, 6>::repeat(1.0)),
            t_window: (0.0, 1.0),
        };
        let e = boundary_integrate(|_, _, _, _| 1.0, &dom, 1.0, &QuadratureSpec::monte_carlo(1000, 7));
        let expected = 4.0 * std::f64::consts::PI * std::f64::consts::SQRT_2;
        assert!((e.value - expected).abs() < 1e-9);
    }

    #[test]
    fn boundary_integrand_odd_in_n_vanishes() {
        let dom = BoundaryDomain {
            y_box: BoxDomain::new(SVector::<f64, 3>::zeros(), SVector::<f64, 3>::repeat(1.0)),
            v_box: BoxDomain::new(SVector::<f64, 6>::zeros(), SVector::<f64, 6>::repeat(1.0)),
            t_window: (0.0, 1.0),
        };
        let e = boundary_integrate(
            |_, n, _, _| n.x + 0.5 * n.z,
            &dom,
            1.0,
            &QuadratureSpec::monte_carlo(40_000, 8),
        );
        assert!(e.value.abs() <= 3.0 * e.std_err);
    }

    #[test]
    fn standard_error_scales_as_inverse_sqrt() {
        let b = BoxDomain::<3>::from_center_halfwidths(
            SVector::<f64, 3>::zeros(),
            SVector::<f64, 3>::repeat(1.0),
        );
        let f = |p: &SVector<f64, 3>| (p[0] * 2.0).cos() + p[1] * p[2];
        let small = mc_integrate(f, &b, &QuadratureSpec::monte_carlo(2_000, 12));
        let large = mc_integrate(f, &b, &QuadratureSpec::monte_carlo(200_000, 13));
        let ratio = small.std_err / large.std_err;
        assert!(ratio > 5.0 && ratio < 20.0, "ratio {ratio}");
    }

    #[test]
    fn test_function_center_value_and_gradient() {
        let phi = TestFunction::new(
            Vec6::zeros(),
            Vec6::zeros(),
            0.0,
            Vec6::repeat(1.0),
            Vec6::repeat(1.0),
            1.0,
        );
        let v = phi.eval(&Vec6::zeros(), &Vec6::zeros(), 0.0);
        assert!((v - (-13.0f64).exp()).abs() < 1e-18);
        assert_eq!(phi.grad_x(&Vec6::zeros(), &Vec6::zeros(), 0.0), Vec6::zeros());
        assert_eq!(phi.eval(&Vec6::repeat(2.0), &Vec6::zeros(), 0.0), 0.0);
    }

    #[test]
    fn test_function_derivatives_match_finite_differences() {
        let phi = TestFunction::new(
            Vec6::repeat(0.1),
            Vec6::repeat(-0.2),
            0.3,
            Vec6::repeat(0.9),
            Vec6::repeat(1.1),
            0.8,
        );
        let x = Vec6::repeat(0.25);
        let v = Vec6::repeat(-0.35);
        let t = 0.5;
        let h = 1e-6;
        let fd_t = (phi.eval(&x, &v, t + h) - phi.eval(&x, &v, t - h)) / (2.0 * h);
        assert!((fd_t - phi.dt(&x, &v, t)).abs() < 1e-6 * fd_t.abs().max(1e-6));
        let g = phi.grad_x(&x, &v, t);
        for i in 0..6 {
            let mut xp = x;
            let mut xm = x;
            xp[i] += h;
            xm[i] -= h;
            let fd = (phi.eval(&xp, &v, t) - phi.eval(&xm, &v, t)) / (2.0 * h);
            assert!((fd - g[i]).abs() < 1e-6 * fd.abs().max(1e-6), "coord {i}");
        }
    }

    #[test]
    fn simpson_integrates_cubics_exactly() {
        let v = simpson(|t| t * t * t - 2.0 * t + 1.0, -1.0, 2.0, 8);
        // Antiderivative: t^4/4 - t^2 + t.
        let exact = (16.0 / 4.0 - 4.0 + 2.0) - (0.25 - 1.0 - 1.0);
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn tensor_grid_matches_product_integral() {
        let b = BoxDomain::<2>::new(SVector::<f64, 2>::zeros(), SVector::<f64, 2>::repeat(1.0));
        let v = tensor_grid_integrate(|p| p[0] * p[1], &b, 16);
        assert!((v - 0.25).abs() < 1e-10);
    }
}
