//! Axis-aligned boxes and simple proposal regions used by the samplers.

use nalgebra::SVector;
use rand::Rng;

use crate::geometry::Vec6;

/// Closed axis-aligned box in `N` dimensions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxDomain<const N: usize> {
    pub lo: SVector<f64, N>,
    pub hi: SVector<f64, N>,
}

pub type Box3 = BoxDomain<3>;
pub type Box6 = BoxDomain<6>;
pub type Box12 = BoxDomain<12>;

impl<const N: usize> BoxDomain<N> {
    pub fn new(lo: SVector<f64, N>, hi: SVector<f64, N>) -> Self {
        debug_assert!(lo.iter().zip(hi.iter()).all(|(a, b)| a <= b));
        Self { lo, hi }
    }

    pub fn from_center_halfwidths(center: SVector<f64, N>, halfwidths: SVector<f64, N>) -> Self {
        Self::new(center - halfwidths, center + halfwidths)
    }

    pub fn center(&self) -> SVector<f64, N> {
        (self.lo + self.hi) * 0.5
    }

    pub fn halfwidths(&self) -> SVector<f64, N> {
        (self.hi - self.lo) * 0.5
    }

    pub fn volume(&self) -> f64 {
        self.hi.iter().zip(self.lo.iter()).map(|(h, l)| h - l).product()
    }

    pub fn contains(&self, p: &SVector<f64, N>) -> bool {
        p.iter()
            .zip(self.lo.iter().zip(self.hi.iter()))
            .all(|(x, (l, h))| *x >= *l && *x <= *h)
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> SVector<f64, N> {
        let mut p = self.lo;
        for i in 0..N {
            let u: f64 = rng.gen();
            p[i] += u * (self.hi[i] - self.lo[i]);
        }
        p
    }

    /// Grow every face outward by `margin`.
    pub fn inflated(&self, margin: f64) -> Self {
        let m = SVector::<f64, N>::repeat(margin);
        Self::new(self.lo - m, self.hi + m)
    }

    /// Smallest box containing both.
    pub fn hull(&self, other: &Self) -> Self {
        Self::new(self.lo.inf(&other.lo), self.hi.sup(&other.hi))
    }
}

/// Concatenate a position box and a velocity box into a phase box.
pub fn phase_box(x_box: &Box6, v_box: &Box6) -> Box12 {
    let mut lo = SVector::<f64, 12>::zeros();
    let mut hi = SVector::<f64, 12>::zeros();
    for i in 0..6 {
        lo[i] = x_box.lo[i];
        hi[i] = x_box.hi[i];
        lo[6 + i] = v_box.lo[i];
        hi[6 + i] = v_box.hi[i];
    }
    BoxDomain::new(lo, hi)
}

pub fn phase_parts(p: &SVector<f64, 12>) -> (Vec6, Vec6) {
    (p.fixed_rows::<6>(0).into(), p.fixed_rows::<6>(6).into())
}

/// Uniform proposal over a phase box, optionally sheared by free streaming:
/// the sheared region is the image of the base box under
/// `(X, V) -> (X + t V, V)`, which has the same volume.
#[derive(Clone, Copy, Debug)]
pub enum PhaseRegion {
    Plain(Box12),
    Sheared { base: Box12, t: f64 },
}

impl PhaseRegion {
    pub fn volume(&self) -> f64 {
        match self {
            PhaseRegion::Plain(b) => b.volume(),
            PhaseRegion::Sheared { base, .. } => base.volume(),
        }
    }

    pub fn contains(&self, positions: &Vec6, velocities: &Vec6) -> bool {
        match self {
            PhaseRegion::Plain(b) => {
                let mut p = SVector::<f64, 12>::zeros();
                p.fixed_rows_mut::<6>(0).copy_from(positions);
                p.fixed_rows_mut::<6>(6).copy_from(velocities);
                b.contains(&p)
            }
            PhaseRegion::Sheared { base, t } => {
                let unsheared = positions - *t * velocities;
                let mut p = SVector::<f64, 12>::zeros();
                p.fixed_rows_mut::<6>(0).copy_from(&unsheared);
                p.fixed_rows_mut::<6>(6).copy_from(velocities);
                base.contains(&p)
            }
        }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> (Vec6, Vec6) {
        match self {
            PhaseRegion::Plain(b) => {
                let p = b.sample(rng);
                phase_parts(&p)
            }
            PhaseRegion::Sheared { base, t } => {
                let p = base.sample(rng);
                let (x, v) = phase_parts(&p);
                (x + *t * v, v)
            }
        }
    }
}

/// Bound on the per-sphere speed of any state in a phase box: since the
/// scattering reflection preserves the stacked velocity norm, the position
/// of either sphere moves at most this fast along any evolved trajectory.
pub fn max_pair_speed(v_box: &Box6) -> f64 {
    let mut m2 = 0.0;
    for i in 0..6 {
        let a: f64 = v_box.lo[i].abs();
        let b: f64 = v_box.hi[i].abs();
        m2 += a.max(b).powi(2);
    }
    m2.sqrt()
}

/// Velocity box reachable from `v_box` through a single scattering event:
/// the stacked-velocity ball of the box's outer radius, as a box.
pub fn scattered_velocity_box(v_box: &Box6) -> Box6 {
    let r = max_pair_speed(v_box);
    BoxDomain::from_center_halfwidths(SVector::<f64, 6>::zeros(), SVector::<f64, 6>::repeat(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SVector;

    #[test]
    fn sheared_region_membership_matches_sampling() {
        let base = Box12::from_center_halfwidths(
            SVector::<f64, 12>::zeros(),
            SVector::<f64, 12>::repeat(1.0),
        );
        let region = PhaseRegion::Sheared { base, t: 2.0 };
        let mut rng = crate::quadrature::sample_rng(7, 0);
        for _ in 0..100 {
            let (x, v) = region.sample(&mut rng);
            assert!(region.contains(&x, &v));
        }
    }

    #[test]
    fn hull_and_volume() {
        let a = Box3::new(SVector::<f64, 3>::zeros(), SVector::<f64, 3>::repeat(1.0));
        let b = Box3::new(SVector::<f64, 3>::repeat(0.5), SVector::<f64, 3>::repeat(2.0));
        let h = a.hull(&b);
        assert_eq!(h.lo, SVector::<f64, 3>::zeros());
        assert_eq!(h.hi, SVector::<f64, 3>::repeat(2.0));
        assert!((a.volume() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn splits_phase_vectors() {
        let x = Vec6::from_iterator((0..6).map(|i| i as f64));
        let (a, b) = crate::geometry::split(&x);
        assert_eq!(a, SVector::<f64, 3>::new(0.0, 1.0, 2.0));
        assert_eq!(b, SVector::<f64, 3>::new(3.0, 4.0, 5.0));
    }
}
