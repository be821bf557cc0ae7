//! Finite Blaschke products `B(z) = λ ∏ (z - z_j) / (1 - conj(z_j) z)` and disk automorphisms.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::math;

/// Largest degree accepted by [`BlaschkeProduct::new`].
pub const MAX_DEGREE: usize = 4096;
/// Zeros closer than this to the unit circle are rejected at construction.
pub const BOUNDARY_CLEARANCE: f64 = 1e-6;
/// Slack on `|z| <= 1` for evaluation on the closed disk.
pub const EVAL_SLACK: f64 = 1e-9;
/// Tolerance on `|λ| = 1`.
pub const ROTATION_TOLERANCE: f64 = 1e-12;
/// Below this distance to a zero the derivative switches to the product-rule form.
const LOG_DERIVATIVE_CUTOFF: f64 = 1e-8;

pub(crate) fn check_finite(z: Complex64, what: &str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{what} has a non-finite component: {z}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
    rotation: Complex64,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<Complex64>, rotation: Complex64) -> Result<Self> {
        if zeros.is_empty() || zeros.len() > MAX_DEGREE {
            return Err(Error::Range { degree: zeros.len(), max: MAX_DEGREE });
        }
        check_finite(rotation, "rotation")?;
        if (rotation.norm() - 1.0).abs() > ROTATION_TOLERANCE {
            return Err(Error::InvalidInput(format!(
                "rotation must be unimodular, |λ| = {}",
                rotation.norm()
            )));
        }
        for (j, z) in zeros.iter().enumerate() {
            check_finite(*z, "zero")?;
            if z.norm() > 1.0 - BOUNDARY_CLEARANCE {
                return Err(Error::InvalidInput(format!(
                    "zero {j} at {z} lies within {BOUNDARY_CLEARANCE:e} of the unit circle"
                )));
            }
        }
        Ok(BlaschkeProduct { zeros, rotation })
    }

    /// Product with the default rotation `λ = 1`.
    pub fn from_zeros(zeros: Vec<Complex64>) -> Result<Self> {
        Self::new(zeros, Complex64::new(1.0, 0.0))
    }

    /// `B(z) = z^n`.
    pub fn monomial(n: usize) -> Result<Self> {
        Self::from_zeros(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn rotation(&self) -> Complex64 {
        self.rotation
    }

    pub fn max_zero_modulus(&self) -> f64 {
        self.zeros.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `e^{iθ} B`.
    pub fn rotated(&self, theta: f64) -> Self {
        let rotation = self.rotation * math::cis(theta);
        BlaschkeProduct { zeros: self.zeros.clone(), rotation: rotation / rotation.norm() }
    }

    fn check_closed_disk(z: Complex64) -> Result<()> {
        check_finite(z, "evaluation point")?;
        if z.norm() > 1.0 + EVAL_SLACK {
            return Err(Error::Domain(format!("|z| = {} exceeds the closed unit disk", z.norm())));
        }
        Ok(())
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        Self::check_closed_disk(z)?;
        Ok(self.eval_unchecked(z))
    }

    /// Single left-to-right pass over the factors.
    #[inline]
    pub(crate) fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        let mut acc = self.rotation;
        for zj in &self.zeros {
            acc *= (z - zj) / (1.0 - zj.conj() * z);
        }
        acc
    }

    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        Self::check_closed_disk(z)?;
        Ok(self.derivative_unchecked(z))
    }

    #[inline]
    pub(crate) fn derivative_unchecked(&self, z: Complex64) -> Complex64 {
        let nearest = self.zeros.iter().map(|zj| (z - zj).norm()).fold(f64::INFINITY, f64::min);
        if nearest > LOG_DERIVATIVE_CUTOFF {
            self.log_derivative_form(z)
        } else {
            self.product_rule_form(z)
        }
    }

    /// `B'(z)` and `B(z)` together; `B' = B Σ (1-|z_j|²)/((z-z_j)(1-conj(z_j) z))`.
    #[inline]
    pub(crate) fn value_and_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut value = self.rotation;
        let mut log_sum = Complex64::new(0.0, 0.0);
        let mut nearest = f64::INFINITY;
        for zj in &self.zeros {
            let num = z - zj;
            let den = 1.0 - zj.conj() * z;
            nearest = nearest.min(num.norm());
            value *= num / den;
            log_sum += (1.0 - zj.norm_sqr()) / (num * den);
        }
        if nearest > LOG_DERIVATIVE_CUTOFF {
            (value, value * log_sum)
        } else {
            (value, self.product_rule_form(z))
        }
    }

    pub(crate) fn log_derivative_form(&self, z: Complex64) -> Complex64 {
        let mut value = self.rotation;
        let mut log_sum = Complex64::new(0.0, 0.0);
        for zj in &self.zeros {
            let num = z - zj;
            let den = 1.0 - zj.conj() * z;
            value *= num / den;
            log_sum += (1.0 - zj.norm_sqr()) / (num * den);
        }
        value * log_sum
    }

    /// `λ Σ_k (1-|z_k|²)/(1-conj(z_k) z)² ∏_{j≠k} φ_j(z)`, exact at the zeros.
    pub(crate) fn product_rule_form(&self, z: Complex64) -> Complex64 {
        let n = self.zeros.len();
        let factors: Vec<Complex64> = self.zeros.iter().map(|zj| (z - zj) / (1.0 - zj.conj() * z)).collect();
        // suffix[k] = ∏_{j>=k} factors[j]
        let mut suffix = vec![Complex64::new(1.0, 0.0); n + 1];
        for k in (0..n).rev() {
            suffix[k] = suffix[k + 1] * factors[k];
        }
        let mut prefix = Complex64::new(1.0, 0.0);
        let mut total = Complex64::new(0.0, 0.0);
        for (k, zk) in self.zeros.iter().enumerate() {
            let den = 1.0 - zk.conj() * z;
            total += prefix * suffix[k + 1] * (1.0 - zk.norm_sqr()) / (den * den);
            prefix *= factors[k];
        }
        self.rotation * total
    }

    /// `|B'(ζ)| = Σ (1-|z_j|²)/|ζ-z_j|²` on the unit circle.
    pub fn boundary_derivative_modulus(&self, zeta: Complex64) -> Result<f64> {
        check_finite(zeta, "boundary point")?;
        if (zeta.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::Domain(format!("|ζ| = {} is not on the unit circle", zeta.norm())));
        }
        let mut sum = 0.0;
        for zj in &self.zeros {
            let dist = (zeta - zj).norm();
            if dist < 1e-14 {
                return Err(Error::Singularity(format!("zero {zj} coincides with ζ = {zeta}")));
            }
            sum += (1.0 - zj.norm_sqr()) / (dist * dist);
        }
        Ok(sum)
    }

    /// `B ∘ φ`. The zeros are `φ⁻¹(z_j)`; they can land closer to the circle than
    /// [`BOUNDARY_CLEARANCE`], which is tolerated here since the composite is exact.
    pub fn precompose(&self, phi: &MoebiusAutomorphism) -> Self {
        let zeros: Vec<Complex64> = self.zeros.iter().map(|&zj| phi.inverse(zj)).collect();
        let one = Complex64::new(1.0, 0.0);
        let target = self.eval_unchecked(phi.apply(one));
        let mut bare = one;
        for wj in &zeros {
            bare *= (one - wj) / (1.0 - wj.conj());
        }
        let rotation = target / bare;
        BlaschkeProduct { zeros, rotation: rotation / rotation.norm() }
    }

    /// Deterministic random product for sweeps. Zeros satisfy `|z_j| <= 1 - 1e-6`.
    pub fn random(degree: usize, seed: u64, law: RadialLaw) -> Result<Self> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::Range { degree, max: MAX_DEGREE });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let zeros = (0..degree).map(|_| law.sample(&mut rng)).collect();
        Self::from_zeros(zeros)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialLaw {
    /// Area-uniform points of the disk.
    UniformDisk,
    /// `|z| = 1 - 10^{-u}` with `u` uniform in `(0, decades]`; `decades` is capped at 6.
    BoundaryConcentrated { decades: f64 },
}

impl RadialLaw {
    pub(crate) fn sample<R: Rng>(&self, rng: &mut R) -> Complex64 {
        let max_radius = 1.0 - BOUNDARY_CLEARANCE;
        let radius = match *self {
            RadialLaw::UniformDisk => math::sqrt(rng.gen::<f64>()),
            RadialLaw::BoundaryConcentrated { decades } => {
                let decades = decades.clamp(f64::MIN_POSITIVE, 6.0);
                let u = decades * (1.0 - rng.gen::<f64>());
                1.0 - math::powf(10.0, -u)
            }
        };
        let angle = TAU * rng.gen::<f64>();
        math::cis(angle) * radius.min(max_radius)
    }
}

/// `φ(z) = (e^{iθ} z + a) / (1 + conj(a) e^{iθ} z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusAutomorphism {
    a: Complex64,
    theta: f64,
}

impl MoebiusAutomorphism {
    pub fn new(a: Complex64, theta: f64) -> Result<Self> {
        check_finite(a, "automorphism center")?;
        if !theta.is_finite() {
            return Err(Error::InvalidInput(format!("rotation angle {theta} is not finite")));
        }
        if a.norm() >= 1.0 {
            return Err(Error::InvalidInput(format!("|a| = {} must be < 1", a.norm())));
        }
        let theta = math::rem_euclid(theta, TAU);
        Ok(MoebiusAutomorphism { a, theta })
    }

    pub fn identity() -> Self {
        MoebiusAutomorphism { a: Complex64::new(0.0, 0.0), theta: 0.0 }
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        let rz = math::cis(self.theta) * z;
        (rz + self.a) / (1.0 + self.a.conj() * rz)
    }

    pub fn inverse(&self, w: Complex64) -> Complex64 {
        math::cis(-self.theta) * (w - self.a) / (1.0 - self.a.conj() * w)
    }

    pub fn random<R: Rng>(rng: &mut R, max_modulus: f64) -> Self {
        let radius = max_modulus * math::sqrt(rng.gen::<f64>());
        let a = math::cis(TAU * rng.gen::<f64>()) * radius;
        MoebiusAutomorphism { a, theta: TAU * rng.gen::<f64>() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn evaluate_small_cases() {
        let b = BlaschkeProduct::from_zeros(vec![c(0.0, 0.0)]).unwrap();
        assert_eq!(b.evaluate(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));

        let b = BlaschkeProduct::monomial(3).unwrap();
        for k in 0..16 {
            let z = math::cis(0.37 * k as f64);
            assert!((b.evaluate(z).unwrap().norm() - 1.0).abs() < 1e-12);
        }

        let b = BlaschkeProduct::from_zeros(vec![c(0.5, 0.0)]).unwrap();
        assert!(b.evaluate(c(0.5, 0.0)).unwrap().norm() < 1e-15);
        assert!((b.evaluate(c(0.0, 0.0)).unwrap() - c(-0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn evaluate_rejects_far_points() {
        let b = BlaschkeProduct::monomial(2).unwrap();
        assert!(matches!(b.evaluate(c(1.0 + 1e-6, 0.0)), Err(Error::Domain(_))));
        assert!(b.evaluate(c(1.0 + 1e-10, 0.0)).is_ok());
        assert!(matches!(b.evaluate(c(f64::NAN, 0.0)), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn construction_invariants() {
        assert!(matches!(BlaschkeProduct::from_zeros(vec![]), Err(Error::Range { .. })));
        assert!(BlaschkeProduct::from_zeros(vec![c(1.0 - 1e-7, 0.0)]).is_err());
        assert!(BlaschkeProduct::from_zeros(vec![c(1.0 - 1e-6, 0.0)]).is_ok());
        assert!(BlaschkeProduct::new(vec![c(0.1, 0.0)], c(0.5, 0.0)).is_err());
        assert!(BlaschkeProduct::monomial(MAX_DEGREE + 1).is_err());
    }

    #[test]
    fn derivative_cases() {
        let id = BlaschkeProduct::monomial(1).unwrap();
        assert!((id.derivative(c(0.3, -0.2)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);

        let b = BlaschkeProduct::monomial(5).unwrap();
        let x = 0.7_f64;
        let expected = 5.0 * x.powi(4);
        assert!((b.derivative(c(x, 0.0)).unwrap() - c(expected, 0.0)).norm() < 1e-14);

        let b = BlaschkeProduct::from_zeros(vec![c(0.5, 0.0)]).unwrap();
        assert!((b.derivative(c(0.0, 0.0)).unwrap() - c(0.75, 0.0)).norm() < 1e-15);
        // at the zero itself: (1-0.25)/(1-0.25)^2
        assert!((b.derivative(c(0.5, 0.0)).unwrap() - c(1.0 / 0.75, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn derivative_matches_central_differences() {
        let b = BlaschkeProduct::random(6, 11, RadialLaw::UniformDisk).unwrap();
        let h = 1e-6;
        for k in 0..50 {
            let z = math::cis(0.9 * k as f64) * (0.9 * (k as f64 / 50.0));
            let fd = (b.eval_unchecked(z + h) - b.eval_unchecked(z - h)) / (2.0 * h);
            let exact = b.derivative(z).unwrap();
            assert!((fd - exact).norm() <= 1e-6 * exact.norm().max(1.0), "{fd} vs {exact}");
        }
    }

    #[test]
    fn boundary_modulus_cases() {
        let b = BlaschkeProduct::monomial(4).unwrap();
        assert!((b.boundary_derivative_modulus(math::cis(1.1)).unwrap() - 4.0).abs() < 1e-14);

        let b = BlaschkeProduct::from_zeros(vec![c(0.5, 0.0)]).unwrap();
        assert!((b.boundary_derivative_modulus(c(1.0, 0.0)).unwrap() - 3.0).abs() < 1e-14);
        assert!((b.boundary_derivative_modulus(c(-1.0, 0.0)).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        assert!((b.derivative(c(1.0, 0.0)).unwrap().norm() - 3.0).abs() < 1e-9);
        assert!(matches!(b.boundary_derivative_modulus(c(0.9, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn precompose_cases() {
        let b = BlaschkeProduct::random(3, 5, RadialLaw::UniformDisk).unwrap();
        let same = b.precompose(&MoebiusAutomorphism::identity());
        for (x, y) in same.zeros().iter().zip(b.zeros()) {
            assert!((x - y).norm() < 1e-15);
        }
        assert!((same.rotation() - b.rotation()).norm() < 1e-15);

        let a = c(0.3, -0.4);
        let phi = MoebiusAutomorphism::new(a, 0.0).unwrap();
        let composed = BlaschkeProduct::monomial(1).unwrap().precompose(&phi);
        assert_eq!(composed.degree(), 1);
        assert!((composed.zeros()[0] + a).norm() < 1e-15);
    }

    #[test]
    fn moebius_inverse_roundtrip() {
        let phi = MoebiusAutomorphism::new(c(-0.2, 0.55), 2.0).unwrap();
        for k in 0..20 {
            let z = math::cis(k as f64) * 0.8;
            assert!((phi.inverse(phi.apply(z)) - z).norm() < 1e-14);
        }
        assert!(MoebiusAutomorphism::new(c(1.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn random_products() {
        let one = BlaschkeProduct::random(1, 99, RadialLaw::UniformDisk).unwrap();
        assert_eq!(one.degree(), 1);
        let a = BlaschkeProduct::random(8, 42, RadialLaw::UniformDisk).unwrap();
        let b = BlaschkeProduct::random(8, 42, RadialLaw::UniformDisk).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.degree(), 8);
        assert!(a.zeros().iter().all(|z| z.norm() < 1.0));

        let law = RadialLaw::BoundaryConcentrated { decades: 6.0 };
        for seed in 0..50 {
            let b = BlaschkeProduct::random(5, seed, law).unwrap();
            assert!(b.zeros().iter().all(|z| z.norm() <= 1.0 - 1e-6));
        }
        assert!(BlaschkeProduct::random(0, 0, law).is_err());
    }
}
