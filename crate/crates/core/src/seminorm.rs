//! The Bloch quantity `|f'(z)|(1-|z|²)` and multistart estimates of its supremum over the disk.
//!
//! [`seminorm`] always returns a value attained at a point of the disk, so it is a lower bound
//! for the true seminorm. Starts are the origin, every zero, every critical point and a polar
//! grid; each start is refined by a Nelder–Mead simplex with a barrier at `|z| = 1 - 1e-9`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blaschke::{check_finite, BlaschkeProduct};
use crate::covering;
use crate::error::{Error, Result};
use crate::math;
use crate::optimize::{nelder_mead_2d, SimplexOptions};

/// Points with `|z|` above this are treated as outside the search domain.
pub const BARRIER_RADIUS: f64 = 1.0 - 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub grid_angles: usize,
    pub grid_radii: usize,
    pub max_iterations: usize,
    pub objective_tolerance: f64,
    /// Extra uniformly random starts, drawn from `seed`. Zero keeps the search fully deterministic.
    pub random_starts: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            grid_angles: 24,
            grid_radii: 16,
            max_iterations: 500,
            objective_tolerance: 1e-10,
            random_starts: 0,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    /// Same search with twice the angles and radii. The doubled grid contains the original one.
    pub fn doubled(&self) -> Self {
        OptimizerConfig { grid_angles: 2 * self.grid_angles, grid_radii: 2 * self.grid_radii, ..*self }
    }

    fn simplex_options(&self) -> SimplexOptions {
        SimplexOptions {
            max_iterations: self.max_iterations,
            f_tolerance: self.objective_tolerance,
            x_tolerance: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeminormEstimate {
    pub value: f64,
    pub argmax: Complex64,
    pub starts_used: usize,
    pub refinement_iterations: usize,
}

/// `|B'(z)|(1-|z|²)` for `|z| < 1`.
pub fn pointwise_bloch(b: &BlaschkeProduct, z: Complex64) -> Result<f64> {
    check_finite(z, "point")?;
    if z.norm() >= 1.0 {
        return Err(Error::Domain(format!("|z| = {} is not inside the unit disk", z.norm())));
    }
    Ok(pointwise_unchecked(b, z))
}

#[inline]
pub(crate) fn pointwise_unchecked(b: &BlaschkeProduct, z: Complex64) -> f64 {
    b.derivative_unchecked(z).norm() * (1.0 - z.norm_sqr())
}

/// `sup_{0<=x<1} n x^{n-1} (1-x²)`, the seminorm of `z^n`.
pub fn znorm_closed_form(n: u64) -> f64 {
    if n <= 1 {
        return 1.0;
    }
    let n = n as f64;
    let lead = 2.0 * n / (n + 1.0);
    // ((n-1)/(n+1))^{(n-1)/2} = exp((n-1)/2 · log1p(-2/(n+1)))
    lead * math::exp(0.5 * (n - 1.0) * libm::log1p(-2.0 / (n + 1.0)))
}

/// Polar grid radii `1 - 10^{-3k/K}`, `k = 1..K`.
fn grid_radius(k: usize, count: usize) -> f64 {
    1.0 - math::powf(10.0, -3.0 * k as f64 / count as f64)
}

fn grid_starts(config: &OptimizerConfig) -> impl Iterator<Item = Complex64> + '_ {
    (0..config.grid_angles).flat_map(move |i| {
        let angle = TAU * (i as f64 / config.grid_angles as f64);
        (1..=config.grid_radii).map(move |k| math::cis(angle) * grid_radius(k, config.grid_radii))
    })
}

const ZERO_RING_RADII: [f64; 2] = [0.5, 0.8];
const ZERO_RING_ANGLES: usize = 6;

fn starts_for(b: &BlaschkeProduct, config: &OptimizerConfig) -> Vec<Complex64> {
    let mut starts = Vec::new();
    starts.push(Complex64::new(0.0, 0.0));
    starts.extend(b.zeros().iter().copied());
    // Rings around each zero in the pseudo-hyperbolic metric. They follow the zeros under
    // automorphisms, where the polar grid does not.
    for &zj in b.zeros() {
        for &rho in &ZERO_RING_RADII {
            for k in 0..ZERO_RING_ANGLES {
                let w = math::cis(TAU * (k as f64 + 0.5) / ZERO_RING_ANGLES as f64) * rho;
                starts.push((zj + w) / (1.0 + zj.conj() * w));
            }
        }
    }
    if b.degree() >= 2 {
        if let Ok(crit) = covering::critical_points(b) {
            starts.extend(crit);
        }
    }
    starts.extend(grid_starts(config));
    if config.random_starts > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        for _ in 0..config.random_starts {
            let r = math::sqrt(rng.gen::<f64>()) * BARRIER_RADIUS;
            starts.push(math::cis(TAU * rng.gen::<f64>()) * r);
        }
    }
    starts
}

/// Maximizes `objective` over the disk from every start.
///
/// The reduction keeps the largest value and breaks exact ties by the lexicographically
/// smallest `(Re, Im)` of the argmax, so the result does not depend on start order.
pub fn maximize_over_disk<F>(objective: F, starts: &[Complex64], config: &OptimizerConfig) -> SeminormEstimate
where
    F: Fn(Complex64) -> f64,
{
    let options = config.simplex_options();
    let barrier = |p: [f64; 2]| {
        let z = Complex64::new(p[0], p[1]);
        if z.norm() > BARRIER_RADIUS {
            f64::INFINITY
        } else {
            -objective(z)
        }
    };
    let mut best: Option<(f64, Complex64)> = None;
    let mut iterations = 0;
    for &start in starts {
        let start =
            if start.norm() > BARRIER_RADIUS { start * (BARRIER_RADIUS / start.norm()) } else { start };
        let step = (0.25 * (1.0 - start.norm())).clamp(1e-7, 0.25);
        let result = nelder_mead_2d(barrier, [start.re, start.im], step, &options);
        iterations += result.iterations;
        let candidate = Complex64::new(result.point[0], result.point[1]);
        let value = objective(candidate);
        if !value.is_finite() {
            continue;
        }
        best = Some(match best {
            None => (value, candidate),
            Some((v, z)) => {
                if value > v || (value == v && lex_less(candidate, z)) {
                    (value, candidate)
                } else {
                    (v, z)
                }
            }
        });
    }
    let (value, argmax) = best.unwrap_or((objective(Complex64::new(0.0, 0.0)), Complex64::new(0.0, 0.0)));
    SeminormEstimate { value, argmax, starts_used: starts.len(), refinement_iterations: iterations }
}

fn lex_less(a: Complex64, b: Complex64) -> bool {
    a.re < b.re || (a.re == b.re && a.im < b.im)
}

/// Multistart estimate of `‖B‖ = sup |B'(z)|(1-|z|²)`.
pub fn seminorm(b: &BlaschkeProduct, config: &OptimizerConfig) -> SeminormEstimate {
    let starts = starts_for(b, config);
    maximize_over_disk(|z| pointwise_unchecked(b, z), &starts, config)
}

/// A holomorphic `f` on the disk with `f'(0) = 1`, for spot checks of `‖f∘B‖`.
#[derive(Debug, Clone, Copy)]
pub struct AnalyticCatalogEntry {
    pub name: &'static str,
    pub f_value: fn(Complex64) -> Complex64,
    pub f_derivative: fn(Complex64) -> Complex64,
    pub is_convex_univalent: bool,
}

fn identity(w: Complex64) -> Complex64 {
    w
}

fn one(_: Complex64) -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn half_plane(w: Complex64) -> Complex64 {
    w / (1.0 - w)
}

fn half_plane_derivative(w: Complex64) -> Complex64 {
    let d = 1.0 - w;
    (d * d).inv()
}

fn quadratic(w: Complex64) -> Complex64 {
    w + w * w * 0.5
}

fn quadratic_derivative(w: Complex64) -> Complex64 {
    1.0 + w
}

/// The three fixed entries: `w`, `w/(1-w)` (convex univalent) and `w + w²/2`.
pub fn catalog() -> [AnalyticCatalogEntry; 3] {
    [
        AnalyticCatalogEntry {
            name: "identity",
            f_value: identity,
            f_derivative: one,
            is_convex_univalent: true,
        },
        AnalyticCatalogEntry {
            name: "half_plane",
            f_value: half_plane,
            f_derivative: half_plane_derivative,
            is_convex_univalent: true,
        },
        AnalyticCatalogEntry {
            name: "quadratic",
            f_value: quadratic,
            f_derivative: quadratic_derivative,
            is_convex_univalent: false,
        },
    ]
}

pub fn catalog_entry(name: &str) -> Option<AnalyticCatalogEntry> {
    catalog().into_iter().find(|e| e.name == name)
}

/// Multistart estimate of `‖f∘B‖` using `(f∘B)' = f'(B) B'`.
pub fn composed_seminorm(
    f: &AnalyticCatalogEntry,
    b: &BlaschkeProduct,
    config: &OptimizerConfig,
) -> SeminormEstimate {
    let starts = starts_for(b, config);
    let fd = f.f_derivative;
    maximize_over_disk(
        |z| {
            let (value, derivative) = b.value_and_derivative(z);
            (fd(value) * derivative).norm() * (1.0 - z.norm_sqr())
        },
        &starts,
        config,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blaschke::{MoebiusAutomorphism, RadialLaw};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pointwise_cases() {
        let id = BlaschkeProduct::monomial(1).unwrap();
        assert_eq!(pointwise_bloch(&id, c(0.0, 0.0)).unwrap(), 1.0);
        let sq = BlaschkeProduct::monomial(2).unwrap();
        let x = 1.0 / 3f64.sqrt();
        let expected = 4.0 / (3.0 * 3f64.sqrt());
        assert!((pointwise_bloch(&sq, c(x, 0.0)).unwrap() - expected).abs() < 1e-15);
        assert!(pointwise_bloch(&sq, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn little_bloch_decay_near_boundary() {
        for seed in 0..20 {
            let b = BlaschkeProduct::random(5, seed, RadialLaw::UniformDisk).unwrap();
            for k in 0..32 {
                let z = math::cis(TAU * k as f64 / 32.0) * (1.0 - 1e-6);
                assert!(pointwise_bloch(&b, z).unwrap() < 0.05);
            }
        }
    }

    /// Grid plus golden-section maximization of `2x(1-x²)`.
    #[test]
    fn closed_form_degree_two_against_1d_search() {
        let (_, v) =
            crate::optimize::grid_then_golden_max(|x| 2.0 * x * (1.0 - x * x), 0.0, 1.0, 1000, 1e-14);
        assert!((znorm_closed_form(2) - v).abs() < 1e-13);
        assert!((znorm_closed_form(2) - (4.0 / 3.0) * (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(znorm_closed_form(1), 1.0);
    }

    #[test]
    fn closed_form_limit_and_monotonicity() {
        let two_over_e = 2.0 / core::f64::consts::E;
        assert!((znorm_closed_form(1_000_000) - two_over_e).abs() < 1e-5);
        let mut prev = znorm_closed_form(1);
        for n in 2..2000 {
            let v = znorm_closed_form(n);
            assert!(v < prev && v > two_over_e, "n = {n}");
            prev = v;
        }
    }

    #[test]
    fn moebius_factor_has_unit_seminorm() {
        for a in [c(0.0, 0.0), c(0.5, 0.2), c(-0.9, 0.3), c(0.0, -0.99)] {
            let phi = MoebiusAutomorphism::new(a, 0.0).unwrap();
            let b = BlaschkeProduct::monomial(1).unwrap().precompose(&phi);
            let est = seminorm(&b, &OptimizerConfig::default());
            assert!((est.value - 1.0).abs() < 1e-9, "{a}: {}", est.value);
        }
    }

    #[test]
    fn monomials_match_closed_form() {
        for n in [2usize, 3, 7, 20] {
            let b = BlaschkeProduct::monomial(n).unwrap();
            let est = seminorm(&b, &OptimizerConfig::default());
            assert!((est.value - znorm_closed_form(n as u64)).abs() < 1e-8, "n = {n}");
        }
    }

    #[test]
    fn estimate_is_consistent_with_argmax() {
        let b = BlaschkeProduct::random(6, 3, RadialLaw::UniformDisk).unwrap();
        let est = seminorm(&b, &OptimizerConfig::default());
        assert!(est.argmax.norm() < 1.0);
        assert_eq!(est.value, pointwise_bloch(&b, est.argmax).unwrap());
        assert!(est.value <= 1.0 + 1e-9);
    }

    #[test]
    fn catalog_is_normalized() {
        let h = 1e-6;
        for entry in catalog() {
            assert!(((entry.f_derivative)(c(0.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-12, "{}", entry.name);
            for k in 0..100 {
                let w = math::cis(0.61 * k as f64) * (0.85 * k as f64 / 100.0);
                let fd = ((entry.f_value)(w + h) - (entry.f_value)(w - h)) / (2.0 * h);
                let exact = (entry.f_derivative)(w);
                assert!((fd - exact).norm() <= 1e-6 * exact.norm().max(1.0));
            }
        }
        assert!(catalog_entry("quadratic").is_some());
        assert!(catalog_entry("nope").is_none());
    }

    #[test]
    fn composed_with_identity_is_plain_seminorm() {
        let b = BlaschkeProduct::random(4, 8, RadialLaw::UniformDisk).unwrap();
        let cfg = OptimizerConfig::default();
        let plain = seminorm(&b, &cfg);
        let composed = composed_seminorm(&catalog()[0], &b, &cfg);
        assert!((plain.value - composed.value).abs() < 1e-12);
    }

    #[test]
    fn composed_spot_values() {
        let cfg = OptimizerConfig::default();
        let sq = BlaschkeProduct::monomial(2).unwrap();
        let cube = BlaschkeProduct::monomial(3).unwrap();
        let convex = composed_seminorm(&catalog()[1], &sq, &cfg);
        assert!(convex.value >= 0.546131);
        let quad = composed_seminorm(&catalog()[2], &cube, &cfg);
        assert!(quad.value >= 0.301098);
    }

    #[test]
    fn doubled_grid_never_decreases() {
        for seed in 0..5 {
            let b =
                BlaschkeProduct::random(5, seed, RadialLaw::BoundaryConcentrated { decades: 2.0 }).unwrap();
            let cfg = OptimizerConfig { grid_angles: 6, grid_radii: 4, ..OptimizerConfig::default() };
            let coarse = seminorm(&b, &cfg);
            let fine = seminorm(&b, &cfg.doubled());
            assert!(fine.value >= coarse.value);
        }
    }
}
