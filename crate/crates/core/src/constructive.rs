//! Explicit point with a guaranteed pointwise Bloch value.
//!
//! Given a boundary point `ζ` with `|B'(ζ)| dist(ζ, zeros) ≥ δ`, the point
//! `z₀ = (1 - dδ/|B'(ζ)|) ζ` satisfies
//!
//! ```text
//! |B'(z₀)|(1-|z₀|²) ≥ dδ (1 - dδ/(1-d)²) (1 - 2d/(1-d)²).
//! ```
//!
//! With `d = 1/7` and `δ = 1` the right side is `319/4536 > 0.07`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::blaschke::{check_finite, BlaschkeProduct};
use crate::error::{Error, Result};
use crate::math;
use crate::optimize::{golden_section_max, grid_then_golden_max};
use crate::seminorm::pointwise_bloch;

pub const DEFAULT_SAMPLES: usize = 4096;
pub const MIN_SAMPLES: usize = 64;
pub const DEFAULT_D: f64 = 1.0 / 7.0;
/// Angle tolerance of the refinement in [`select_zeta`].
pub const ANGLE_TOLERANCE: f64 = 1e-10;
/// Upper end of the useful range of `d`: beyond it `1 - 2d/(1-d)²` is negative.
pub const D_LIMIT: f64 = 0.267_949_192_431_122_7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstructiveResult {
    pub zeta: Complex64,
    pub delta: f64,
    pub d_param: f64,
    pub z0: Complex64,
    pub guaranteed_bound: f64,
    pub actual_value: f64,
}

impl ConstructiveResult {
    pub fn certified(&self) -> bool {
        self.actual_value >= self.guaranteed_bound - 1e-12
    }
}

fn boundary_modulus_at(b: &BlaschkeProduct, theta: f64) -> f64 {
    b.boundary_derivative_modulus(math::cis(theta)).unwrap_or(f64::INFINITY)
}

/// Boundary point of largest `|B'|`: grid over `angular_samples` angles starting at 0, then
/// golden-section refinement around the best grid angle. The refined angle replaces the grid
/// angle only on a strict improvement, so ties resolve to the first grid point.
pub fn select_zeta(b: &BlaschkeProduct, angular_samples: usize) -> Result<Complex64> {
    if angular_samples < MIN_SAMPLES {
        return Err(Error::InvalidInput(format!(
            "need at least {MIN_SAMPLES} angular samples, got {angular_samples}"
        )));
    }
    let h = TAU / angular_samples as f64;
    let mut best = (0.0, boundary_modulus_at(b, 0.0));
    for k in 1..angular_samples {
        let theta = TAU * (k as f64 / angular_samples as f64);
        let v = boundary_modulus_at(b, theta);
        // rounding noise must not break ties
        if v > best.1 * (1.0 + 1e-12) {
            best = (theta, v);
        }
    }
    let (theta, v) =
        golden_section_max(|t| boundary_modulus_at(b, t), best.0 - h, best.0 + h, ANGLE_TOLERANCE);
    if v > best.1 * (1.0 + 1e-12) {
        best = (math::rem_euclid(theta, TAU), v);
    }
    if best.0 == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(math::cis(best.0))
}

/// `min(1, |B'(ζ)| min_j |ζ - z_j|)`.
pub fn compute_delta(b: &BlaschkeProduct, zeta: Complex64) -> Result<f64> {
    check_finite(zeta, "boundary point")?;
    let dist = b.zeros().iter().map(|zj| (zeta - zj).norm()).fold(f64::INFINITY, f64::min);
    if dist < 1e-14 {
        return Err(Error::Degenerate(format!("a zero lies within 1e-14 of ζ = {zeta}")));
    }
    let modulus = b.boundary_derivative_modulus(zeta)?;
    Ok((modulus * dist).min(1.0))
}

/// `dδ (1 - dδ/(1-d)²)(1 - 2d/(1-d)²)`.
pub fn guaranteed_bound(d: f64, delta: f64) -> f64 {
    let q = (1.0 - d) * (1.0 - d);
    d * delta * (1.0 - d * delta / q) * (1.0 - 2.0 * d / q)
}

fn check_parameters(delta: f64, d: f64) -> Result<()> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidInput(format!("δ = {delta} not in (0, 1]")));
    }
    if !(d > 0.0 && d < 1.0) {
        return Err(Error::InvalidInput(format!("d = {d} not in (0, 1)")));
    }
    Ok(())
}

pub fn construct(b: &BlaschkeProduct, zeta: Complex64, delta: f64, d: f64) -> Result<ConstructiveResult> {
    check_parameters(delta, d)?;
    let modulus = b.boundary_derivative_modulus(zeta)?;
    let step = d * delta / modulus;
    if step >= 1.0 {
        return Err(Error::Domain(format!("z0 leaves the disk: dδ/|B'(ζ)| = {step}")));
    }
    let z0 = zeta * (1.0 - step);
    let actual_value = pointwise_bloch(b, z0)?;
    Ok(ConstructiveResult {
        zeta,
        delta,
        d_param: d,
        z0,
        guaranteed_bound: guaranteed_bound(d, delta),
        actual_value,
    })
}

/// ζ from [`select_zeta`], δ from [`compute_delta`], then [`construct`].
pub fn certify(b: &BlaschkeProduct, samples: usize, d: f64) -> Result<ConstructiveResult> {
    let zeta = select_zeta(b, samples)?;
    let delta = compute_delta(b, zeta)?;
    construct(b, zeta, delta, d)
}

/// Maximizes [`guaranteed_bound`] over `d`. The bound does not depend on `B` beyond `δ`;
/// the product and `ζ` are checked so that the returned `d` is usable with [`construct`].
pub fn optimize_d(b: &BlaschkeProduct, zeta: Complex64, delta: f64) -> Result<(f64, f64)> {
    check_parameters(delta, DEFAULT_D)?;
    b.boundary_derivative_modulus(zeta)?;
    Ok(optimal_d(delta))
}

pub fn optimal_d(delta: f64) -> (f64, f64) {
    grid_then_golden_max(|d| guaranteed_bound(d, delta), 1e-9, D_LIMIT, 256, 1e-12)
}

/// Worst margins of the inequalities behind the bound at `points` samples of `[z₀, ζ]`.
///
/// A margin is `lhs - rhs`; all are nonnegative when the argument holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProofChain {
    /// `min |z - z_j| - (1-d)|ζ - z_j|`.
    pub distance_margin: f64,
    /// `min |1 - z̄_j z| - (1-d)|ζ - z_j|`.
    pub pseudo_distance_margin: f64,
    /// `|B(z₀)| - (1 - dδ/(1-d)²)`.
    pub modulus_margin: f64,
}

impl ProofChain {
    pub fn holds(&self, tol: f64) -> bool {
        self.distance_margin >= -tol && self.pseudo_distance_margin >= -tol && self.modulus_margin >= -tol
    }
}

pub fn proof_chain(b: &BlaschkeProduct, result: &ConstructiveResult, points: usize) -> Result<ProofChain> {
    if points < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 sample points, got {points}")));
    }
    let d = result.d_param;
    let samples: Vec<Complex64> = (0..points)
        .map(|k| {
            let s = k as f64 / (points - 1) as f64;
            result.z0 + (result.zeta - result.z0) * s
        })
        .collect();
    let mut distance_margin = f64::INFINITY;
    let mut pseudo_distance_margin = f64::INFINITY;
    for zj in b.zeros() {
        let base = (1.0 - d) * (result.zeta - zj).norm();
        for &z in &samples {
            distance_margin = distance_margin.min((z - zj).norm() - base);
            pseudo_distance_margin = pseudo_distance_margin.min((1.0 - zj.conj() * z).norm() - base);
        }
    }
    let q = (1.0 - d) * (1.0 - d);
    let modulus_margin = b.evaluate(result.z0)?.norm() - (1.0 - d * result.delta / q);
    Ok(ProofChain { distance_margin, pseudo_distance_margin, modulus_margin })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blaschke::RadialLaw;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bound_rationals() {
        assert!((guaranteed_bound(1.0 / 7.0, 1.0) - 319.0 / 4536.0).abs() < 1e-15);
        assert!((guaranteed_bound(1.0 / 8.0, 1.0) - 1353.0 / 19208.0).abs() < 1e-15);
        assert!(guaranteed_bound(1.0 / 7.0, 1.0) > 0.0703);
        assert!(guaranteed_bound(1.0 / 8.0, 1.0) > 0.0703);
    }

    #[test]
    fn identity_map() {
        let b = BlaschkeProduct::monomial(1).unwrap();
        let zeta = select_zeta(&b, DEFAULT_SAMPLES).unwrap();
        assert_eq!(zeta, c(1.0, 0.0));
        assert_eq!(compute_delta(&b, zeta).unwrap(), 1.0);
        let r = construct(&b, zeta, 1.0, DEFAULT_D).unwrap();
        assert!((r.z0 - c(6.0 / 7.0, 0.0)).norm() < 1e-15);
        assert!((r.actual_value - 13.0 / 49.0).abs() < 1e-14);
        assert!(r.certified());
    }

    #[test]
    fn zeta_for_single_zero() {
        let b = BlaschkeProduct::from_zeros(alloc::vec![c(0.5, 0.0)]).unwrap();
        let zeta = select_zeta(&b, DEFAULT_SAMPLES).unwrap();
        assert!((zeta - c(1.0, 0.0)).norm() < 1e-9);
        assert_eq!(compute_delta(&b, c(1.0, 0.0)).unwrap(), 1.0);
        let b = BlaschkeProduct::from_zeros(alloc::vec![c(0.0, 0.5)]).unwrap();
        let zeta = select_zeta(&b, DEFAULT_SAMPLES).unwrap();
        assert!((zeta - c(0.0, 1.0)).norm() < 1e-9);
    }

    #[test]
    fn monomials_pick_one() {
        for n in [2, 5, 9] {
            let b = BlaschkeProduct::monomial(n).unwrap();
            assert_eq!(select_zeta(&b, DEFAULT_SAMPLES).unwrap(), c(1.0, 0.0));
        }
    }

    #[test]
    fn few_samples_rejected() {
        let b = BlaschkeProduct::monomial(2).unwrap();
        assert!(select_zeta(&b, 63).is_err());
    }

    #[test]
    fn delta_is_one_at_the_maximum() {
        for seed in 0..40 {
            let law = if seed % 2 == 0 {
                RadialLaw::UniformDisk
            } else {
                RadialLaw::BoundaryConcentrated { decades: 3.0 }
            };
            let b = BlaschkeProduct::random(1 + (seed as usize % 10), seed, law).unwrap();
            let zeta = select_zeta(&b, DEFAULT_SAMPLES).unwrap();
            assert_eq!(compute_delta(&b, zeta).unwrap(), 1.0, "seed {seed}");
        }
    }

    #[test]
    fn optimal_d_range() {
        let (d, bound) = optimal_d(1.0);
        assert!(d > 0.13 && d < 0.15, "{d}");
        assert!(bound > guaranteed_bound(1.0 / 7.0, 1.0));
        let mut prev = 0.0;
        for k in 1..=10 {
            let (_, v) = optimal_d(k as f64 / 10.0);
            assert!(v >= prev);
            prev = v;
        }
        let (d_half, half) = optimal_d(0.5);
        assert!(half >= guaranteed_bound(d_half, 0.5) - 1e-15);
        assert!(half >= 0.5 * guaranteed_bound(1.0 / 7.0, 1.0));
    }

    #[test]
    fn proof_chain_on_random_products() {
        for seed in 0..30 {
            let b = BlaschkeProduct::random(1 + (seed as usize % 12), seed, RadialLaw::UniformDisk).unwrap();
            let r = certify(&b, DEFAULT_SAMPLES, DEFAULT_D).unwrap();
            assert!(r.certified());
            assert!(r.actual_value >= 0.07 * r.delta - 1e-12);
            assert!(proof_chain(&b, &r, 20).unwrap().holds(1e-12));
        }
    }

    #[test]
    fn construct_rejects_bad_parameters() {
        let b = BlaschkeProduct::monomial(1).unwrap();
        assert!(construct(&b, c(1.0, 0.0), 0.0, 0.1).is_err());
        assert!(construct(&b, c(1.0, 0.0), 1.0, 1.0).is_err());
        assert!(construct(&b, c(0.5, 0.0), 1.0, 0.1).is_err());
    }
}
