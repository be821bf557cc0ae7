//! Maximal conformal radius of the disk slit along `[a, 1]`.
//!
//! With `h` the conformal map of the lower half-plane onto the slit disk, the radius at `h(-ix)`
//! is `g(x) = 2x|h'(-ix)|`. Its critical points satisfy the cubic
//! `ψ(s) = s³ - (2-a)s² + (2a-1)s - a = 0` in `s = e^{2t}`, `x = sinh t`, which has exactly one
//! root in `(1, 1+√2]`. The maximal radius in terms of that root is
//! `4 s (1-a²)/(s-a)² · (s-1)/(s+1)`.
//!
//! Conversely, eliminating `a` between the cubic and the radius gives
//! `a(s) = s (2s - (s²-1)) / (2s + (s²-1))`, so a prescribed radius fixes `s` and then `a`.

use alloc::format;

use core::f64::consts::SQRT_2;

use num_complex::Complex64;

use crate::blaschke::check_finite;
use crate::error::{Error, Result};
use crate::math;
use crate::optimize::bisect;

/// Upper end of the root interval, `1 + √2`.
pub const S_MAX: f64 = 1.0 + SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlitDiskSolution {
    pub a: f64,
    pub s0: f64,
    pub x0: f64,
    pub max_radius: f64,
}

fn check_a(a: f64) -> Result<()> {
    if !(0.0..1.0).contains(&a) {
        return Err(Error::InvalidInput(format!("slit endpoint a = {a} not in [0, 1)")));
    }
    Ok(())
}

/// `√(x²+1) - x`, computed without cancellation.
fn joukowski_gap(x: f64) -> f64 {
    1.0 / (math::sqrt(x * x + 1.0) + x)
}

/// `g(x) = 4(1-a²) x q² / (√(x²+1) (1 - a q²)²)` with `q = √(x²+1) - x`.
pub fn g_profile(x: f64, a: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("profile needs x > 0, got {x}")));
    }
    check_a(a)?;
    let q = joukowski_gap(x);
    let q2 = q * q;
    let root = math::sqrt(x * x + 1.0);
    let den = 1.0 - a * q2;
    Ok(4.0 * (1.0 - a * a) * x * q2 / (root * den * den))
}

/// `ψ(s) = s³ - (2-a)s² + (2a-1)s - a`.
pub fn psi(s: f64, a: f64) -> f64 {
    ((s - (2.0 - a)) * s + (2.0 * a - 1.0)) * s - a
}

fn psi_prime(s: f64, a: f64) -> f64 {
    (3.0 * s - 2.0 * (2.0 - a)) * s + (2.0 * a - 1.0)
}

/// The unique root of `ψ` in `(1, 1+√2]`: bisection down to a `1e-6` bracket, then Newton.
pub fn solve_cubic(a: f64) -> Result<f64> {
    check_a(a)?;
    let lo_val = psi(1.0, a);
    let hi_val = psi(S_MAX, a);
    // ψ(1) = 2(a-1) < 0, ψ(1+√2) = a((1+√2)² + 2(1+√2) - 1) >= 0
    if !(lo_val < 0.0) {
        return Err(Error::Diagnostic(format!("ψ(1) = {lo_val} is not negative for a = {a}")));
    }
    if a == 0.0 || hi_val.abs() <= 1e-15 {
        return Ok(S_MAX);
    }
    if hi_val < 0.0 {
        return Err(Error::Diagnostic(format!("ψ(1+√2) = {hi_val} is negative for a = {a}")));
    }
    let mut s = bisect(|s| psi(s, a), 1.0, S_MAX, 1e-6)?;
    for _ in 0..50 {
        let step = psi(s, a) / psi_prime(s, a);
        s -= step;
        if step.abs() <= 1e-13 * s {
            break;
        }
    }
    Ok(s)
}

/// `4 s (1-a²)/(s-a)² · (s-1)/(s+1)`.
pub fn radius_from_root(s: f64, a: f64) -> f64 {
    4.0 * s * (1.0 - a * a) / ((s - a) * (s - a)) * (s - 1.0) / (s + 1.0)
}

/// Maximum of the conformal radius of the slit disk and where it is attained.
pub fn max_conformal_radius(a: f64) -> Result<SlitDiskSolution> {
    let s0 = solve_cubic(a)?;
    let x0 = (s0 - 1.0) / (2.0 * math::sqrt(s0));
    Ok(SlitDiskSolution { a, s0, x0, max_radius: radius_from_root(s0, a) })
}

/// `a(s) = s (2s - (s²-1)) / (2s + (s²-1))`.
pub fn a_of_s(s: f64) -> f64 {
    let m = s * s - 1.0;
    s * (2.0 * s - m) / (2.0 * s + m)
}

/// Left side of `s (1-a(s)²)/(s-a(s))² · (s-1)/(s+1) = target`; tends to `1/4` as `s → 1`.
pub fn target_lhs(s: f64) -> f64 {
    if s <= 1.0 {
        return 0.25;
    }
    radius_from_root(s, a_of_s(s)) / 4.0
}

/// Range of targets that [`solve_a_for_target`] accepts.
pub fn attainable_target_range() -> (f64, f64) {
    (target_lhs(S_MAX), 0.25)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetSolution {
    pub s: f64,
    pub a: f64,
}

const MONOTONICITY_GRID: usize = 50;

/// Checks that the left side is strictly decreasing on a 50-point grid of `(1, 1+√2]`.
pub fn check_target_monotonicity() -> Result<()> {
    let mut prev = target_lhs(1.0);
    for k in 1..=MONOTONICITY_GRID {
        let s = 1.0 + SQRT_2 * k as f64 / MONOTONICITY_GRID as f64;
        let v = target_lhs(s);
        if !(v < prev) {
            return Err(Error::Diagnostic(format!("left side not decreasing at s = {s}: {v} after {prev}")));
        }
        prev = v;
    }
    Ok(())
}

/// Solves `target_lhs(s) = target` for `s` on `[1, 1+√2]` by bisection, then returns `a(s)`.
pub fn solve_target(target: f64) -> Result<TargetSolution> {
    let (lo, hi) = attainable_target_range();
    if !(target > lo && target < hi) {
        return Err(Error::NoSolution(format!("target {target} outside the attainable range ({lo}, {hi})")));
    }
    check_target_monotonicity()?;
    let s = bisect(|s| target_lhs(s) - target, 1.0, S_MAX, 1e-15)?;
    Ok(TargetSolution { s, a: a_of_s(s) })
}

/// `a` with `max_conformal_radius(a).max_radius = 4 · target`.
pub fn solve_a_for_target(target: f64) -> Result<f64> {
    solve_target(target).map(|t| t.a)
}

/// Independent route: bisection in `a` on the closed-form maximal radius.
pub fn a_for_radius_by_bisection(radius: f64) -> Result<f64> {
    let f = |a: f64| max_conformal_radius(a).map(|s| s.max_radius - radius).unwrap_or(f64::NAN);
    bisect(f, 0.0, 1.0 - 1e-9, 1e-15)
}

/// `h(w) = (q² + a)/(1 + a q²)` with `q = w - √(w²-1)`, `|q| < 1`, mapping the lower
/// half-plane onto the slit disk.
pub fn slit_disk_map(w: Complex64, a: f64) -> Result<Complex64> {
    check_finite(w, "half-plane point")?;
    check_a(a)?;
    if !(w.im < 0.0) {
        return Err(Error::Domain(format!("{w} is not in the lower half-plane")));
    }
    let root = (w * w - 1.0).sqrt();
    let q = [w - root, w + root]
        .into_iter()
        .find(|q| q.norm() < 1.0)
        .ok_or_else(|| Error::Branch(format!("no branch of √(w²-1) gives |w - √(w²-1)| < 1 at {w}")))?;
    let q2 = q * q;
    Ok((q2 + a) / (1.0 + q2 * a))
}
