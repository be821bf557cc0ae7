//! Conformal radius of the two-sheeted surface glued from a slit disk and half an annulus.
//!
//! The upper half-plane is mapped onto the surface by `w = e^{f(z)}` with
//!
//! ```text
//! f(z) = -2 ∫_{-1}^{z} √(t-d) / √((t-c)(t²-1)) dt,   1 < c < d,
//! ```
//!
//! which sends `H` onto the union of the half-strip `{Re w < 0, 0 < Im w < 2π}` and the
//! rectangle `{log a < Re w < 0, 0 < Im w < 3π}`. The prevertices `c, d` solve
//!
//! ```text
//! ∫_{-1}^{1} √(d-t) dt / √((c-t)(1-t²)) = 3π/2,   ∫_{1}^{c} √(d-t) dt / √((c-t)(t²-1)) = -log(a)/2.
//! ```
//!
//! Both integrals have inverse-square-root singularities at their ends, removed by the cosine
//! substitution `t = m ∓ h cos θ` (the Gauss–Chebyshev change of variables). The conformal radius
//! at `e^{f(z)}` is `2 Im z |(e^f)'(z)| = 4 Im z |e^{f(z)}| √|z-d| / √|(z-c)(z²-1)|`.
//!
//! The integrand is taken as the product of principal square roots of `t-d`, `t-c`, `t-1`, `t+1`.
//! Each factor is analytic in the open upper half-plane and extends continuously to the real
//! axis from above, and the product is positive for real `t > d`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::blaschke::check_finite;
use crate::error::{Error, Result};
use crate::math;
use crate::optimize::{nelder_mead_2d, SimplexOptions};
use crate::quadrature::{AdaptiveSegment, GaussLegendre};

pub const DEFAULT_NODES: usize = 256;
/// Clearance of contour corners from the prevertices `-1, 1, c, d`.
pub const CONTOUR_CLEARANCE: f64 = 1e-3;
/// The multiplier in front of the integral; fixed by the width `2π` of the half-strip.
pub const SCALE: f64 = 2.0;

/// `∫_{-1}^{1} √(d-t)/√((c-t)(1-t²)) dt` and `∫_{1}^{c} √(d-t)/√((c-t)(t²-1)) dt`.
pub fn parameter_integrals(c: f64, d: f64, nodes: usize) -> Result<(f64, f64)> {
    check_cd(c, d)?;
    if nodes < 16 {
        return Err(Error::InvalidInput(format!("need at least 16 nodes, got {nodes}")));
    }
    let rule = GaussLegendre::new(nodes);
    Ok((integral_across(&rule, c, d), integral_gap(&rule, c, d)))
}

fn check_cd(c: f64, d: f64) -> Result<()> {
    if !(c.is_finite() && d.is_finite() && c > 1.0 && d > c) {
        return Err(Error::InvalidInput(format!("parameters must satisfy 1 < c < d, got c = {c}, d = {d}")));
    }
    Ok(())
}

/// `t = cos θ` on `[-1, 1]`: `∫_0^π √(d - cos θ)/√(c - cos θ) dθ`.
fn integral_across(rule: &GaussLegendre, c: f64, d: f64) -> f64 {
    rule.integrate(
        |theta| {
            let t = math::cos(theta);
            math::sqrt((d - t) / (c - t))
        },
        0.0,
        PI,
    )
}

/// `t = (1+c)/2 - (c-1)/2 cos θ` on `[1, c]`: `∫_0^π √(d-t)/√(t+1) dθ`.
fn integral_gap(rule: &GaussLegendre, c: f64, d: f64) -> f64 {
    let mid = 0.5 * (1.0 + c);
    let half = 0.5 * (c - 1.0);
    rule.integrate(
        |theta| {
            let t = mid - half * math::cos(theta);
            math::sqrt((d - t) / (t + 1.0))
        },
        0.0,
        PI,
    )
}

/// `t = (c+d)/2 + (d-c)/2 cos θ` on `[c, d]`: `∫_c^d √(d-t)/√((t-c)(t²-1)) dt = ∫_0^π (d-t)/√(t²-1) dθ`.
fn integral_drop(rule: &GaussLegendre, c: f64, d: f64) -> f64 {
    let mid = 0.5 * (c + d);
    let half = 0.5 * (d - c);
    rule.integrate(
        |theta| {
            let t = mid + half * math::cos(theta);
            (d - t) / math::sqrt(t * t - 1.0)
        },
        0.0,
        PI,
    )
}

/// Rows of `(nodes, I₁, I₂)`.
pub fn convergence_table(c: f64, d: f64, nodes: &[usize]) -> Result<Vec<(usize, f64, f64)>> {
    nodes.iter().map(|&n| parameter_integrals(c, d, n).map(|(i1, i2)| (n, i1, i2))).collect()
}

/// Largest `|I(2N) - I(N)|` over both parameter integrals.
pub fn node_doubling_difference(c: f64, d: f64, nodes: usize) -> Result<f64> {
    let (a1, a2) = parameter_integrals(c, d, nodes)?;
    let (b1, b2) = parameter_integrals(c, d, 2 * nodes)?;
    Ok((a1 - b1).abs().max((a2 - b2).abs()))
}

fn residuals(c: f64, d: f64, a: f64, rule: &GaussLegendre) -> [f64; 2] {
    [integral_across(rule, c, d) - 1.5 * PI, integral_gap(rule, c, d) + 0.5 * math::ln(a)]
}

/// Central-difference Jacobian of `(I₁, I₂)` with respect to `(c, d)`.
pub fn parameter_jacobian(c: f64, d: f64, nodes: usize) -> Result<[[f64; 2]; 2]> {
    check_cd(c, d)?;
    let rule = GaussLegendre::new(nodes);
    Ok(jacobian(c, d, &rule))
}

fn jacobian(c: f64, d: f64, rule: &GaussLegendre) -> [[f64; 2]; 2] {
    let hc = 1e-6 * c.abs().max(1.0);
    let hd = 1e-6 * d.abs().max(1.0);
    // keep the stencil inside 1 < c < d
    let hc = hc.min(0.5 * (c - 1.0)).min(0.25 * (d - c));
    let hd = hd.min(0.25 * (d - c));
    let f = |c: f64, d: f64| [integral_across(rule, c, d), integral_gap(rule, c, d)];
    let (pc, mc) = (f(c + hc, d), f(c - hc, d));
    let (pd, md) = (f(c, d + hd), f(c, d - hd));
    [
        [(pc[0] - mc[0]) / (2.0 * hc), (pd[0] - md[0]) / (2.0 * hd)],
        [(pc[1] - mc[1]) / (2.0 * hc), (pd[1] - md[1]) / (2.0 * hd)],
    ]
}

/// Ratio of singular values of a 2×2 matrix.
pub fn condition_number(m: [[f64; 2]; 2]) -> f64 {
    let (a, b, c, d) = (m[0][0], m[0][1], m[1][0], m[1][1]);
    let s1 = a * a + b * b + c * c + d * d;
    let det = a * d - b * c;
    let disc = math::sqrt((s1 * s1 - 4.0 * det * det).max(0.0));
    let big = math::sqrt(0.5 * (s1 + disc));
    let small = math::sqrt((0.5 * (s1 - disc)).max(0.0));
    if small == 0.0 {
        f64::INFINITY
    } else {
        big / small
    }
}

pub const DEFAULT_START: (f64, f64) = (1.1, 1.8);
pub const FALLBACK_START: (f64, f64) = (1.5, 3.0);
const MAX_NEWTON: usize = 100;

/// Solves the parameter system from the default start, retrying from the fallback start.
pub fn solve_parameters(a: f64, nodes: usize) -> Result<(f64, f64)> {
    solve_parameters_from(a, nodes, DEFAULT_START)
        .or_else(|_| solve_parameters_from(a, nodes, FALLBACK_START))
}

/// Damped Newton with a finite-difference Jacobian and Armijo backtracking.
pub fn solve_parameters_from(a: f64, nodes: usize, start: (f64, f64)) -> Result<(f64, f64)> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::InvalidInput(format!("slit endpoint a = {a} not in (0, 1)")));
    }
    check_cd(start.0, start.1)?;
    let rule = GaussLegendre::new(nodes.max(16));
    let (mut c, mut d) = start;
    let mut r = residuals(c, d, a, &rule);
    for _ in 0..MAX_NEWTON {
        let norm = math::hypot(r[0], r[1]);
        if norm < 1e-13 {
            return Ok((c, d));
        }
        let j = jacobian(c, d, &rule);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let dc = -(j[1][1] * r[0] - j[0][1] * r[1]) / det;
        let dd = -(-j[1][0] * r[0] + j[0][0] * r[1]) / det;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let (nc, nd) = (c + lambda * dc, d + lambda * dd);
            if nc > 1.0 && nd > nc {
                let nr = residuals(nc, nd, a, &rule);
                let new_norm = math::hypot(nr[0], nr[1]);
                if new_norm <= (1.0 - 1e-4 * lambda) * norm {
                    c = nc;
                    d = nd;
                    r = nr;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            // no decrease is possible at rounding level
            if norm < 1e-10 {
                return Ok((c, d));
            }
            break;
        }
    }
    if math::hypot(r[0], r[1]) < 1e-12 {
        return Ok((c, d));
    }
    Err(Error::NonConvergence { what: "prevertex solve", iterations: MAX_NEWTON, residuals: r })
}

/// Solved prevertices for a given slit endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceParameters {
    pub a: f64,
    pub c: f64,
    pub d: f64,
    pub nodes: usize,
}

impl SurfaceParameters {
    pub fn solve(a: f64, nodes: usize) -> Result<Self> {
        let (c, d) = solve_parameters(a, nodes)?;
        Ok(SurfaceParameters { a, c, d, nodes })
    }

    /// Residuals `(I₁ - 3π/2, I₂ + log(a)/2)`.
    pub fn residuals(&self) -> Result<[f64; 2]> {
        let (i1, i2) = parameter_integrals(self.c, self.d, self.nodes)?;
        Ok([i1 - 1.5 * PI, i2 + 0.5 * math::ln(self.a)])
    }

    fn prevertices(&self) -> [f64; 4] {
        [-1.0, 1.0, self.c, self.d]
    }
}

/// `f'(t) = -2 √(t-d) / (√(t-c) √(t-1) √(t+1))`, principal roots.
#[inline]
fn integrand(t: Complex64, c: f64, d: f64) -> Complex64 {
    let t = upper(t);
    -SCALE * (t - d).sqrt() / ((t - c).sqrt() * (t - 1.0).sqrt() * (t + 1.0).sqrt())
}

/// Forces `Im t = +0` on the real axis so that principal roots take their upper limits.
#[inline]
fn upper(t: Complex64) -> Complex64 {
    if t.im <= 0.0 {
        Complex64::new(t.re, 0.0)
    } else {
        t
    }
}

/// `f'(t) dt` on `t = -1 + i v²`, `dt = 2iv dv`, with the `√(t+1) = v e^{iπ/4}` factor cancelled.
#[inline]
fn regularized_start(v: f64, c: f64, d: f64) -> Complex64 {
    let t = Complex64::new(-1.0, v * v);
    let jac = Complex64::new(0.0, 2.0) * math::cis(-FRAC_PI_4);
    -SCALE * (t - d).sqrt() / ((t - c).sqrt() * (t - 1.0).sqrt()) * jac
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Contour {
    /// `-1 → -1 + iH → Re z + iH → z` with `H = max(1, Im z)`.
    Standard,
    /// `-1 → -1 + i/2 → Re z + 1/4 + i/2 → z`.
    Offset,
}

fn quadrature() -> AdaptiveSegment {
    AdaptiveSegment::new(20, 1e-13, 48)
}

/// `f(z)` by integration along `contour`.
pub fn map_f_along(z: Complex64, params: &SurfaceParameters, contour: Contour) -> Result<Complex64> {
    check_finite(z, "half-plane point")?;
    if z.im < 0.0 {
        return Err(Error::Domain(format!("{z} is below the real axis")));
    }
    if (z - Complex64::new(-1.0, 0.0)).norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    for b in params.prevertices() {
        if (z - b).norm() < 1e-12 {
            return Err(Error::Singularity(format!("{z} is the prevertex {b}")));
        }
    }
    let (rise, corners) = match contour {
        Contour::Standard => {
            let h = z.im.max(1.0);
            (h, [Complex64::new(-1.0, h), Complex64::new(z.re, h)])
        }
        Contour::Offset => (0.5, [Complex64::new(-1.0, 0.5), Complex64::new(z.re + 0.25, 0.5)]),
    };
    for corner in corners {
        for b in params.prevertices() {
            if (corner - b).norm() < CONTOUR_CLEARANCE {
                return Err(Error::Path(format!("corner {corner} within clearance of prevertex {b}")));
            }
        }
    }
    let (c, d) = (params.c, params.d);
    let q = quadrature();
    let first = q.integrate(
        |v| Complex64::new(regularized_start(v.re, c, d).re, regularized_start(v.re, c, d).im),
        Complex64::new(0.0, 0.0),
        Complex64::new(math::sqrt(rise), 0.0),
    );
    let f = |t: Complex64| integrand(t, c, d);
    let second = q.integrate(f, corners[0], corners[1]);
    let third = q.integrate(f, corners[1], z);
    Ok(first.value + second.value + third.value)
}

pub fn map_f(z: Complex64, params: &SurfaceParameters) -> Result<Complex64> {
    map_f_along(z, params, Contour::Standard)
}

/// `4 Im z |e^{f(z)}| √|z-d| / √|(z-c)(z²-1)|`.
pub fn conformal_radius_at(z: Complex64, params: &SurfaceParameters) -> Result<f64> {
    check_finite(z, "half-plane point")?;
    if !(z.im > 0.0) {
        return Err(Error::Domain(format!("{z} is not in the open upper half-plane")));
    }
    let f = map_f(z, params)?;
    Ok(radius_from_value(z, f, params))
}

fn radius_from_value(z: Complex64, f: Complex64, params: &SurfaceParameters) -> f64 {
    let num = math::sqrt((z - params.d).norm());
    let den = math::sqrt(((z - params.c) * (z * z - 1.0)).norm());
    2.0 * SCALE * z.im * math::exp(f.re) * num / den
}

/// Side lengths of the image polygon, from real-axis integrals and the strip width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    /// `∫_{-1}^{1} |f'|`; the rectangle height `3π`.
    pub across: f64,
    /// `∫_{1}^{c} |f'|`; the rectangle width `-log a`.
    pub gap: f64,
    /// `∫_{c}^{d} |f'|`; the step `3π - 2π = π` between rectangle and strip.
    pub drop: f64,
    /// `Im f(x > d) - Im f(x < -1)`; the strip width `2π`.
    pub strip_width: f64,
}

pub fn geometry(params: &SurfaceParameters) -> Result<Geometry> {
    let rule = GaussLegendre::new(params.nodes.max(16));
    let (c, d) = (params.c, params.d);
    let right = map_f(Complex64::new(d + 1.0, 0.0), params)?;
    let left = map_f(Complex64::new(-2.0, 0.0), params)?;
    Ok(Geometry {
        across: SCALE * integral_across(&rule, c, d),
        gap: SCALE * integral_gap(&rule, c, d),
        drop: SCALE * integral_drop(&rule, c, d),
        strip_width: right.im - left.im,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaximizeOptions {
    pub starts: Vec<Complex64>,
    pub simplex: SimplexOptions,
}

/// The published point plus a coarse grid `Re z ∈ {-1.5, -1, …, 2.5}`, `Im z ∈ {0.2, 0.5, 1}`.
pub fn default_starts() -> Vec<Complex64> {
    let (x, y) = crate::reference::R0_POINT;
    let mut starts = alloc::vec![Complex64::new(x, y)];
    for i in 0..9 {
        for &im in &[0.2, 0.5, 1.0] {
            starts.push(Complex64::new(-1.5 + 0.5 * i as f64, im));
        }
    }
    starts
}

impl Default for MaximizeOptions {
    fn default() -> Self {
        MaximizeOptions {
            starts: default_starts(),
            simplex: SimplexOptions { max_iterations: 400, f_tolerance: 1e-13, x_tolerance: 1e-9 },
        }
    }
}

/// Multistart maximization of the conformal radius over the upper half-plane.
pub fn maximize_radius(params: &SurfaceParameters, options: &MaximizeOptions) -> Result<(Complex64, f64)> {
    let objective = |p: [f64; 2]| {
        if p[1] <= 1e-9 {
            return f64::INFINITY;
        }
        match conformal_radius_at(Complex64::new(p[0], p[1]), params) {
            Ok(r) if r.is_finite() => -r,
            _ => f64::INFINITY,
        }
    };
    let mut best: Option<(Complex64, f64)> = None;
    for start in &options.starts {
        let step = 0.25 * start.im.min(0.4);
        let res = nelder_mead_2d(objective, [start.re, start.im], step, &options.simplex);
        if !res.value.is_finite() {
            continue;
        }
        let z = Complex64::new(res.point[0], res.point[1]);
        let value = conformal_radius_at(z, params)?;
        let better = match best {
            None => true,
            Some((bz, bv)) => value > bv || (value == bv && (z.re, z.im) < (bz.re, bz.im)),
        };
        if better {
            best = Some((z, value));
        }
    }
    best.ok_or_else(|| Error::NoSolution("no start produced a finite radius".to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceSolution {
    pub a: f64,
    pub c: f64,
    pub d: f64,
    pub r0: f64,
    pub argmax_z: Complex64,
    pub quadrature_nodes: usize,
}

impl SurfaceSolution {
    pub fn parameters(&self) -> SurfaceParameters {
        SurfaceParameters { a: self.a, c: self.c, d: self.d, nodes: self.quadrature_nodes }
    }
}

/// Solves the prevertices for `a` and maximizes the radius.
pub fn solve_surface(a: f64, nodes: usize, options: &MaximizeOptions) -> Result<SurfaceSolution> {
    let params = SurfaceParameters::solve(a, nodes)?;
    let (argmax_z, r0) = maximize_radius(&params, options)?;
    Ok(SurfaceSolution { a, c: params.c, d: params.d, r0, argmax_z, quadrature_nodes: nodes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;

    fn params() -> SurfaceParameters {
        SurfaceParameters::solve(reference::A, DEFAULT_NODES).unwrap()
    }

    #[test]
    fn published_prevertices_satisfy_the_system() {
        let (i1, i2) = parameter_integrals(1.098259, 1.766556, DEFAULT_NODES).unwrap();
        assert!((i1 - 1.5 * PI).abs() < 1e-4, "{i1}");
        assert!((i2 - reference::HALF_NEG_LOG_A).abs() < 1e-4, "{i2}");
    }

    #[test]
    fn parameter_integrals_reject_bad_input() {
        assert!(parameter_integrals(1.0, 2.0, 64).is_err());
        assert!(parameter_integrals(1.5, 1.4, 64).is_err());
        assert!(parameter_integrals(1.1, 1.8, 8).is_err());
    }

    #[test]
    fn node_doubling_converges() {
        assert!(node_doubling_difference(1.098259, 1.766556, 256).unwrap() < 1e-10);
    }

    #[test]
    fn solve_reproduces_published_values() {
        let p = params();
        assert!((p.c - reference::C.value).abs() < 1e-4);
        assert!((p.d - reference::D.value).abs() < 1e-4);
        let r = p.residuals().unwrap();
        assert!(r[0].abs() < 1e-9 && r[1].abs() < 1e-9);
        let (c2, d2) = solve_parameters_from(reference::A, DEFAULT_NODES, FALLBACK_START).unwrap();
        assert!((c2 - p.c).abs() < 1e-10 && (d2 - p.d).abs() < 1e-10);
    }

    #[test]
    fn jacobian_is_nonsingular() {
        let p = params();
        let j = parameter_jacobian(p.c, p.d, p.nodes).unwrap();
        let k = condition_number(j);
        assert!(k.is_finite() && k < 1e6, "{k}");
    }

    #[test]
    fn map_base_point_and_height_range() {
        let p = params();
        assert_eq!(map_f(Complex64::new(-1.0, 0.0), &p).unwrap(), Complex64::new(0.0, 0.0));
        for i in 0..12 {
            for j in 1..6 {
                let z = Complex64::new(-2.0 + 0.4 * i as f64, 0.3 * j as f64);
                let f = map_f(z, &p).unwrap();
                assert!(f.im >= -1e-6 && f.im <= 3.0 * PI + 1e-6, "{z} -> {f}");
            }
        }
    }

    #[test]
    fn contours_agree() {
        let p = params();
        for z in [
            Complex64::new(-0.0205, 0.3659),
            Complex64::new(0.5, 0.05),
            Complex64::new(1.5, 0.7),
            Complex64::new(-3.0, 0.2),
            Complex64::new(3.0, 2.0),
        ] {
            let a = map_f_along(z, &p, Contour::Standard).unwrap();
            let b = map_f_along(z, &p, Contour::Offset).unwrap();
            assert!((a - b).norm() < 1e-8, "{z}: {a} vs {b}");
        }
    }

    #[test]
    fn logarithmic_growth_at_infinity() {
        let p = params();
        let dir = math::cis(PI / 3.0);
        let s3 = map_f(dir * 1e3, &p).unwrap() + 2.0 * (dir * 1e3).ln();
        let s4 = map_f(dir * 1e4, &p).unwrap() + 2.0 * (dir * 1e4).ln();
        assert!((s3 - s4).norm() < 1e-2, "{s3} {s4}");
        assert!(s4.norm() < 10.0);
    }

    #[test]
    fn polygon_geometry() {
        let p = params();
        let g = geometry(&p).unwrap();
        assert!((g.across - 3.0 * PI).abs() < 1e-6);
        assert!((g.gap + math::ln(p.a)).abs() < 1e-6);
        assert!((g.drop - PI).abs() < 1e-6);
        assert!((g.strip_width - 2.0 * PI).abs() < 1e-6);
    }

    #[test]
    fn published_radius() {
        let p = params();
        let (x, y) = reference::R0_POINT;
        let r = conformal_radius_at(Complex64::new(x, y), &p).unwrap();
        assert!((r - reference::R0.value).abs() < 1e-4, "{r}");
        assert!(conformal_radius_at(Complex64::new(0.0, 1e-8), &p).unwrap() < 1e-6);
        assert!(conformal_radius_at(Complex64::new(0.0, 0.0), &p).is_err());
    }
}
