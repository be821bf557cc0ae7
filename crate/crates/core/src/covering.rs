//! Branched-covering structure of `B: 𝔻 → 𝔻`.
//!
//! Critical points are the in-disk roots of the numerator `P'Q - PQ'` of `B'`, where
//! `B = λP/Q`. Monodromy is computed by continuing the fiber `B⁻¹(w)` along a lasso around each
//! critical value: a straight arm from the base point, one counterclockwise circle, and back.
//! Continuation is an Euler predictor with a Newton corrector on `B(z) - w(t)` and step halving.
//!
//! With base point `0` the arms run along the radii towards the critical values, so each
//! transposition glues the two sheets that are slit along the same radial segment and the edges
//! form the sheet graph of the covering.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use core::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::math;
use crate::poly::{aberth_roots, Polynomial, RootOptions};

/// Moduli within this distance of the classification threshold are reported as degenerate.
pub const THRESHOLD_TOLERANCE: f64 = 1e-9;
/// Two nonzero critical values whose arguments differ by less than this share a radius.
pub const ANGULAR_TOLERANCE: f64 = 1e-9;
/// Critical values closer than this are treated as one branch point.
const SAME_VALUE: f64 = 1e-9;
const MIN_STEP: f64 = 1e-8;
const COLLISION_DISTANCE: f64 = 1e-10;

/// `P'Q - PQ'` with `P = ∏(z - z_j)`, `Q = ∏(1 - conj(z_j) z)`.
pub fn derivative_numerator(b: &BlaschkeProduct) -> Polynomial {
    let p = Polynomial::from_roots(b.zeros());
    let mut q = Polynomial::new(vec![Complex64::new(1.0, 0.0)]);
    for zj in b.zeros() {
        q = q.mul(&Polynomial::new(vec![Complex64::new(1.0, 0.0), -zj.conj()]));
    }
    p.derivative().mul(&q).sub(&p.mul(&q.derivative()))
}

fn polish(p: &Polynomial, mut z: Complex64) -> Complex64 {
    for _ in 0..8 {
        let (v, d) = p.eval_with_derivative(z);
        if d.norm() == 0.0 || v.norm() == 0.0 {
            break;
        }
        let step = v / d;
        if !(step.re.is_finite() && step.im.is_finite()) {
            break;
        }
        let next = z - step;
        if p.eval(next).norm() >= v.norm() {
            break;
        }
        z = next;
    }
    z
}

/// `B'/B = Σ 1/(z - z_j) + conj(z_j)/(1 - conj(z_j) z)`, its derivative, and the sum of the
/// moduli of the terms (the scale against which a zero of `B'/B` is judged).
fn log_derivative(zeros: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    let mut g = Complex64::new(0.0, 0.0);
    let mut slope = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for zj in zeros {
        let a = (z - zj).inv();
        let c = zj.conj() / (1.0 - zj.conj() * z);
        g += a + c;
        slope += c * c - a * a;
        scale += a.norm() + c.norm();
    }
    (g, slope, scale)
}

/// Aberth iteration on the numerator polynomial with `N'/N` taken from `B'/B`. Near
/// zeros clustered at the circle the polynomial is badly conditioned and its roots can be off by
/// more than the cluster spacing; `B'/B` is not. Roots sitting on a repeated zero of `B` are held
/// fixed since `B'/B` has a pole there.
fn refine_on_log_derivative(zeros: &[Complex64], roots: &mut [Complex64], fixed: &[bool]) {
    for _ in 0..100 {
        let mut moved = 0.0f64;
        for i in 0..roots.len() {
            if fixed[i] {
                continue;
            }
            let z = roots[i];
            // N'/N for the numerator N = (B'/B)·P·Q, evaluated without expanding N
            let (g, slope, _) = log_derivative(zeros, z);
            let mut ratio = slope / g;
            for zj in zeros {
                ratio += (z - zj).inv();
                if zj.norm() > 0.0 {
                    ratio += (z - zj.conj().inv()).inv();
                }
            }
            let newton = ratio.inv();
            let repulsion: Complex64 =
                roots.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, r)| (z - r).inv()).sum();
            let step = newton / (1.0 - newton * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                roots[i] = z - step;
                moved = moved.max(step.norm() / z.norm().max(1e-3));
            }
        }
        if moved <= 4.0 * f64::EPSILON {
            break;
        }
    }
}

/// Relative residual below which a point counts as a zero of `B'/B`.
const LOG_DERIVATIVE_RESIDUAL: f64 = 1e-8;

/// The `n - 1` critical points of `B` in the open disk, with multiplicity.
pub fn critical_points(b: &BlaschkeProduct) -> Result<Vec<Complex64>> {
    let n = b.degree();
    if n < 2 {
        return Err(Error::InvalidInput(format!("degree {n} has no critical points")));
    }
    let numerator = derivative_numerator(b);
    let scale = numerator.scale_factor();
    let roots = aberth_roots(&numerator, &RootOptions::default());
    let zeros = b.zeros();
    let on_zero = |r: Complex64| zeros.iter().any(|zj| (r - zj).norm() < 1e-8);
    let mut all: Vec<Complex64> = roots.roots.into_iter().map(|r| polish(&numerator, r)).collect();
    let fixed: Vec<bool> = all.iter().map(|&r| on_zero(r)).collect();
    refine_on_log_derivative(zeros, &mut all, &fixed);
    let inside: Vec<Complex64> = all.into_iter().filter(|r| r.norm() < 1.0).collect();
    if inside.len() != n - 1 {
        return Err(Error::RootCount { expected: n - 1, found: inside.len() });
    }
    for r in &inside {
        if on_zero(*r) {
            // a repeated zero of B; B'/B has a pole there
            let residual = numerator.eval(*r).norm();
            if residual > 1e-10 * scale {
                return Err(Error::Diagnostic(format!(
                    "critical point {r} has residual {residual:e} (scale {scale:e})"
                )));
            }
        } else {
            let (g, _, terms) = log_derivative(zeros, *r);
            if g.norm() > LOG_DERIVATIVE_RESIDUAL * terms {
                return Err(Error::Diagnostic(format!(
                    "critical point {r} has relative residual {:e}",
                    g.norm() / terms
                )));
            }
        }
    }
    Ok(inside)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseLabel {
    /// Some critical value lies farther than `a` from the origin: a rotated slit disk fits.
    SlitDisk,
    /// All critical values lie inside `|w| < a`: a rotated two-sheeted surface fits.
    SurfaceCase,
    /// On the threshold, or two branch points on one radius.
    Degenerate,
}

impl CaseLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseLabel::SlitDisk => "SLIT_DISK",
            CaseLabel::SurfaceCase => "SURFACE_CASE",
            CaseLabel::Degenerate => "DEGENERATE",
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classification from the critical values alone.
pub fn classify_values(critical_values: &[Complex64], a: f64) -> CaseLabel {
    let max = critical_values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if critical_values.iter().any(|v| (v.norm() - a).abs() <= THRESHOLD_TOLERANCE) {
        return CaseLabel::Degenerate;
    }
    let nonzero: Vec<f64> =
        critical_values.iter().filter(|v| v.norm() > SAME_VALUE).map(|v| v.arg()).collect();
    for i in 0..nonzero.len() {
        for j in i + 1..nonzero.len() {
            let mut gap = (nonzero[i] - nonzero[j]).abs() % TAU;
            if gap > PI {
                gap = TAU - gap;
            }
            if gap < ANGULAR_TOLERANCE {
                return CaseLabel::Degenerate;
            }
        }
    }
    if max > a {
        CaseLabel::SlitDisk
    } else {
        CaseLabel::SurfaceCase
    }
}

pub fn classify(b: &BlaschkeProduct, a: f64) -> Result<CaseLabel> {
    if b.degree() < 2 {
        return Ok(CaseLabel::SurfaceCase);
    }
    let crit = critical_points(b)?;
    let values: Vec<Complex64> = crit.iter().map(|z| b.eval_unchecked(*z)).collect();
    Ok(classify_values(&values, a))
}

/// A permutation of `0..n` in one-line form: `i ↦ images[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(Error::InvalidInput(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    /// Nontrivial cycles, each starting at its smallest element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut next = self.images[start];
            while next != start {
                seen[next] = true;
                cycle.push(next);
                next = self.images[next];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// The swapped pair if this is a transposition.
    pub fn transposition(&self) -> Option<(usize, usize)> {
        let cycles = self.cycles();
        match cycles.as_slice() {
            [c] if c.len() == 2 => Some((c[0], c[1])),
            _ => None,
        }
    }

    /// Cycle notation with 1-based labels, e.g. `(1 3)(2 4 5)`; the identity is `()`.
    pub fn cycle_notation(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return String::from("()");
        }
        let mut s = String::new();
        for c in cycles {
            s.push('(');
            for (k, i) in c.iter().enumerate() {
                if k > 0 {
                    s.push(' ');
                }
                s.push_str(&format!("{}", i + 1));
            }
            s.push(')');
        }
        s
    }

    /// Parses 1-based cycle notation for a permutation of `n` letters.
    pub fn parse_cycles(text: &str, n: usize) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let trimmed = text.trim();
        if trimmed == "()" {
            return Ok(Permutation { images });
        }
        for chunk in trimmed.split(')') {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            let body = chunk
                .strip_prefix('(')
                .ok_or_else(|| Error::InvalidInput(format!("bad cycle notation: {text}")))?;
            let labels: core::result::Result<Vec<usize>, _> =
                body.split_whitespace().map(|t| t.parse::<usize>()).collect();
            let labels = labels.map_err(|_| Error::InvalidInput(format!("bad cycle notation: {text}")))?;
            for (k, &l) in labels.iter().enumerate() {
                let to = labels[(k + 1) % labels.len()];
                if l == 0 || l > n || to == 0 || to > n {
                    return Err(Error::InvalidInput(format!("label out of range in {text}")));
                }
                images[l - 1] = to - 1;
            }
        }
        Permutation::from_images(images)
    }
}

/// True when the group generated by `generators` acts transitively on `0..n`.
pub fn is_transitive(generators: &[Permutation], n: usize) -> bool {
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(i) = queue.pop_front() {
        for g in generators {
            let j = g.apply(i);
            if !seen[j] {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Solutions of `B(z) = w` in the disk, found as roots of `λP - wQ`.
pub fn fiber(b: &BlaschkeProduct, w: Complex64) -> Result<Vec<Complex64>> {
    let p = Polynomial::from_roots(b.zeros()).scale(b.rotation());
    let mut q = Polynomial::new(vec![Complex64::new(1.0, 0.0)]);
    for zj in b.zeros() {
        q = q.mul(&Polynomial::new(vec![Complex64::new(1.0, 0.0), -zj.conj()]));
    }
    let poly = p.sub(&q.scale(w));
    let roots = aberth_roots(&poly, &RootOptions::default());
    let mut out: Vec<Complex64> = roots.roots.into_iter().map(|z| newton_on_level(b, z, w)).collect();
    if out.len() != b.degree() || out.iter().any(|z| z.norm() >= 1.0) {
        return Err(Error::Diagnostic(format!(
            "fiber over {w} has {} points, not all in the disk",
            out.len()
        )));
    }
    out.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    Ok(out)
}

fn newton_on_level(b: &BlaschkeProduct, mut z: Complex64, w: Complex64) -> Complex64 {
    for _ in 0..6 {
        let (v, d) = b.value_and_derivative(z);
        let step = (v - w) / d;
        if !(step.re.is_finite() && step.im.is_finite()) {
            break;
        }
        z -= step;
        if step.norm() < 1e-15 {
            break;
        }
    }
    z
}

/// A path `t ∈ [0, 1] ↦ w(t)` in the target disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathPiece {
    Segment {
        from: Complex64,
        to: Complex64,
    },
    /// One counterclockwise turn around `center` starting at angle `start_angle`.
    Circle {
        center: Complex64,
        radius: f64,
        start_angle: f64,
    },
}

impl PathPiece {
    fn at(&self, t: f64) -> Complex64 {
        match *self {
            PathPiece::Segment { from, to } => from + (to - from) * t,
            PathPiece::Circle { center, radius, start_angle } => {
                center + math::cis(start_angle + TAU * t) * radius
            }
        }
    }

    fn length(&self) -> f64 {
        match *self {
            PathPiece::Segment { from, to } => (to - from).norm(),
            PathPiece::Circle { radius, .. } => TAU * radius,
        }
    }
}

/// Continues every point of `start` (a fiber over `piece.at(0)`) along `piece`.
pub fn track(b: &BlaschkeProduct, start: &[Complex64], piece: &PathPiece) -> Result<Vec<Complex64>> {
    let mut z: Vec<Complex64> = start.to_vec();
    if piece.length() == 0.0 {
        return Ok(z);
    }
    let mut t = 0.0;
    let mut h = (0.02 / piece.length().max(1e-12)).min(1.0 / 16.0);
    'outer: while t < 1.0 {
        if h < MIN_STEP {
            return Err(Error::Continuation(format!("step fell below {MIN_STEP:e} at t = {t} on {piece:?}")));
        }
        let t_next = (t + h).min(1.0);
        let w_now = piece.at(t);
        let w_next = piece.at(t_next);
        let mut next = Vec::with_capacity(z.len());
        for (k, &zk) in z.iter().enumerate() {
            let spacing = z
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, zj)| (zk - zj).norm())
                .fold(1.0 - zk.norm(), f64::min);
            let (_, dk) = b.value_and_derivative(zk);
            let mut cand = zk + (w_next - w_now) / dk;
            let mut ok = false;
            let mut previous = f64::INFINITY;
            for _ in 0..4 {
                let (v, d) = b.value_and_derivative(cand);
                let step = (v - w_next) / d;
                cand -= step;
                let size = step.norm();
                // Converged once the step is far below the spacing, or once it stops shrinking
                // there: that is the evaluation noise, which zeros near the circle amplify.
                let floor = 8.0 * f64::EPSILON * (cand.norm() + 1.0 / d.norm());
                if size <= (1e-9 * spacing).max(floor) || (size <= 1e-6 * spacing && size > 0.25 * previous) {
                    ok = true;
                    break;
                }
                previous = size;
            }
            if !ok || !(cand.re.is_finite() && cand.im.is_finite()) || (cand - zk).norm() > 0.25 * spacing {
                h *= 0.5;
                continue 'outer;
            }
            next.push(cand);
        }
        for i in 0..next.len() {
            for j in i + 1..next.len() {
                if (next[i] - next[j]).norm() < COLLISION_DISTANCE {
                    return Err(Error::Collision(format!(
                        "paths {i} and {j} met at {} (t = {t_next})",
                        next[i]
                    )));
                }
            }
        }
        z = next;
        t = t_next;
        h = (h * 1.5).min(0.25);
    }
    Ok(z)
}

/// Index of the nearest point of `fiber` for each tracked endpoint; must be a bijection.
fn match_fiber(fiber: &[Complex64], ends: &[Complex64]) -> Result<Permutation> {
    let mut images = Vec::with_capacity(ends.len());
    for (i, e) in ends.iter().enumerate() {
        let (j, dist) = fiber
            .iter()
            .enumerate()
            .map(|(j, f)| (j, (e - f).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .ok_or_else(|| Error::Continuation(String::from("empty fiber")))?;
        if dist > 1e-7 {
            return Err(Error::Continuation(format!("path {i} ended {dist:e} away from every fiber point")));
        }
        images.push(j);
    }
    Permutation::from_images(images)
        .map_err(|_| Error::Continuation(String::from("loop endpoints do not form a permutation")))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonodromyLoop {
    pub critical_value: Complex64,
    pub loop_radius: f64,
    pub permutation: Permutation,
}

/// Distinct critical values, sorted by their argument seen from `base`.
pub fn distinct_critical_values(values: &[Complex64], base: Complex64) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::new();
    for v in values {
        if out.iter().all(|u| (u - v).norm() > SAME_VALUE) {
            out.push(*v);
        }
    }
    out.sort_by(|x, y| {
        let ax = math::rem_euclid((x - base).arg(), TAU);
        let ay = math::rem_euclid((y - base).arg(), TAU);
        ax.total_cmp(&ay).then(x.norm().total_cmp(&y.norm()))
    });
    out
}

/// Default base point: `0`, or `a/2` when `0` is itself a critical value.
pub fn default_base_point(critical_values: &[Complex64], a: f64) -> Complex64 {
    if critical_values.iter().any(|v| v.norm() <= SAME_VALUE) {
        Complex64::new(0.5 * a, 0.0)
    } else {
        Complex64::new(0.0, 0.0)
    }
}

/// Fiber permutations of one lasso per distinct critical value. Sheets are labelled by the
/// base fiber sorted by `(Re, Im)`.
pub fn monodromy(
    b: &BlaschkeProduct,
    base_point: Complex64,
    loop_radius_factor: f64,
) -> Result<(Vec<Complex64>, Vec<MonodromyLoop>)> {
    if !(loop_radius_factor > 0.0 && loop_radius_factor < 1.0) {
        return Err(Error::InvalidInput(format!("loop radius factor {loop_radius_factor} not in (0, 1)")));
    }
    let crit = critical_points(b)?;
    let values: Vec<Complex64> = crit.iter().map(|z| b.eval_unchecked(*z)).collect();
    let distinct = distinct_critical_values(&values, base_point);
    for v in &distinct {
        if (v - base_point).norm() <= SAME_VALUE {
            return Err(Error::Degenerate(format!("base point {base_point} is a critical value")));
        }
    }
    let base_fiber = fiber(b, base_point)?;
    let mut loops = Vec::with_capacity(distinct.len());
    for (k, &v) in distinct.iter().enumerate() {
        let nearest_other = distinct
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, u)| (u - v).norm())
            .fold(1.0 - v.norm(), f64::min);
        let arm = base_point - v;
        let radius = (loop_radius_factor * nearest_other).min(arm.norm());
        // the arm must not pass through another branch point
        for (j, u) in distinct.iter().enumerate() {
            if j != k && segment_distance(*u, base_point, v) < ANGULAR_TOLERANCE {
                return Err(Error::Degenerate(format!(
                    "critical value {u} lies on the path from {base_point} to {v}"
                )));
            }
        }
        let direction = arm / arm.norm();
        let foot = v + direction * radius;
        let pieces = [
            PathPiece::Segment { from: base_point, to: foot },
            PathPiece::Circle { center: v, radius, start_angle: direction.arg() },
            PathPiece::Segment { from: foot, to: base_point },
        ];
        let mut current = base_fiber.clone();
        for piece in &pieces {
            current = track(b, &current, piece)?;
        }
        let permutation = match_fiber(&base_fiber, &current)?;
        loops.push(MonodromyLoop { critical_value: v, loop_radius: radius, permutation });
    }
    Ok((base_fiber, loops))
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SheetTree {
    /// `(sheet, sheet, index into the monodromy loops)`.
    pub edges: Vec<(usize, usize, usize)>,
    /// A sheet carrying more than one slit whose neighbours, with at most one exception,
    /// carry a single slit: the second vertex of a longest path.
    pub distinguished_sheet: usize,
    pub longest_path: Vec<usize>,
}

/// Builds the sheet graph from transposition loops and checks that it is a tree.
pub fn sheet_tree(n: usize, loops: &[MonodromyLoop]) -> Result<SheetTree> {
    let mut edges = Vec::with_capacity(loops.len());
    for (k, l) in loops.iter().enumerate() {
        let (i, j) = l.permutation.transposition().ok_or_else(|| {
            Error::Structure(format!(
                "loop {k} gives {} which is not a transposition",
                l.permutation.cycle_notation()
            ))
        })?;
        edges.push((i, j, k));
    }
    if edges.len() + 1 != n {
        return Err(Error::Structure(format!("{} edges for {n} sheets", edges.len())));
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(i, j, _) in &edges {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri == rj {
            return Err(Error::Structure(format!("edge ({}, {}) closes a cycle", i + 1, j + 1)));
        }
        parent[ri] = rj;
    }
    let mut adjacency = vec![Vec::new(); n];
    for &(i, j, _) in &edges {
        adjacency[i].push(j);
        adjacency[j].push(i);
    }
    let (far, _) = bfs_farthest(&adjacency, 0);
    let (other, prev) = bfs_farthest(&adjacency, far);
    let mut path = vec![other];
    let mut cur = other;
    while cur != far {
        cur = prev[cur];
        path.push(cur);
    }
    let distinguished_sheet = if path.len() >= 2 { path[1] } else { path[0] };
    Ok(SheetTree { edges, distinguished_sheet, longest_path: path })
}

fn bfs_farthest(adjacency: &[Vec<usize>], start: usize) -> (usize, Vec<usize>) {
    let n = adjacency.len();
    let mut dist = vec![usize::MAX; n];
    let mut prev = vec![start; n];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    let mut last = start;
    while let Some(i) = queue.pop_front() {
        last = i;
        for &j in &adjacency[i] {
            if dist[j] == usize::MAX {
                dist[j] = dist[i] + 1;
                prev[j] = i;
                queue.push_back(j);
            }
        }
    }
    (last, prev)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyzerOptions {
    pub a: f64,
    pub loop_radius_factor: f64,
    /// Rotate every zero by a tiny random angle when the input is degenerate.
    pub perturb: bool,
    pub perturb_seed: u64,
    pub perturb_magnitude: f64,
}

impl Default for AnalyzerOptions {
    fn default() -> Self {
        AnalyzerOptions {
            a: crate::reference::A,
            loop_radius_factor: 0.25,
            perturb: false,
            perturb_seed: 0,
            perturb_magnitude: 1e-7,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoveringReport {
    /// The product actually analyzed (differs from the input only after perturbation).
    pub product: BlaschkeProduct,
    pub perturbed: bool,
    pub critical_points: Vec<Complex64>,
    pub critical_values: Vec<Complex64>,
    pub max_critical_modulus: f64,
    pub case_label: CaseLabel,
    pub base_point: Complex64,
    pub base_fiber: Vec<Complex64>,
    pub monodromy: Vec<MonodromyLoop>,
    pub transitive: bool,
    pub sheet_tree: Option<SheetTree>,
}

/// Critical points, classification, monodromy and sheet tree in one pass.
///
/// Degenerate inputs get no monodromy unless `options.perturb` is set, in which case every zero
/// is rotated by an independent angle of size at most `perturb_magnitude` and the result is
/// analyzed instead.
pub fn analyze(b: &BlaschkeProduct, options: &AnalyzerOptions) -> Result<CoveringReport> {
    let n = b.degree();
    let mut product = b.clone();
    let mut perturbed = false;
    let (mut crit, mut values) = critical_data(&product)?;
    let mut label = classify_values(&values, options.a);
    if label == CaseLabel::Degenerate && options.perturb {
        let mut rng = ChaCha8Rng::seed_from_u64(options.perturb_seed);
        let zeros = product
            .zeros()
            .iter()
            .map(|z| *z * math::cis(options.perturb_magnitude * (2.0 * rng.gen::<f64>() - 1.0)))
            .collect();
        product = BlaschkeProduct::new(zeros, product.rotation())?;
        perturbed = true;
        (crit, values) = critical_data(&product)?;
        label = classify_values(&values, options.a);
    }
    let max_critical_modulus = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let base_point = default_base_point(&values, options.a);
    let mut report = CoveringReport {
        product: product.clone(),
        perturbed,
        critical_points: crit,
        critical_values: values,
        max_critical_modulus,
        case_label: label,
        base_point,
        base_fiber: Vec::new(),
        monodromy: Vec::new(),
        transitive: n == 1,
        sheet_tree: None,
    };
    if n < 2 || label == CaseLabel::Degenerate {
        return Ok(report);
    }
    let (base_fiber, loops) = monodromy(&product, base_point, options.loop_radius_factor)?;
    let generators: Vec<Permutation> = loops.iter().map(|l| l.permutation.clone()).collect();
    report.transitive = is_transitive(&generators, n);
    if loops.iter().all(|l| l.permutation.transposition().is_some()) {
        report.sheet_tree = Some(sheet_tree(n, &loops)?);
    }
    report.base_fiber = base_fiber;
    report.monodromy = loops;
    Ok(report)
}

fn critical_data(b: &BlaschkeProduct) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    if b.degree() < 2 {
        return Ok((Vec::new(), Vec::new()));
    }
    let crit = critical_points(b)?;
    let values = crit.iter().map(|z| b.eval_unchecked(*z)).collect();
    Ok((crit, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blaschke::RadialLaw;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn square_has_single_critical_point_at_origin() {
        let b = BlaschkeProduct::monomial(2).unwrap();
        let crit = critical_points(&b).unwrap();
        assert_eq!(crit.len(), 1);
        assert!(crit[0].norm() < 1e-12);
    }

    /// `d/dz (z²-1/4)/(1-z²/4)` has numerator `(1-z²/4)·2z + (z²-1/4)·z/2 = z(15/8)`, so the
    /// only critical point is `0` (expanded by hand).
    #[test]
    fn symmetric_pair_critical_point() {
        let b = BlaschkeProduct::from_zeros(vec![c(0.5, 0.0), c(-0.5, 0.0)]).unwrap();
        let num = derivative_numerator(&b);
        let hand = Polynomial::new(vec![c(0.0, 0.0), c(15.0 / 8.0, 0.0)]);
        let diff = num.sub(&hand).trimmed(0.0);
        assert!(diff.scale_factor() < 1e-15, "{:?}", num.coeffs());
        let crit = critical_points(&b).unwrap();
        assert_eq!(crit.len(), 1);
        assert!(crit[0].norm() < 1e-14);
    }

    #[test]
    fn random_products_have_n_minus_one_critical_points() {
        for seed in 0..100 {
            let b = BlaschkeProduct::random(8, seed, RadialLaw::UniformDisk).unwrap();
            let crit = critical_points(&b).unwrap();
            assert_eq!(crit.len(), 7, "seed {seed}");
            for z in crit {
                assert!(b.derivative(z).unwrap().norm() < 1e-8);
            }
        }
    }

    #[test]
    fn classification_examples() {
        let a = crate::reference::A;
        for n in 2..7 {
            assert_eq!(classify(&BlaschkeProduct::monomial(n).unwrap(), a).unwrap(), CaseLabel::SurfaceCase);
        }
        // single critical point 0 with value -0.81
        let b = BlaschkeProduct::from_zeros(vec![c(0.9, 0.0), c(-0.9, 0.0)]).unwrap();
        let crit = critical_points(&b).unwrap();
        assert!((b.eval_unchecked(crit[0]) + 0.81).norm() < 1e-12);
        assert_eq!(classify(&b, a).unwrap(), CaseLabel::SlitDisk);
        let b = BlaschkeProduct::from_zeros(vec![c(0.5, 0.0), c(0.6, 0.0)]).unwrap();
        assert_eq!(classify(&b, a).unwrap(), CaseLabel::SurfaceCase);
        assert_eq!(classify_values(&[c(a, 0.0)], a), CaseLabel::Degenerate);
        assert_eq!(classify_values(&[c(0.3, 0.3), c(0.5, 0.5)], a), CaseLabel::Degenerate);
    }

    #[test]
    fn classification_ignores_post_rotation() {
        let a = crate::reference::A;
        for seed in 0..20 {
            let b = BlaschkeProduct::random(4, seed, RadialLaw::UniformDisk).unwrap();
            let r = b.rotated(1.234 + seed as f64);
            assert_eq!(classify(&b, a).unwrap(), classify(&r, a).unwrap());
        }
    }

    #[test]
    fn square_root_monodromy() {
        let b = BlaschkeProduct::monomial(2).unwrap();
        let report = analyze(&b, &AnalyzerOptions::default()).unwrap();
        assert_eq!(report.monodromy.len(), 1);
        assert_eq!(report.monodromy[0].permutation.transposition(), Some((0, 1)));
        let tree = report.sheet_tree.unwrap();
        assert_eq!(tree.edges, vec![(0, 1, 0)]);
    }

    #[test]
    fn cube_root_monodromy_is_three_cycle() {
        let b = BlaschkeProduct::monomial(3).unwrap();
        let report = analyze(&b, &AnalyzerOptions::default()).unwrap();
        assert_eq!(report.monodromy.len(), 1);
        let cycles = report.monodromy[0].permutation.cycles();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].len(), 3);
        assert!(report.transitive);
        assert!(report.sheet_tree.is_none());
    }

    #[test]
    fn generic_degree_five_gives_transpositions() {
        let b = BlaschkeProduct::random(5, 17, RadialLaw::UniformDisk).unwrap();
        let report = analyze(&b, &AnalyzerOptions::default()).unwrap();
        assert_eq!(report.monodromy.len(), 4);
        assert!(report.monodromy.iter().all(|l| l.permutation.transposition().is_some()));
        assert!(report.transitive);
        let tree = report.sheet_tree.unwrap();
        assert_eq!(tree.edges.len(), 4);
    }

    #[test]
    fn fiber_points_lie_in_the_disk() {
        let b = BlaschkeProduct::random(6, 2, RadialLaw::UniformDisk).unwrap();
        let w = c(0.3, -0.4);
        let f = fiber(&b, w).unwrap();
        assert_eq!(f.len(), 6);
        for z in f {
            assert!((b.eval_unchecked(z) - w).norm() < 1e-12);
        }
    }

    #[test]
    fn permutation_notation_roundtrip() {
        let p = Permutation::from_images(vec![2, 0, 1, 3, 4]).unwrap();
        assert_eq!(p.cycle_notation(), "(1 3 2)");
        assert_eq!(Permutation::parse_cycles("(1 3 2)", 5).unwrap(), p);
        assert_eq!(Permutation::identity(3).cycle_notation(), "()");
        assert!(Permutation::from_images(vec![0, 0]).is_err());
    }

    #[test]
    fn tree_rejects_cycles() {
        let t = |i, j| MonodromyLoop {
            critical_value: c(0.0, 0.0),
            loop_radius: 0.1,
            permutation: {
                let mut im: Vec<usize> = (0..3).collect();
                im.swap(i, j);
                Permutation::from_images(im).unwrap()
            },
        };
        assert!(sheet_tree(3, &[t(0, 1), t(1, 2)]).is_ok());
        assert!(matches!(sheet_tree(3, &[t(0, 1), t(0, 1)]), Err(Error::Structure(_))));
    }
}
