//! Gauss–Legendre rules, plain and adaptive, for real and complex line integrals.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::math;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// `n`-point rule on `[-1, 1]`; nodes from Newton iteration on the three-term recurrence.
    pub fn new(n: usize) -> Self {
        let n = n.max(1);
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = math::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            nodes.push(x);
            weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        sum * half
    }

    /// `∫ f(t) dt` along the straight segment from `a` to `b` in the complex plane.
    pub fn integrate_segment<F: FnMut(Complex64) -> Complex64>(
        &self,
        mut f: F,
        a: Complex64,
        b: Complex64,
    ) -> Complex64 {
        let half = (b - a) * 0.5;
        let mid = (a + b) * 0.5;
        let mut sum = Complex64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += f(mid + half * *x) * *w;
        }
        sum * half
    }
}

/// `(P_n(x), P_n'(x))`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Adaptive bisection over a complex segment with a fixed Gauss–Legendre panel rule.
#[derive(Debug, Clone)]
pub struct AdaptiveSegment {
    rule: GaussLegendre,
    pub abs_tolerance: f64,
    pub max_depth: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveOutcome {
    pub value: Complex64,
    pub panels: usize,
    /// False when some panel hit the depth limit before meeting the tolerance.
    pub converged: bool,
}

impl AdaptiveSegment {
    pub fn new(points: usize, abs_tolerance: f64, max_depth: usize) -> Self {
        AdaptiveSegment { rule: GaussLegendre::new(points), abs_tolerance, max_depth }
    }

    pub fn integrate<F: FnMut(Complex64) -> Complex64>(
        &self,
        mut f: F,
        a: Complex64,
        b: Complex64,
    ) -> AdaptiveOutcome {
        let whole = self.rule.integrate_segment(&mut f, a, b);
        let mut outcome = AdaptiveOutcome { value: Complex64::new(0.0, 0.0), panels: 0, converged: true };
        self.recurse(&mut f, a, b, whole, self.abs_tolerance, 0, &mut outcome);
        outcome
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse<F: FnMut(Complex64) -> Complex64>(
        &self,
        f: &mut F,
        a: Complex64,
        b: Complex64,
        whole: Complex64,
        tol: f64,
        depth: usize,
        out: &mut AdaptiveOutcome,
    ) {
        let mid = (a + b) * 0.5;
        let left = self.rule.integrate_segment(&mut *f, a, mid);
        let right = self.rule.integrate_segment(&mut *f, mid, b);
        let refined = left + right;
        if (refined - whole).norm() <= tol {
            out.value += refined;
            out.panels += 2;
            return;
        }
        if depth >= self.max_depth {
            out.value += refined;
            out.panels += 2;
            out.converged = false;
            return;
        }
        self.recurse(f, a, mid, left, 0.5 * tol, depth + 1, out);
        self.recurse(f, mid, b, right, 0.5 * tol, depth + 1, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 16, 64, 256, 512] {
            let rule = GaussLegendre::new(n);
            let s: f64 = rule.weights().iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n = {n}: {s}");
        }
    }

    #[test]
    fn exact_for_polynomials() {
        let rule = GaussLegendre::new(6);
        // degree 11 is integrated exactly by 6 points
        let v = rule.integrate(|x| x.powi(10) + 3.0 * x.powi(11), -1.0, 1.0);
        assert!((v - 2.0 / 11.0).abs() < 1e-14);
    }

    #[test]
    fn complex_segment_integral_of_inverse() {
        // ∫ dz/z over the upper half of the unit circle as two chords versus log
        let rule = AdaptiveSegment::new(20, 1e-14, 40);
        let a = Complex64::new(1.0, 0.0);
        let m = Complex64::new(0.0, 1.0);
        let b = Complex64::new(-1.0, 0.0);
        let v = rule.integrate(|z| z.inv(), a, m).value + rule.integrate(|z| z.inv(), m, b).value;
        assert!((v - Complex64::new(0.0, PI)).norm() < 1e-13);
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let rule = AdaptiveSegment::new(20, 1e-12, 60);
        let out = rule.integrate(
            |t| Complex64::new(1.0 / t.re.sqrt(), 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        );
        assert!((out.value.re - 2.0).abs() < 1e-8, "{}", out.value);
    }
}
