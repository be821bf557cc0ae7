//! Dense complex polynomials and an Aberth–Ehrlich simultaneous root finder.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::math;

/// Coefficients in ascending order: `coeffs[k]` multiplies `z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let coeffs = if coeffs.is_empty() { vec![Complex64::new(0.0, 0.0)] } else { coeffs };
        Polynomial { coeffs }
    }

    /// `∏ (z - r)`.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            coeffs = next;
        }
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Formal degree (length minus one), including vanishing leading coefficients.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// Value and first derivative by Horner's scheme.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Polynomial::new(vec![Complex64::new(0.0, 0.0)]);
        }
        Polynomial { coeffs: self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect() }
    }

    pub fn mul(&self, other: &Polynomial) -> Self {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial { coeffs: out }
    }

    pub fn sub(&self, other: &Polynomial) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        let coeffs = (0..len)
            .map(|k| {
                self.coeffs.get(k).copied().unwrap_or(zero) - other.coeffs.get(k).copied().unwrap_or(zero)
            })
            .collect();
        Polynomial { coeffs }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Polynomial { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Largest coefficient modulus.
    pub fn scale_factor(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drops leading coefficients with modulus below `rel_tol * scale_factor()`.
    pub fn trimmed(&self, rel_tol: f64) -> Self {
        let cutoff = rel_tol * self.scale_factor();
        let mut len = self.coeffs.len();
        while len > 1 && self.coeffs[len - 1].norm() <= cutoff {
            len -= 1;
        }
        Polynomial { coeffs: self.coeffs[..len].to_vec() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    pub max_iterations: usize,
    /// Relative size of the last Aberth correction at which a root is considered settled.
    pub tolerance: f64,
    /// Radius of the initial ring of approximations.
    pub ring_radius: f64,
    /// Seed for the angular jitter of the initial ring.
    pub seed: u64,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions { max_iterations: 200, tolerance: 1e-15, ring_radius: 1.2, seed: 0x5eed }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Roots {
    pub roots: Vec<Complex64>,
    pub iterations: usize,
    pub converged: bool,
}

/// All roots of `p` (after trimming vanishing leading coefficients).
///
/// Exact zero roots, visible as vanishing trailing coefficients, are split off first; the
/// remaining roots are found simultaneously with Aberth corrections and a Gauss–Seidel sweep.
pub fn aberth_roots(p: &Polynomial, options: &RootOptions) -> Roots {
    let p = p.trimmed(1e-15);
    let scale = p.scale_factor();
    let coeffs = p.coeffs();
    let zero_roots = coeffs.iter().take_while(|c| c.norm() <= 1e-300_f64.max(1e-18 * scale)).count();
    let zero_roots = zero_roots.min(coeffs.len() - 1);
    let reduced = Polynomial::new(coeffs[zero_roots..].to_vec());
    let m = reduced.degree();

    let mut roots: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); zero_roots];
    if m == 0 {
        return Roots { roots, iterations: 0, converged: true };
    }
    let lead = reduced.coeffs()[m];
    let monic = reduced.scale(lead.inv());

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let offset = TAU * rng.gen::<f64>();
    let mut z: Vec<Complex64> = (0..m)
        .map(|k| {
            let jitter = 0.1 * (rng.gen::<f64>() - 0.5);
            let angle = offset + TAU * (k as f64 + jitter) / m as f64;
            math::cis(angle) * options.ring_radius
        })
        .collect();

    let mut iterations = 0;
    let mut converged = false;
    let mut settled = vec![false; m];
    while iterations < options.max_iterations {
        iterations += 1;
        let mut all_settled = true;
        for k in 0..m {
            if settled[k] {
                continue;
            }
            let (pv, dpv) = monic.eval_with_derivative(z[k]);
            if pv.norm() == 0.0 {
                settled[k] = true;
                continue;
            }
            let newton = pv / dpv;
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..m {
                if j != k {
                    let diff = z[k] - z[j];
                    if diff.norm() > 0.0 {
                        repulsion += diff.inv();
                    }
                }
            }
            let correction = newton / (1.0 - newton * repulsion);
            let step =
                if correction.re.is_finite() && correction.im.is_finite() { correction } else { newton };
            z[k] -= step;
            if step.norm() <= options.tolerance * z[k].norm().max(1.0) {
                settled[k] = true;
            } else {
                all_settled = false;
            }
        }
        if all_settled {
            converged = true;
            break;
        }
    }

    roots.extend(z);
    Roots { roots, iterations, converged }
}
