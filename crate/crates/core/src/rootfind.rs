//! All complex roots of a real polynomial.
//!
//! Degrees 1 and 2 use closed forms. Higher degrees use the Aberth-Ehrlich
//! simultaneous iteration started from points on a circle, so the result is
//! deterministic for a given coefficient vector.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

/// Iteration cap for the simultaneous solver.
pub const MAX_ITERATIONS: usize = 200;
/// Stop once every correction is below this fraction of the root scale.
pub const CORRECTION_TOLERANCE: f64 = 1e-13;
/// Largest scaled residual accepted as converged.
pub const RESIDUAL_BOUND: f64 = 1e-8;

// Angular offset of the starting circle (Euler-Mascheroni constant); breaks
// the symmetry between the starting points and the real axis.
const START_OFFSET: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("polynomial needs degree >= 1 (got {len} coefficients)")]
    DegreeTooSmall { len: usize },

    #[error("leading coefficient is zero")]
    ZeroLeadingCoefficient,

    #[error("non-finite coefficient at index {index}")]
    NonFinite { index: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// `|f(z)| / (max_i |a_i| * max(1, |z|)^n)` for each root.
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Horner evaluation of `sum coeffs[i] z^i`.
pub fn evaluate(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Value and first derivative in one Horner pass.
fn evaluate_with_derivative(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut f = Complex64::new(0.0, 0.0);
    let mut df = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        df = df * z + f;
        f = f * z + c;
    }
    (f, df)
}

pub fn scaled_residual(coeffs: &[f64], z: Complex64) -> f64 {
    let n = coeffs.len() - 1;
    let norm = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let growth = z.norm().max(1.0).powi(n as i32);
    evaluate(coeffs, z).norm() / (norm * growth)
}

pub fn roots(coeffs: &[f64]) -> Result<RootSet, RootError> {
    if coeffs.len() < 2 {
        return Err(RootError::DegreeTooSmall { len: coeffs.len() });
    }
    if let Some(index) = coeffs.iter().position(|c| !c.is_finite()) {
        return Err(RootError::NonFinite { index });
    }
    let n = coeffs.len() - 1;
    if coeffs[n] == 0.0 {
        return Err(RootError::ZeroLeadingCoefficient);
    }

    let (roots, iterations) = match n {
        1 => (vec![Complex64::new(-coeffs[0] / coeffs[1], 0.0)], 0),
        2 => (quadratic(coeffs[0], coeffs[1], coeffs[2]).to_vec(), 0),
        _ => aberth(coeffs),
    };

    let residuals: Vec<f64> = roots.iter().map(|&z| scaled_residual(coeffs, z)).collect();
    let converged = roots.iter().all(|z| z.re.is_finite() && z.im.is_finite())
        && residuals.iter().all(|&r| r <= RESIDUAL_BOUND);
    Ok(RootSet {
        roots,
        residuals,
        iterations,
        converged,
    })
}

/// Roots of `a2 s^2 + a1 s + a0` without cancellation in the real case.
fn quadratic(a0: f64, a1: f64, a2: f64) -> [Complex64; 2] {
    let disc = a1 * a1 - 4.0 * a2 * a0;
    if disc < 0.0 {
        let re = -a1 / (2.0 * a2);
        let im = ((-disc).sqrt() / (2.0 * a2)).abs();
        return [Complex64::new(re, im), Complex64::new(re, -im)];
    }
    let t = -0.5 * (a1 + a1.signum() * disc.sqrt());
    if t == 0.0 {
        // a1 = 0 and a0 = 0: double root at the origin.
        return [Complex64::new(0.0, 0.0); 2];
    }
    let (r1, r2) = (t / a2, a0 / t);
    let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
    [Complex64::new(lo, 0.0), Complex64::new(hi, 0.0)]
}

/// Radius of the starting circle: `|a_k / a_n|^(1/(n-k))` for the lowest
/// nonzero coefficient `a_k`, i.e. the geometric mean modulus of the nonzero
/// roots.
fn start_radius(coeffs: &[f64]) -> f64 {
    let n = coeffs.len() - 1;
    let k = coeffs.iter().position(|&c| c != 0.0).unwrap_or(n);
    if k == n {
        return 1.0;
    }
    let r = (coeffs[k] / coeffs[n]).abs().powf(1.0 / (n - k) as f64);
    if r.is_finite() && r > 0.0 {
        r
    } else {
        1.0
    }
}

fn aberth(coeffs: &[f64]) -> (Vec<Complex64>, usize) {
    let n = coeffs.len() - 1;
    let radius = start_radius(coeffs);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + START_OFFSET;
            Complex64::from_polar(radius, angle)
        })
        .collect();

    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let mut max_correction = 0.0f64;
        for k in 0..n {
            let (f, df) = evaluate_with_derivative(coeffs, z[k]);
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            let newton = f / df;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let mut correction = newton / (Complex64::new(1.0, 0.0) - newton * repulsion);
            if !(correction.re.is_finite() && correction.im.is_finite()) {
                // Zero derivative or coincident iterates: fall back to a
                // plain Newton step, or nudge off the critical point.
                correction = if newton.re.is_finite() && newton.im.is_finite() {
                    newton
                } else {
                    Complex64::new(radius * 1e-3, radius * 1e-3)
                };
            }
            z[k] -= correction;
            max_correction = max_correction.max(correction.norm());
        }
        let scale = z.iter().fold(0.0f64, |m, r| m.max(r.norm()));
        if !scale.is_finite() {
            break;
        }
        if max_correction <= CORRECTION_TOLERANCE * scale.max(f64::MIN_POSITIVE) {
            break;
        }
    }
    (z, iterations)
}
