//! Independent checks used to validate critical-vertex verdicts: every vertex
//! of the box, seeded uniform sampling of the box, and the Routh array for the
//! half-plane case.

use num_complex::Complex64;
use rand::distributions::{Distribution, Uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::rootfind::RootError;
use crate::sector::{self, polynomial_verdict, Status, Tolerances};
use crate::types::{validate_family, IntervalFamily, SectorSpec, Sign, SignPattern};

/// Exhaustive enumeration is capped at `2^24` vertices.
pub const MAX_EXHAUSTIVE_COEFFS: usize = 24;

/// Families whose vertex margins come closer than this to the sector boundary
/// are regenerated by [`generate_test_family`].
pub const REGENERATION_MARGIN: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("exhaustive check needs 2^{coeffs} vertices; at most {max} coefficients are supported", max = MAX_EXHAUSTIVE_COEFFS)]
    TooManyVertices { coeffs: usize },

    #[error(transparent)]
    Root(#[from] RootError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OracleMethod {
    Exhaustive,
    MonteCarlo,
    Routh,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub coeffs: Vec<f64>,
    pub worst_root: Complex64,
    /// Vertex mask (exhaustive) or sample index (Monte Carlo).
    pub index: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub method: OracleMethod,
    pub status: Status,
    /// Present iff `status` is `Unstable`; the lowest-index unstable member.
    pub counterexample: Option<Counterexample>,
    pub checked_count: u64,
    pub seed: Option<u64>,
    /// Smallest angular margin seen over all checked polynomials.
    pub worst_margin: f64,
    /// Smallest `|margin|` seen, i.e. the closest approach to the boundary.
    pub closest_to_boundary: f64,
    pub marginal_count: u64,
}

/// Associative summary of per-polynomial verdicts; merging is independent of
/// evaluation order.
#[derive(Debug, Clone)]
struct Tally {
    status: Status,
    worst_margin: f64,
    closest_to_boundary: f64,
    marginal_count: u64,
    first_unstable: Option<Counterexample>,
}

impl Tally {
    fn empty() -> Self {
        Tally {
            status: Status::Stable,
            worst_margin: f64::INFINITY,
            closest_to_boundary: f64::INFINITY,
            marginal_count: 0,
            first_unstable: None,
        }
    }

    fn single(index: u64, coeffs: Vec<f64>, sector: SectorSpec, tol: &Tolerances) -> Result<Self, RootError> {
        let v = polynomial_verdict(&coeffs, sector, tol)?;
        Ok(Tally {
            status: v.status,
            worst_margin: v.margin,
            closest_to_boundary: v.margin.abs(),
            marginal_count: u64::from(v.status == Status::Marginal),
            first_unstable: (v.status == Status::Unstable).then_some(Counterexample {
                coeffs,
                worst_root: v.worst_root,
                index,
            }),
        })
    }

    fn merge(self, other: Self) -> Self {
        let first_unstable = match (self.first_unstable, other.first_unstable) {
            (Some(a), Some(b)) => Some(if a.index <= b.index { a } else { b }),
            (a, b) => a.or(b),
        };
        Tally {
            status: self.status.max(other.status),
            worst_margin: self.worst_margin.min(other.worst_margin),
            closest_to_boundary: self.closest_to_boundary.min(other.closest_to_boundary),
            marginal_count: self.marginal_count + other.marginal_count,
            first_unstable,
        }
    }

    fn into_report(self, method: OracleMethod, checked_count: u64, seed: Option<u64>) -> OracleReport {
        OracleReport {
            method,
            status: self.status,
            counterexample: self.first_unstable,
            checked_count,
            seed,
            worst_margin: self.worst_margin,
            closest_to_boundary: self.closest_to_boundary,
            marginal_count: self.marginal_count,
        }
    }
}

/// Check all `2^(n+1)` vertices of the box.
pub fn exhaustive_vertex_check(
    family: &IntervalFamily,
    sector: SectorSpec,
    tolerances: &Tolerances,
) -> Result<OracleReport, OracleError> {
    let len = family.len();
    if len > MAX_EXHAUSTIVE_COEFFS {
        return Err(OracleError::TooManyVertices { coeffs: len });
    }
    let count = 1u64 << len;
    let tally = (0..count)
        .into_par_iter()
        .map(|mask| {
            let coeffs = vertex_coeffs(family, mask);
            Tally::single(mask, coeffs, sector, tolerances)
        })
        .try_reduce(Tally::empty, |a, b| Ok(a.merge(b)))?;
    Ok(tally.into_report(OracleMethod::Exhaustive, count, None))
}

fn vertex_coeffs(family: &IntervalFamily, mask: u64) -> Vec<f64> {
    let pattern = SignPattern::from_mask(mask, family.len());
    pattern
        .signs()
        .iter()
        .zip(family.lower().iter().zip(family.upper()))
        .map(|(s, (&lo, &hi))| if *s == Sign::Plus { hi } else { lo })
        .collect()
}

/// Random generator for sample `index` of a run seeded with `seed`; streams
/// are independent, so results do not depend on evaluation order.
fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draw one member of the box, each coefficient uniform on its interval.
pub fn sample_member(family: &IntervalFamily, seed: u64, index: u64) -> Vec<f64> {
    let mut rng = sample_rng(seed, index);
    family
        .lower()
        .iter()
        .zip(family.upper())
        .map(|(&lo, &hi)| Uniform::new_inclusive(lo, hi).sample(&mut rng))
        .collect()
}

pub fn monte_carlo_check(
    family: &IntervalFamily,
    sector: SectorSpec,
    samples: u64,
    seed: u64,
    tolerances: &Tolerances,
) -> Result<OracleReport, OracleError> {
    let tally = (0..samples)
        .into_par_iter()
        .map(|index| Tally::single(index, sample_member(family, seed, index), sector, tolerances))
        .try_reduce(Tally::empty, |a, b| Ok(a.merge(b)))?;
    Ok(tally.into_report(OracleMethod::MonteCarlo, samples, Some(seed)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RouthOutcome {
    Stable,
    NotStable,
}

/// Routh-Hurwitz test for all roots in the open left half plane. Any zero or
/// sign change in the first column of the array means `NotStable`; no epsilon
/// substitution is attempted.
pub fn routh_hurwitz(coeffs: &[f64]) -> Result<RouthOutcome, RootError> {
    let Some(&lead) = coeffs.last() else {
        return Err(RootError::DegreeTooSmall { len: 0 });
    };
    if lead == 0.0 {
        return Err(RootError::ZeroLeadingCoefficient);
    }
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(RouthOutcome::Stable);
    }
    let sign = if lead > 0.0 {
        1.0
    } else if coeffs[0] < 0.0 {
        -1.0
    } else {
        return Ok(RouthOutcome::NotStable);
    };

    // Rows run from the highest power down: [a_n, a_{n-2}, ...], [a_{n-1}, a_{n-3}, ...].
    let width = n / 2 + 1;
    let row = |start: usize| -> Vec<f64> {
        (0..width)
            .map(|j| {
                start
                    .checked_sub(2 * j)
                    .map_or(0.0, |power| sign * coeffs[power])
            })
            .collect()
    };
    let mut prev = row(n);
    let mut cur = row(n - 1);
    if prev[0] <= 0.0 {
        return Ok(RouthOutcome::NotStable);
    }
    for _ in 1..=n {
        if cur[0] <= 0.0 {
            return Ok(RouthOutcome::NotStable);
        }
        let next: Vec<f64> = (0..width)
            .map(|j| {
                let a = prev.get(j + 1).copied().unwrap_or(0.0);
                let b = cur.get(j + 1).copied().unwrap_or(0.0);
                (cur[0] * a - prev[0] * b) / cur[0]
            })
            .collect();
        prev = cur;
        cur = next;
    }
    Ok(RouthOutcome::Stable)
}

/// Sectors with `q` in `2..=5`.
pub const TEST_SECTORS: [(i64, i64); 5] = [(1, 2), (2, 3), (3, 4), (3, 5), (4, 5)];

/// A random interval family around a nominal polynomial with roots inside the
/// sector, with relative box widths large enough that a good share of the
/// generated families are unstable.
///
/// Families are regenerated until no vertex is marginal and every vertex
/// margin (over all `2^(n+1)` vertices) is at least [`REGENERATION_MARGIN`]
/// away from zero.
pub fn generate_test_family<R: Rng>(
    rng: &mut R,
    sector: SectorSpec,
    degree: usize,
    tolerances: &Tolerances,
) -> IntervalFamily {
    loop {
        let family = random_family(rng, sector, degree);
        let all = exhaustive_vertex_check(&family, sector, tolerances).expect("degree is small");
        let critical = sector::family_check(&family, sector, tolerances).expect("family is valid");
        let critical_close = critical
            .per_vertex
            .iter()
            .any(|v| v.verdict.status == Status::Marginal || v.verdict.margin.abs() < REGENERATION_MARGIN);
        if all.marginal_count == 0 && all.closest_to_boundary >= REGENERATION_MARGIN && !critical_close {
            return family;
        }
    }
}

fn random_family<R: Rng>(rng: &mut R, sector: SectorSpec, degree: usize) -> IntervalFamily {
    let boundary = sector.boundary_angle();
    let mut roots = Vec::with_capacity(degree);
    while roots.len() < degree {
        let modulus = rng.gen_range(0.5..2.0);
        if degree - roots.len() >= 2 && rng.gen_bool(0.7) {
            let angle = boundary + rng.gen_range(0.02..1.0) * (std::f64::consts::PI - boundary);
            let z = Complex64::from_polar(modulus, angle);
            roots.push(z);
            roots.push(z.conj());
        } else {
            roots.push(Complex64::new(-modulus, 0.0));
        }
    }
    let nominal = expand_roots(&roots);
    let rel_width = rng.gen_range(0.0..0.35);
    let mut lower = Vec::with_capacity(degree + 1);
    let mut upper = Vec::with_capacity(degree + 1);
    for a in nominal {
        let w = rel_width * a.abs().max(0.05);
        lower.push(a - w * rng.gen::<f64>());
        upper.push(a + w * rng.gen::<f64>());
    }
    validate_family(&lower, &upper).expect("leading width below one")
}

/// Real coefficients (ascending) of `prod (s - r)` for a conjugate-closed root list.
pub fn expand_roots(roots: &[Complex64]) -> Vec<f64> {
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
        for (i, &a) in poly.iter().enumerate() {
            next[i] -= a * r;
            next[i + 1] += a;
        }
        poly = next;
    }
    poly.into_iter().map(|c| c.re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::validate_sector;

    fn hurwitz() -> SectorSpec {
        validate_sector(1, 2).unwrap()
    }

    #[test]
    fn routh_examples() {
        assert_eq!(routh_hurwitz(&[2.0, 2.0, 1.0]).unwrap(), RouthOutcome::Stable);
        assert_eq!(routh_hurwitz(&[6.0, 11.0, 6.0, 1.0]).unwrap(), RouthOutcome::Stable);
        assert_eq!(routh_hurwitz(&[1.0, 1.0, 1.0, 1.0]).unwrap(), RouthOutcome::NotStable);
        assert_eq!(routh_hurwitz(&[1.0, 0.0]).unwrap_err(), RootError::ZeroLeadingCoefficient);
    }

    #[test]
    fn routh_sign_normalization() {
        assert_eq!(routh_hurwitz(&[-2.0, -2.0, -1.0]).unwrap(), RouthOutcome::Stable);
        assert_eq!(routh_hurwitz(&[2.0, -2.0, -1.0]).unwrap(), RouthOutcome::NotStable);
        assert_eq!(routh_hurwitz(&[-1.0, 1.0]).unwrap(), RouthOutcome::NotStable);
        assert_eq!(routh_hurwitz(&[1.0, 1.0]).unwrap(), RouthOutcome::Stable);
    }

    #[test]
    fn routh_higher_degree() {
        // (s+1)(s+2)(s+3)(s+4)(s+5)
        let p = expand_roots(&[-1.0, -2.0, -3.0, -4.0, -5.0].map(|r| Complex64::new(r, 0.0)));
        assert_eq!(routh_hurwitz(&p).unwrap(), RouthOutcome::Stable);
        // (s+1)(s^2 - 0.2 s + 4): right-half-plane pair.
        let z = Complex64::new(0.1, 2.0);
        let p = expand_roots(&[Complex64::new(-1.0, 0.0), z, z.conj()]);
        assert_eq!(routh_hurwitz(&p).unwrap(), RouthOutcome::NotStable);
    }

    #[test]
    fn exhaustive_point_family() {
        let f = IntervalFamily::point(&[2.0, 2.0, 1.0]).unwrap();
        let r = exhaustive_vertex_check(&f, hurwitz(), &Tolerances::default()).unwrap();
        assert_eq!(r.status, Status::Stable);
        assert_eq!(r.checked_count, 8);
        assert!(r.counterexample.is_none());
        assert_eq!(r.method, OracleMethod::Exhaustive);
    }

    #[test]
    fn exhaustive_finds_negative_damping_vertex() {
        let f = validate_family(&[1.0, -0.1, 1.0], &[1.0, 0.1, 1.0]).unwrap();
        let r = exhaustive_vertex_check(&f, hurwitz(), &Tolerances::default()).unwrap();
        assert_eq!(r.status, Status::Unstable);
        let cx = r.counterexample.unwrap();
        assert_eq!(cx.coeffs, vec![1.0, -0.1, 1.0]);
        assert!(cx.worst_root.re > 0.0);
        assert!(f.contains(&cx.coeffs));
    }

    #[test]
    fn exhaustive_cap() {
        let f = IntervalFamily::point(&[1.0; 25]).unwrap();
        assert_eq!(
            exhaustive_vertex_check(&f, hurwitz(), &Tolerances::default()).unwrap_err(),
            OracleError::TooManyVertices { coeffs: 25 }
        );
    }

    #[test]
    fn monte_carlo_examples() {
        let tol = Tolerances::default();
        let point = IntervalFamily::point(&[2.0, 2.0, 1.0]).unwrap();
        let r = monte_carlo_check(&point, hurwitz(), 100, 9, &tol).unwrap();
        assert_eq!(r.status, Status::Stable);
        assert!(r.counterexample.is_none());
        assert_eq!(r.seed, Some(9));

        let f = validate_family(&[1.0, -0.1, 1.0], &[1.0, 0.1, 1.0]).unwrap();
        let a = monte_carlo_check(&f, hurwitz(), 10_000, 42, &tol).unwrap();
        assert_eq!(a.status, Status::Unstable);
        let cx = a.counterexample.as_ref().unwrap();
        assert!(cx.coeffs[1] < 0.0);
        assert!(f.contains(&cx.coeffs));
        let b = monte_carlo_check(&f, hurwitz(), 10_000, 42, &tol).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn samples_stay_in_box() {
        let f = validate_family(&[-1.0, 0.0, 3.0, 0.5], &[1.0, 0.0, 3.5, 2.0]).unwrap();
        for i in 0..500 {
            let c = sample_member(&f, 7, i);
            assert!(f.contains(&c));
            assert_eq!(c[1], 0.0);
        }
        assert_eq!(sample_member(&f, 7, 3), sample_member(&f, 7, 3));
        assert_ne!(sample_member(&f, 7, 3), sample_member(&f, 7, 4));
    }

    #[test]
    fn generated_families_respect_regeneration_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let tol = Tolerances::default();
        for &(p, q) in &TEST_SECTORS {
            let s = validate_sector(p, q).unwrap();
            let f = generate_test_family(&mut rng, s, 4, &tol);
            let all = exhaustive_vertex_check(&f, s, &tol).unwrap();
            assert_eq!(all.marginal_count, 0);
            assert!(all.closest_to_boundary >= REGENERATION_MARGIN);
        }
    }
}
