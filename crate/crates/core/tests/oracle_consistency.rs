//! Cross-checks between the critical-vertex verdict and the oracles on
//! generated families, beyond the sizes exercised by the acceptance suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use critvert::oracle::{self, generate_test_family, RouthOutcome, TEST_SECTORS};
use critvert::sector::{family_check, polynomial_verdict, Status, Tolerances};
use critvert::types::{validate_family, validate_sector};

#[test]
fn critical_unstable_implies_exhaustive_unstable() {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..150 {
        let (p, q) = TEST_SECTORS[rng.gen_range(0..TEST_SECTORS.len())];
        let s = validate_sector(p, q).unwrap();
        let n = rng.gen_range(1..=5);
        // Arbitrary boxes, no margin filtering.
        let lower: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0..3.0)).collect();
        let mut upper: Vec<f64> = lower.iter().map(|l| l + rng.gen_range(0.0..1.0)).collect();
        upper[n] = upper[n].max(lower[n]);
        let Ok(family) = validate_family(&lower, &upper) else { continue };
        let critical = family_check(&family, s, &tol).unwrap();
        let all = oracle::exhaustive_vertex_check(&family, s, &tol).unwrap();
        if critical.family_status == Status::Unstable {
            assert_eq!(all.status, Status::Unstable);
        }
        if all.status == Status::Stable {
            assert_eq!(critical.family_status, Status::Stable);
        }
        if let Some(cx) = &all.counterexample {
            assert!(family.contains(&cx.coeffs));
        }
    }
}

#[test]
fn theorem_holds_on_generated_families() {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EC7);
    let mut seen = [0usize; 3];
    for case in 0..600 {
        let (p, q) = TEST_SECTORS[case % TEST_SECTORS.len()];
        let s = validate_sector(p, q).unwrap();
        let n = rng.gen_range(1..=7);
        let family = generate_test_family(&mut rng, s, n, &tol);
        let critical = family_check(&family, s, &tol).unwrap();
        let all = oracle::exhaustive_vertex_check(&family, s, &tol).unwrap();
        assert_eq!(
            critical.family_status, all.status,
            "p/q = {s}, lower {:?}, upper {:?}",
            family.lower(),
            family.upper()
        );
        seen[critical.family_status as usize] += 1;
    }
    assert!(seen[Status::Stable as usize] > 100 && seen[Status::Unstable as usize] > 100, "{seen:?}");
}

#[test]
fn routh_agrees_with_root_verdict() {
    let tol = Tolerances::default();
    let hurwitz = validate_sector(1, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    for _ in 0..2000 {
        let n = rng.gen_range(1..=9);
        let coeffs: Vec<f64> = (0..=n).map(|_| rng.gen_range(-0.5..3.0)).collect();
        if coeffs[n] == 0.0 {
            continue;
        }
        let v = polynomial_verdict(&coeffs, hurwitz, &tol).unwrap();
        if v.margin.abs() <= 1e-6 || v.status == Status::Marginal {
            continue;
        }
        let routh = oracle::routh_hurwitz(&coeffs).unwrap();
        assert_eq!(routh == RouthOutcome::Stable, v.status == Status::Stable, "{coeffs:?}");
        checked += 1;
    }
    assert!(checked > 1500);
}

#[test]
fn monte_carlo_is_order_independent() {
    let tol = Tolerances::default();
    let s = validate_sector(3, 4).unwrap();
    let family = validate_family(&[0.5, 1.0, 1.5, 0.9], &[1.5, 2.5, 2.0, 1.1]).unwrap();
    let a = oracle::monte_carlo_check(&family, s, 3000, 17, &tol).unwrap();
    let b = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| oracle::monte_carlo_check(&family, s, 3000, 17, &tol).unwrap());
    assert_eq!(a, b);
    let c = oracle::monte_carlo_check(&family, s, 3000, 18, &tol).unwrap();
    assert_eq!(c.seed, Some(18));
}
