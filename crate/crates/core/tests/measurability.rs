mod common;

use approx::assert_abs_diff_eq;
use num_complex::Complex64;
use proptest::prelude::*;

use jmspin::measurability::{busch_margin, joint_feasibility};
use jmspin::{BinaryObservable, BlochVector, FeasibilityOptions, HermitianOp};

use common::*;

/// Eigenvalues of `½(α I + a·σ)` from the characteristic polynomial of the
/// explicit complex matrix.
fn brute_eigenvalues(alpha: f64, a: BlochVector) -> (f64, f64) {
    let i = Complex64::i();
    let m00 = Complex64::from(0.5 * (alpha + a.z));
    let m11 = Complex64::from(0.5 * (alpha - a.z));
    let m01 = 0.5 * (a.x - i * a.y);
    let m10 = 0.5 * (a.x + i * a.y);
    let tr = (m00 + m11).re;
    let det = (m00 * m11 - m01 * m10).re;
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    (0.5 * (tr - disc), 0.5 * (tr + disc))
}

fn vector(r: f64) -> impl Strategy<Value = BlochVector> {
    (-r..r, -r..r, -r..r).prop_map(|(x, y, z)| BlochVector::new(x, y, z))
}

fn ball_vector() -> impl Strategy<Value = BlochVector> {
    vector(1.0).prop_map(|v| v * (1.0 / v.norm().max(1.0)))
}

fn unit_vector() -> impl Strategy<Value = BlochVector> {
    vector(1.0).prop_filter_map("degenerate", |v| v.normalized())
}

#[test]
fn cone_membership_matches_eigenvalue_bounds() {
    let mut rng = rng(11);
    let (mut accepted, mut rejected) = (0, 0);
    for _ in 0..10_000 {
        let a = in_ball(&mut rng) * 1.2;
        let alpha = rand::Rng::random_range(&mut rng, -0.2..2.2);
        let (lo, hi) = brute_eigenvalues(alpha, a);
        let margin = lo.min(1.0 - hi);
        if margin.abs() < 1e-9 {
            continue;
        }
        let valid = BinaryObservable::new(alpha, a).is_ok();
        assert_eq!(valid, margin > 0.0, "alpha={alpha} a={a:?}");
        accepted += valid as usize;
        rejected += !valid as usize;
    }
    assert!(accepted > 1000 && rejected > 1000, "{accepted} {rejected}");
}

proptest! {
    #[test]
    fn complement_sums_to_identity(a in ball_vector(), t in 0.0f64..1.0) {
        let n = a.norm();
        let obs = BinaryObservable::new(n + t * (2.0 - 2.0 * n), a).unwrap();
        let sum = obs.effect().scalar + obs.complement().effect().scalar;
        let vec = obs.effect().vec + obs.complement().effect().vec;
        prop_assert!((sum - HermitianOp::IDENTITY.scalar).abs() <= 1e-14);
        prop_assert!(vec.norm() <= 1e-14);
    }

    #[test]
    fn min_eigenvalue_matches_brute_force(alpha in -2.0f64..2.0, a in vector(2.0)) {
        let op = HermitianOp::new(alpha, a);
        let (lo, hi) = brute_eigenvalues(alpha, a);
        prop_assert!((op.min_eigenvalue() - lo).abs() <= 1e-12);
        prop_assert!((op.max_eigenvalue() - hi).abs() <= 1e-12);
    }

    #[test]
    fn busch_margin_symmetries(
        a in ball_vector(),
        b in ball_vector(),
        axis in unit_vector(),
        angle in 0.0f64..std::f64::consts::TAU,
    ) {
        let m = busch_margin(a, b);
        prop_assert!((busch_margin(b, a) - m).abs() <= 1e-14);
        prop_assert!((busch_margin(-a, b) - m).abs() <= 1e-14);
        prop_assert!((busch_margin(a, -b) - m).abs() <= 1e-14);
        let rotated = busch_margin(a.rotated(axis, angle), b.rotated(axis, angle));
        prop_assert!((rotated - m).abs() <= 1e-14);
    }
}

#[test]
fn negative_margin_rules_out_biased_pairs() {
    let mut rng = rng(12);
    let opts = FeasibilityOptions::default();
    let mut feasible = 0;
    for _ in 0..1000 {
        let (a, b) = (random_biased(&mut rng), random_biased(&mut rng));
        let r = joint_feasibility(&a, &b, &opts).unwrap();
        if r.feasible {
            feasible += 1;
            assert!(busch_margin(a.vec(), b.vec()) >= -1e-9, "{a:?} {b:?}");
        }
    }
    assert!(feasible > 50, "{feasible}");
}

/// Mixing both effects with ½I keeps a joint POVM valid.
#[test]
fn shrinking_towards_trivial_preserves_feasibility() {
    let mut rng = rng(13);
    let opts = FeasibilityOptions::default();
    let mut checked = 0;
    while checked < 100 {
        let (a, b) = (random_biased(&mut rng), random_biased(&mut rng));
        if !joint_feasibility(&a, &b, &opts).unwrap().feasible {
            continue;
        }
        checked += 1;
        let s = rand::Rng::random_range(&mut rng, 0.0..1.0);
        let shrink = |o: &BinaryObservable| {
            BinaryObservable::new(s * o.alpha() + 1.0 - s, o.vec() * s).unwrap()
        };
        let r = joint_feasibility(&shrink(&a), &shrink(&b), &opts).unwrap();
        assert!(r.feasible, "s={s} slack={}", r.slack);
    }
}

#[test]
fn witness_reproduces_marginals_for_biased_pairs() {
    let mut rng = rng(14);
    let opts = FeasibilityOptions::default();
    let mut checked = 0;
    for _ in 0..300 {
        let (a, b) = (random_biased(&mut rng), random_biased(&mut rng));
        let r = joint_feasibility(&a, &b, &opts).unwrap();
        if let Some(w) = r.witness {
            let rep = w.report(&a, &b);
            assert!(rep.min_eigenvalue >= -1e-10);
            assert_abs_diff_eq!(rep.normalization_error, 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(rep.first_marginal_error, 0.0, epsilon = 1e-10);
            assert_abs_diff_eq!(rep.second_marginal_error, 0.0, epsilon = 1e-10);
            checked += 1;
        } else {
            assert!(!r.feasible);
        }
    }
    assert!(checked > 20, "{checked}");
}

#[test]
fn oracle_is_seed_stable_away_from_the_boundary() {
    let mut rng = rng(15);
    for _ in 0..100 {
        let (a, b) = (random_biased(&mut rng), random_biased(&mut rng));
        let r0 = joint_feasibility(&a, &b, &FeasibilityOptions::default()).unwrap();
        let r1 = joint_feasibility(
            &a,
            &b,
            &FeasibilityOptions {
                seed: 7,
                ..Default::default()
            },
        )
        .unwrap();
        if r0.slack.abs() > 1e-6 {
            assert_eq!(r0.feasible, r1.feasible);
        }
        assert_abs_diff_eq!(r0.slack, r1.slack, epsilon = 1e-6);
    }
}
