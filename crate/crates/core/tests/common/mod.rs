#![allow(dead_code)]

use jmspin::{BinaryObservable, BlochVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitBall, UnitSphere};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn in_ball(rng: &mut impl Rng) -> BlochVector {
    let [x, y, z]: [f64; 3] = UnitBall.sample(rng);
    BlochVector::new(x, y, z)
}

pub fn on_sphere(rng: &mut impl Rng) -> BlochVector {
    let [x, y, z]: [f64; 3] = UnitSphere.sample(rng);
    BlochVector::new(x, y, z)
}

pub fn random_unbiased(rng: &mut impl Rng) -> BinaryObservable {
    BinaryObservable::unbiased(in_ball(rng)).unwrap()
}

/// Uniform effect vector in the ball, then α uniform over its admissible range.
pub fn random_biased(rng: &mut impl Rng) -> BinaryObservable {
    let a = in_ball(rng);
    let n = a.norm();
    let alpha = rng.random_range(n..=2.0 - n);
    BinaryObservable::new(alpha, a).unwrap()
}

pub fn random_sharp(rng: &mut impl Rng) -> BinaryObservable {
    BinaryObservable::sharp(on_sphere(rng)).unwrap()
}

/// Sample mean, standard error and maximum of `|tr ρP − tr ρA|` over
/// uniformly random pure states.
pub fn deviation_monte_carlo(
    p: &BinaryObservable,
    a: &BinaryObservable,
    samples: usize,
    rng: &mut impl Rng,
) -> (f64, f64, f64) {
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut max = 0.0f64;
    for _ in 0..samples {
        let r = on_sphere(rng);
        let dev = (p.outcome_probability(r).unwrap() - a.outcome_probability(r).unwrap()).abs();
        sum += dev;
        sum_sq += dev * dev;
        max = max.max(dev);
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
    (mean, (var / n).sqrt(), max)
}
