#![allow(dead_code)]

use hivecurve::hive::{classify_hive, convolve, Hive};
use hivecurve::rational::{q, qf, Q};
use rand::Rng;

pub fn random_q<R: Rng>(rng: &mut R, span: i64) -> Q {
    qf(rng.random_range(-span..=span), rng.random_range(1..=3))
}

/// Arbitrary rational values; mostly not hives.
pub fn random_lifting<R: Rng>(n: usize, rng: &mut R) -> Hive {
    Hive::from_fn(n, |_| random_q(rng, 6))
}

/// Max-plus convolution of degree-one pieces. These are hives with plenty of tight rhombi.
pub fn convolved_hive<R: Rng>(n: usize, rng: &mut R) -> Hive {
    let mut h = Hive::from_fn(1, |_| random_q(rng, 4));
    for _ in 1..n {
        h = convolve(&h, &Hive::from_fn(1, |_| random_q(rng, 4))).unwrap();
    }
    h
}

/// A multiple of the quadratic hive, shifted and perturbed; usually strict.
pub fn perturbed_quadratic<R: Rng>(n: usize, rng: &mut R) -> Hive {
    let s = q(rng.random_range(1..=3));
    let (a, b, c) = (random_q(rng, 3), random_q(rng, 3), random_q(rng, 3));
    let base = Hive::quadratic(n).scale(&s).shift_linear(&a, &b, &c);
    Hive::from_fn(n, |t| base.get(t) + qf(rng.random_range(-1..=1), 4))
}

/// A hive from one of the generators above, retried until it passes.
pub fn random_hive<R: Rng>(n: usize, rng: &mut R) -> Hive {
    loop {
        let h = if rng.random_bool(0.5) { convolved_hive(n, rng) } else { perturbed_quadratic(n, rng) };
        if classify_hive(&h).class.is_hive() {
            return h;
        }
    }
}
