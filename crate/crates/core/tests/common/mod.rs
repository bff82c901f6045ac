//! Deterministic samplers shared by the integration tests.

#![allow(dead_code)]

use hytet::gram::{angles_to_lengths, check_lengths, classify, lengths_to_angles};
use hytet::{Angles6, Lengths6, Shape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x5eed_2024;

/// `n` length tuples with entries uniform in `[lo, hi]`, keeping those whose
/// Gram matrix has signature (3,1).
pub fn random_lengths(seed: u64, n: usize, lo: f64, hi: f64) -> Vec<Lengths6> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let l = Lengths6::new(std::array::from_fn(|_| rng.gen_range(lo..=hi))).unwrap();
        if check_lengths(&l).is_ok() {
            out.push(l);
        }
    }
    out
}

/// `n` hyperbolic angle tuples with entries uniform in `[lo, hi]`, keeping
/// those with finite lengths that stay hyperbolic under `margin` shifts of
/// any single angle.
pub fn random_hyperbolic_angles(
    seed: u64,
    n: usize,
    lo: f64,
    hi: f64,
    margin: f64,
) -> Vec<Angles6> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let v: [f64; 6] = std::array::from_fn(|_| rng.gen_range(lo..=hi));
        let a = Angles6::new(v).unwrap();
        if angles_to_lengths(&a).is_err() {
            continue;
        }
        let stable = (0..6).all(|i| {
            [-margin, margin].iter().all(|&d| {
                let mut w = v;
                w[i] += d;
                Angles6::new(w)
                    .map(|x| classify(&x) == Shape::Hyperbolic)
                    .unwrap_or(false)
            })
        });
        if stable {
            out.push(a);
        }
    }
    out
}

/// The acceptance set: 100 tetrahedra with lengths in [0.3, 2.5].
pub fn acceptance_lengths() -> Vec<Lengths6> {
    random_lengths(SEED, 100, 0.3, 2.5)
}

/// Angles of the acceptance set.
pub fn acceptance_angles() -> Vec<Angles6> {
    acceptance_lengths()
        .iter()
        .map(|l| lengths_to_angles(l).unwrap())
        .collect()
}
