//! Deterministic "generic" sample points: distinct small primes in a seeded
//! random order, so rank and independence checks are reproducible.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactalg::{rat, ratio, Rational};

pub const DEFAULT_SEED: u64 = 0x5eed_b11f;

fn primes(count: usize) -> Vec<i64> {
    let mut out = Vec::with_capacity(count);
    let mut n = 2i64;
    while out.len() < count {
        if (2..).take_while(|d| d * d <= n).all(|d| n % d != 0) {
            out.push(n);
        }
        n += 1;
    }
    out
}

/// A point with `n_x` coordinates for the x-variables and `n_b` values for
/// the deformation parameters, all distinct primes.
#[derive(Debug, Clone, PartialEq)]
pub struct GenericPoint {
    pub x: Vec<Rational>,
    pub b: Vec<Rational>,
}

pub fn generic_point(n_x: usize, n_b: usize, seed: u64) -> GenericPoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool = primes(2 * (n_x + n_b) + 4);
    pool.shuffle(&mut rng);
    let x = pool[..n_x].iter().map(|&p| rat(p)).collect();
    let b = pool[n_x..n_x + n_b].iter().map(|&p| rat(p)).collect();
    GenericPoint { x, b }
}

/// Small random rationals `p/q` with `|p| ≤ 9`, `1 ≤ q ≤ 5`.
pub fn random_rationals(rng: &mut impl Rng, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5)))
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
