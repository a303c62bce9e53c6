#![allow(dead_code)]

use berkpot::{random, BerkPoint, PrimeContext};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A prime and a seeded generator, shrinking toward small seeds.
pub fn setup() -> impl Strategy<Value = (PrimeContext, ChaCha8Rng)> {
    (prop::sample::select(vec![2u64, 3, 5, 7]), any::<u64>())
        .prop_map(|(p, seed)| (PrimeContext::new(p).unwrap(), ChaCha8Rng::seed_from_u64(seed)))
}

pub fn pole(rng: &mut ChaCha8Rng, ctx: &PrimeContext) -> BerkPoint {
    match rng.gen_range(0..3) {
        0 => BerkPoint::Infinity,
        1 => random::type_i(rng, ctx),
        _ => random::type_ii(rng, ctx),
    }
}

/// A point different from every point in `avoid`.
pub fn point_avoiding(rng: &mut ChaCha8Rng, ctx: &PrimeContext, avoid: &[&BerkPoint]) -> BerkPoint {
    loop {
        let x = random::point(rng, ctx);
        if !avoid.iter().any(|a| ctx.same_point(a, &x)) {
            return x;
        }
    }
}
