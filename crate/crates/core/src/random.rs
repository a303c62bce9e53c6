//! Seeded generators of points, balls and scenes, shared by the CLI and the
//! property tests.

use num_bigint::BigInt;
use rand::Rng;

use crate::equilibrium::{Ball, CompactSet};
use crate::point::{BerkPoint, PrimeContext};
use crate::rational::Rational;

/// A rational with small numerator and a denominator mixing powers of `p`
/// with small cofactors, so valuations of both signs occur.
pub fn rational<R: Rng + ?Sized>(rng: &mut R, ctx: &PrimeContext) -> Rational {
    let p = BigInt::from(ctx.p());
    let num = BigInt::from(rng.gen_range(-64i64..=64));
    let den = p.pow(rng.gen_range(0..3u32)) * BigInt::from(rng.gen_range(1i64..=3));
    let up = p.pow(rng.gen_range(0..3u32));
    Rational::new(num * up, den)
}

pub fn log_radius<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(-6i64..=12).into(), rng.gen_range(1i64..=2).into())
}

pub fn type_i<R: Rng + ?Sized>(rng: &mut R, ctx: &PrimeContext) -> BerkPoint {
    BerkPoint::TypeI(rational(rng, ctx))
}

pub fn type_ii<R: Rng + ?Sized>(rng: &mut R, ctx: &PrimeContext) -> BerkPoint {
    BerkPoint::disk(rational(rng, ctx), log_radius(rng))
}

/// Mostly finite points of both types, occasionally infinity.
pub fn point<R: Rng + ?Sized>(rng: &mut R, ctx: &PrimeContext) -> BerkPoint {
    match rng.gen_range(0..20) {
        0 => BerkPoint::Infinity,
        1..=9 => type_i(rng, ctx),
        _ => type_ii(rng, ctx),
    }
}

/// A valid ball around a random center for the pole `zeta`: its log-radius
/// lies strictly between the pole's and the center's diameters.
pub fn ball<R: Rng + ?Sized>(rng: &mut R, zeta: &BerkPoint, ctx: &PrimeContext) -> Ball {
    loop {
        let center = if rng.gen_bool(0.7) { type_i(rng, ctx) } else { type_ii(rng, ctx) };
        if ctx.same_point(&center, zeta) {
            continue;
        }
        let lo = ctx.diameter_log(zeta, zeta);
        let hi = ctx.diameter_log(&center, zeta);
        let r = log_radius(rng);
        let candidate = match (lo.finite(), hi.finite()) {
            (Some(l), _) if r <= *l => continue,
            (_, Some(h)) if r > *h => continue,
            _ => r,
        };
        return Ball::new(center, candidate);
    }
}

/// `count` balls around the pole; not necessarily disjoint.
pub fn ball_union<R: Rng + ?Sized>(
    rng: &mut R,
    count: usize,
    zeta: &BerkPoint,
    ctx: &PrimeContext,
) -> CompactSet {
    let balls = (0..count).map(|_| ball(rng, zeta, ctx)).collect();
    CompactSet::new(zeta.clone(), balls, vec![])
}

/// Sample points for sweeps, excluding the pole.
pub fn samples<R: Rng + ?Sized>(
    rng: &mut R,
    count: usize,
    zeta: &BerkPoint,
    ctx: &PrimeContext,
) -> Vec<BerkPoint> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x = point(rng, ctx);
        if !ctx.same_point(&x, zeta) {
            out.push(x);
        }
    }
    out
}
