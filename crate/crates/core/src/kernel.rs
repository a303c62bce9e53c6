//! Tree geometry of the Berkovich line and the three Hsia kernels.
//!
//! Every kernel value is returned as `-log_p` of the kernel, so larger means
//! closer. The small kernel is the diameter of the smallest disk containing
//! both points; the spherical kernel normalizes it at the Gauss point `g`;
//! the generalized kernel moves the pole to an arbitrary `zeta` via
//! `[x,y]_zeta = [x,y]_g / ([x,zeta]_g [y,zeta]_g)`.

use num_traits::{One, Zero};

use crate::error::{precondition, Error, Result};
use crate::point::{BerkPoint, PrimeContext};
use crate::rational::{LogScalar, Rational};

fn reject_infinity(x: &BerkPoint, op: &str) -> Result<()> {
    if x.is_infinity() {
        return precondition(format!("{op} is undefined at the point at infinity"));
    }
    Ok(())
}

impl PrimeContext {
    /// Smallest disk containing both points, i.e. their meeting point on the
    /// way to infinity.
    pub fn join_wrt_infinity(&self, x: &BerkPoint, y: &BerkPoint) -> Result<BerkPoint> {
        reject_infinity(x, "join")?;
        reject_infinity(y, "join")?;
        match self.small_kernel_log(x, y)? {
            LogScalar::Finite(s) => Ok(BerkPoint::disk(x.center().unwrap().clone(), s)),
            _ => Ok(x.clone()),
        }
    }

    /// `-log_p` of the small kernel `delta(x,y)_inf`.
    pub fn small_kernel_log(&self, x: &BerkPoint, y: &BerkPoint) -> Result<LogScalar> {
        reject_infinity(x, "small kernel")?;
        reject_infinity(y, "small kernel")?;
        let (cx, cy) = (x.center().unwrap(), y.center().unwrap());
        Ok(self.vp(&(cx - cy)).min(x.log_radius()).min(y.log_radius()))
    }

    /// `-log_p [x,y]_g`; always `>= 0`.
    pub fn spherical_kernel_log(&self, x: &BerkPoint, y: &BerkPoint) -> LogScalar {
        let g = BerkPoint::gauss();
        let to_gauss = |z: &BerkPoint| self.small_kernel_log(z, &g).expect("finite point");
        match (x, y) {
            (BerkPoint::Infinity, BerkPoint::Infinity) => LogScalar::PosInf,
            (BerkPoint::Infinity, z) | (z, BerkPoint::Infinity) => -to_gauss(z),
            _ => {
                let d = self.small_kernel_log(x, y).expect("finite points");
                if d == LogScalar::PosInf {
                    return d;
                }
                d - to_gauss(x) - to_gauss(y)
            }
        }
    }

    /// `-log_p [x,y]_zeta`. Equals `-inf` when either argument is a type I
    /// `zeta`, and `+inf` when `x = y` is type I and distinct from `zeta`.
    pub fn hsia_kernel_log(&self, x: &BerkPoint, y: &BerkPoint, zeta: &BerkPoint) -> LogScalar {
        if zeta.is_type_i() && (self.same_point(x, zeta) || self.same_point(y, zeta)) {
            return LogScalar::NegInf;
        }
        let xy = self.spherical_kernel_log(x, y);
        if xy == LogScalar::PosInf {
            return xy;
        }
        xy - self.spherical_kernel_log(x, zeta) - self.spherical_kernel_log(y, zeta)
    }

    /// `-log_p diam_zeta(x)`: `+inf` for type I points, finite for type II.
    pub fn diameter_log(&self, x: &BerkPoint, zeta: &BerkPoint) -> LogScalar {
        self.hsia_kernel_log(x, x, zeta)
    }

    /// Path distance between two type II points.
    pub fn path_distance(&self, x: &BerkPoint, y: &BerkPoint) -> Result<Rational> {
        let (BerkPoint::TypeII { log_radius: sx, .. }, BerkPoint::TypeII { log_radius: sy, .. }) =
            (x, y)
        else {
            return precondition("path distance needs two type II points");
        };
        let m = self.small_kernel_log(x, y)?.expect_finite("join log-radius")?;
        Ok((sx - &m) + (sy - &m))
    }

    /// Least common ancestor when the tree is rooted at infinity.
    fn ancestor(&self, x: &BerkPoint, y: &BerkPoint) -> BerkPoint {
        if x.is_infinity() || y.is_infinity() {
            BerkPoint::Infinity
        } else {
            self.join_wrt_infinity(x, y).expect("finite points")
        }
    }

    /// The median of three points: the unique point lying on all three
    /// pairwise paths.
    pub fn median(&self, x: &BerkPoint, y: &BerkPoint, z: &BerkPoint) -> BerkPoint {
        let cands = [self.ancestor(x, y), self.ancestor(y, z), self.ancestor(x, z)];
        cands.into_iter().max_by(|a, b| a.log_radius().cmp(&b.log_radius())).unwrap()
    }

    /// Whether `x` lies on the path from `a` to `b` (endpoints included).
    pub fn lies_between(&self, a: &BerkPoint, b: &BerkPoint, x: &BerkPoint) -> bool {
        self.same_point(&self.median(a, b, x), x)
    }

    /// The point on the path from `a` toward `zeta` whose `zeta`-diameter has
    /// `-log_p` equal to `log_radius`, i.e. the root of the ball
    /// `{z : [z,a]_zeta <= p^-log_radius}`.
    ///
    /// Requires `diameter_log(zeta) < log_radius <= diameter_log(a)`, with
    /// equality on the right only when `a` is type II (the ball rooted at `a`).
    pub fn ball_root(
        &self,
        a: &BerkPoint,
        log_radius: &Rational,
        zeta: &BerkPoint,
    ) -> Result<BerkPoint> {
        if self.same_point(a, zeta) {
            return precondition("ball center coincides with the pole");
        }
        let target = LogScalar::Finite(log_radius.clone());
        let lower = self.diameter_log(a, zeta);
        if target > lower {
            return precondition(format!(
                "log-radius {target} exceeds -log diam_zeta(center) = {lower} (ball would be empty)"
            ));
        }
        let upper = self.diameter_log(zeta, zeta);
        if target <= upper {
            return precondition(format!(
                "log-radius {target} is not above -log diam_zeta(zeta) = {upper} (ball would contain the pole)"
            ));
        }
        if target == lower {
            return Ok(a.clone());
        }
        if zeta.is_infinity() {
            return Ok(BerkPoint::disk(a.center().unwrap().clone(), log_radius.clone()));
        }
        let phi = |x: &BerkPoint| self.diameter_log(x, zeta);
        for leg in self.path_legs(a, zeta) {
            if let Some(t) = self.solve_on_leg(&leg, &phi, &target, &[zeta]) {
                let x = BerkPoint::disk(leg.center.clone(), t);
                if phi(&x) != target {
                    return Err(Error::Certification(format!(
                        "ball root {x} has diameter {} instead of {target}",
                        phi(&x)
                    )));
                }
                return Ok(x);
            }
        }
        Err(Error::Certification(format!("no ball root found for {a} at {target}")))
    }

    /// Membership in the closed ball `{z : [z,a]_zeta <= p^-log_radius}`.
    pub fn ball_contains(
        &self,
        z: &BerkPoint,
        a: &BerkPoint,
        log_radius: &Rational,
        zeta: &BerkPoint,
    ) -> bool {
        self.hsia_kernel_log(z, a, zeta) >= LogScalar::Finite(log_radius.clone())
    }

    /// The path from `a` to `b` as at most two monotone legs: up from `a`
    /// to their common ancestor, then down to `b`.
    pub(crate) fn path_legs(&self, a: &BerkPoint, b: &BerkPoint) -> Vec<Leg> {
        let m = self.ancestor(a, b);
        let mut legs = Vec::new();
        if let Some(ca) = a.center() {
            legs.push(Leg { center: ca.clone(), start: a.log_radius(), end: m.log_radius() });
        }
        if let Some(cb) = b.center() {
            legs.push(Leg { center: cb.clone(), start: m.log_radius(), end: b.log_radius() });
        }
        legs.retain(|l| l.start != l.end);
        legs
    }

    /// Candidate breakpoints of a kernel-type function along `leg`: where
    /// the moving disk meets the Gauss point, the origin, or a reference point.
    pub(crate) fn leg_knots(&self, leg: &Leg, refs: &[&BerkPoint]) -> Vec<Rational> {
        let (lo, hi) = if leg.start <= leg.end {
            (&leg.start, &leg.end)
        } else {
            (&leg.end, &leg.start)
        };
        let mut knots: Vec<Rational> = vec![Rational::zero()];
        let mut push = |v: LogScalar| {
            if let LogScalar::Finite(r) = v {
                knots.push(r);
            }
        };
        push(self.vp(&leg.center));
        for r in refs {
            if let Some(c) = r.center() {
                push(self.vp(&(&leg.center - c)));
            }
            if let BerkPoint::TypeII { log_radius, .. } = r {
                push(LogScalar::Finite(log_radius.clone()));
            }
        }
        push(lo.clone());
        push(hi.clone());
        let inside = |t: &Rational| {
            let t = LogScalar::Finite(t.clone());
            &t >= lo && &t <= hi
        };
        knots.retain(inside);
        knots.sort();
        knots.dedup();
        if *lo == LogScalar::NegInf {
            let first = knots.first().cloned().unwrap_or_else(Rational::zero);
            knots.insert(0, first - Rational::one());
        }
        if *hi == LogScalar::PosInf {
            let last = knots.last().cloned().unwrap_or_else(Rational::zero);
            knots.push(last + Rational::one());
        }
        if knots.len() == 1 {
            // A degenerate leg only happens for an infinite end; give it a slope.
            let k = knots[0].clone();
            knots.push(k + Rational::one());
        }
        if leg.start > leg.end {
            knots.reverse();
        }
        knots
    }

    /// Solves `phi(D(center, t)) = target` on a leg where `phi` is monotone and
    /// affine between knots. Returns the first solution in path order.
    fn solve_on_leg(
        &self,
        leg: &Leg,
        phi: &dyn Fn(&BerkPoint) -> LogScalar,
        target: &LogScalar,
        refs: &[&BerkPoint],
    ) -> Option<Rational> {
        let knots = self.leg_knots(leg, refs);
        let LogScalar::Finite(target) = target else { return None };
        let vals: Vec<Rational> = knots
            .iter()
            .map(|t| phi(&BerkPoint::disk(leg.center.clone(), t.clone())).finite().cloned())
            .collect::<Option<_>>()?;
        let interpolate = |i: usize, j: usize| {
            let (t0, t1, v0, v1) = (&knots[i], &knots[j], &vals[i], &vals[j]);
            if v0 == v1 {
                return t0.clone();
            }
            t0 + (target - v0) * (t1 - t0) / (v1 - v0)
        };
        let between = |v0: &Rational, v1: &Rational| {
            (v0 <= target && target <= v1) || (v1 <= target && target <= v0)
        };
        let n = knots.len();
        // Open start: affine tail before the first knot.
        if leg.start.finite().is_none() && n >= 2 {
            let beyond = if vals[1] > vals[0] { target < &vals[0] } else { target > &vals[0] };
            if beyond && vals[0] != vals[1] {
                return Some(interpolate(0, 1));
            }
        }
        for i in 0..n.saturating_sub(1) {
            if between(&vals[i], &vals[i + 1]) {
                return Some(interpolate(i, i + 1));
            }
        }
        if leg.end.finite().is_none() && n >= 2 {
            let (a, b) = (n - 2, n - 1);
            let beyond = if vals[b] > vals[a] { target > &vals[b] } else { target < &vals[b] };
            if beyond && vals[a] != vals[b] {
                return Some(interpolate(a, b));
            }
        }
        None
    }
}

/// A monotone piece of a tree path: the disks `D(center, t)` with `t` running
/// from `start` to `end` (either end may be infinite).
#[derive(Clone, Debug)]
pub(crate) struct Leg {
    pub center: Rational,
    pub start: LogScalar,
    pub end: LogScalar,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }
    fn i(n: i64, d: i64) -> BerkPoint {
        BerkPoint::TypeI(rat(n, d))
    }
    fn ii(c: i64, s: i64) -> BerkPoint {
        BerkPoint::disk(int(c), int(s))
    }
    fn fin(n: i64, d: i64) -> LogScalar {
        LogScalar::Finite(rat(n, d))
    }

    #[test]
    fn joins() {
        let c = ctx(2);
        assert_eq!(c.join_wrt_infinity(&i(0, 1), &i(8, 1)).unwrap(), ii(0, 3));
        assert_eq!(c.join_wrt_infinity(&ii(0, 1), &ii(0, 3)).unwrap(), ii(0, 1));
        for x in [i(5, 3), ii(7, -2)] {
            assert!(c.same_point(&c.join_wrt_infinity(&x, &x).unwrap(), &x));
        }
        assert!(c.join_wrt_infinity(&BerkPoint::Infinity, &i(0, 1)).is_err());
    }

    #[test]
    fn small_kernel_examples() {
        let c = ctx(2);
        assert_eq!(c.small_kernel_log(&i(0, 1), &i(8, 1)).unwrap(), fin(3, 1));
        assert_eq!(c.small_kernel_log(&ii(0, 1), &ii(0, 3)).unwrap(), fin(1, 1));
        let g = BerkPoint::gauss();
        assert_eq!(c.small_kernel_log(&g, &g).unwrap(), fin(0, 1));
        assert!(c.small_kernel_log(&i(0, 1), &BerkPoint::Infinity).is_err());
    }

    #[test]
    fn spherical_kernel_examples() {
        let c = ctx(2);
        assert_eq!(c.spherical_kernel_log(&i(2, 1), &i(1, 2)), fin(0, 1));
        let g = BerkPoint::gauss();
        assert_eq!(c.spherical_kernel_log(&g, &g), fin(0, 1));
        assert_eq!(c.spherical_kernel_log(&i(0, 1), &BerkPoint::Infinity), fin(0, 1));
        assert_eq!(
            c.spherical_kernel_log(&BerkPoint::Infinity, &BerkPoint::Infinity),
            LogScalar::PosInf
        );
    }

    #[test]
    fn hsia_kernel_examples() {
        let c = ctx(2);
        let inf = BerkPoint::Infinity;
        assert_eq!(c.hsia_kernel_log(&i(4, 1), &ii(0, 1), &inf), fin(1, 1));
        let z = i(3, 1);
        assert_eq!(c.hsia_kernel_log(&i(5, 1), &z, &z), LogScalar::NegInf);
        assert_eq!(c.hsia_kernel_log(&z, &z, &z), LogScalar::NegInf);
        assert_eq!(c.hsia_kernel_log(&inf, &inf, &inf), LogScalar::NegInf);
        let (x, y, w) = (i(0, 1), i(1, 1), i(2, 1));
        let xy = c.hsia_kernel_log(&x, &y, &inf);
        assert_eq!(xy, fin(0, 1));
        assert!(xy >= c.hsia_kernel_log(&x, &w, &inf).min(c.hsia_kernel_log(&w, &y, &inf)));
    }

    #[test]
    fn diameters() {
        let c = ctx(2);
        let inf = BerkPoint::Infinity;
        assert_eq!(c.diameter_log(&BerkPoint::gauss(), &inf), fin(0, 1));
        assert_eq!(c.diameter_log(&i(5, 1), &inf), LogScalar::PosInf);
        assert_eq!(c.diameter_log(&ii(0, 2), &inf), fin(2, 1));
    }

    #[test]
    fn path_distances() {
        let c = ctx(2);
        assert_eq!(c.path_distance(&ii(0, 1), &ii(0, 3)).unwrap(), int(2));
        assert_eq!(c.path_distance(&ii(7, 1), &ii(7, 1)).unwrap(), int(0));
        assert_eq!(c.path_distance(&ii(0, 1), &ii(1, 1)).unwrap(), int(2));
        assert!(c.path_distance(&i(0, 1), &ii(1, 1)).is_err());
    }

    #[test]
    fn medians_and_betweenness() {
        let c = ctx(2);
        let m = c.median(&ii(0, 1), &ii(0, 3), &i(1, 1));
        assert!(c.same_point(&m, &ii(0, 1)));
        assert!(c.lies_between(&i(0, 1), &i(8, 1), &ii(0, 3)));
        assert!(c.lies_between(&i(0, 1), &i(8, 1), &ii(0, 4)));
        assert!(!c.lies_between(&i(0, 1), &i(8, 1), &ii(1, 4)));
        assert!(c.same_point(&c.median(&i(3, 1), &i(5, 1), &BerkPoint::Infinity), &ii(3, 1)));
    }

    #[test]
    fn ball_roots_at_infinity() {
        let c = ctx(2);
        let inf = BerkPoint::Infinity;
        assert_eq!(c.ball_root(&i(0, 1), &int(2), &inf).unwrap(), ii(0, 2));
        assert_eq!(c.ball_root(&ii(0, 3), &int(1), &inf).unwrap(), ii(0, 1));
        let r = c.ball_root(&i(1, 1), &int(0), &inf).unwrap();
        assert!(c.same_point(&r, &BerkPoint::gauss()));
        assert!(c.ball_root(&ii(0, 3), &int(4), &inf).is_err());
        assert_eq!(c.ball_root(&ii(0, 3), &int(3), &inf).unwrap(), ii(0, 3));
    }

    #[test]
    fn ball_roots_for_finite_poles() {
        let c = ctx(3);
        for zeta in [i(0, 1), ii(1, 2), i(1, 9), ii(0, -1)] {
            for a in [i(5, 1), i(1, 3), ii(2, 1), i(0, 1)] {
                if c.same_point(&a, &zeta) {
                    continue;
                }
                let lo = c.diameter_log(&zeta, &zeta);
                let hi = c.diameter_log(&a, &zeta);
                for k in -3..=6 {
                    let r = rat(k, 2);
                    let t = LogScalar::Finite(r.clone());
                    let res = c.ball_root(&a, &r, &zeta);
                    if t > lo && t <= hi {
                        let x = res.unwrap();
                        assert_eq!(c.diameter_log(&x, &zeta), t);
                        assert!(c.lies_between(&a, &zeta, &x), "{x} not on [{a}, {zeta}]");
                    } else {
                        assert!(res.is_err());
                    }
                }
            }
        }
    }

    #[test]
    fn ball_membership() {
        let c = ctx(2);
        let inf = BerkPoint::Infinity;
        assert!(c.ball_contains(&i(4, 1), &i(0, 1), &int(1), &inf));
        assert!(c.ball_contains(&i(0, 1), &i(0, 1), &int(1), &inf));
        assert!(!c.ball_contains(&i(1, 2), &i(0, 1), &int(1), &inf));
    }
}
