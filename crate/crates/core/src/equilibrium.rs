//! Potentials, energy, Robin constants and equilibrium measures of compact
//! sets built from finitely many closed balls and points.
//!
//! A ball `{z : [z,a]_zeta <= p^-R}` is the part of the tree hanging below
//! its root (away from `zeta`), so two balls are either nested or disjoint.
//! The equilibrium measure of such a set lives on the roots of the outermost
//! balls together with the isolated type II points, which reduces the energy
//! problem to a quadratic program on a probability simplex.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{precondition, Error, Result};
use crate::linalg;
use crate::measure::DiscreteMeasure;
use crate::point::{BerkPoint, PrimeContext};
use crate::rational::{LogScalar, Rational};

/// `sum_i w_i * (-log_p [x, y_i]_zeta)`.
///
/// `+inf` at a type I atom of positive weight. Signed measures whose
/// infinite contributions cancel are rejected.
pub fn potential(
    nu: &DiscreteMeasure,
    x: &BerkPoint,
    zeta: &BerkPoint,
    ctx: &PrimeContext,
) -> Result<LogScalar> {
    let mut acc = LogScalar::zero();
    for (y, w) in nu.atoms() {
        if ctx.same_point(y, zeta) {
            return precondition(format!("measure has an atom at the pole {zeta}"));
        }
        let term = ctx.hsia_kernel_log(x, y, zeta).scale(w);
        acc = acc.checked_add(&term).ok_or_else(|| {
            Error::Precondition(format!("potential at {x} is of the form inf - inf"))
        })?;
    }
    Ok(acc)
}

/// `sum_ij w_i w_j (-log_p [y_i, y_j]_zeta)` for a probability measure.
pub fn energy(nu: &DiscreteMeasure, zeta: &BerkPoint, ctx: &PrimeContext) -> Result<LogScalar> {
    if !nu.is_probability() {
        return precondition("energy is defined here for probability measures");
    }
    let mut acc = LogScalar::zero();
    for (x, w) in nu.atoms() {
        acc = acc + potential(nu, x, zeta, ctx)?.scale(w);
    }
    Ok(acc)
}

/// The closed ball `{z : -log_p [z, center]_zeta >= log_radius}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub center: BerkPoint,
    pub log_radius: Rational,
}

impl Ball {
    pub fn new(center: BerkPoint, log_radius: Rational) -> Self {
        Ball { center, log_radius }
    }

    pub fn root(&self, zeta: &BerkPoint, ctx: &PrimeContext) -> Result<BerkPoint> {
        ctx.ball_root(&self.center, &self.log_radius, zeta)
    }

    pub fn contains(&self, z: &BerkPoint, zeta: &BerkPoint, ctx: &PrimeContext) -> bool {
        ctx.ball_contains(z, &self.center, &self.log_radius, zeta)
    }
}

/// A finite union of closed balls and points, away from the pole `zeta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompactSet {
    pub zeta: BerkPoint,
    pub balls: Vec<Ball>,
    pub points: Vec<BerkPoint>,
}

/// One piece of a [`CompactSet`] together with its top: the ball root, or
/// the point itself.
#[derive(Clone, Debug)]
enum Piece {
    Ball(Ball, BerkPoint),
    Point(BerkPoint),
}

impl Piece {
    fn top(&self) -> &BerkPoint {
        match self {
            Piece::Ball(_, r) => r,
            Piece::Point(x) => x,
        }
    }
}

impl CompactSet {
    pub fn new(zeta: BerkPoint, balls: Vec<Ball>, points: Vec<BerkPoint>) -> Self {
        CompactSet { zeta, balls, points }
    }

    pub fn single_ball(center: BerkPoint, log_radius: Rational, zeta: BerkPoint) -> Self {
        CompactSet::new(zeta, vec![Ball::new(center, log_radius)], vec![])
    }

    pub fn from_points(points: Vec<BerkPoint>, zeta: BerkPoint) -> Self {
        CompactSet::new(zeta, vec![], points)
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty() && self.points.is_empty()
    }

    fn pieces(&self, ctx: &PrimeContext) -> Result<Vec<Piece>> {
        let mut out = Vec::with_capacity(self.balls.len() + self.points.len());
        for b in &self.balls {
            out.push(Piece::Ball(b.clone(), b.root(&self.zeta, ctx)?));
        }
        for x in &self.points {
            if ctx.same_point(x, &self.zeta) {
                return precondition(format!("point {x} coincides with the pole"));
            }
            out.push(Piece::Point(x.clone()));
        }
        Ok(out)
    }

    /// Roots of the balls, in order.
    pub fn ball_roots(&self, ctx: &PrimeContext) -> Result<Vec<BerkPoint>> {
        self.balls.iter().map(|b| b.root(&self.zeta, ctx)).collect()
    }

    pub fn contains(&self, z: &BerkPoint, ctx: &PrimeContext) -> bool {
        self.balls.iter().any(|b| b.contains(z, &self.zeta, ctx))
            || self.points.iter().any(|x| ctx.same_point(x, z))
    }

    /// Whether every path from `z` to the pole meets the set, i.e. `z` lies
    /// outside the component of the complement that contains the pole.
    pub fn separates_from_pole(&self, z: &BerkPoint, ctx: &PrimeContext) -> Result<bool> {
        Ok(self
            .pieces(ctx)?
            .iter()
            .any(|piece| ctx.lies_between(z, &self.zeta, piece.top())))
    }
}

/// Drops every piece cut off from the pole by another piece, together with
/// duplicates. The result has the same pole-side boundary, and its balls are
/// pairwise disjoint.
pub fn normalize_set(e: &CompactSet, ctx: &PrimeContext) -> Result<CompactSet> {
    let pieces = e.pieces(ctx)?;
    let zeta = &e.zeta;
    let mut kept: Vec<usize> = Vec::new();
    'outer: for (i, pi) in pieces.iter().enumerate() {
        for (j, pj) in pieces.iter().enumerate() {
            if i == j || !ctx.lies_between(pi.top(), zeta, pj.top()) {
                continue;
            }
            if !ctx.same_point(pi.top(), pj.top()) {
                continue 'outer;
            }
            // Equal tops: keep balls over points, then the first occurrence.
            let j_wins = match (pi, pj) {
                (Piece::Point(_), Piece::Ball(..)) => true,
                (Piece::Ball(..), Piece::Point(_)) => false,
                _ => j < i,
            };
            if j_wins {
                continue 'outer;
            }
        }
        kept.push(i);
    }
    let mut out = CompactSet::new(zeta.clone(), vec![], vec![]);
    for i in kept {
        match &pieces[i] {
            Piece::Ball(b, _) => out.balls.push(b.clone()),
            Piece::Point(x) => out.points.push(x.clone()),
        }
    }
    Ok(out)
}

/// Possible support points of the equilibrium measure of a normalized set:
/// the ball roots followed by the isolated type II points.
pub fn candidate_support(e: &CompactSet, ctx: &PrimeContext) -> Result<Vec<BerkPoint>> {
    let mut out = e.ball_roots(ctx)?;
    out.extend(e.points.iter().filter(|x| x.is_type_ii()).cloned());
    Ok(out)
}

pub fn is_capacity_zero(e: &CompactSet, ctx: &PrimeContext) -> Result<bool> {
    Ok(candidate_support(&normalize_set(e, ctx)?, ctx)?.is_empty())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquilibriumResult {
    /// The Robin constant, `+inf` when the capacity is zero.
    pub robin: LogScalar,
    /// `log_p` of the capacity, i.e. `-robin`.
    pub capacity_log: LogScalar,
    pub measure: DiscreteMeasure,
    /// The candidate points the minimization ran over.
    pub candidates: Vec<BerkPoint>,
    /// Exact weights on `candidates`, zeros included.
    pub weights: Vec<Rational>,
    /// Potential of the measure at each candidate.
    pub potentials: Vec<Rational>,
}

impl EquilibriumResult {
    fn capacity_zero() -> Self {
        EquilibriumResult {
            robin: LogScalar::PosInf,
            capacity_log: LogScalar::NegInf,
            measure: DiscreteMeasure::new(),
            candidates: vec![],
            weights: vec![],
            potentials: vec![],
        }
    }

    pub fn is_capacity_zero(&self) -> bool {
        self.robin == LogScalar::PosInf
    }

    /// The exact optimality certificate: potential equal to the Robin
    /// constant on the support and at least the Robin constant elsewhere.
    pub fn kkt_holds(&self) -> bool {
        let Some(robin) = self.robin.finite() else {
            return self.candidates.is_empty();
        };
        self.weights.iter().all(|w| !w.is_negative())
            && self.weights.iter().sum::<Rational>().is_one()
            && self.weights.iter().zip(&self.potentials).all(|(w, u)| {
                if w.is_positive() {
                    u == robin
                } else {
                    u >= robin
                }
            })
    }
}

/// The equilibrium measure and Robin constant of `e`.
pub fn equilibrium(e: &CompactSet, ctx: &PrimeContext) -> Result<EquilibriumResult> {
    let normalized = normalize_set(e, ctx)?;
    let candidates = candidate_support(&normalized, ctx)?;
    equilibrium_on(&candidates, &e.zeta, ctx)
}

/// Minimizes the energy over probability measures on a fixed list of
/// distinct type II `candidates`.
pub fn equilibrium_on(
    candidates: &[BerkPoint],
    zeta: &BerkPoint,
    ctx: &PrimeContext,
) -> Result<EquilibriumResult> {
    if candidates.is_empty() {
        return Ok(EquilibriumResult::capacity_zero());
    }
    if let Some(x) = candidates.iter().find(|x| !x.is_type_ii() || ctx.same_point(x, zeta)) {
        return precondition(format!("{x} cannot carry an equilibrium atom"));
    }
    let m = kernel_matrix(candidates, zeta, ctx)?;
    let weights = solve_simplex_qp(&m)?;
    let potentials = mat_vec(&m, &weights);
    let robin: Rational = weights.iter().zip(&potentials).map(|(w, u)| w * u).sum();
    let measure = DiscreteMeasure::from_atoms(
        candidates.iter().cloned().zip(weights.iter().cloned()),
        ctx,
    );
    let result = EquilibriumResult {
        capacity_log: LogScalar::Finite(-robin.clone()),
        robin: LogScalar::Finite(robin),
        measure,
        candidates: candidates.to_vec(),
        weights,
        potentials,
    };
    if !result.kkt_holds() {
        return Err(Error::Certification("equilibrium weights fail the KKT check".into()));
    }
    Ok(result)
}

/// `M_ij = -log_p [x_i, x_j]_zeta` for distinct type II points.
pub fn kernel_matrix(
    points: &[BerkPoint],
    zeta: &BerkPoint,
    ctx: &PrimeContext,
) -> Result<Vec<Vec<Rational>>> {
    points
        .iter()
        .map(|x| {
            points
                .iter()
                .map(|y| ctx.hsia_kernel_log(x, y, zeta).expect_finite("kernel entry"))
                .collect()
        })
        .collect()
}

fn mat_vec(m: &[Vec<Rational>], w: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| row.iter().zip(w).map(|(a, b)| a * b).sum()).collect()
}

/// Exact minimizer of `w^T M w` on the probability simplex for a matrix that
/// is positive definite on mass-zero vectors.
pub fn solve_simplex_qp(m: &[Vec<Rational>]) -> Result<Vec<Rational>> {
    let n = m.len();
    if n <= 3 {
        return enumerate_supports(m)
            .ok_or_else(|| Error::Certification("no support subset passes the KKT check".into()));
    }
    let guess = frank_wolfe(m, 400);
    let support: Vec<usize> = (0..n).filter(|&i| guess[i] > 1e-6).collect();
    if let Some(w) = repair_support(m, support) {
        return Ok(w);
    }
    if n <= 16 {
        if let Some(w) = enumerate_supports(m) {
            return Ok(w);
        }
    }
    Err(Error::Certification(format!("could not certify a minimizer on {n} candidates")))
}

/// Weights supported on `support` with equal potential across it, together
/// with that common value; `None` for a singular system.
fn solve_on_support(m: &[Vec<Rational>], support: &[usize]) -> Option<(Vec<Rational>, Rational)> {
    let k = support.len();
    let mut a = vec![vec![Rational::zero(); k + 1]; k + 1];
    let mut b = vec![Rational::zero(); k + 1];
    for (r, &i) in support.iter().enumerate() {
        for (c, &j) in support.iter().enumerate() {
            a[r][c] = m[i][j].clone();
        }
        a[r][k] = -Rational::one();
        a[k][r] = Rational::one();
    }
    b[k] = Rational::one();
    let x = linalg::solve(a, b)?;
    let mut w = vec![Rational::zero(); m.len()];
    for (r, &i) in support.iter().enumerate() {
        w[i] = x[r].clone();
    }
    Some((w, x[k].clone()))
}

fn is_certified(m: &[Vec<Rational>], w: &[Rational], lambda: &Rational) -> bool {
    let g = mat_vec(m, w);
    w.iter().zip(&g).all(|(wi, gi)| {
        if wi.is_positive() {
            gi == lambda
        } else {
            wi.is_zero() && gi >= lambda
        }
    })
}

fn enumerate_supports(m: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let n = m.len();
    let mut masks: Vec<u32> = (1..(1u32 << n)).collect();
    masks.sort_by_key(|s| s.count_ones());
    masks.into_iter().find_map(|mask| {
        let support: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let (w, lambda) = solve_on_support(m, &support)?;
        (support.iter().all(|&i| w[i].is_positive()) && is_certified(m, &w, &lambda)).then_some(w)
    })
}

/// Active-set iteration from a support guess: drop the most negative weight,
/// otherwise admit the most violated outside candidate.
fn repair_support(m: &[Vec<Rational>], mut support: Vec<usize>) -> Option<Vec<Rational>> {
    let n = m.len();
    if support.is_empty() {
        support.push(0);
    }
    for _ in 0..4 * n {
        let (w, lambda) = solve_on_support(m, &support)?;
        if let Some(&worst) = support
            .iter()
            .filter(|&&i| !w[i].is_positive())
            .min_by(|&&i, &&j| w[i].cmp(&w[j]))
        {
            support.retain(|&i| i != worst);
            if support.is_empty() {
                return None;
            }
            continue;
        }
        let g = mat_vec(m, &w);
        let entering = (0..n)
            .filter(|i| !support.contains(i) && g[*i] < lambda)
            .min_by(|&i, &j| g[i].cmp(&g[j]));
        match entering {
            Some(j) => {
                support.push(j);
                support.sort_unstable();
            }
            None => return Some(w),
        }
    }
    None
}

/// Rounds to the nearest multiple of `2^-48`, keeping iterates on a fixed
/// dyadic grid so exact arithmetic stays cheap.
fn round_dyadic(x: &Rational) -> Rational {
    let scale = BigInt::one() << 48u32;
    let scaled = x * Rational::from_integer(scale.clone());
    let (q, r) = scaled.numer().div_mod_floor(scaled.denom());
    let up = Rational::new(r * 2, scaled.denom().clone()) >= Rational::one();
    Rational::new(if up { q + 1 } else { q }, scale)
}

/// Frank-Wolfe on the simplex with exact line search, in rational arithmetic
/// on a dyadic grid. Returns the iterate as floats for support detection.
fn frank_wolfe(m: &[Vec<Rational>], iterations: usize) -> Vec<f64> {
    let n = m.len();
    // Start at the best vertex.
    let start = (0..n).min_by(|&i, &j| m[i][i].cmp(&m[j][j])).unwrap();
    let mut w = vec![Rational::zero(); n];
    w[start] = Rational::one();
    for _ in 0..iterations {
        let g = mat_vec(m, &w);
        let j = (0..n).min_by(|&a, &b| g[a].cmp(&g[b])).unwrap();
        // Direction d = e_j - w; objective along it is quadratic in gamma.
        let wg: Rational = w.iter().zip(&g).map(|(a, b)| a * b).sum();
        let slope = &g[j] - &wg;
        if !slope.is_negative() {
            break;
        }
        let curvature = &m[j][j] - &g[j] * Rational::from_integer(2.into()) + &wg;
        let gamma = if curvature.is_positive() {
            (-&slope / curvature).min(Rational::one())
        } else {
            Rational::one()
        };
        let gamma = round_dyadic(&gamma);
        if gamma.is_zero() {
            break;
        }
        for (k, wk) in w.iter_mut().enumerate() {
            let target = if k == j { Rational::one() } else { Rational::zero() };
            *wk = round_dyadic(&(&*wk + &gamma * (target - &*wk)));
        }
        let drift = Rational::one() - w.iter().sum::<Rational>();
        let big = (0..n).max_by(|&a, &b| w[a].cmp(&w[b])).unwrap();
        w[big] += drift;
    }
    w.iter().map(|x| x.to_f64().unwrap_or(0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn ctx() -> PrimeContext {
        PrimeContext::new(2).unwrap()
    }
    fn ii(c: i64, s: i64) -> BerkPoint {
        BerkPoint::disk(int(c), int(s))
    }
    fn i1(c: i64) -> BerkPoint {
        BerkPoint::TypeI(int(c))
    }
    const INF: BerkPoint = BerkPoint::Infinity;

    fn two_balls() -> CompactSet {
        CompactSet::new(
            INF,
            vec![Ball::new(i1(0), int(1)), Ball::new(i1(1), int(1))],
            vec![],
        )
    }

    #[test]
    fn potential_examples() {
        let c = ctx();
        let nu = DiscreteMeasure::dirac(ii(0, 1));
        let x = BerkPoint::TypeI(rat(1, 2));
        assert_eq!(potential(&nu, &x, &INF, &c).unwrap(), LogScalar::Finite(int(-1)));
        let pole = DiscreteMeasure::dirac(i1(3));
        assert_eq!(potential(&pole, &i1(3), &INF, &c).unwrap(), LogScalar::PosInf);
        let half = DiscreteMeasure::from_atoms([(ii(0, 1), rat(1, 2)), (ii(1, 1), rat(1, 2))], &c);
        assert_eq!(potential(&half, &i1(4), &INF, &c).unwrap(), LogScalar::Finite(rat(1, 2)));
        assert!(potential(&DiscreteMeasure::dirac(i1(0)), &i1(1), &i1(0), &c).is_err());
    }

    #[test]
    fn energy_examples() {
        let c = ctx();
        assert_eq!(energy(&DiscreteMeasure::dirac(ii(0, 1)), &INF, &c).unwrap(), LogScalar::Finite(int(1)));
        assert_eq!(energy(&DiscreteMeasure::dirac(i1(0)), &INF, &c).unwrap(), LogScalar::PosInf);
        let half = DiscreteMeasure::from_atoms([(ii(0, 1), rat(1, 2)), (ii(1, 1), rat(1, 2))], &c);
        assert_eq!(energy(&half, &INF, &c).unwrap(), LogScalar::Finite(rat(1, 2)));
    }

    #[test]
    fn normalization_examples() {
        let c = ctx();
        let nested = CompactSet::new(
            INF,
            vec![Ball::new(i1(0), int(1)), Ball::new(i1(0), int(2))],
            vec![],
        );
        assert_eq!(normalize_set(&nested, &c).unwrap().balls, vec![Ball::new(i1(0), int(1))]);
        assert_eq!(normalize_set(&two_balls(), &c).unwrap(), two_balls());
        let with_point = CompactSet::new(INF, vec![Ball::new(i1(0), int(1))], vec![i1(4)]);
        assert!(normalize_set(&with_point, &c).unwrap().points.is_empty());
        // A type II point above a ball cuts it off from the pole.
        let shadow = CompactSet::new(INF, vec![Ball::new(i1(0), int(3))], vec![ii(0, 1)]);
        let n = normalize_set(&shadow, &c).unwrap();
        assert!(n.balls.is_empty());
        assert_eq!(n.points, vec![ii(0, 1)]);
        let dup = CompactSet::from_points(vec![ii(0, 1), ii(2, 1), i1(5), i1(5)], INF);
        assert_eq!(normalize_set(&dup, &c).unwrap().points, vec![ii(0, 1), i1(5)]);
    }

    #[test]
    fn pole_inside_is_rejected() {
        let c = ctx();
        let bad = CompactSet::single_ball(i1(0), int(-5), ii(0, 1));
        assert!(normalize_set(&bad, &c).is_err());
        let bad = CompactSet::from_points(vec![i1(2)], i1(2));
        assert!(normalize_set(&bad, &c).is_err());
    }

    #[test]
    fn candidate_supports() {
        let c = ctx();
        let one = CompactSet::single_ball(i1(0), int(2), INF);
        assert_eq!(candidate_support(&one, &c).unwrap(), vec![ii(0, 2)]);
        assert_eq!(candidate_support(&two_balls(), &c).unwrap(), vec![ii(0, 1), ii(1, 1)]);
        let classical = CompactSet::from_points(vec![i1(0), i1(1)], INF);
        assert!(candidate_support(&classical, &c).unwrap().is_empty());
    }

    #[test]
    fn equilibrium_examples() {
        let c = ctx();
        let one = equilibrium(&CompactSet::single_ball(i1(0), int(2), INF), &c).unwrap();
        assert_eq!(one.robin, LogScalar::Finite(int(2)));
        assert_eq!(one.capacity_log, LogScalar::Finite(int(-2)));
        assert!(one.measure.same_as(&DiscreteMeasure::dirac(ii(0, 2)), &c));

        let pt = equilibrium(&CompactSet::from_points(vec![ii(0, 1)], INF), &c).unwrap();
        assert_eq!(pt.robin, LogScalar::Finite(int(1)));

        let two = equilibrium(&two_balls(), &c).unwrap();
        assert_eq!(two.robin, LogScalar::Finite(rat(1, 2)));
        assert_eq!(two.weights, vec![rat(1, 2), rat(1, 2)]);
        assert!(two.kkt_holds());

        let zero = equilibrium(&CompactSet::from_points(vec![i1(0), i1(1)], INF), &c).unwrap();
        assert!(zero.is_capacity_zero());
        assert!(zero.measure.is_empty());
    }

    #[test]
    fn two_ball_grid_oracle() {
        // t^2 + (1-t)^2 on a 1/1000 grid.
        let best = (0..=1000)
            .map(|k| {
                let t = rat(k, 1000);
                &t * &t + (int(1) - &t) * (int(1) - &t)
            })
            .min()
            .unwrap();
        assert_eq!(best, rat(1, 2));
    }

    #[test]
    fn capacity_zero_detection() {
        let c = ctx();
        assert!(is_capacity_zero(&CompactSet::from_points(vec![i1(0), i1(1)], INF), &c).unwrap());
        assert!(!is_capacity_zero(&CompactSet::from_points(vec![ii(0, 1)], INF), &c).unwrap());
        assert!(is_capacity_zero(&CompactSet::from_points(vec![i1(7)], INF), &c).unwrap());
    }

    #[test]
    fn interior_candidates_get_no_weight() {
        let c = ctx();
        // Roots of two balls plus points strictly inside them.
        let cands = [ii(0, 1), ii(1, 1), ii(0, 3), ii(1, 2), ii(2, 2)];
        let r = equilibrium_on(&cands, &INF, &c).unwrap();
        assert_eq!(r.robin, LogScalar::Finite(rat(1, 2)));
        assert_eq!(&r.weights[2..], &[int(0), int(0), int(0)]);
    }

    #[test]
    fn larger_supports_go_through_the_iterative_path() {
        let c = ctx();
        // Four balls of log-radius 2 below the Gauss point.
        let balls = (0..4).map(|k| Ball::new(i1(k), int(2))).collect();
        let r = equilibrium(&CompactSet::new(INF, balls, vec![]), &c).unwrap();
        assert!(r.weights.iter().all(|w| *w == rat(1, 4)));
        // Kernel matrix: 2 on the diagonal, 1 between 0,2 and 1,3, 0 otherwise.
        assert_eq!(r.robin, LogScalar::Finite(rat(3, 4)));
        // Unequal sizes, one ball carries no weight.
        let balls = vec![
            Ball::new(i1(0), int(5)),
            Ball::new(i1(1), int(1)),
            Ball::new(i1(2), int(3)),
            Ball::new(i1(3), int(4)),
            Ball::new(i1(8), int(4)),
        ];
        let r = equilibrium(&CompactSet::new(INF, balls, vec![]), &c).unwrap();
        assert!(r.kkt_holds());
        let small = equilibrium_on(&r.candidates, &INF, &c).unwrap();
        assert_eq!(small.robin, r.robin);
    }

    #[test]
    fn finite_pole() {
        let c = ctx();
        // Pole at 0: the ball {|z - 1| <= 1/2} has the same root as with pole at infinity.
        let e = CompactSet::single_ball(i1(1), int(1), i1(0));
        let r = equilibrium(&e, &c).unwrap();
        assert_eq!(r.robin, LogScalar::Finite(int(1)));
        assert!(c.same_point(&r.candidates[0], &ii(1, 1)));
    }
}
