//! Green functions of ball-union compacts, log-kernel competitors, their
//! upper envelope, and exact instance checks of the extremal identities.
//!
//! A competitor is `u(z) = c + sum_i w_i log_p [z, a_i]_zeta` with convex
//! weights. The equilibrium competitor (constant = Robin constant, atoms and
//! weights = equilibrium measure) coincides with the Green function, so the
//! envelope of competitors that stay `<= 0` on `E` is attained exactly.

use num_traits::{One, Signed, Zero};

use crate::equilibrium::{
    candidate_support, equilibrium, is_capacity_zero, normalize_set, potential, Ball, CompactSet,
    EquilibriumResult,
};
use crate::error::{precondition, Error, Result};
use crate::measure::DiscreteMeasure;
use crate::point::{BerkPoint, PrimeContext};
use crate::rational::{int, LogScalar, Rational};
use crate::tree::{CpaFunction, FiniteSubgraph};

/// `G(z) = V - u_mu(z)` for the equilibrium measure `mu` of a normalized set.
#[derive(Clone, Debug)]
pub struct GreenFunction {
    pub set: CompactSet,
    pub robin: Rational,
    pub measure: DiscreteMeasure,
}

impl GreenFunction {
    pub fn new(e: &CompactSet, ctx: &PrimeContext) -> Result<Self> {
        let set = normalize_set(e, ctx)?;
        let eq = equilibrium(&set, ctx)?;
        Self::from_equilibrium(set, eq)
    }

    pub fn from_equilibrium(set: CompactSet, eq: EquilibriumResult) -> Result<Self> {
        match eq.robin {
            LogScalar::Finite(robin) => Ok(GreenFunction { set, robin, measure: eq.measure }),
            _ => precondition("the Green function needs a set of positive capacity"),
        }
    }

    pub fn zeta(&self) -> &BerkPoint {
        &self.set.zeta
    }

    pub fn eval(&self, z: &BerkPoint, ctx: &PrimeContext) -> LogScalar {
        green_eval(self, z, ctx)
    }

    /// The equilibrium competitor, equal to `self` everywhere.
    pub fn as_candidate(&self) -> LCandidate {
        LCandidate {
            constant: self.robin.clone(),
            atoms: self.measure.atoms().to_vec(),
        }
    }
}

/// Exact value of the Green function; `+inf` at a type I pole.
pub fn green_eval(g: &GreenFunction, z: &BerkPoint, ctx: &PrimeContext) -> LogScalar {
    let u = potential(&g.measure, z, g.zeta(), ctx).expect("equilibrium atoms are type II");
    LogScalar::Finite(g.robin.clone()) - u
}

/// `max(R - (-log_p [z, a]_zeta), 0)`: the Green function of a single ball.
pub fn ball_green_closed_form(ball: &Ball, z: &BerkPoint, zeta: &BerkPoint, ctx: &PrimeContext) -> LogScalar {
    (LogScalar::Finite(ball.log_radius.clone()) - ctx.hsia_kernel_log(z, &ball.center, zeta))
        .max(LogScalar::zero())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.to_string(), passed, detail: detail.into() }
    }
}

/// A list of named checks; passes when all of them pass.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check::new(name, passed, detail));
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Checks finiteness, nonnegativity (strict on the pole side), vanishing on
/// the support, harmonicity off the support and the pole, and, when
/// `smaller` is the Green function of a subset, monotonicity.
pub fn green_properties_report(
    g: &GreenFunction,
    samples: &[BerkPoint],
    smaller: Option<&GreenFunction>,
    ctx: &PrimeContext,
) -> Result<Report> {
    let zeta = g.zeta();
    let samples: Vec<&BerkPoint> = samples.iter().filter(|z| !ctx.same_point(z, zeta)).collect();
    let values: Vec<LogScalar> = samples.iter().map(|z| g.eval(z, ctx)).collect();
    let mut report = Report::default();

    let infinite = samples.iter().zip(&values).find(|(_, v)| !v.is_finite());
    report.push(
        "finite",
        infinite.is_none(),
        infinite.map_or(format!("{} samples", samples.len()), |(z, v)| format!("G({z}) = {v}")),
    );

    let mut sign_witness = None;
    for (z, v) in samples.iter().zip(&values) {
        let outside = !g.set.separates_from_pole(z, ctx)?;
        let ok = if outside { *v > LogScalar::zero() } else { *v >= LogScalar::zero() };
        if !ok {
            sign_witness = Some(format!("G({z}) = {v}, pole side: {outside}"));
            break;
        }
    }
    report.push("nonnegative", sign_witness.is_none(), sign_witness.unwrap_or_default());

    let support = candidate_support(&g.set, ctx)?;
    let nonzero = support.iter().find(|x| g.eval(x, ctx) != LogScalar::zero());
    report.push(
        "vanishes on support",
        nonzero.is_none(),
        nonzero.map_or(format!("{} points", support.len()), |x| format!("G({x}) = {}", g.eval(x, ctx))),
    );

    let harmonic = harmonicity_witness(&g.as_candidate(), zeta, &samples, ctx)?;
    report.push("harmonic off support and pole", harmonic.is_none(), harmonic.unwrap_or_default());

    if let Some(g1) = smaller {
        let mut min_gap: Option<LogScalar> = None;
        let mut bad = None;
        for (z, v2) in samples.iter().zip(&values) {
            let v1 = g1.eval(z, ctx);
            if v1 < *v2 {
                bad = Some(format!("at {z}: {v1} < {v2}"));
                break;
            }
            let gap = v1.checked_add(&-v2.clone()).unwrap_or(LogScalar::zero());
            min_gap = Some(min_gap.map_or(gap.clone(), |m| m.min(gap)));
        }
        let detail = bad.clone().unwrap_or_else(|| {
            format!("min gap {}", min_gap.map_or("n/a".into(), |m| m.to_wire()))
        });
        report.push("monotone", bad.is_none(), detail);
    }
    Ok(report)
}

/// A type II vertex standing in for a type I point on a finite subgraph:
/// the disk around it of log-radius `depth`.
fn proxy(x: &BerkPoint, depth: &Rational) -> Option<BerkPoint> {
    match x {
        BerkPoint::TypeII { .. } => Some(x.clone()),
        BerkPoint::TypeI(c) => Some(BerkPoint::disk(c.clone(), depth.clone())),
        BerkPoint::Infinity => None,
    }
}

/// A depth beyond every breakpoint of the kernels of `atoms` and `zeta`
/// along paths into the listed points.
fn safe_depth(points: &[&BerkPoint], ctx: &PrimeContext) -> Rational {
    let mut hi = Rational::zero();
    for x in points {
        if let Some(c) = x.center() {
            if let LogScalar::Finite(v) = ctx.vp(c) {
                hi = hi.max(v.abs());
            }
        }
        if let BerkPoint::TypeII { log_radius, .. } = x {
            hi = hi.max(log_radius.abs());
        }
        for y in points {
            if let (Some(a), Some(b)) = (x.center(), y.center()) {
                if let LogScalar::Finite(v) = ctx.vp(&(a - b)) {
                    hi = hi.max(v.abs());
                }
            }
        }
    }
    hi + int(2)
}

/// The finite subgraph spanned by the candidate's atoms, the pole and the
/// type II samples, with a vertex standing for the pole. Type I points are
/// replaced by small disks around them.
fn spanning_subgraph(
    u: &LCandidate,
    zeta: &BerkPoint,
    samples: &[&BerkPoint],
    ctx: &PrimeContext,
) -> Result<(FiniteSubgraph, BerkPoint, Rational)> {
    let mut pts: Vec<&BerkPoint> = u.atoms.iter().map(|(a, _)| a).collect();
    pts.push(zeta);
    pts.extend(samples.iter().copied().filter(|z| z.is_type_ii()));
    let depth = safe_depth(&pts, ctx);
    let pole_vertex = match zeta {
        BerkPoint::Infinity => {
            let c = pts.iter().find_map(|x| x.center()).cloned().unwrap_or_else(Rational::zero);
            BerkPoint::disk(c, -depth.clone())
        }
        other => proxy(other, &depth).unwrap(),
    };
    let mut verts: Vec<BerkPoint> = pts.iter().filter_map(|x| proxy(x, &depth)).collect();
    verts.push(pole_vertex.clone());
    let graph = FiniteSubgraph::convex_hull(&verts, ctx)?;
    Ok((graph, pole_vertex, depth))
}

fn restrict<'g>(
    graph: &'g FiniteSubgraph,
    u: &LCandidate,
    zeta: &BerkPoint,
    ctx: &PrimeContext,
) -> Result<CpaFunction<'g>> {
    let values = graph
        .vertices()
        .iter()
        .map(|v| u.eval(v, zeta, ctx).expect_finite("candidate on a type II vertex"))
        .collect::<Result<Vec<_>>>()?;
    CpaFunction::new(graph, values)
}

/// `None` when the candidate has no Laplacian mass away from its atoms and
/// the pole on a subgraph spanning them and the samples.
fn harmonicity_witness(
    u: &LCandidate,
    zeta: &BerkPoint,
    samples: &[&BerkPoint],
    ctx: &PrimeContext,
) -> Result<Option<String>> {
    let (graph, pole_vertex, depth) = spanning_subgraph(u, zeta, samples, ctx)?;
    let f = restrict(&graph, u, zeta, ctx)?;
    let allowed: Vec<BerkPoint> = u
        .atoms
        .iter()
        .filter_map(|(a, _)| proxy(a, &depth))
        .chain([pole_vertex])
        .collect();
    for (v, w) in graph.vertices().iter().zip(f.laplacian_weights()) {
        if !w.is_zero() && !allowed.iter().any(|a| ctx.same_point(a, v)) {
            return Ok(Some(format!("Laplacian weight {w} at {v}")));
        }
    }
    Ok(None)
}

/// `u(z) = constant + sum_i w_i log_p [z, a_i]_zeta` with `w_i >= 0` summing to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LCandidate {
    pub constant: Rational,
    pub atoms: Vec<(BerkPoint, Rational)>,
}

impl LCandidate {
    pub fn new(
        constant: Rational,
        atoms: Vec<(BerkPoint, Rational)>,
        zeta: &BerkPoint,
        ctx: &PrimeContext,
    ) -> Result<Self> {
        if atoms.is_empty() {
            return precondition("a candidate needs at least one atom");
        }
        if let Some((a, w)) = atoms.iter().find(|(_, w)| w.is_negative()) {
            return precondition(format!("negative weight {w} at {a}"));
        }
        if !atoms.iter().map(|(_, w)| w).sum::<Rational>().is_one() {
            return precondition("candidate weights must sum to 1");
        }
        if let Some((a, _)) = atoms.iter().find(|(a, _)| ctx.same_point(a, zeta)) {
            return precondition(format!("atom {a} sits at the pole"));
        }
        Ok(LCandidate { constant, atoms })
    }

    /// `log_p [z, a]_zeta` shifted by `constant`.
    pub fn single(constant: Rational, a: BerkPoint, zeta: &BerkPoint, ctx: &PrimeContext) -> Result<Self> {
        Self::new(constant, vec![(a, Rational::one())], zeta, ctx)
    }

    pub fn eval(&self, z: &BerkPoint, zeta: &BerkPoint, ctx: &PrimeContext) -> LogScalar {
        let mut acc = LogScalar::Finite(self.constant.clone());
        for (a, w) in &self.atoms {
            acc = acc - ctx.hsia_kernel_log(z, a, zeta).scale(w);
        }
        acc
    }

    pub fn shifted(&self, by: &Rational) -> Self {
        LCandidate { constant: &self.constant + by, atoms: self.atoms.clone() }
    }

    /// The same candidate with its constant adjusted so that `sup_E u = 0`.
    pub fn normalized_on(&self, e: &CompactSet, ctx: &PrimeContext) -> Result<Self> {
        match candidate_sup_over_e(self, e, ctx)? {
            LogScalar::Finite(s) => Ok(self.shifted(&-s)),
            other => precondition(format!("sup over E is {other}; cannot normalize")),
        }
    }
}

/// Exact supremum of `u` over `E`. Each ball contributes its value at the
/// root, where `u` is constant across the ball as long as no atom lies
/// strictly inside it.
pub fn candidate_sup_over_e(u: &LCandidate, e: &CompactSet, ctx: &PrimeContext) -> Result<LogScalar> {
    if e.is_empty() {
        return precondition("sup over an empty set");
    }
    let zeta = &e.zeta;
    let roots = e.ball_roots(ctx)?;
    for (ball, root) in e.balls.iter().zip(&roots) {
        for (a, _) in &u.atoms {
            if ball.contains(a, zeta, ctx) && !ctx.same_point(a, root) {
                return precondition(format!(
                    "atom {a} lies strictly inside the ball rooted at {root}"
                ));
            }
        }
    }
    Ok(roots
        .iter()
        .chain(&e.points)
        .map(|x| u.eval(x, zeta, ctx))
        .max()
        .expect("nonempty set"))
}

/// The largest value at `z` among candidates normalized to `sup_E u = 0`;
/// `-inf` for an empty list.
pub fn extremal_envelope(
    e: &CompactSet,
    candidates: &[LCandidate],
    z: &BerkPoint,
    ctx: &PrimeContext,
) -> Result<LogScalar> {
    let mut best = LogScalar::NegInf;
    for (k, u) in candidates.iter().enumerate() {
        let sup = candidate_sup_over_e(u, e, ctx)?;
        if sup != LogScalar::zero() {
            return precondition(format!("candidate {k} has sup over E equal to {sup}, not 0"));
        }
        best = best.max(u.eval(z, &e.zeta, ctx));
    }
    Ok(best)
}

/// Outcome of [`verify_main_theorem`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MainTheoremReport {
    /// Largest `|G(z) - envelope(z)|` over the samples.
    pub max_gap: Rational,
    pub candidates: usize,
    pub samples: usize,
    pub report: Report,
}

impl MainTheoremReport {
    pub fn passed(&self) -> bool {
        self.report.passed() && self.max_gap.is_zero()
    }
}

/// A deterministic family of normalized competitors for `E`: one atom at
/// each support point and each exterior type II sample, uniform pairs of
/// support points, and the equilibrium competitor last.
pub fn standard_candidates(
    g: &GreenFunction,
    samples: &[BerkPoint],
    ctx: &PrimeContext,
) -> Result<Vec<LCandidate>> {
    let e = &g.set;
    let zeta = g.zeta();
    let support = candidate_support(e, ctx)?;
    let mut atoms: Vec<BerkPoint> = support.clone();
    for z in samples {
        if z.is_type_ii() && !ctx.same_point(z, zeta) && !e.contains(z, ctx) {
            atoms.push(z.clone());
        }
    }
    let mut out = Vec::new();
    for a in &atoms {
        out.push(LCandidate::single(Rational::zero(), a.clone(), zeta, ctx)?.normalized_on(e, ctx)?);
    }
    let half = Rational::new(1.into(), 2.into());
    for i in 0..support.len() {
        for j in (i + 1)..support.len() {
            let u = LCandidate::new(
                Rational::zero(),
                vec![(support[i].clone(), half.clone()), (support[j].clone(), half.clone())],
                zeta,
                ctx,
            )?;
            out.push(u.normalized_on(e, ctx)?);
        }
    }
    out.push(g.as_candidate());
    Ok(out)
}

/// Exact instance check of the identity between the Green function and the
/// regularized extremal envelope on a ball-union compact.
pub fn verify_main_theorem(e: &CompactSet, samples: &[BerkPoint], ctx: &PrimeContext) -> Result<MainTheoremReport> {
    verify_main_theorem_with(e, samples, &[], ctx)
}

/// [`verify_main_theorem`] with additional caller-supplied competitors,
/// which are normalized before use.
pub fn verify_main_theorem_with(
    e: &CompactSet,
    samples: &[BerkPoint],
    extra: &[LCandidate],
    ctx: &PrimeContext,
) -> Result<MainTheoremReport> {
    if is_capacity_zero(e, ctx)? {
        return precondition("the set has capacity zero; the identity needs positive capacity");
    }
    let g = GreenFunction::new(e, ctx)?;
    let set = &g.set;
    if let Some(x) = set.points.iter().find(|x| !x.is_type_ii()) {
        return precondition(format!(
            "isolated classical point {x} forms an exceptional set; exact attainment needs ball unions and type II points"
        ));
    }
    let zeta = g.zeta();
    let samples: Vec<BerkPoint> = samples.iter().filter(|z| !ctx.same_point(z, zeta)).cloned().collect();
    let mut candidates = standard_candidates(&g, &samples, ctx)?;
    for u in extra {
        candidates.push(u.normalized_on(set, ctx)?);
    }
    let equilibrium_candidate = g.as_candidate();
    let mut report = Report::default();

    let eq_sup = candidate_sup_over_e(&equilibrium_candidate, set, ctx)?;
    report.push("equilibrium candidate <= 0 on E", eq_sup == LogScalar::zero(), format!("sup = {eq_sup}"));

    for (k, u) in candidates.iter().enumerate() {
        let sup = candidate_sup_over_e(u, set, ctx)?;
        if sup != LogScalar::zero() {
            return Err(Error::Certification(format!("candidate {k} has sup over E equal to {sup}, not 0")));
        }
    }
    let mut below = None;
    let mut attained = None;
    let mut max_gap = Rational::zero();
    for z in &samples {
        let gz = g.eval(z, ctx);
        // The envelope of the normalized candidates at z.
        let mut env = LogScalar::NegInf;
        for (k, u) in candidates.iter().enumerate() {
            let v = u.eval(z, zeta, ctx);
            if v > gz && below.is_none() {
                below = Some(format!("candidate {k} exceeds G at {z}"));
            }
            env = env.max(v);
        }
        if equilibrium_candidate.eval(z, zeta, ctx) != gz && attained.is_none() {
            attained = Some(format!("equilibrium candidate differs from G at {z}"));
        }
        let gap = match (gz.finite(), env.finite()) {
            (Some(a), Some(b)) => (a - b).abs(),
            _ if gz == env => Rational::zero(),
            _ => return Err(Error::Certification(format!("envelope {env} vs G {gz} at {z}"))),
        };
        max_gap = max_gap.max(gap);
    }
    report.push("candidates <= G", below.is_none(), below.unwrap_or_default());
    report.push("equilibrium candidate = G", attained.is_none(), attained.unwrap_or_default());
    Ok(MainTheoremReport { max_gap, candidates: candidates.len(), samples: samples.len(), report })
}

/// Outcome of [`nested_limit_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestedLimitReport {
    /// `true` when the balls shrink toward the limit ball.
    pub decreasing_sets: bool,
    /// Values at the witness point, for `n = 1..=n_max`.
    pub witness: Option<BerkPoint>,
    pub witness_values: Vec<Rational>,
    /// `|G_n - G|` at the witness point.
    pub deviations: Vec<Rational>,
    /// Monotone in `n` at every sample, in the direction the family implies.
    pub monotone: bool,
    /// The closed form agreed with the equilibrium-based Green function.
    pub closed_form_agrees: bool,
    pub final_deviation: Rational,
}

/// Green functions of the balls `B(a, R + step/n)`, `n = 1..=n_max`, compared
/// with the limit ball `B(a, R)`. A negative `step` gives balls shrinking to
/// the limit (values increase in `n`); a positive one gives balls growing
/// toward it (values decrease).
pub fn nested_limit_check(
    center: &BerkPoint,
    log_radius: &Rational,
    step: &Rational,
    n_max: u32,
    zeta: &BerkPoint,
    samples: &[BerkPoint],
    ctx: &PrimeContext,
) -> Result<NestedLimitReport> {
    if n_max == 0 {
        return precondition("need at least one member of the family");
    }
    let limit = Ball::new(center.clone(), log_radius.clone());
    let family: Vec<Ball> = (1..=n_max)
        .map(|n| Ball::new(center.clone(), log_radius + step / Rational::from_integer(n.into())))
        .collect();
    let samples: Vec<&BerkPoint> = samples.iter().filter(|z| !ctx.same_point(z, zeta)).collect();

    let mut closed_form_agrees = true;
    for ball in family.iter().chain([&limit]) {
        let g = GreenFunction::new(&CompactSet::new(zeta.clone(), vec![ball.clone()], vec![]), ctx)?;
        closed_form_agrees &= samples
            .iter()
            .all(|z| g.eval(z, ctx) == ball_green_closed_form(ball, z, zeta, ctx));
    }

    let increasing = step.is_negative();
    let mut monotone = true;
    for z in &samples {
        let vals: Vec<LogScalar> = family.iter().map(|b| ball_green_closed_form(b, z, zeta, ctx)).collect();
        monotone &= vals.windows(2).all(|w| if increasing { w[0] <= w[1] } else { w[0] >= w[1] });
    }

    // The witness lies outside every member and the limit.
    let witness = samples
        .iter()
        .find(|z| !family.iter().chain([&limit]).any(|b| b.contains(z, zeta, ctx)))
        .map(|z| (*z).clone());
    let mut witness_values = Vec::new();
    let mut deviations = Vec::new();
    if let Some(z) = &witness {
        let target = ball_green_closed_form(&limit, z, zeta, ctx).expect_finite("limit value")?;
        for b in &family {
            let v = ball_green_closed_form(b, z, zeta, ctx).expect_finite("family value")?;
            deviations.push((&v - &target).abs());
            witness_values.push(v);
        }
    }
    Ok(NestedLimitReport {
        decreasing_sets: increasing,
        final_deviation: deviations.last().cloned().unwrap_or_else(Rational::zero),
        witness,
        witness_values,
        deviations,
        monotone,
        closed_form_agrees,
    })
}

/// The finite-stage Evans-type function `sum_k p_k (1/N_k) sum_i log_p [z, a_i]_zeta`
/// with nodes drawn from the finite set `f`.
pub fn evans_potential(
    f: &[BerkPoint],
    stages: &[(Rational, Vec<BerkPoint>)],
    zeta: &BerkPoint,
    ctx: &PrimeContext,
) -> Result<LCandidate> {
    if stages.is_empty() {
        return precondition("no stages");
    }
    let mut measure = DiscreteMeasure::new();
    for (pk, nodes) in stages {
        if pk.is_negative() {
            return precondition(format!("negative stage weight {pk}"));
        }
        if nodes.is_empty() {
            return precondition("a stage without nodes");
        }
        let w = pk / Rational::from_integer(nodes.len().into());
        for a in nodes {
            if !f.iter().any(|x| ctx.same_point(x, a)) {
                return precondition(format!("node {a} is not in the set"));
            }
            measure.add_atom(a.clone(), w.clone(), ctx);
        }
    }
    LCandidate::new(Rational::zero(), measure.atoms().to_vec(), zeta, ctx)
}

/// Evaluation along the path into a type I point `a`: the value at the disk
/// `D(a, t)`.
pub fn eval_toward(u: &LCandidate, a: &BerkPoint, t: &Rational, zeta: &BerkPoint, ctx: &PrimeContext) -> Result<LogScalar> {
    let Some(c) = a.center().filter(|_| a.is_type_i()) else {
        return precondition(format!("{a} is not a finite classical point"));
    };
    Ok(u.eval(&BerkPoint::disk(c.clone(), t.clone()), zeta, ctx))
}

/// `lim_{t -> inf} f(D(a, t))` for `f` affine in `t` beyond `depth`, checked
/// on three consecutive points.
fn affine_limit(f: impl Fn(&Rational) -> LogScalar, depth: &Rational) -> Result<LogScalar> {
    let ts = [depth.clone(), depth + int(1), depth + int(2)];
    let vs: Vec<LogScalar> = ts.iter().map(&f).collect();
    if vs.iter().all(|v| *v == vs[0]) {
        return Ok(vs[0].clone());
    }
    let (Some(v0), Some(v1), Some(v2)) = (vs[0].finite(), vs[1].finite(), vs[2].finite()) else {
        return Err(Error::Certification("non-finite values along the path".into()));
    };
    let slope = v1 - v0;
    if (v2 - v1) != slope {
        return Err(Error::Certification("function is not affine beyond the last breakpoint".into()));
    }
    Ok(if slope.is_positive() { LogScalar::PosInf } else { LogScalar::NegInf })
}

/// The upper regularization of `max_k u_k` at a type I point `a`, computed
/// as the limit along the path into `a`.
pub fn usc_regularize_along_path(
    candidates: &[LCandidate],
    a: &BerkPoint,
    zeta: &BerkPoint,
    ctx: &PrimeContext,
) -> Result<LogScalar> {
    if candidates.is_empty() {
        return Ok(LogScalar::NegInf);
    }
    if !a.is_type_i() || a.is_infinity() {
        return precondition(format!("{a} is not a finite classical point"));
    }
    let mut pts: Vec<&BerkPoint> = candidates.iter().flat_map(|u| u.atoms.iter().map(|(x, _)| x)).collect();
    pts.push(zeta);
    pts.push(a);
    let depth = safe_depth(&pts, ctx);
    // Each candidate is affine past `depth`; the maximum is decided by the
    // limits, with ties between finite limits settled by the value itself.
    let mut best = LogScalar::NegInf;
    for u in candidates {
        let lim = affine_limit(|t| eval_toward(u, a, t, zeta, ctx).unwrap(), &depth)?;
        best = best.max(lim);
    }
    Ok(best)
}

/// Outcome of [`brelot_cartan_family_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrelotCartanReport {
    pub point: BerkPoint,
    /// Points among `a` and the samples where the envelope is below its
    /// regularization.
    pub deficiency: Vec<BerkPoint>,
    pub deficiency_capacity_zero: bool,
    /// `(z, sup_n u_n(z), u*(z), u_{n_max}(z))`.
    pub values: Vec<(BerkPoint, LogScalar, LogScalar, LogScalar)>,
    pub report: Report,
}

/// The family `u_n = (1/n) log_p [z, a]_g`: negative, subharmonic off the
/// Gauss point, increasing to 0 except at a type I `a`.
pub fn brelot_cartan_family_check(
    a: &BerkPoint,
    n_max: u32,
    samples: &[BerkPoint],
    ctx: &PrimeContext,
) -> Result<BrelotCartanReport> {
    let g = BerkPoint::gauss();
    if ctx.same_point(a, &g) || a.is_infinity() {
        return precondition(format!("{a} must be a finite point other than the Gauss point"));
    }
    if n_max == 0 {
        return precondition("need at least one member of the family");
    }
    let kernel = |z: &BerkPoint| ctx.spherical_kernel_log(z, a);
    let member = |n: u32, z: &BerkPoint| -kernel(z).scale(&Rational::new(1.into(), n.into()));
    // sup_n of -K/n for K >= 0: 0 when K is finite, -inf when K = +inf.
    let envelope = |z: &BerkPoint| match kernel(z) {
        LogScalar::PosInf => LogScalar::NegInf,
        _ => LogScalar::zero(),
    };
    let regularized = |z: &BerkPoint| -> Result<LogScalar> {
        match z {
            BerkPoint::TypeI(c) => {
                let depth = safe_depth(&[z, a, &g], ctx);
                affine_limit(|t| envelope(&BerkPoint::disk(c.clone(), t.clone())), &depth)
            }
            // At type II points the envelope is the limit of a locally
            // uniformly converging sequence, hence equal to its regularization.
            _ => Ok(envelope(z)),
        }
    };

    let mut points: Vec<BerkPoint> = vec![a.clone()];
    points.extend(samples.iter().filter(|z| !ctx.same_point(z, &g) && !z.is_infinity()).cloned());
    let mut report = Report::default();
    let mut values = Vec::new();
    let mut deficiency: Vec<BerkPoint> = Vec::new();
    let mut members_nonpositive = true;
    for z in &points {
        let u = envelope(z);
        let ustar = regularized(z)?;
        let truncated = (1..=n_max).map(|n| member(n, z)).max().unwrap();
        members_nonpositive &= truncated <= LogScalar::zero();
        if u < ustar && !deficiency.iter().any(|d| ctx.same_point(d, z)) {
            deficiency.push(z.clone());
        }
        values.push((z.clone(), u, ustar, truncated));
    }
    let expected: Vec<BerkPoint> = if a.is_type_i() { vec![a.clone()] } else { vec![] };
    let deficiency_capacity_zero =
        is_capacity_zero(&CompactSet::from_points(deficiency.clone(), g.clone()), ctx)?;
    report.push("members <= 0", members_nonpositive, "");
    report.push(
        "deficiency set",
        deficiency.len() == expected.len()
            && deficiency.iter().zip(&expected).all(|(x, y)| ctx.same_point(x, y)),
        format!("{{{}}}", deficiency.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")),
    );
    report.push("deficiency has capacity zero", deficiency_capacity_zero, "");
    Ok(BrelotCartanReport { point: a.clone(), deficiency, deficiency_capacity_zero, values, report })
}

/// Checks that every standard competitor differs from each `log_p [., a]_zeta`
/// by a function with no Laplacian mass at the pole and none of positive
/// sign elsewhere off `a`, and that the envelope still attains `G`.
pub fn r_class_coincidence_check(e: &CompactSet, samples: &[BerkPoint], ctx: &PrimeContext) -> Result<Report> {
    let main = verify_main_theorem(e, samples, ctx)?;
    let g = GreenFunction::new(e, ctx)?;
    let zeta = g.zeta();
    let candidates = standard_candidates(&g, samples, ctx)?;
    let sample_refs: Vec<&BerkPoint> = samples.iter().collect();
    let mut report = Report::default();
    let mut failure = None;
    'cands: for (k, u) in candidates.iter().enumerate() {
        let (graph, pole_vertex, depth) = spanning_subgraph(u, zeta, &sample_refs, ctx)?;
        let fu = restrict(&graph, u, zeta, ctx)?;
        let wu = fu.laplacian_weights();
        for (a, _) in &u.atoms {
            let reference = LCandidate::single(Rational::zero(), a.clone(), zeta, ctx)?;
            let wr = restrict(&graph, &reference, zeta, ctx)?.laplacian_weights();
            let a_vertex = proxy(a, &depth).unwrap();
            for (v, (x, y)) in graph.vertices().iter().zip(wu.iter().zip(&wr)) {
                let diff = x - y;
                let at_pole = ctx.same_point(v, &pole_vertex);
                let at_a = ctx.same_point(v, &a_vertex);
                if (at_pole && !diff.is_zero()) || (!at_a && diff.is_positive()) {
                    failure = Some(format!("candidate {k}, atom {a}: difference has mass {diff} at {v}"));
                    break 'cands;
                }
            }
        }
    }
    report.push("differences harmonic at the pole", failure.is_none(), failure.unwrap_or_default());
    report.push("envelope attains G", main.passed(), format!("max gap {}", main.max_gap));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

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

    fn ball2() -> CompactSet {
        CompactSet::single_ball(i1(0), int(2), INF)
    }
    fn two_balls() -> CompactSet {
        CompactSet::new(INF, vec![Ball::new(i1(0), int(1)), Ball::new(i1(1), int(1))], vec![])
    }
    fn fin(r: Rational) -> LogScalar {
        LogScalar::Finite(r)
    }
    fn samples() -> Vec<BerkPoint> {
        let mut s: Vec<BerkPoint> = (-3..12).map(i1).collect();
        s.extend([rat(1, 2), rat(3, 4), rat(5, 8)].map(BerkPoint::TypeI));
        s.extend([ii(0, -2), ii(0, 0), ii(0, 1), ii(1, 1), ii(3, 3), ii(2, 1), ii(0, 5)]);
        s
    }

    #[test]
    fn green_examples() {
        let c = ctx();
        let g = GreenFunction::new(&ball2(), &c).unwrap();
        assert_eq!(g.eval(&i1(1), &c), fin(int(2)));
        assert_eq!(g.eval(&i1(8), &c), fin(int(0)));
        assert_eq!(g.eval(&INF, &c), LogScalar::PosInf);
        let g2 = GreenFunction::new(&two_balls(), &c).unwrap();
        assert_eq!(g2.eval(&BerkPoint::TypeI(rat(1, 2)), &c), fin(rat(3, 2)));
        // Growth at infinity: G - log|z| is constant for |z| large.
        for k in 3..8 {
            let z = BerkPoint::TypeI(Rational::new(1.into(), (1i64 << k).into()));
            let log_abs = int(k);
            assert_eq!(g2.eval(&z, &c), fin(log_abs + rat(1, 2)));
        }
        assert!(GreenFunction::new(&CompactSet::from_points(vec![i1(0)], INF), &c).is_err());
    }

    #[test]
    fn ball_closed_form_with_finite_poles() {
        let c = ctx();
        for zeta in [i1(0), BerkPoint::TypeI(rat(1, 3)), ii(4, 3)] {
            let e = CompactSet::single_ball(i1(1), int(2), zeta.clone());
            let g = GreenFunction::new(&e, &c).unwrap();
            for z in samples() {
                if c.same_point(&z, &zeta) {
                    continue;
                }
                assert_eq!(g.eval(&z, &c), ball_green_closed_form(&e.balls[0], &z, &zeta, &c), "{z} {zeta}");
            }
        }
    }

    #[test]
    fn properties_report() {
        let c = ctx();
        let g = GreenFunction::new(&ball2(), &c).unwrap();
        let r = green_properties_report(&g, &samples(), None, &c).unwrap();
        assert!(r.passed(), "{r:?}");
        let g1 = GreenFunction::new(&CompactSet::single_ball(i1(0), int(2), INF), &c).unwrap();
        let g2 = GreenFunction::new(&CompactSet::single_ball(i1(0), int(1), INF), &c).unwrap();
        let r = green_properties_report(&g2, &samples(), Some(&g1), &c).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(g1.eval(&i1(1), &c), fin(int(2)));
        assert_eq!(g2.eval(&i1(1), &c), fin(int(1)));
        let same = green_properties_report(&g1, &samples(), Some(&g1), &c).unwrap();
        assert_eq!(same.get("monotone").unwrap().detail, "min gap 0/1");
        // Reversed roles fail.
        let bad = green_properties_report(&g1, &samples(), Some(&g2), &c).unwrap();
        assert!(!bad.get("monotone").unwrap().passed);
        let g3 = GreenFunction::new(&two_balls(), &c).unwrap();
        assert!(green_properties_report(&g3, &samples(), None, &c).unwrap().passed());
    }

    #[test]
    fn sup_over_e_examples() {
        let c = ctx();
        let u = LCandidate::single(int(0), ii(0, 2), &INF, &c).unwrap();
        assert_eq!(candidate_sup_over_e(&u, &ball2(), &c).unwrap(), fin(int(-2)));
        assert!(LCandidate::new(int(3), vec![], &INF, &c).is_err());
        let g = GreenFunction::new(&two_balls(), &c).unwrap();
        assert_eq!(g.as_candidate().constant, rat(1, 2));
        assert_eq!(candidate_sup_over_e(&g.as_candidate(), &two_balls(), &c).unwrap(), fin(int(0)));
        let inside = LCandidate::single(int(0), ii(0, 4), &INF, &c).unwrap();
        assert!(candidate_sup_over_e(&inside, &ball2(), &c).is_err());
    }

    #[test]
    fn envelope_examples() {
        let c = ctx();
        let u = LCandidate::single(int(0), ii(0, 2), &INF, &c).unwrap().normalized_on(&ball2(), &c).unwrap();
        assert_eq!(extremal_envelope(&ball2(), &[u], &i1(1), &c).unwrap(), fin(int(2)));
        assert_eq!(extremal_envelope(&ball2(), &[], &i1(1), &c).unwrap(), LogScalar::NegInf);
        let e = two_balls();
        let g = GreenFunction::new(&e, &c).unwrap();
        let singles: Vec<LCandidate> = [ii(0, 1), ii(1, 1)]
            .into_iter()
            .map(|a| LCandidate::single(int(0), a, &INF, &c).unwrap().normalized_on(&e, &c).unwrap())
            .collect();
        let z = BerkPoint::TypeI(rat(1, 2));
        for u in &singles {
            assert_eq!(u.eval(&z, &INF, &c), fin(int(1)));
        }
        let mut all = singles.clone();
        all.push(g.as_candidate());
        assert_eq!(extremal_envelope(&e, &all, &z, &c).unwrap(), fin(rat(3, 2)));
        let unnormalized = LCandidate::single(int(5), ii(0, 1), &INF, &c).unwrap();
        assert!(extremal_envelope(&e, &[unnormalized], &z, &c).is_err());
    }

    #[test]
    fn main_theorem_instances() {
        let c = ctx();
        for e in [
            ball2(),
            two_balls(),
            CompactSet::from_points(vec![ii(0, 1)], INF),
            CompactSet::new(i1(0), vec![Ball::new(i1(1), int(1)), Ball::new(i1(3), int(3))], vec![ii(2, 3)]),
        ] {
            let r = verify_main_theorem(&e, &samples(), &c).unwrap();
            assert!(r.passed(), "{e:?}: {r:?}");
            assert_eq!(r.max_gap, int(0));
        }
        let point = GreenFunction::new(&CompactSet::from_points(vec![ii(0, 1)], INF), &c).unwrap();
        // G(z) = log[z,a] + diam correction: 1 - K(z, D(0,1)).
        assert_eq!(point.eval(&i1(1), &c), fin(int(1)));
        let zero = CompactSet::from_points(vec![i1(0), i1(1)], INF);
        assert!(matches!(verify_main_theorem(&zero, &samples(), &c), Err(Error::Precondition(_))));
    }

    #[test]
    fn nested_limits() {
        let c = ctx();
        let s = samples();
        let r = nested_limit_check(&i1(0), &int(2), &int(-1), 8, &INF, &s, &c).unwrap();
        assert!(r.decreasing_sets && r.monotone && r.closed_form_agrees);
        assert_eq!(r.witness_values[0], int(1));
        assert_eq!(r.final_deviation, rat(1, 8));
        let r = nested_limit_check(&i1(0), &int(2), &int(1), 64, &INF, &s, &c).unwrap();
        assert!(!r.decreasing_sets && r.monotone);
        for (n, d) in r.deviations.iter().enumerate() {
            assert_eq!(*d, rat(1, n as i64 + 1));
        }
        let flat = nested_limit_check(&i1(0), &int(2), &int(0), 5, &INF, &s, &c).unwrap();
        assert!(flat.witness_values.iter().all(|v| *v == int(2)));
    }

    #[test]
    fn evans_examples() {
        let c = ctx();
        let f = [i1(0)];
        let w = evans_potential(&f, &[(int(1), vec![i1(0)])], &INF, &c).unwrap();
        assert_eq!(w.eval(&i1(0), &INF, &c), LogScalar::NegInf);
        assert_eq!(w.eval(&i1(1), &INF, &c), fin(int(0)));
        let w2 = evans_potential(&f, &[(rat(1, 2), vec![i1(0)]), (rat(1, 2), vec![i1(0)])], &INF, &c).unwrap();
        assert_eq!(w2, w);
        let a = eval_toward(&w, &i1(0), &int(5), &INF, &c).unwrap();
        let b = eval_toward(&w, &i1(0), &int(9), &INF, &c).unwrap();
        assert!(b < a);
        assert!(evans_potential(&f, &[(int(1), vec![i1(3)])], &INF, &c).is_err());
    }

    #[test]
    fn usc_examples() {
        let c = ctx();
        let log0 = LCandidate::single(int(0), i1(0), &INF, &c).unwrap();
        assert_eq!(usc_regularize_along_path(std::slice::from_ref(&log0), &i1(0), &INF, &c).unwrap(), LogScalar::NegInf);
        // Near 0 the second candidate is the constant -1 + log|0 - 1| = -1.
        let flat = LCandidate::single(int(-1), i1(1), &INF, &c).unwrap();
        let v = usc_regularize_along_path(&[log0, flat], &i1(0), &INF, &c).unwrap();
        assert_eq!(v, fin(int(-1)));
        let g = GreenFunction::new(&ball2(), &c).unwrap();
        assert_eq!(usc_regularize_along_path(&[g.as_candidate()], &i1(4), &INF, &c).unwrap(), fin(int(0)));
    }

    #[test]
    fn brelot_cartan_examples() {
        let c = ctx();
        let s = samples();
        let r = brelot_cartan_family_check(&i1(0), 10, &s, &c).unwrap();
        assert!(r.report.passed(), "{r:?}");
        assert_eq!(r.deficiency, vec![i1(0)]);
        assert_eq!((r.values[0].1.clone(), r.values[0].2.clone()), (LogScalar::NegInf, fin(int(0))));
        let r = brelot_cartan_family_check(&ii(0, 1), 10, &s, &c).unwrap();
        assert!(r.report.passed() && r.deficiency.is_empty());
        assert_eq!(r.values[0].3, fin(rat(-1, 10)));
        let one = brelot_cartan_family_check(&i1(3), 1, &s, &c).unwrap();
        assert!(one.report.passed());
        assert!(brelot_cartan_family_check(&BerkPoint::gauss(), 3, &s, &c).is_err());
    }

    #[test]
    fn r_class_instances() {
        let c = ctx();
        for e in [ball2(), two_balls(), CompactSet::from_points(vec![ii(0, 1)], INF)] {
            let r = r_class_coincidence_check(&e, &samples(), &c).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }
}
