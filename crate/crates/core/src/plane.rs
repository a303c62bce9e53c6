//! Fekete and Leja points, Lagrange growth and Green functions for compact
//! sets in the complex plane, in double precision with natural logarithms.

use num_complex::Complex64;

use crate::error::{precondition, Result};

/// Points closer than this are treated as equal.
const DISTINCT_TOL: f64 = 1e-12;
/// Relative slack when comparing log-products for ties.
const TIE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum PlaneCompact {
    UnitCircle { m: usize },
    /// Closed disk; discretized on its boundary circle.
    Disk { center: Complex64, radius: f64, m: usize },
    /// Real segment `[a, b]`, discretized at cosine-spaced points.
    Interval { a: f64, b: f64, m: usize },
    FinitePoints(Vec<Complex64>),
    /// Boundary of the polygon with these vertices, sampled by arclength.
    Polygon { vertices: Vec<Complex64>, m: usize },
}

impl PlaneCompact {
    pub fn unit_circle(m: usize) -> Self {
        PlaneCompact::UnitCircle { m }
    }

    pub fn disk(center: Complex64, radius: f64, m: usize) -> Self {
        PlaneCompact::Disk { center, radius, m }
    }

    pub fn interval(a: f64, b: f64, m: usize) -> Self {
        PlaneCompact::Interval { a, b, m }
    }

    /// The boundary sample, `m` points for every kind but a finite list.
    pub fn discretize(&self) -> Result<Vec<Complex64>> {
        let check_m = |m: usize| if m < 8 { precondition(format!("discretization m = {m} is below 8")) } else { Ok(()) };
        let circle = |c: Complex64, r: f64, m: usize| -> Vec<Complex64> {
            (0..m)
                .map(|k| c + Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / m as f64))
                .collect()
        };
        match self {
            PlaneCompact::UnitCircle { m } => {
                check_m(*m)?;
                Ok(circle(Complex64::new(0.0, 0.0), 1.0, *m))
            }
            PlaneCompact::Disk { center, radius, m } => {
                check_m(*m)?;
                if !(*radius > 0.0) {
                    return precondition("disk radius must be positive");
                }
                Ok(circle(*center, *radius, *m))
            }
            PlaneCompact::Interval { a, b, m } => {
                check_m(*m)?;
                if !(a < b) {
                    return precondition("interval needs a < b");
                }
                let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
                Ok((0..*m)
                    .map(|k| {
                        let theta = std::f64::consts::PI * k as f64 / (*m - 1) as f64;
                        Complex64::new(mid - half * theta.cos(), 0.0)
                    })
                    .collect())
            }
            PlaneCompact::FinitePoints(pts) => {
                require_distinct(pts)?;
                Ok(pts.clone())
            }
            PlaneCompact::Polygon { vertices, m } => {
                check_m(*m)?;
                if vertices.len() < 3 {
                    return precondition("polygon needs at least three vertices");
                }
                let edges: Vec<(Complex64, Complex64)> = (0..vertices.len())
                    .map(|i| (vertices[i], vertices[(i + 1) % vertices.len()]))
                    .collect();
                let perimeter: f64 = edges.iter().map(|(p, q)| (q - p).norm()).sum();
                let mut out = Vec::with_capacity(*m);
                for k in 0..*m {
                    let mut s = perimeter * k as f64 / *m as f64;
                    for (p, q) in &edges {
                        let len = (q - p).norm();
                        if s <= len {
                            out.push(p + (q - p) * (s / len));
                            break;
                        }
                        s -= len;
                    }
                }
                require_distinct(&out)?;
                Ok(out)
            }
        }
    }
}

fn require_distinct(points: &[Complex64]) -> Result<()> {
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if (points[i] - points[j]).norm() <= DISTINCT_TOL {
                return precondition(format!("points {i} and {j} coincide"));
            }
        }
    }
    Ok(())
}

/// `sum_{j<k} log|a_j - a_k|`.
pub fn vandermonde_log(points: &[Complex64]) -> Result<f64> {
    if points.len() < 2 {
        return precondition("need at least two points");
    }
    require_distinct(points)?;
    let mut acc = 0.0;
    for j in 0..points.len() {
        for k in (j + 1)..points.len() {
            acc += (points[j] - points[k]).norm().ln();
        }
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeketeMode {
    /// True maximizer over all `(n+1)`-subsets of the discretization.
    Exhaustive,
    /// The greedy Leja sequence; its Vandermonde product is a lower bound.
    Greedy,
}

impl std::str::FromStr for FeketeMode {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(FeketeMode::Exhaustive),
            "greedy" => Ok(FeketeMode::Greedy),
            other => Err(crate::Error::Parse(format!("unknown mode `{other}`"))),
        }
    }
}

/// Subsets allowed in exhaustive mode.
pub const EXHAUSTIVE_BUDGET: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct FeketeArray {
    pub order: usize,
    /// `b_0, ..., b_n` in Leja order.
    pub points: Vec<Complex64>,
    pub log_vandermonde: f64,
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        // Partial products only grow from here on.
        if acc > EXHAUSTIVE_BUDGET {
            return u128::MAX;
        }
    }
    acc
}

/// `n + 1` points of the discretization of `e` maximizing (or, in greedy
/// mode, approximately maximizing) the Vandermonde product.
pub fn fekete_points(e: &PlaneCompact, n: usize, mode: FeketeMode) -> Result<FeketeArray> {
    let grid = e.discretize()?;
    if n == 0 {
        return precondition("order must be at least 1");
    }
    if n + 1 > grid.len() {
        return precondition(format!("order {n} needs {} points, the discretization has {}", n + 1, grid.len()));
    }
    let chosen = match mode {
        FeketeMode::Exhaustive => {
            let count = binomial(grid.len(), n + 1);
            if count > EXHAUSTIVE_BUDGET {
                return precondition(format!(
                    "exhaustive search over C({}, {}) subsets exceeds the budget of {EXHAUSTIVE_BUDGET}; use greedy mode",
                    grid.len(),
                    n + 1
                ));
            }
            exhaustive_max(&grid, n + 1)
        }
        FeketeMode::Greedy => greedy_leja(&grid, n + 1),
    };
    let points = leja_order(&chosen)?;
    let log_vandermonde = vandermonde_log(&points)?;
    Ok(FeketeArray { order: n, points, log_vandermonde })
}

fn exhaustive_max(grid: &[Complex64], k: usize) -> Vec<Complex64> {
    let m = grid.len();
    let logd: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { 0.0 } else { (grid[i] - grid[j]).norm().ln() }).collect())
        .collect();
    let mut idx: Vec<usize> = (0..k).collect();
    let mut best: Option<(f64, Vec<usize>)> = None;
    loop {
        let mut v = 0.0;
        for a in 0..k {
            for b in (a + 1)..k {
                v += logd[idx[a]][idx[b]];
            }
        }
        // Lexicographic order of enumeration makes the first maximizer win ties.
        if best.as_ref().is_none_or(|(b, _)| v > b + TIE_TOL * b.abs().max(1.0)) {
            best = Some((v, idx.clone()));
        }
        // Next combination.
        let Some(pos) = (0..k).rev().find(|&i| idx[i] < m - k + i) else {
            break;
        };
        idx[pos] += 1;
        for i in (pos + 1)..k {
            idx[i] = idx[i - 1] + 1;
        }
    }
    best.expect("at least one subset").1.into_iter().map(|i| grid[i]).collect()
}

/// Greedy Leja sequence: start at the point of largest modulus, then add the
/// point maximizing the product of distances to those already chosen.
fn greedy_leja(grid: &[Complex64], k: usize) -> Vec<Complex64> {
    let mut first = 0;
    for (i, z) in grid.iter().enumerate() {
        if z.norm() > grid[first].norm() + TIE_TOL {
            first = i;
        }
    }
    let mut chosen = vec![first];
    let mut score: Vec<f64> = grid.iter().map(|z| (z - grid[first]).norm().ln()).collect();
    while chosen.len() < k {
        let mut pick: Option<usize> = None;
        for i in 0..grid.len() {
            if chosen.contains(&i) {
                continue;
            }
            match pick {
                Some(p) if score[i] <= score[p] + TIE_TOL * score[p].abs().max(1.0) => {}
                _ => pick = Some(i),
            }
        }
        let p = pick.expect("enough points remain");
        chosen.push(p);
        for (i, z) in grid.iter().enumerate() {
            score[i] += (z - grid[p]).norm().ln();
        }
    }
    chosen.into_iter().map(|i| grid[i]).collect()
}

/// Moves the point with the smallest `|Delta_j| = prod_{i != j} |b_j - b_i|`
/// to the front, keeping the rest in their original order.
pub fn leja_order(points: &[Complex64]) -> Result<Vec<Complex64>> {
    require_distinct(points)?;
    let log_delta = |j: usize| -> f64 {
        points
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != j)
            .map(|(_, b)| (points[j] - b).norm().ln())
            .sum()
    };
    let mut best = 0;
    let mut best_val = log_delta(0);
    for j in 1..points.len() {
        let v = log_delta(j);
        if v < best_val - TIE_TOL * best_val.abs().max(1.0) {
            best = j;
            best_val = v;
        }
    }
    let mut out = Vec::with_capacity(points.len());
    out.push(points[best]);
    out.extend(points.iter().enumerate().filter(|(i, _)| *i != best).map(|(_, z)| *z));
    Ok(out)
}

fn sorted_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    terms.into_iter().sum()
}

/// `log |L_n(z)|` for the cardinal function of `b_0` on the nodes `b_0..b_n`.
pub fn lagrange_log_abs(nodes: &[Complex64], z: Complex64) -> Result<f64> {
    if nodes.len() < 2 {
        return precondition("need at least two nodes");
    }
    let b0 = nodes[0];
    let rest = &nodes[1..];
    if let Some(i) = rest.iter().position(|b| (z - b).norm() <= DISTINCT_TOL) {
        return precondition(format!("z coincides with node {}", i + 1));
    }
    let num = sorted_sum(rest.iter().map(|b| (z - b).norm().ln()).collect());
    let den = sorted_sum(rest.iter().map(|b| (b0 - b).norm().ln()).collect());
    Ok(num - den)
}

/// `(1/n) log |L_n(z)|` on Fekete (exhaustive) or Leja (greedy) nodes of
/// order `n`.
pub fn leja_extremal(e: &PlaneCompact, z: Complex64, n: usize, mode: FeketeMode) -> Result<f64> {
    let grid = e.discretize()?;
    if grid.iter().any(|b| (z - b).norm() <= DISTINCT_TOL) {
        return precondition("z lies on the discretization");
    }
    let arr = fekete_points(e, n, mode)?;
    Ok(lagrange_log_abs(&arr.points, z)? / n as f64)
}

/// Closed-form Green function with pole at infinity for a disk, circle or
/// interval, evaluated outside the set.
pub fn classical_green(e: &PlaneCompact, z: Complex64) -> Result<f64> {
    const EDGE: f64 = 1e-12;
    match e {
        PlaneCompact::UnitCircle { .. } => classical_green(&PlaneCompact::disk(Complex64::new(0.0, 0.0), 1.0, 8), z),
        PlaneCompact::Disk { center, radius, .. } => {
            let d = (z - center).norm();
            if d < radius * (1.0 - EDGE) {
                return precondition("z lies inside the disk");
            }
            Ok((d / radius).ln().max(0.0))
        }
        PlaneCompact::Interval { a, b, .. } => {
            let w = (z * 2.0 - (a + b)) / (b - a);
            let root = (w * w - 1.0).sqrt();
            let (p, q) = ((w + root).norm(), (w - root).norm());
            Ok(p.max(q).ln().max(0.0))
        }
        _ => precondition("closed-form Green functions cover disks, circles and intervals"),
    }
}

/// `-(2 / (n (n+1))) log V` of the order-`n` Fekete array, using exhaustive
/// search within budget and the Leja sequence otherwise.
pub fn discrete_equilibrium_energy(e: &PlaneCompact, n: usize) -> Result<f64> {
    if n < 2 {
        return precondition("order must be at least 2");
    }
    let grid = e.discretize()?;
    let mode = if binomial(grid.len(), n + 1) <= EXHAUSTIVE_BUDGET {
        FeketeMode::Exhaustive
    } else {
        FeketeMode::Greedy
    };
    let arr = fekete_points(e, n, mode)?;
    Ok(-2.0 / (n * (n + 1)) as f64 * arr.log_vandermonde)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn roots(n: usize) -> Vec<Complex64> {
        PlaneCompact::unit_circle(n.max(8)).discretize().unwrap().into_iter().step_by(n.max(8) / n).collect()
    }

    #[test]
    fn vandermonde_examples() {
        let cube: Vec<Complex64> = (0..3)
            .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 3.0))
            .collect();
        assert!((vandermonde_log(&cube).unwrap() - 3.0 * 3f64.sqrt().ln()).abs() < 1e-9);
        assert_eq!(vandermonde_log(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap(), 0.0);
        let line = [c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)];
        assert!((vandermonde_log(&line).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!(vandermonde_log(&[c(1.0, 0.0), c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn fekete_examples() {
        let square = PlaneCompact::FinitePoints(vec![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)]);
        let a = fekete_points(&square, 1, FeketeMode::Exhaustive).unwrap();
        assert!(((a.points[0] - a.points[1]).norm() - 2.0).abs() < 1e-12);
        assert!((a.log_vandermonde - 2f64.ln()).abs() < 1e-12);

        let circle = PlaneCompact::unit_circle(64);
        let f = fekete_points(&circle, 3, FeketeMode::Exhaustive).unwrap();
        assert!((f.log_vandermonde - vandermonde_log(&roots(4)).unwrap()).abs() < 1e-6);
        let g = fekete_points(&circle, 3, FeketeMode::Greedy).unwrap();
        assert!(g.log_vandermonde <= f.log_vandermonde + 1e-12);

        let big = PlaneCompact::unit_circle(256);
        assert!(fekete_points(&big, 15, FeketeMode::Exhaustive).is_err());
    }

    #[test]
    fn leja_order_examples() {
        let pts = [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0)];
        assert_eq!(leja_order(&pts).unwrap()[0], c(0.0, 1.0));
        let two = [c(0.0, 0.0), c(3.0, 0.0)];
        assert_eq!(leja_order(&two).unwrap(), two.to_vec());
        let ordered = leja_order(&pts).unwrap();
        assert_eq!(leja_order(&ordered).unwrap(), ordered);
    }

    #[test]
    fn lagrange_examples() {
        assert_eq!(lagrange_log_abs(&[c(0.0, 0.0), c(1.0, 0.0)], c(2.0, 0.0)).unwrap(), 0.0);
        let r = leja_order(&roots(64)).unwrap();
        let z = c(2.0, 0.0);
        let expected = (2f64.powi(64) - 1.0).ln() - (z - r[0]).norm().ln() - 64f64.ln();
        assert!((lagrange_log_abs(&r, z).unwrap() - expected).abs() < 1e-9);
        assert_eq!(lagrange_log_abs(&r, r[0]).unwrap(), 0.0);
        assert!(lagrange_log_abs(&r, r[5]).is_err());
    }

    #[test]
    fn classical_green_examples() {
        let disk = PlaneCompact::disk(c(0.0, 0.0), 1.0, 16);
        assert!((classical_green(&disk, c(2.0, 0.0)).unwrap() - 2f64.ln()).abs() < 1e-15);
        let seg = PlaneCompact::interval(-1.0, 1.0, 16);
        assert!((classical_green(&seg, c(2.0, 0.0)).unwrap() - 1.316958).abs() < 1e-6);
        assert!((classical_green(&seg, c(-2.0, 0.0)).unwrap() - 1.316958).abs() < 1e-6);
        assert_eq!(classical_green(&disk, c(0.0, 1.0)).unwrap(), 0.0);
        assert_eq!(classical_green(&seg, c(0.5, 0.0)).unwrap(), 0.0);
        assert!(classical_green(&disk, c(0.5, 0.0)).is_err());
    }

    #[test]
    fn extremal_and_energy() {
        let circle = PlaneCompact::unit_circle(256);
        let v = leja_extremal(&circle, c(2.0, 0.0), 64, FeketeMode::Greedy).unwrap();
        assert!((v - 2f64.ln()).abs() <= (3.0 * 64f64).ln() / 64.0, "{v}");
        let disk2 = PlaneCompact::disk(c(0.0, 0.0), 2.0, 256);
        let v = leja_extremal(&disk2, c(4.0, 0.0), 64, FeketeMode::Greedy).unwrap();
        assert!((v - 2f64.ln()).abs() < 0.1);
        let e = discrete_equilibrium_energy(&PlaneCompact::unit_circle(9 * 8), 8).unwrap();
        assert!(e.abs() < 0.3, "{e}");
        let e = discrete_equilibrium_energy(&PlaneCompact::interval(-1.0, 1.0, 512), 32).unwrap();
        assert!((e - 2f64.ln()).abs() < 0.15, "{e}");
        assert!(discrete_equilibrium_energy(&PlaneCompact::FinitePoints(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]), 2).is_err());
    }
}
