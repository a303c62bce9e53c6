//! Finite metric subtrees of the Berkovich line and calculus on them.
//!
//! A [`FiniteSubgraph`] is a finite tree of type II points whose edges are
//! geodesic segments with exact rational lengths. Functions on it are
//! continuous and piecewise affine ([`CpaFunction`]), stored by their vertex
//! values and interpolated by arclength along each edge. The Laplacian is
//!
//! ```text
//! Delta(f) = - sum_p ( sum of outgoing slopes of f at p ) delta_p
//! ```
//!
//! so a function is subharmonic on a set of interior vertices when its
//! Laplacian has nonpositive weight there.

use std::collections::VecDeque;

use num_traits::{Signed, Zero};

use crate::equilibrium::potential;
use crate::error::{precondition, Error, Result};
use crate::linalg;
use crate::measure::DiscreteMeasure;
use crate::point::{BerkPoint, PrimeContext};
use crate::rational::{LogScalar, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub length: Rational,
}

#[derive(Clone, Debug)]
pub struct FiniteSubgraph {
    vertices: Vec<BerkPoint>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
}

fn require_type_ii(points: &[BerkPoint]) -> Result<()> {
    match points.iter().find(|x| !x.is_type_ii()) {
        Some(x) => precondition(format!("finite subgraphs hold type II points only, got {x}")),
        None => Ok(()),
    }
}

impl FiniteSubgraph {
    /// The smallest subtree containing `points`: the inputs plus all their
    /// pairwise joins, each vertex linked to the nearest vertex above it.
    pub fn convex_hull(points: &[BerkPoint], ctx: &PrimeContext) -> Result<Self> {
        if points.is_empty() {
            return precondition("convex hull of an empty set");
        }
        require_type_ii(points)?;
        let mut vertices: Vec<BerkPoint> = Vec::new();
        let insert = |x: BerkPoint, vs: &mut Vec<BerkPoint>| {
            if !vs.iter().any(|v| ctx.same_point(v, &x)) {
                vs.push(x);
            }
        };
        for x in points {
            insert(x.clone(), &mut vertices);
        }
        let n = vertices.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let m = ctx.join_wrt_infinity(&vertices[i], &vertices[j])?;
                insert(m, &mut vertices);
            }
        }
        let mut edges = Vec::new();
        for (i, v) in vertices.iter().enumerate() {
            // Parent: the deepest vertex strictly above v on its way to infinity.
            let parent = vertices
                .iter()
                .enumerate()
                .filter(|(j, w)| {
                    *j != i && ctx.lies_between(v, &BerkPoint::Infinity, w)
                })
                .max_by(|(_, a), (_, b)| a.log_radius().cmp(&b.log_radius()));
            if let Some((j, w)) = parent {
                edges.push(Edge { a: j, b: i, length: ctx.path_distance(w, v)? });
            }
        }
        Ok(Self::assemble(vertices, edges))
    }

    /// Builds a subgraph from explicit vertices and edges, recomputing edge
    /// lengths and checking the tree invariants.
    pub fn from_parts(
        vertices: Vec<BerkPoint>,
        edge_pairs: &[(usize, usize)],
        ctx: &PrimeContext,
    ) -> Result<Self> {
        if vertices.is_empty() {
            return precondition("subgraph without vertices");
        }
        require_type_ii(&vertices)?;
        let n = vertices.len();
        for i in 0..n {
            for j in (i + 1)..n {
                if ctx.same_point(&vertices[i], &vertices[j]) {
                    return precondition(format!("vertices {i} and {j} are the same point"));
                }
            }
        }
        if edge_pairs.len() + 1 != n {
            return precondition(format!("a tree on {n} vertices needs {} edges", n - 1));
        }
        let mut edges = Vec::with_capacity(edge_pairs.len());
        for &(a, b) in edge_pairs {
            if a >= n || b >= n || a == b {
                return precondition(format!("bad edge [{a}, {b}]"));
            }
            let (va, vb) = (&vertices[a], &vertices[b]);
            if let Some(k) = (0..n).find(|&k| {
                k != a && k != b && ctx.lies_between(va, vb, &vertices[k])
            }) {
                return precondition(format!(
                    "edge [{a}, {b}] is not tree-adjacent: vertex {k} lies between its endpoints"
                ));
            }
            edges.push(Edge { a, b, length: ctx.path_distance(va, vb)? });
        }
        let graph = Self::assemble(vertices, edges);
        if graph.component_size(0) != n {
            return precondition("edges do not connect all vertices");
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let m = ctx.join_wrt_infinity(&graph.vertices[i], &graph.vertices[j])?;
                if graph.vertex_index(&m, ctx).is_none() {
                    return precondition(format!(
                        "join {m} of vertices {i} and {j} is missing from the vertex set"
                    ));
                }
            }
        }
        Ok(graph)
    }

    /// Like [`FiniteSubgraph::from_parts`] but also checks caller-supplied
    /// lengths against the path distance.
    pub fn from_parts_with_lengths(
        vertices: Vec<BerkPoint>,
        edges: &[(usize, usize, Rational)],
        ctx: &PrimeContext,
    ) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = edges.iter().map(|(a, b, _)| (*a, *b)).collect();
        let graph = Self::from_parts(vertices, &pairs, ctx)?;
        for ((a, b, len), e) in edges.iter().zip(&graph.edges) {
            if *len != e.length {
                return precondition(format!(
                    "edge [{a}, {b}] has length {} but the path distance is {}",
                    crate::rational::format_rational(len),
                    crate::rational::format_rational(&e.length)
                ));
            }
        }
        Ok(graph)
    }

    fn assemble(vertices: Vec<BerkPoint>, edges: Vec<Edge>) -> Self {
        let mut adjacency = vec![Vec::new(); vertices.len()];
        for (k, e) in edges.iter().enumerate() {
            adjacency[e.a].push(k);
            adjacency[e.b].push(k);
        }
        FiniteSubgraph { vertices, edges, adjacency }
    }

    fn component_size(&self, start: usize) -> usize {
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        let mut count = 0;
        while let Some(v) = queue.pop_front() {
            count += 1;
            for (w, _) in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        count
    }

    pub fn vertices(&self) -> &[BerkPoint] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_index(&self, x: &BerkPoint, ctx: &PrimeContext) -> Option<usize> {
        self.vertices.iter().position(|v| ctx.same_point(v, x))
    }

    /// `(neighbor, edge index)` pairs around vertex `v`.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency[v].iter().map(move |&k| {
            let e = &self.edges[k];
            (if e.a == v { e.b } else { e.a }, k)
        })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Vertices of degree at most one.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&v| self.degree(v) <= 1).collect()
    }

    /// Whether `x` lies on the subgraph (a vertex or inside an edge).
    pub fn contains(&self, x: &BerkPoint, ctx: &PrimeContext) -> bool {
        self.vertex_index(x, ctx).is_some()
            || self
                .edges
                .iter()
                .any(|e| ctx.lies_between(&self.vertices[e.a], &self.vertices[e.b], x))
    }

    /// The point where the path from `x` first meets the subgraph.
    pub fn retraction(&self, x: &BerkPoint, ctx: &PrimeContext) -> BerkPoint {
        let mut cands: Vec<BerkPoint> = self
            .edges
            .iter()
            .map(|e| ctx.median(&self.vertices[e.a], &self.vertices[e.b], x))
            .collect();
        if cands.is_empty() {
            return self.vertices[0].clone();
        }
        let pick = (0..cands.len())
            .find(|&i| cands.iter().all(|q| ctx.lies_between(x, q, &cands[i])))
            .expect("a subtree has a unique nearest point");
        cands.swap_remove(pick)
    }
}

/// A continuous piecewise-affine function, given by its vertex values and
/// affine along every edge.
#[derive(Clone, Debug)]
pub struct CpaFunction<'g> {
    host: &'g FiniteSubgraph,
    values: Vec<Rational>,
}

impl<'g> CpaFunction<'g> {
    pub fn new(host: &'g FiniteSubgraph, values: Vec<Rational>) -> Result<Self> {
        if values.len() != host.vertices.len() {
            return precondition(format!(
                "{} values for {} vertices",
                values.len(),
                host.vertices.len()
            ));
        }
        Ok(CpaFunction { host, values })
    }

    pub fn constant(host: &'g FiniteSubgraph, c: Rational) -> Self {
        CpaFunction { host, values: vec![c; host.vertices.len()] }
    }

    pub fn host(&self) -> &'g FiniteSubgraph {
        self.host
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, v: usize) -> &Rational {
        &self.values[v]
    }

    /// `alpha * self + beta * other` on the same host.
    pub fn combine(&self, alpha: &Rational, other: &Self, beta: &Rational) -> Self {
        debug_assert!(std::ptr::eq(self.host, other.host));
        let values = self.values.iter().zip(&other.values).map(|(a, b)| alpha * a + beta * b).collect();
        CpaFunction { host: self.host, values }
    }

    /// Slope of `self` leaving vertex `p` along edge `edge`.
    pub fn directional_derivative(&self, p: usize, edge: usize) -> Result<Rational> {
        let e = self
            .host
            .edges
            .get(edge)
            .ok_or_else(|| Error::Precondition(format!("no edge {edge}")))?;
        let q = match (e.a == p, e.b == p) {
            (true, _) => e.b,
            (_, true) => e.a,
            _ => return precondition(format!("edge {edge} is not incident to vertex {p}")),
        };
        Ok((&self.values[q] - &self.values[p]) / &e.length)
    }

    /// Laplacian weight at each vertex, indexed like the host's vertices.
    pub fn laplacian_weights(&self) -> Vec<Rational> {
        (0..self.host.vertices.len())
            .map(|p| {
                let out: Rational = self
                    .host
                    .neighbors(p)
                    .map(|(_, k)| self.directional_derivative(p, k).expect("incident edge"))
                    .sum();
                -out
            })
            .collect()
    }

    /// The Laplacian as a signed measure on the vertices; total mass is zero.
    pub fn laplacian(&self, ctx: &PrimeContext) -> DiscreteMeasure {
        DiscreteMeasure::from_atoms(
            self.host.vertices.iter().cloned().zip(self.laplacian_weights()),
            ctx,
        )
    }

    /// Whether the Laplacian weight is `<= 0` at every vertex of `interior`.
    pub fn is_subharmonic_on(&self, interior: &[usize]) -> bool {
        let w = self.laplacian_weights();
        interior.iter().all(|&v| !w[v].is_positive())
    }
}

/// The restriction of `x -> -log_p [x,y]_zeta` to the subgraph. Affine along
/// every edge when the retractions of `y` and `zeta` are vertices.
pub fn restrict_kernel<'g>(
    graph: &'g FiniteSubgraph,
    y: &BerkPoint,
    zeta: &BerkPoint,
    ctx: &PrimeContext,
) -> Result<CpaFunction<'g>> {
    for (name, pt) in [("y", y), ("zeta", zeta)] {
        let r = graph.retraction(pt, ctx);
        if graph.vertex_index(&r, ctx).is_none() {
            return precondition(format!("retraction {r} of {name} is not a vertex of the subgraph"));
        }
    }
    let values = graph
        .vertices
        .iter()
        .map(|v| ctx.hsia_kernel_log(v, y, zeta).expect_finite("kernel on a type II vertex"))
        .collect::<Result<Vec<_>>>()?;
    CpaFunction::new(graph, values)
}

/// Solves `f = g` on `boundary` with prescribed Laplacian weights at the
/// remaining vertices. Every leaf must be a boundary vertex.
pub fn dirichlet_solve<'g>(
    graph: &'g FiniteSubgraph,
    boundary: &[usize],
    boundary_values: &[Rational],
    interior_laplacian: &[Rational],
) -> Result<CpaFunction<'g>> {
    let n = graph.vertices.len();
    if boundary.is_empty() {
        return precondition("Dirichlet problem needs a nonempty boundary");
    }
    if boundary.len() != boundary_values.len() {
        return precondition("boundary values do not match boundary vertices");
    }
    if interior_laplacian.len() != n {
        return precondition("interior Laplacian must have one weight per vertex");
    }
    if let Some(&v) = boundary.iter().find(|&&v| v >= n) {
        return precondition(format!("boundary vertex {v} out of range"));
    }
    if n > 1 {
        if let Some(leaf) = graph.leaves().into_iter().find(|l| !boundary.contains(l)) {
            return precondition(format!("leaf {leaf} is not a boundary vertex"));
        }
    }
    let mut values: Vec<Option<Rational>> = vec![None; n];
    for (&v, g) in boundary.iter().zip(boundary_values) {
        values[v] = Some(g.clone());
    }
    let unknowns: Vec<usize> = (0..n).filter(|&v| values[v].is_none()).collect();
    let slot = |v: usize| unknowns.iter().position(|&u| u == v);
    let m = unknowns.len();
    let mut a = vec![vec![Rational::zero(); m]; m];
    let mut b = vec![Rational::zero(); m];
    // Laplacian weight at v: sum over neighbours of (f(v) - f(w)) / len.
    for (row, &v) in unknowns.iter().enumerate() {
        b[row] = interior_laplacian[v].clone();
        for (w, k) in graph.neighbors(v) {
            let c = graph.edges[k].length.recip();
            a[row][row] += &c;
            match slot(w) {
                Some(col) => a[row][col] -= &c,
                None => b[row] += &c * values[w].as_ref().unwrap(),
            }
        }
    }
    let solution = linalg::solve(a, b)
        .ok_or_else(|| Error::Certification("singular Dirichlet system".into()))?;
    for (v, x) in unknowns.iter().zip(solution) {
        values[*v] = Some(x);
    }
    CpaFunction::new(graph, values.into_iter().map(Option::unwrap).collect())
}

/// The CPA function with boundary values `g` and zero Laplacian elsewhere.
pub fn dirichlet_harmonic<'g>(
    graph: &'g FiniteSubgraph,
    boundary: &[usize],
    boundary_values: &[Rational],
) -> Result<CpaFunction<'g>> {
    let zeros = vec![Rational::zero(); graph.vertices.len()];
    dirichlet_solve(graph, boundary, boundary_values, &zeros)
}

/// Splits a subharmonic `f` as `h - u_nu` with `nu = -Delta(f)` on the
/// interior and `h` harmonic there. `zeta` must retract to a vertex outside
/// the interior.
pub fn riesz_decompose<'g>(
    f: &CpaFunction<'g>,
    interior: &[usize],
    zeta: &BerkPoint,
    ctx: &PrimeContext,
) -> Result<(CpaFunction<'g>, DiscreteMeasure)> {
    let graph = f.host;
    let weights = f.laplacian_weights();
    if let Some(&v) = interior.iter().find(|&&v| weights[v].is_positive()) {
        return precondition(format!(
            "not subharmonic at vertex {v} ({}): Laplacian weight {}",
            graph.vertices[v],
            crate::rational::format_rational(&weights[v])
        ));
    }
    if zeta.is_type_ii() && graph.contains(zeta, ctx) {
        return precondition(format!("pole {zeta} lies on the subgraph"));
    }
    let rz = graph.retraction(zeta, ctx);
    match graph.vertex_index(&rz, ctx) {
        Some(v) if interior.contains(&v) => {
            return precondition(format!("pole retracts to interior vertex {v}"))
        }
        None => return precondition(format!("pole retracts to {rz}, which is not a vertex")),
        _ => {}
    }
    let nu = DiscreteMeasure::from_atoms(
        interior.iter().map(|&v| (graph.vertices[v].clone(), -weights[v].clone())),
        ctx,
    );
    let values = graph
        .vertices
        .iter()
        .zip(&f.values)
        .map(|(v, fv)| match potential(&nu, v, zeta, ctx)? {
            LogScalar::Finite(u) => Ok(fv + u),
            other => Err(Error::Certification(format!("potential {other} at {v}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    let h = CpaFunction::new(graph, values)?;
    let hw = h.laplacian_weights();
    if let Some(&v) = interior.iter().find(|&&v| !hw[v].is_zero()) {
        return Err(Error::Certification(format!("harmonic part has mass at vertex {v}")));
    }
    Ok((h, nu))
}
