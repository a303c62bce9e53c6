//! JSON forms of scenes, subgraphs and measures.
//!
//! Points use the text form of [`BerkPoint`] and rationals are `num/den`
//! strings in lowest terms.

use serde::{Deserialize, Serialize};

use crate::equilibrium::{Ball, CompactSet};
use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;
use crate::point::{BerkPoint, PrimeContext};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::tree::FiniteSubgraph;

/// The on-disk scene format.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub p: u64,
    pub zeta: String,
    #[serde(default)]
    pub balls: Vec<(String, String)>,
    #[serde(default)]
    pub points: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A parsed scene.
#[derive(Clone, Debug)]
pub struct Scene {
    pub ctx: PrimeContext,
    pub set: CompactSet,
    /// Explicit sample points, if the file lists any.
    pub samples: Option<Vec<BerkPoint>>,
    pub seed: u64,
}

fn point(s: &str) -> Result<BerkPoint> {
    s.parse()
}

/// Parses scene JSON. Syntax errors and an empty set are parse errors; a
/// non-prime `p` is a precondition error.
pub fn parse_scene(json: &str) -> Result<Scene> {
    let file: SceneFile =
        serde_json::from_str(json).map_err(|e| Error::Parse(format!("scene: {e}")))?;
    scene_from_file(&file)
}

pub fn scene_from_file(file: &SceneFile) -> Result<Scene> {
    let zeta = point(&file.zeta)?;
    let balls = file
        .balls
        .iter()
        .map(|(c, r)| Ok(Ball::new(point(c)?, parse_rational(r)?)))
        .collect::<Result<Vec<_>>>()?;
    let points = file.points.iter().map(|s| point(s)).collect::<Result<Vec<_>>>()?;
    if balls.is_empty() && points.is_empty() {
        return Err(Error::Parse("scene has neither balls nor points".into()));
    }
    let samples = file
        .samples
        .as_ref()
        .map(|v| v.iter().map(|s| point(s)).collect::<Result<Vec<_>>>())
        .transpose()?;
    let ctx = PrimeContext::new(file.p)?;
    Ok(Scene {
        ctx,
        set: CompactSet::new(zeta, balls, points),
        samples,
        seed: file.seed.unwrap_or(0),
    })
}

pub fn scene_to_file(scene: &Scene) -> SceneFile {
    SceneFile {
        p: scene.ctx.p(),
        zeta: scene.set.zeta.to_string(),
        balls: scene
            .set
            .balls
            .iter()
            .map(|b| (b.center.to_string(), format_rational(&b.log_radius)))
            .collect(),
        points: scene.set.points.iter().map(|x| x.to_string()).collect(),
        samples: scene.samples.as_ref().map(|v| v.iter().map(|x| x.to_string()).collect()),
        seed: Some(scene.seed),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubgraphFile {
    vertices: Vec<String>,
    edges: Vec<Vec<serde_json::Value>>,
}

/// Parses `{ "vertices": [...], "edges": [[i, j], ...] }`. An edge may carry
/// a third entry with its length, which must match the path distance.
pub fn parse_subgraph(json: &str, ctx: &PrimeContext) -> Result<FiniteSubgraph> {
    let file: SubgraphFile =
        serde_json::from_str(json).map_err(|e| Error::Parse(format!("subgraph: {e}")))?;
    let vertices = file.vertices.iter().map(|s| point(s)).collect::<Result<Vec<_>>>()?;
    let index = |v: &serde_json::Value| {
        v.as_u64()
            .map(|i| i as usize)
            .ok_or_else(|| Error::Parse(format!("edge endpoint {v} is not an index")))
    };
    let mut edges = Vec::with_capacity(file.edges.len());
    let mut lengths = Vec::new();
    for e in &file.edges {
        match e.as_slice() {
            [a, b] => edges.push((index(a)?, index(b)?)),
            [a, b, len] => {
                let len = len
                    .as_str()
                    .ok_or_else(|| Error::Parse("edge length must be a string".into()))?;
                edges.push((index(a)?, index(b)?));
                lengths.push((edges.len() - 1, parse_rational(len)?));
            }
            _ => return Err(Error::Parse("an edge is [i, j] or [i, j, \"len\"]".into())),
        }
    }
    let graph = FiniteSubgraph::from_parts(vertices, &edges, ctx)?;
    for (k, len) in lengths {
        let actual = &graph.edges()[k].length;
        if *actual != len {
            return Err(Error::Precondition(format!(
                "edge {k} has length {} but the path distance is {}",
                format_rational(&len),
                format_rational(actual)
            )));
        }
    }
    Ok(graph)
}

/// Serializes a subgraph with explicit edge lengths.
pub fn subgraph_to_json(graph: &FiniteSubgraph) -> serde_json::Value {
    serde_json::json!({
        "vertices": graph.vertices().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "edges": graph
            .edges()
            .iter()
            .map(|e| serde_json::json!([e.a, e.b, format_rational(&e.length)]))
            .collect::<Vec<_>>(),
    })
}

pub fn measure_to_json(m: &DiscreteMeasure) -> serde_json::Value {
    serde_json::Value::Array(
        m.atoms()
            .iter()
            .map(|(x, w)| serde_json::json!([x.to_string(), format_rational(w)]))
            .collect(),
    )
}

pub fn parse_measure(json: &str, ctx: &PrimeContext) -> Result<DiscreteMeasure> {
    let atoms: Vec<(String, String)> =
        serde_json::from_str(json).map_err(|e| Error::Parse(format!("measure: {e}")))?;
    let atoms = atoms
        .iter()
        .map(|(x, w)| Ok((point(x)?, parse_rational(w)?)))
        .collect::<Result<Vec<(BerkPoint, Rational)>>>()?;
    Ok(DiscreteMeasure::from_atoms(atoms, ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn scene_round_trip() {
        let json = r#"{ "p": 2, "zeta": "I:inf", "balls": [["I:0/1","2/1"]], "points": ["II:0/1:1/1"] }"#;
        let scene = parse_scene(json).unwrap();
        assert_eq!(scene.set.balls, vec![Ball::new(BerkPoint::TypeI(int(0)), int(2))]);
        assert_eq!(scene.seed, 0);
        let again = scene_from_file(&scene_to_file(&scene)).unwrap();
        assert_eq!(again.set, scene.set);
    }

    #[test]
    fn scene_errors() {
        assert!(matches!(parse_scene("{"), Err(Error::Parse(_))));
        assert!(matches!(parse_scene(r#"{"p":2,"zeta":"I:inf"}"#), Err(Error::Parse(_))));
        assert!(matches!(
            parse_scene(r#"{"p":4,"zeta":"I:inf","points":["I:0/1"]}"#),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            parse_scene(r#"{"p":2,"zeta":"I:inf","points":["I:0/1"],"extra":1}"#),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn subgraph_forms() {
        let ctx = PrimeContext::new(2).unwrap();
        let g = parse_subgraph(r#"{"vertices":["II:0/1:0/1","II:0/1:2/1"],"edges":[[0,1]]}"#, &ctx).unwrap();
        assert_eq!(g.edges()[0].length, int(2));
        let back = subgraph_to_json(&g).to_string();
        assert!(parse_subgraph(&back, &ctx).is_ok());
        let bad = r#"{"vertices":["II:0/1:0/1","II:0/1:2/1"],"edges":[[0,1,"3/1"]]}"#;
        assert!(matches!(parse_subgraph(bad, &ctx), Err(Error::Precondition(_))));
    }

    #[test]
    fn measure_forms() {
        let ctx = PrimeContext::new(2).unwrap();
        let m = parse_measure(r#"[["II:0/1:1/1","1/2"],["II:1/1:1/1","1/2"]]"#, &ctx).unwrap();
        assert!(m.is_probability());
        assert_eq!(parse_measure(&measure_to_json(&m).to_string(), &ctx).unwrap(), m);
    }
}
