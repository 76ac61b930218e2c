//! Tropical curves as multigraphs with genus labels, bounded edges and
//! punctures, together with divisor arithmetic on their completions.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PunctureId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

impl fmt::Display for PunctureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("unknown puncture {0}")]
    UnknownPuncture(PunctureId),
    #[error("edge {0} is a loop and loops are not enabled")]
    LoopRejected(EdgeId),
    #[error("curve has no vertices")]
    Empty,
    #[error("curve is not connected")]
    Disconnected,
    #[error("edge {0} has a non-positive length")]
    NonPositiveLength(EdgeId),
}

/// Length of a bounded edge. Lengths are carried along but never enter a count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Length {
    Finite(Rational),
    Infinite,
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(r) => write!(f, "{r}"),
            Length::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Length {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Length {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        if text == "inf" {
            return Ok(Length::Infinite);
        }
        crate::parse_rational(&text)
            .map(Length::Finite)
            .ok_or_else(|| serde::de::Error::custom(format!("bad length {text:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub genus: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub ends: [VertexId; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<Length>,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }

    /// The endpoint opposite to `v`, if `v` is an endpoint.
    pub fn other_end(&self, v: VertexId) -> Option<VertexId> {
        if self.ends[0] == v {
            Some(self.ends[1])
        } else if self.ends[1] == v {
            Some(self.ends[0])
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Puncture {
    pub vertex: VertexId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Smooth,
    Stable,
    Unstable,
}

/// A connected semi-graph: vertices with genus labels, bounded edges and
/// punctures (unbounded ends). Ids are dense indices into the three lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TropicalCurve {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    punctures: Vec<Puncture>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    allow_loops: bool,
}

impl TropicalCurve {
    pub fn new(
        vertices: Vec<Vertex>,
        edges: Vec<Edge>,
        punctures: Vec<Puncture>,
        allow_loops: bool,
    ) -> Result<Self, GraphError> {
        let curve = TropicalCurve {
            vertices,
            edges,
            punctures,
            allow_loops,
        };
        curve.validate()?;
        Ok(curve)
    }

    pub fn builder() -> CurveBuilder {
        CurveBuilder::default()
    }

    /// Re-checks all structural invariants; used after deserialization.
    pub fn validate(&self) -> Result<(), GraphError> {
        if self.vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        let n = self.vertices.len();
        for (i, e) in self.edges.iter().enumerate() {
            for v in e.ends {
                if v.0 >= n {
                    return Err(GraphError::UnknownVertex(v));
                }
            }
            if e.is_loop() && !self.allow_loops {
                return Err(GraphError::LoopRejected(EdgeId(i)));
            }
            if let Some(Length::Finite(l)) = &e.length {
                if *l <= Rational::from_integer(0.into()) {
                    return Err(GraphError::NonPositiveLength(EdgeId(i)));
                }
            }
        }
        for p in &self.punctures {
            if p.vertex.0 >= n {
                return Err(GraphError::UnknownVertex(p.vertex));
            }
        }
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(())
    }

    fn is_connected(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        let mut components = self.vertices.len();
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.ends[0].0), find(&mut parent, e.ends[1].0));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        components == 1
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_punctures(&self) -> usize {
        self.punctures.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn puncture_ids(&self) -> impl Iterator<Item = PunctureId> + '_ {
        (0..self.punctures.len()).map(PunctureId)
    }

    pub fn vertex(&self, v: VertexId) -> Result<&Vertex, GraphError> {
        self.vertices.get(v.0).ok_or(GraphError::UnknownVertex(v))
    }

    pub fn edge(&self, e: EdgeId) -> Result<&Edge, GraphError> {
        self.edges.get(e.0).ok_or(GraphError::UnknownEdge(e))
    }

    pub fn puncture(&self, p: PunctureId) -> Result<&Puncture, GraphError> {
        self.punctures.get(p.0).ok_or(GraphError::UnknownPuncture(p))
    }

    pub fn genus_label(&self, v: VertexId) -> Result<u32, GraphError> {
        self.vertex(v).map(|x| x.genus)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn punctures(&self) -> &[Puncture] {
        &self.punctures
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn loops_allowed(&self) -> bool {
        self.allow_loops
    }

    /// Bounded edges incident to `v`; a loop is listed twice.
    pub fn incident_edges(&self, v: VertexId) -> Vec<EdgeId> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            for end in e.ends {
                if end == v {
                    out.push(EdgeId(i));
                }
            }
        }
        out
    }

    pub fn punctures_at(&self, v: VertexId) -> Vec<PunctureId> {
        self.punctures
            .iter()
            .enumerate()
            .filter(|(_, p)| p.vertex == v)
            .map(|(i, _)| PunctureId(i))
            .collect()
    }

    /// Number of edge ends at `v`, counting punctures; loops count twice.
    pub fn vertex_degree(&self, v: VertexId) -> Result<usize, GraphError> {
        self.vertex(v)?;
        let edge_ends = self
            .edges
            .iter()
            .map(|e| e.ends.iter().filter(|&&x| x == v).count())
            .sum::<usize>();
        let punctures = self.punctures.iter().filter(|p| p.vertex == v).count();
        Ok(edge_ends + punctures)
    }

    pub fn first_betti(&self) -> usize {
        // connected, so #E - #V + 1 >= 0
        self.edges.len() + 1 - self.vertices.len()
    }

    pub fn arithmetic_genus(&self) -> i64 {
        1 + self
            .vertices
            .iter()
            .map(|v| v.genus as i64 - 1)
            .sum::<i64>()
            + self.edges.len() as i64
    }

    pub fn stability(&self) -> Stability {
        for v in self.vertex_ids() {
            let genus = self.vertices[v.0].genus;
            let degree = self.vertex_degree(v).expect("own vertex");
            if (genus == 0 && degree < 3) || (genus == 1 && degree < 1) {
                return Stability::Unstable;
            }
        }
        if self
            .edges
            .iter()
            .any(|e| matches!(e.length, Some(Length::Infinite)))
        {
            Stability::Stable
        } else {
            Stability::Smooth
        }
    }

    /// `deg(v) - 2` at every vertex, `-1` at every puncture-end.
    pub fn canonical_divisor(&self) -> Divisor {
        let mut coeffs = BTreeMap::new();
        for v in self.vertex_ids() {
            let k = self.vertex_degree(v).expect("own vertex") as i64 - 2;
            coeffs.insert(Point::Vertex(v), k);
        }
        for p in self.puncture_ids() {
            coeffs.insert(Point::Puncture(p), -1);
        }
        Divisor::from_map(coeffs)
    }

    pub fn contains_point(&self, p: Point) -> bool {
        match p {
            Point::Vertex(v) => v.0 < self.vertices.len(),
            Point::Puncture(q) => q.0 < self.punctures.len(),
        }
    }

    /// Returns a copy with the given genus labels.
    pub fn with_genus_labels(&self, labels: &[u32]) -> Result<Self, GraphError> {
        if labels.len() != self.vertices.len() {
            return Err(GraphError::UnknownVertex(VertexId(labels.len())));
        }
        let mut out = self.clone();
        for (v, &g) in out.vertices.iter_mut().zip(labels) {
            v.genus = g;
        }
        Ok(out)
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

#[derive(Debug, Default, Clone)]
pub struct CurveBuilder {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    punctures: Vec<Puncture>,
    allow_loops: bool,
}

impl CurveBuilder {
    pub fn vertex(&mut self) -> VertexId {
        self.vertex_with_genus(0)
    }

    pub fn vertex_with_genus(&mut self, genus: u32) -> VertexId {
        self.vertices.push(Vertex { genus });
        VertexId(self.vertices.len() - 1)
    }

    pub fn edge(&mut self, a: VertexId, b: VertexId) -> EdgeId {
        self.edge_with_length(a, b, None)
    }

    pub fn edge_with_length(&mut self, a: VertexId, b: VertexId, length: Option<Length>) -> EdgeId {
        self.edges.push(Edge {
            ends: [a, b],
            length,
        });
        EdgeId(self.edges.len() - 1)
    }

    pub fn puncture(&mut self, v: VertexId) -> PunctureId {
        self.punctures.push(Puncture { vertex: v });
        PunctureId(self.punctures.len() - 1)
    }

    pub fn allow_loops(&mut self, allow: bool) -> &mut Self {
        self.allow_loops = allow;
        self
    }

    pub fn build(self) -> Result<TropicalCurve, GraphError> {
        TropicalCurve::new(self.vertices, self.edges, self.punctures, self.allow_loops)
    }
}

/// A point of the completion: a finite vertex or a puncture-end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Vertex(VertexId),
    Puncture(PunctureId),
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Vertex(v) => v.fmt(f),
            Point::Puncture(p) => p.fmt(f),
        }
    }
}

impl std::str::FromStr for Point {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("bad point {s:?}");
        let (kind, idx) = s.split_at_checked(1).ok_or_else(bad)?;
        let idx: usize = idx.parse().map_err(|_| bad())?;
        match kind {
            "v" => Ok(Point::Vertex(VertexId(idx))),
            "p" => Ok(Point::Puncture(PunctureId(idx))),
            _ => Err(bad()),
        }
    }
}

/// Finitely supported integer function on vertices and puncture-ends.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Divisor {
    coeffs: BTreeMap<Point, i64>,
}

impl Divisor {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds a divisor on `curve`, summing repeated points.
    pub fn on<I>(curve: &TropicalCurve, terms: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Point, i64)>,
    {
        let mut coeffs = BTreeMap::new();
        for (p, c) in terms {
            if !curve.contains_point(p) {
                return Err(match p {
                    Point::Vertex(v) => GraphError::UnknownVertex(v),
                    Point::Puncture(q) => GraphError::UnknownPuncture(q),
                });
            }
            *coeffs.entry(p).or_insert(0) += c;
        }
        Ok(Self::from_map(coeffs))
    }

    pub(crate) fn from_map(mut coeffs: BTreeMap<Point, i64>) -> Self {
        coeffs.retain(|_, c| *c != 0);
        Divisor { coeffs }
    }

    pub fn coefficient(&self, p: Point) -> i64 {
        self.coeffs.get(&p).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = (Point, i64)> + '_ {
        self.coeffs.iter().map(|(p, c)| (*p, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.values().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.values().all(|&c| c >= 0)
    }

    pub fn part_at_infinity(&self) -> Divisor {
        Divisor {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(p, _)| matches!(p, Point::Puncture(_)))
                .map(|(p, c)| (*p, *c))
                .collect(),
        }
    }

    pub fn finite_part(&self) -> Divisor {
        self - &self.part_at_infinity()
    }

    pub fn is_supported_on(&self, curve: &TropicalCurve) -> bool {
        self.coeffs.keys().all(|&p| curve.contains_point(p))
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (p, c)) in self.coeffs.iter().enumerate() {
            match (i, *c) {
                (0, 1) => write!(f, "[{p}]")?,
                (0, -1) => write!(f, "-[{p}]")?,
                (0, c) => write!(f, "{c}[{p}]")?,
                (_, 1) => write!(f, " + [{p}]")?,
                (_, -1) => write!(f, " - [{p}]")?,
                (_, c) if c < 0 => write!(f, " - {}[{p}]", -c)?,
                (_, c) => write!(f, " + {c}[{p}]")?,
            }
        }
        Ok(())
    }
}

impl Add for &Divisor {
    type Output = Divisor;

    fn add(self, rhs: &Divisor) -> Divisor {
        let mut coeffs = self.coeffs.clone();
        for (p, c) in &rhs.coeffs {
            *coeffs.entry(*p).or_insert(0) += c;
        }
        Divisor::from_map(coeffs)
    }
}

impl Neg for &Divisor {
    type Output = Divisor;

    fn neg(self) -> Divisor {
        Divisor {
            coeffs: self.coeffs.iter().map(|(p, c)| (*p, -c)).collect(),
        }
    }
}

impl Sub for &Divisor {
    type Output = Divisor;

    fn sub(self, rhs: &Divisor) -> Divisor {
        self + &(-rhs)
    }
}

impl Serialize for Divisor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.coeffs.len()))?;
        for (p, c) in &self.coeffs {
            map.serialize_entry(&p.to_string(), c)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Divisor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = BTreeMap::<String, i64>::deserialize(d)?;
        let mut coeffs = BTreeMap::new();
        for (k, c) in raw {
            let p: Point = k.parse().map_err(serde::de::Error::custom)?;
            *coeffs.entry(p).or_insert(0) += c;
        }
        Ok(Divisor::from_map(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tropical_line() -> TropicalCurve {
        let mut b = TropicalCurve::builder();
        let v = b.vertex();
        b.puncture(v);
        b.puncture(v);
        b.build().unwrap()
    }

    fn wiener(punctures: bool) -> TropicalCurve {
        let mut b = TropicalCurve::builder();
        let a = b.vertex();
        let c = b.vertex();
        b.edge(a, c);
        b.edge(a, c);
        if punctures {
            b.puncture(a);
            b.puncture(c);
        }
        b.build().unwrap()
    }

    fn theta() -> TropicalCurve {
        let mut b = TropicalCurve::builder();
        let a = b.vertex();
        let c = b.vertex();
        for _ in 0..3 {
            b.edge(a, c);
        }
        b.build().unwrap()
    }

    /// Comb with `teeth` backbone vertices, two handles and one tooth each.
    fn comb(teeth: usize) -> TropicalCurve {
        let mut b = TropicalCurve::builder();
        let vs: Vec<_> = (0..teeth).map(|_| b.vertex()).collect();
        b.puncture(vs[0]);
        for w in vs.windows(2) {
            b.edge_with_length(w[0], w[1], Some(Length::Finite(Rational::from_integer(2.into()))));
        }
        for &v in &vs {
            b.puncture(v);
        }
        b.puncture(vs[teeth - 1]);
        b.build().unwrap()
    }

    #[test]
    fn degrees() {
        assert_eq!(tropical_line().vertex_degree(VertexId(0)), Ok(2));
        assert_eq!(comb(3).vertex_degree(VertexId(1)), Ok(3));
        assert_eq!(wiener(true).vertex_degree(VertexId(0)), Ok(3));
        assert_eq!(
            tropical_line().vertex_degree(VertexId(4)),
            Err(GraphError::UnknownVertex(VertexId(4)))
        );
    }

    #[test]
    fn loops_count_twice() {
        let mut b = TropicalCurve::builder();
        let v = b.vertex();
        b.edge(v, v);
        assert!(matches!(b.clone().build(), Err(GraphError::LoopRejected(_))));
        b.allow_loops(true);
        let c = b.build().unwrap();
        assert_eq!(c.vertex_degree(v), Ok(2));
        assert_eq!(c.first_betti(), 1);
    }

    #[test]
    fn betti_and_genus() {
        assert_eq!(comb(4).first_betti(), 0);
        assert_eq!(wiener(false).first_betti(), 1);
        assert_eq!(theta().first_betti(), 2);
        assert_eq!(wiener(false).arithmetic_genus(), 1);
        assert_eq!(theta().arithmetic_genus(), 2);
        let mut b = TropicalCurve::builder();
        let v = b.vertex_with_genus(1);
        b.puncture(v);
        assert_eq!(b.build().unwrap().arithmetic_genus(), 1);
    }

    #[test]
    fn stability() {
        assert_eq!(tropical_line().stability(), Stability::Unstable);
        assert_eq!(comb(3).stability(), Stability::Smooth);
        let mut b = TropicalCurve::builder();
        let a = b.vertex();
        let c = b.vertex();
        b.edge_with_length(a, c, Some(Length::Infinite));
        b.edge(a, c);
        b.puncture(a);
        b.puncture(c);
        assert_eq!(b.build().unwrap().stability(), Stability::Stable);
    }

    #[test]
    fn canonical_divisors() {
        let k = tropical_line().canonical_divisor();
        assert_eq!(k.degree(), -2);
        assert_eq!(k.coefficient(Point::Vertex(VertexId(0))), 0);
        assert_eq!(k.coefficient(Point::Puncture(PunctureId(1))), -1);
        assert!(wiener(false).canonical_divisor().is_zero());
        let c = comb(3);
        let k = c.canonical_divisor();
        assert_eq!(k.degree(), -2);
        for v in c.vertex_ids() {
            assert_eq!(k.coefficient(Point::Vertex(v)), 1);
        }
        for p in c.puncture_ids() {
            assert_eq!(k.coefficient(Point::Puncture(p)), -1);
        }
        assert_eq!(c.num_punctures(), 5);
    }

    #[test]
    fn divisor_ops() {
        let line = tropical_line();
        assert_eq!(Divisor::zero().degree(), 0);
        assert!(Divisor::zero().is_effective());
        assert!(!line.canonical_divisor().is_effective());
        let v = Point::Vertex(VertexId(0));
        let p = Point::Puncture(PunctureId(0));
        let d = Divisor::on(&line, [(v, 1), (p, 3)]).unwrap();
        assert_eq!(d.degree(), 4);
        let d = Divisor::on(&line, [(p, 2), (v, 1)]).unwrap();
        assert_eq!(d.part_at_infinity(), Divisor::on(&line, [(p, 2)]).unwrap());
        let finite = Divisor::on(&line, [(v, 5)]).unwrap();
        assert!(finite.part_at_infinity().is_zero());
        assert_eq!(
            line.canonical_divisor().part_at_infinity().to_string(),
            "-[p0] - [p1]"
        );
        assert!(Divisor::on(&line, [(Point::Puncture(PunctureId(7)), 1)]).is_err());
        let w = wiener(false);
        let d = Divisor::on(&w, [(Point::Vertex(VertexId(0)), 1), (Point::Vertex(VertexId(1)), 1)]).unwrap();
        assert!(d.is_effective());
    }

    #[test]
    fn rejects_disconnected() {
        let mut b = TropicalCurve::builder();
        b.vertex();
        b.vertex();
        assert_eq!(b.build(), Err(GraphError::Disconnected));
    }

    #[test]
    fn json_roundtrip() {
        let c = comb(2);
        let text = serde_json::to_string(&c).unwrap();
        let back: TropicalCurve = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        let k = c.canonical_divisor();
        let text = serde_json::to_string(&k).unwrap();
        assert_eq!(text, r#"{"v0":1,"v1":1,"p0":-1,"p1":-1,"p2":-1,"p3":-1}"#);
        let back: Divisor = serde_json::from_str(&text).unwrap();
        assert_eq!(back, k);
    }
}
