//! Weighted harmonic morphisms between tropical curves.
//!
//! A morphism maps vertices to vertices, bounded edges to bounded edges and
//! punctures to punctures. Weights live on the source. Everything that the
//! Riemann–Hurwitz machinery needs (local multiplicities, divisor transport,
//! ramification and branch divisors) is computed here.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Divisor, EdgeId, GraphError, Point, PunctureId, TropicalCurve, VertexId};
use crate::partition::Partition;

/// A direction at a target vertex: one of its bounded edges or punctures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Edge(EdgeId),
    Puncture(PunctureId),
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Edge(e) => e.fmt(f),
            Direction::Puncture(p) => p.fmt(f),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphismError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{0} map does not cover the source")]
    MapSize(&'static str),
    #[error("weights must be positive ({0})")]
    ZeroWeight(String),
    #[error("target loops are not supported ({0})")]
    TargetLoop(EdgeId),
    #[error("incidence violated: {0}")]
    IncidenceViolation(String),
    #[error("not harmonic at {vertex}: weight {first_sum} over {first}, {second_sum} over {second}")]
    NotHarmonic {
        vertex: VertexId,
        first: Direction,
        first_sum: u32,
        second: Direction,
        second_sum: u32,
    },
    #[error("degree inconsistent: fibre weight {first_sum} over {first}, {second_sum} over {second}")]
    DegreeInconsistent {
        first: Direction,
        first_sum: u32,
        second: Direction,
        second_sum: u32,
    },
    #[error("target has no edges or punctures")]
    NoDirections,
    #[error("Riemann-Hurwitz violated: {0}")]
    RhViolation(String),
    #[error("odd local defect {defect} at {vertex}")]
    OddLocalDefect { vertex: VertexId, defect: i64 },
    #[error("positive local defect {defect} at {vertex} would need negative genus")]
    NegativeLocalGenus { vertex: VertexId, defect: i64 },
    #[error("a star needs exactly three directions, got {0}")]
    WrongArity(usize),
}

/// Unchecked morphism data, also the JSON wire shape of a morphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismData {
    pub source: TropicalCurve,
    pub target: TropicalCurve,
    pub vertex_map: Vec<VertexId>,
    pub edge_map: Vec<EdgeId>,
    pub puncture_map: Vec<PunctureId>,
    pub edge_weights: Vec<u32>,
    pub puncture_weights: Vec<u32>,
}

/// A validated harmonic morphism with its degree and local multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MorphismData", into = "MorphismData")]
pub struct WeightedMorphism {
    data: MorphismData,
    degree: u32,
    multiplicities: Vec<u32>,
}

impl TryFrom<MorphismData> for WeightedMorphism {
    type Error = MorphismError;

    fn try_from(data: MorphismData) -> Result<Self, Self::Error> {
        let (degree, multiplicities) = check(&data)?;
        Ok(WeightedMorphism {
            data,
            degree,
            multiplicities,
        })
    }
}

impl From<WeightedMorphism> for MorphismData {
    fn from(m: WeightedMorphism) -> Self {
        m.data
    }
}

/// Checks incidence, harmonicity and constant fibre weight; returns the degree.
pub fn validate_morphism(data: &MorphismData) -> Result<u32, MorphismError> {
    check(data).map(|(d, _)| d)
}

fn check(data: &MorphismData) -> Result<(u32, Vec<u32>), MorphismError> {
    let (src, tgt) = (&data.source, &data.target);
    src.validate()?;
    tgt.validate()?;
    if data.vertex_map.len() != src.num_vertices() {
        return Err(MorphismError::MapSize("vertex"));
    }
    if data.edge_map.len() != src.num_edges() || data.edge_weights.len() != src.num_edges() {
        return Err(MorphismError::MapSize("edge"));
    }
    if data.puncture_map.len() != src.num_punctures()
        || data.puncture_weights.len() != src.num_punctures()
    {
        return Err(MorphismError::MapSize("puncture"));
    }
    for v in &data.vertex_map {
        tgt.vertex(*v)?;
    }
    for (i, e) in tgt.edges().iter().enumerate() {
        if e.is_loop() {
            return Err(MorphismError::TargetLoop(EdgeId(i)));
        }
    }
    if let Some(i) = data.edge_weights.iter().position(|&w| w == 0) {
        return Err(MorphismError::ZeroWeight(EdgeId(i).to_string()));
    }
    if let Some(i) = data.puncture_weights.iter().position(|&w| w == 0) {
        return Err(MorphismError::ZeroWeight(PunctureId(i).to_string()));
    }

    for (i, e) in src.edges().iter().enumerate() {
        let image = tgt.edge(data.edge_map[i])?;
        let mut want = [data.vertex_map[e.ends[0].0], data.vertex_map[e.ends[1].0]];
        let mut have = image.ends;
        want.sort();
        have.sort();
        if want != have {
            return Err(MorphismError::IncidenceViolation(format!(
                "{} maps to {} but its ends map to {} and {}",
                EdgeId(i),
                data.edge_map[i],
                want[0],
                want[1]
            )));
        }
    }
    for (i, p) in src.punctures().iter().enumerate() {
        let image = tgt.puncture(data.puncture_map[i])?;
        if image.vertex != data.vertex_map[p.vertex.0] {
            return Err(MorphismError::IncidenceViolation(format!(
                "{} at {} maps to {} which is not at {}",
                PunctureId(i),
                p.vertex,
                data.puncture_map[i],
                data.vertex_map[p.vertex.0]
            )));
        }
    }

    // harmonicity
    let mut multiplicities = Vec::with_capacity(src.num_vertices());
    for v in src.vertex_ids() {
        let sums = direction_sums(data, v);
        let image = data.vertex_map[v.0];
        let mut dirs = target_directions(tgt, image).into_iter();
        let Some(first) = dirs.next() else {
            return Err(MorphismError::NoDirections);
        };
        let m = sums.get(&first).copied().unwrap_or(0);
        for dir in dirs {
            let s = sums.get(&dir).copied().unwrap_or(0);
            if s != m {
                return Err(MorphismError::NotHarmonic {
                    vertex: v,
                    first,
                    first_sum: m,
                    second: dir,
                    second_sum: s,
                });
            }
        }
        if m == 0 {
            return Err(MorphismError::NotHarmonic {
                vertex: v,
                first,
                first_sum: 0,
                second: first,
                second_sum: 0,
            });
        }
        multiplicities.push(m);
    }

    // degree
    let mut fibre: BTreeMap<Direction, u32> = tgt
        .edge_ids()
        .map(|e| (Direction::Edge(e), 0))
        .chain(tgt.puncture_ids().map(|p| (Direction::Puncture(p), 0)))
        .collect();
    for (e, w) in data.edge_map.iter().zip(&data.edge_weights) {
        *fibre.get_mut(&Direction::Edge(*e)).expect("checked") += w;
    }
    for (p, w) in data.puncture_map.iter().zip(&data.puncture_weights) {
        *fibre.get_mut(&Direction::Puncture(*p)).expect("checked") += w;
    }
    let mut it = fibre.into_iter();
    let Some((first, degree)) = it.next() else {
        return Err(MorphismError::NoDirections);
    };
    for (dir, s) in it {
        if s != degree {
            return Err(MorphismError::DegreeInconsistent {
                first,
                first_sum: degree,
                second: dir,
                second_sum: s,
            });
        }
    }
    Ok((degree, multiplicities))
}

fn target_directions(tgt: &TropicalCurve, v: VertexId) -> Vec<Direction> {
    let mut dirs: Vec<Direction> = tgt
        .incident_edges(v)
        .into_iter()
        .map(Direction::Edge)
        .chain(tgt.punctures_at(v).into_iter().map(Direction::Puncture))
        .collect();
    dirs.dedup();
    dirs
}

/// Weight sums of the source edge ends at `v`, grouped by target direction.
fn direction_sums(data: &MorphismData, v: VertexId) -> BTreeMap<Direction, u32> {
    let mut sums = BTreeMap::new();
    for e in data.source.incident_edges(v) {
        *sums.entry(Direction::Edge(data.edge_map[e.0])).or_insert(0) += data.edge_weights[e.0];
    }
    for p in data.source.punctures_at(v) {
        *sums
            .entry(Direction::Puncture(data.puncture_map[p.0]))
            .or_insert(0) += data.puncture_weights[p.0];
    }
    sums
}

/// Quantities entering the tropical Riemann–Hurwitz formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RhReport {
    /// `2 b1(source) - 2`
    pub lhs: i64,
    /// `(2 b1(target) - 2) d + deg R`
    pub rhs: i64,
    pub degree: u32,
    pub ramification_degree: i64,
    pub source_betti: usize,
    pub target_betti: usize,
    pub betti_ok: bool,
}

impl WeightedMorphism {
    pub fn new(data: MorphismData) -> Result<Self, MorphismError> {
        Self::try_from(data)
    }

    /// The identity morphism of a curve, all weights 1.
    pub fn identity(curve: &TropicalCurve) -> Result<Self, MorphismError> {
        Self::new(MorphismData {
            source: curve.clone(),
            target: curve.clone(),
            vertex_map: curve.vertex_ids().collect(),
            edge_map: curve.edge_ids().collect(),
            puncture_map: curve.puncture_ids().collect(),
            edge_weights: vec![1; curve.num_edges()],
            puncture_weights: vec![1; curve.num_punctures()],
        })
    }

    pub fn data(&self) -> &MorphismData {
        &self.data
    }

    pub fn source(&self) -> &TropicalCurve {
        &self.data.source
    }

    pub fn target(&self) -> &TropicalCurve {
        &self.data.target
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn vertex_image(&self, v: VertexId) -> VertexId {
        self.data.vertex_map[v.0]
    }

    pub fn edge_image(&self, e: EdgeId) -> EdgeId {
        self.data.edge_map[e.0]
    }

    pub fn puncture_image(&self, p: PunctureId) -> PunctureId {
        self.data.puncture_map[p.0]
    }

    pub fn edge_weight(&self, e: EdgeId) -> u32 {
        self.data.edge_weights[e.0]
    }

    pub fn puncture_weight(&self, p: PunctureId) -> u32 {
        self.data.puncture_weights[p.0]
    }

    pub fn local_multiplicity(&self, v: VertexId) -> u32 {
        self.multiplicities[v.0]
    }

    /// Multiplicity at a point of the completion; a puncture-end has the
    /// weight of its puncture.
    pub fn point_multiplicity(&self, p: Point) -> u32 {
        match p {
            Point::Vertex(v) => self.local_multiplicity(v),
            Point::Puncture(q) => self.puncture_weight(q),
        }
    }

    pub fn point_image(&self, p: Point) -> Point {
        match p {
            Point::Vertex(v) => Point::Vertex(self.vertex_image(v)),
            Point::Puncture(q) => Point::Puncture(self.puncture_image(q)),
        }
    }

    /// `deg_w(v) = m(v) deg(phi(v))`.
    pub fn weighted_degree(&self, v: VertexId) -> usize {
        let image_degree = self
            .target()
            .vertex_degree(self.vertex_image(v))
            .expect("validated");
        self.local_multiplicity(v) as usize * image_degree
    }

    pub fn source_vertices_over(&self, t: VertexId) -> Vec<VertexId> {
        self.source()
            .vertex_ids()
            .filter(|&v| self.vertex_image(v) == t)
            .collect()
    }

    pub fn source_edges_over(&self, t: EdgeId) -> Vec<EdgeId> {
        self.source()
            .edge_ids()
            .filter(|&e| self.edge_image(e) == t)
            .collect()
    }

    pub fn pushforward(&self, d: &Divisor) -> Divisor {
        let mut coeffs = BTreeMap::new();
        for (p, c) in d.support() {
            *coeffs.entry(self.point_image(p)).or_insert(0) += c;
        }
        Divisor::from_map(coeffs)
    }

    pub fn pullback(&self, d: &Divisor) -> Divisor {
        let src = self.source();
        let points = src
            .vertex_ids()
            .map(Point::Vertex)
            .chain(src.puncture_ids().map(Point::Puncture));
        let coeffs = points
            .map(|p| {
                let c = self.point_multiplicity(p) as i64 * d.coefficient(self.point_image(p));
                (p, c)
            })
            .collect();
        Divisor::from_map(coeffs)
    }

    /// `2m(v) - 2 - (deg_w(v) - deg(v))` at a source vertex.
    pub fn local_defect(&self, v: VertexId) -> i64 {
        let m = self.local_multiplicity(v) as i64;
        let degree = self.source().vertex_degree(v).expect("validated") as i64;
        2 * m - 2 - (self.weighted_degree(v) as i64 - degree)
    }

    /// `K - phi^* K'`, cross-checked against the closed forms at finite
    /// vertices and at puncture-ends.
    pub fn ramification_divisor(&self) -> Divisor {
        let algebraic = &self.source().canonical_divisor()
            - &self.pullback(&self.target().canonical_divisor());
        let closed = Divisor::from_map(
            self.source()
                .vertex_ids()
                .map(|v| (Point::Vertex(v), self.local_defect(v)))
                .chain(
                    self.source()
                        .puncture_ids()
                        .map(|p| (Point::Puncture(p), self.puncture_weight(p) as i64 - 1)),
                )
                .collect(),
        );
        assert_eq!(
            algebraic, closed,
            "ramification divisor disagrees with its closed form"
        );
        algebraic
    }

    pub fn branch_divisor(&self) -> Divisor {
        self.pushforward(&self.ramification_divisor())
    }

    pub fn check_riemann_hurwitz(&self) -> Result<RhReport, MorphismError> {
        let r = self.ramification_divisor();
        let source_betti = self.source().first_betti();
        let target_betti = self.target().first_betti();
        let lhs = 2 * source_betti as i64 - 2;
        let rhs = (2 * target_betti as i64 - 2) * self.degree as i64 + r.degree();
        let report = RhReport {
            lhs,
            rhs,
            degree: self.degree,
            ramification_degree: r.degree(),
            source_betti,
            target_betti,
            betti_ok: target_betti <= source_betti,
        };
        if lhs != rhs {
            return Err(MorphismError::RhViolation(format!("{lhs} != {rhs}")));
        }
        if !report.betti_ok {
            return Err(MorphismError::RhViolation(format!(
                "b1(target) = {target_betti} > b1(source) = {source_betti}"
            )));
        }
        if r.degree() < 0 || r.degree() % 2 != 0 {
            return Err(MorphismError::RhViolation(format!(
                "deg R = {} is not even and non-negative",
                r.degree()
            )));
        }
        Ok(report)
    }

    /// Whether the ramification divisor is effective. Errors if some finite
    /// vertex has a defect that cannot be `-2 g_v` for a genus `g_v >= 0`.
    pub fn is_mumford(&self) -> Result<bool, MorphismError> {
        let labels = self.infer_genus_labels()?;
        let effective = self.ramification_divisor().is_effective();
        assert_eq!(effective, labels.iter().all(|&g| g == 0));
        Ok(effective)
    }

    /// Genus labels `g_v = -R(v) / 2` recovered from the local defects.
    pub fn infer_genus_labels(&self) -> Result<Vec<u32>, MorphismError> {
        self.source()
            .vertex_ids()
            .map(|v| {
                let defect = self.local_defect(v);
                if defect % 2 != 0 {
                    Err(MorphismError::OddLocalDefect { vertex: v, defect })
                } else if defect > 0 {
                    Err(MorphismError::NegativeLocalGenus { vertex: v, defect })
                } else {
                    Ok((-defect / 2) as u32)
                }
            })
            .collect()
    }

    /// For each direction at `phi(v)`, the weights of the edge ends at `v`
    /// lying over it.
    pub fn star_profiles(&self, v: VertexId) -> BTreeMap<Direction, Partition> {
        let mut weights: BTreeMap<Direction, Vec<u32>> = BTreeMap::new();
        for e in self.source().incident_edges(v) {
            weights
                .entry(Direction::Edge(self.edge_image(e)))
                .or_default()
                .push(self.edge_weight(e));
        }
        for p in self.source().punctures_at(v) {
            weights
                .entry(Direction::Puncture(self.puncture_image(p)))
                .or_default()
                .push(self.puncture_weight(p));
        }
        weights
            .into_iter()
            .map(|(d, w)| (d, Partition::new(w).expect("harmonic vertex")))
            .collect()
    }

    /// Graphviz rendering; source nodes are `s_*`, target nodes `t_*`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph cover {\n  rankdir=LR;\n");
        let src = self.source();
        let tgt = self.target();
        out.push_str("  subgraph cluster_source {\n    label=\"source\";\n");
        for v in src.vertex_ids() {
            let _ = writeln!(
                out,
                "    s_{v} [label=\"{v} g={} m={}\"];",
                src.vertices()[v.0].genus,
                self.local_multiplicity(v)
            );
        }
        for p in src.puncture_ids() {
            let _ = writeln!(out, "    s_{p} [shape=point];");
        }
        for (i, e) in src.edges().iter().enumerate() {
            let e_id = EdgeId(i);
            let _ = writeln!(
                out,
                "    s_{} -> s_{} [dir=none, label=\"{e_id} w={}\"];",
                e.ends[0],
                e.ends[1],
                self.edge_weight(e_id)
            );
        }
        for (i, p) in src.punctures().iter().enumerate() {
            let p_id = PunctureId(i);
            let _ = writeln!(
                out,
                "    s_{} -> s_{p_id} [dir=none, label=\"w={}\"];",
                p.vertex,
                self.puncture_weight(p_id)
            );
        }
        out.push_str("  }\n  subgraph cluster_target {\n    label=\"target\";\n");
        for v in tgt.vertex_ids() {
            let _ = writeln!(out, "    t_{v} [label=\"{v}\"];");
        }
        for p in tgt.puncture_ids() {
            let _ = writeln!(out, "    t_{p} [label=\"{p}\", shape=plaintext];");
        }
        for (i, e) in tgt.edges().iter().enumerate() {
            let _ = writeln!(
                out,
                "    t_{} -> t_{} [dir=none, label=\"{}\"];",
                e.ends[0],
                e.ends[1],
                EdgeId(i)
            );
        }
        for (i, p) in tgt.punctures().iter().enumerate() {
            let _ = writeln!(out, "    t_{} -> t_{} [dir=none];", p.vertex, PunctureId(i));
        }
        out.push_str("  }\n");
        for v in src.vertex_ids() {
            let _ = writeln!(
                out,
                "  s_{v} -> t_{} [style=dotted, constraint=false];",
                self.vertex_image(v)
            );
        }
        out.push_str("}\n");
        out
    }
}

/// Harbater–Mumford shape of a trivalent star of multiplicity `m`: exactly
/// two directions totally ramified and the third unramified.
pub fn harbater_mumford_check(profiles: &[Partition], m: u32) -> Result<bool, MorphismError> {
    if profiles.len() != 3 {
        return Err(MorphismError::WrongArity(profiles.len()));
    }
    if m == 1 {
        return Ok(true);
    }
    let full = profiles.iter().filter(|p| p.parts() == [m]).count();
    let unramified = profiles
        .iter()
        .filter(|p| p.degree() == m && p.is_unramified())
        .count();
    Ok(full == 2 && unramified == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> TropicalCurve {
        let mut b = TropicalCurve::builder();
        let v = b.vertex();
        b.puncture(v);
        b.puncture(v);
        b.build().unwrap()
    }

    /// Segment with two punctures at each end.
    fn four_punctured_segment() -> TropicalCurve {
        let mut b = TropicalCurve::builder();
        let a = b.vertex();
        let c = b.vertex();
        b.edge(a, c);
        b.puncture(a);
        b.puncture(a);
        b.puncture(c);
        b.puncture(c);
        b.build().unwrap()
    }

    fn elliptic_wiener_cover() -> WeightedMorphism {
        let mut b = TropicalCurve::builder();
        let a = b.vertex();
        let c = b.vertex();
        b.edge(a, c);
        b.edge(a, c);
        b.puncture(a);
        b.puncture(a);
        b.puncture(c);
        b.puncture(c);
        WeightedMorphism::new(MorphismData {
            source: b.build().unwrap(),
            target: four_punctured_segment(),
            vertex_map: vec![VertexId(0), VertexId(1)],
            edge_map: vec![EdgeId(0), EdgeId(0)],
            puncture_map: (0..4).map(PunctureId).collect(),
            edge_weights: vec![1, 1],
            puncture_weights: vec![2; 4],
        })
        .unwrap()
    }

    fn weight_two_line_cover() -> WeightedMorphism {
        WeightedMorphism::new(MorphismData {
            source: line(),
            target: line(),
            vertex_map: vec![VertexId(0)],
            edge_map: vec![],
            puncture_map: vec![PunctureId(0), PunctureId(1)],
            edge_weights: vec![],
            puncture_weights: vec![2, 2],
        })
        .unwrap()
    }

    fn segment() -> TropicalCurve {
        let mut b = TropicalCurve::builder();
        let a = b.vertex();
        let c = b.vertex();
        b.edge(a, c);
        b.build().unwrap()
    }

    #[test]
    fn degrees_of_simple_covers() {
        let mut b = TropicalCurve::builder();
        let a = b.vertex();
        let c = b.vertex();
        b.edge(a, c);
        b.edge(a, c);
        let wiener = b.build().unwrap();
        let data = MorphismData {
            source: wiener,
            target: segment(),
            vertex_map: vec![VertexId(0), VertexId(1)],
            edge_map: vec![EdgeId(0), EdgeId(0)],
            puncture_map: vec![],
            edge_weights: vec![1, 1],
            puncture_weights: vec![],
        };
        assert_eq!(validate_morphism(&data), Ok(2));
        let m = WeightedMorphism::new(data).unwrap();
        assert_eq!(m.local_multiplicity(VertexId(0)), 2);
        assert_eq!(m.local_multiplicity(VertexId(1)), 2);

        let data = MorphismData {
            source: segment(),
            target: segment(),
            vertex_map: vec![VertexId(0), VertexId(1)],
            edge_map: vec![EdgeId(0)],
            puncture_map: vec![],
            edge_weights: vec![2],
            puncture_weights: vec![],
        };
        assert_eq!(validate_morphism(&data), Ok(2));
        let id = WeightedMorphism::identity(&four_punctured_segment()).unwrap();
        assert_eq!(id.degree(), 1);
        assert!(id.source().vertex_ids().all(|v| id.local_multiplicity(v) == 1));
    }

    #[test]
    fn detects_non_harmonic_vertex() {
        // left direction carries weight 2, right direction weight 1
        let mut b = TropicalCurve::builder();
        let v = b.vertex();
        b.puncture(v);
        b.puncture(v);
        let data = MorphismData {
            source: b.build().unwrap(),
            target: line(),
            vertex_map: vec![VertexId(0)],
            edge_map: vec![],
            puncture_map: vec![PunctureId(0), PunctureId(1)],
            edge_weights: vec![],
            puncture_weights: vec![2, 1],
        };
        assert!(matches!(
            validate_morphism(&data),
            Err(MorphismError::NotHarmonic { .. })
        ));
    }

    #[test]
    fn detects_incidence_and_degree_errors() {
        let mut data = MorphismData {
            source: segment(),
            target: four_punctured_segment(),
            vertex_map: vec![VertexId(0), VertexId(0)],
            edge_map: vec![EdgeId(0)],
            puncture_map: vec![],
            edge_weights: vec![1],
            puncture_weights: vec![],
        };
        assert!(matches!(
            validate_morphism(&data),
            Err(MorphismError::IncidenceViolation(_))
        ));
        data.vertex_map = vec![VertexId(0), VertexId(1)];
        // harmonic fails first: punctures at the target vertex have no preimage
        assert!(matches!(
            validate_morphism(&data),
            Err(MorphismError::NotHarmonic { .. })
        ));

        // two components of different degree over a segment
        let mut b = TropicalCurve::builder();
        let a = b.vertex();
        let c = b.vertex();
        b.edge(a, c);
        let mut t = TropicalCurve::builder();
        let x = t.vertex();
        let y = t.vertex();
        let z = t.vertex();
        t.edge(x, y);
        t.edge(y, z);
        let data = MorphismData {
            source: b.build().unwrap(),
            target: t.build().unwrap(),
            vertex_map: vec![VertexId(0), VertexId(1)],
            edge_map: vec![EdgeId(0)],
            puncture_map: vec![],
            edge_weights: vec![1],
            puncture_weights: vec![],
        };
        assert!(matches!(
            validate_morphism(&data),
            Err(MorphismError::NotHarmonic { .. })
        ));
    }

    #[test]
    fn zero_weights_rejected() {
        let mut t = TropicalCurve::builder();
        let x = t.vertex();
        t.puncture(x);
        t.puncture(x);
        let target = t.build().unwrap();
        let mut s = TropicalCurve::builder();
        let v = s.vertex();
        for _ in 0..4 {
            s.puncture(v);
        }
        let mut data = MorphismData {
            source: s.build().unwrap(),
            target,
            vertex_map: vec![VertexId(0)],
            edge_map: vec![],
            puncture_map: [0, 0, 1, 1].map(PunctureId).to_vec(),
            edge_weights: vec![],
            puncture_weights: vec![1, 1, 1, 1],
        };
        assert_eq!(validate_morphism(&data), Ok(2));
        data.puncture_weights = vec![1, 2, 3, 0];
        assert!(matches!(
            validate_morphism(&data),
            Err(MorphismError::ZeroWeight(_))
        ));
    }

    #[test]
    fn pushforward_and_pullback() {
        let w = elliptic_wiener_cover();
        let v0 = Point::Vertex(VertexId(0));
        let d = Divisor::on(w.source(), [(v0, 1)]).unwrap();
        assert_eq!(
            w.pushforward(&d),
            Divisor::on(w.target(), [(Point::Vertex(VertexId(0)), 1)]).unwrap()
        );
        assert!(w.pushforward(&Divisor::zero()).is_zero());
        let pulled = w.pullback(&Divisor::on(w.target(), [(Point::Vertex(VertexId(0)), 1)]).unwrap());
        assert_eq!(pulled, Divisor::on(w.source(), [(v0, 2)]).unwrap());

        // two disjoint weight-1 sheets over a segment
        let mut b = TropicalCurve::builder();
        let a = b.vertex();
        let c = b.vertex();
        b.edge(a, c);
        let e = b.vertex();
        b.edge(c, e);
        let mut t = TropicalCurve::builder();
        let x = t.vertex();
        let y = t.vertex();
        t.edge(x, y);
        let _ = (a, e);
        // the path a-c-e folded onto the segment: c maps to y, a and e to x
        let fold = WeightedMorphism::new(MorphismData {
            source: b.build().unwrap(),
            target: t.build().unwrap(),
            vertex_map: vec![VertexId(0), VertexId(1), VertexId(0)],
            edge_map: vec![EdgeId(0), EdgeId(0)],
            puncture_map: vec![],
            edge_weights: vec![1, 1],
            puncture_weights: vec![],
        })
        .unwrap();
        let pulled = fold.pullback(&Divisor::on(fold.target(), [(Point::Vertex(VertexId(0)), 1)]).unwrap());
        assert_eq!(
            pulled,
            Divisor::on(
                fold.source(),
                [(Point::Vertex(VertexId(0)), 1), (Point::Vertex(VertexId(2)), 1)]
            )
            .unwrap()
        );
        let full_fibre = Divisor::on(
            fold.source(),
            [(Point::Vertex(VertexId(0)), 1), (Point::Vertex(VertexId(2)), 1)],
        )
        .unwrap();
        assert_eq!(
            fold.pushforward(&full_fibre),
            Divisor::on(fold.target(), [(Point::Vertex(VertexId(0)), 2)]).unwrap()
        );

        let line_cover = weight_two_line_cover();
        let k = line_cover.pullback(&line_cover.target().canonical_divisor());
        assert_eq!(k.to_string(), "-2[p0] - 2[p1]");
        assert_eq!(k.degree(), 2 * -2);
    }

    #[test]
    fn ramification_examples() {
        let line_cover = weight_two_line_cover();
        let r = line_cover.ramification_divisor();
        assert_eq!(r.to_string(), "[p0] + [p1]");
        assert_eq!(r.degree(), 2);
        assert_eq!(line_cover.branch_divisor().to_string(), "[p0] + [p1]");

        let w = elliptic_wiener_cover();
        let r = w.ramification_divisor();
        assert!(r.finite_part().is_zero());
        assert_eq!(r.degree(), 4);
        assert_eq!(w.branch_divisor().to_string(), "[p0] + [p1] + [p2] + [p3]");

        let id = WeightedMorphism::identity(&line()).unwrap();
        assert!(id.ramification_divisor().is_zero());
        assert!(id.branch_divisor().is_zero());
    }

    #[test]
    fn riemann_hurwitz_examples() {
        let r = elliptic_wiener_cover().check_riemann_hurwitz().unwrap();
        assert_eq!((r.lhs, r.rhs, r.ramification_degree), (0, 0, 4));
        let r = weight_two_line_cover().check_riemann_hurwitz().unwrap();
        assert_eq!((r.lhs, r.rhs), (-2, -2));
        let r = WeightedMorphism::identity(&line())
            .unwrap()
            .check_riemann_hurwitz()
            .unwrap();
        assert_eq!((r.lhs, r.rhs, r.ramification_degree), (-2, -2, 0));
    }

    #[test]
    fn mumford_criterion() {
        assert_eq!(elliptic_wiener_cover().is_mumford(), Ok(true));
        assert_eq!(
            WeightedMorphism::identity(&line()).unwrap().is_mumford(),
            Ok(true)
        );
        // one vertex over the four-punctured line, all punctures weight 2
        let mut t = TropicalCurve::builder();
        let x = t.vertex();
        for _ in 0..4 {
            t.puncture(x);
        }
        let target = t.build().unwrap();
        let m = WeightedMorphism::new(MorphismData {
            source: target.clone(),
            target,
            vertex_map: vec![VertexId(0)],
            edge_map: vec![],
            puncture_map: (0..4).map(PunctureId).collect(),
            edge_weights: vec![],
            puncture_weights: vec![2; 4],
        })
        .unwrap();
        assert_eq!(m.local_defect(VertexId(0)), -2);
        assert_eq!(m.is_mumford(), Ok(false));
        assert_eq!(m.infer_genus_labels(), Ok(vec![1]));
        m.check_riemann_hurwitz().unwrap();
    }

    #[test]
    fn odd_defect_is_an_error() {
        // weight-2 and weight-1 ... over a 3-punctured vertex: m=2,
        // profiles (2),(1,1),(1,1): deg 5, deg_w 6, defect 2*2-2-1 = 1
        let mut t = TropicalCurve::builder();
        let x = t.vertex();
        for _ in 0..3 {
            t.puncture(x);
        }
        let target = t.build().unwrap();
        let mut s = TropicalCurve::builder();
        let v = s.vertex();
        for _ in 0..5 {
            s.puncture(v);
        }
        let m = WeightedMorphism::new(MorphismData {
            source: s.build().unwrap(),
            target,
            vertex_map: vec![VertexId(0)],
            edge_map: vec![],
            puncture_map: [0, 1, 1, 2, 2].map(PunctureId).to_vec(),
            edge_weights: vec![],
            puncture_weights: vec![2, 1, 1, 1, 1],
        })
        .unwrap();
        assert_eq!(
            m.is_mumford(),
            Err(MorphismError::OddLocalDefect {
                vertex: VertexId(0),
                defect: 1
            })
        );
    }

    #[test]
    fn star_profiles_read_off_weights() {
        let w = elliptic_wiener_cover();
        let star = w.star_profiles(VertexId(0));
        let shown: Vec<String> = star.iter().map(|(d, p)| format!("{d}:{p}")).collect();
        assert_eq!(shown, vec!["e0:1,1", "p0:2", "p1:2"]);
        let star = weight_two_line_cover().star_profiles(VertexId(0));
        assert!(star.values().all(|p| p.parts() == [2]));
        let id = WeightedMorphism::identity(&four_punctured_segment()).unwrap();
        assert!(id.star_profiles(VertexId(1)).values().all(|p| p.parts() == [1]));
    }

    #[test]
    fn harbater_mumford_examples() {
        let p = |s: &str| s.parse::<Partition>().unwrap();
        assert_eq!(harbater_mumford_check(&[p("3"), p("3"), p("1,1,1")], 3), Ok(true));
        assert_eq!(harbater_mumford_check(&[p("3"), p("1,1,1"), p("3")], 3), Ok(true));
        assert_eq!(harbater_mumford_check(&[p("2"), p("2"), p("2")], 2), Ok(false));
        assert_eq!(harbater_mumford_check(&[p("1"), p("1"), p("1")], 1), Ok(true));
        assert_eq!(
            harbater_mumford_check(&[p("2"), p("2")], 2),
            Err(MorphismError::WrongArity(2))
        );
    }

    #[test]
    fn json_and_dot() {
        let w = elliptic_wiener_cover();
        let text = serde_json::to_string(&w).unwrap();
        let back: WeightedMorphism = serde_json::from_str(&text).unwrap();
        assert_eq!(back, w);
        let dot = w.to_dot();
        assert!(dot.contains("s_v0 -> t_v0"));
        assert!(dot.contains("t_v0 -> t_v1"));
        let mut broken: serde_json::Value = serde_json::from_str(&text).unwrap();
        broken["edge_weights"] = serde_json::json!([1, 2]);
        assert!(serde_json::from_value::<WeightedMorphism>(broken).is_err());
    }
}
