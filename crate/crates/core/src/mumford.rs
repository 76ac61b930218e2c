//! Mumford-curve counts over branch trees that need not be binary.
//!
//! A vertex of degree `r > 3` is resolved into a binary tree on its `r`
//! directions, adding `r - 3` new edges. Covers of the refined tree are
//! enumerated; those whose preimage of the new edges (with their endpoints)
//! contains a cycle collapse to covers with a positive-genus vertex and are
//! not Mumford. Their total multiplicity is the wiener weight `W`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::{tropical_hurwitz, CoverClass, EnumError};
use crate::graph::{EdgeId, GraphError, TropicalCurve, VertexId};
use crate::morphism::{Direction, MorphismData, MorphismError, WeightedMorphism};
use crate::oracle::Limits;
use crate::partition::Partition;
use crate::tree::{BranchTree, Node, TreeBuilder};
use crate::Rational;

/// Endpoint in a local resolution of one vertex: one of its directions or
/// one of the new internal vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Local {
    Dir(usize),
    Inner(usize),
}

/// An unrooted binary tree whose leaves are the directions `0..r`.
type Resolution = Vec<(Local, Local)>;

fn caterpillar_resolution(r: usize) -> Resolution {
    let mut edges = vec![(Local::Dir(0), Local::Inner(0)), (Local::Dir(1), Local::Inner(0))];
    for k in 1..r - 2 {
        edges.push((Local::Inner(k - 1), Local::Inner(k)));
        edges.push((Local::Dir(k + 1), Local::Inner(k)));
    }
    edges.push((Local::Dir(r - 1), Local::Inner(r - 3)));
    edges
}

/// All `(2r - 5)!!` resolutions, by inserting direction `i` on every edge of
/// each resolution of the first `i` directions.
fn all_resolutions(r: usize) -> Vec<Resolution> {
    let mut trees = vec![vec![
        (Local::Dir(0), Local::Inner(0)),
        (Local::Dir(1), Local::Inner(0)),
        (Local::Dir(2), Local::Inner(0)),
    ]];
    for i in 3..r {
        let inner = Local::Inner(i - 2);
        trees = trees
            .iter()
            .flat_map(|t| {
                (0..t.len()).map(move |j| {
                    let mut next = t.clone();
                    let (a, b) = next[j];
                    next[j] = (a, inner);
                    next.push((inner, b));
                    next.push((Local::Dir(i), inner));
                    next
                })
            })
            .collect();
    }
    trees
}

/// A binary tree refining a branch tree, with the edges whose contraction
/// gives back the original.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refinement {
    pub binary: BranchTree,
    pub contracted: BTreeSet<EdgeId>,
}

/// Directions at `v` ordered by the smallest leaf on their far side.
fn ordered_directions(tree: &BranchTree, v: VertexId) -> Vec<Direction> {
    let mut dirs = vec![tree.parent_direction(v)];
    dirs.extend_from_slice(tree.child_directions(v));
    // the parent side always holds leaf 0 and children are already sorted
    dirs
}

fn refine_with(tree: &BranchTree, choice: &BTreeMap<VertexId, Resolution>) -> Refinement {
    let curve = tree.curve();
    let mut b = TreeBuilder::default();
    let mut contracted_input = Vec::new();
    // port[v][dir] = builder node adjacent to that direction
    let mut port: Vec<BTreeMap<Direction, Node>> = Vec::new();
    for v in curve.vertex_ids() {
        let dirs = ordered_directions(tree, v);
        let mut ports = BTreeMap::new();
        match choice.get(&v) {
            None => {
                let n = b.internal();
                for d in dirs {
                    ports.insert(d, n);
                }
            }
            Some(res) => {
                let inner: Vec<Node> = (0..dirs.len() - 2).map(|_| b.internal()).collect();
                for &(x, y) in res {
                    match (x, y) {
                        (Local::Dir(i), Local::Inner(k)) | (Local::Inner(k), Local::Dir(i)) => {
                            ports.insert(dirs[i], inner[k]);
                        }
                        (Local::Inner(k), Local::Inner(l)) => {
                            contracted_input.push(b.connect(inner[k], inner[l], None));
                        }
                        (Local::Dir(_), Local::Dir(_)) => unreachable!("leaves are never adjacent"),
                    }
                }
            }
        }
        port.push(ports);
    }
    for (i, e) in curve.edges().iter().enumerate() {
        let d = Direction::Edge(EdgeId(i));
        b.connect(port[e.ends[0].0][&d], port[e.ends[1].0][&d], e.length.clone());
    }
    for (l, p) in curve.punctures().iter().enumerate() {
        let d = Direction::Puncture(crate::PunctureId(l));
        b.connect(Node::Leaf(l), port[p.vertex.0][&d], None);
    }
    let (binary, edge_of) = b.build().expect("refinement of a valid tree");
    let contracted = contracted_input
        .into_iter()
        .map(|i| edge_of[i].expect("bounded"))
        .collect();
    Refinement { binary, contracted }
}

fn high_vertices(tree: &BranchTree) -> Vec<(VertexId, usize)> {
    tree.curve()
        .vertex_ids()
        .map(|v| (v, tree.child_directions(v).len() + 1))
        .filter(|&(_, r)| r > 3)
        .collect()
}

/// The canonical binary refinement: each vertex of degree `r > 3` becomes a
/// caterpillar on its directions, ordered by smallest leaf label.
pub fn binary_refinement(tree: &BranchTree) -> Refinement {
    let choice = high_vertices(tree)
        .into_iter()
        .map(|(v, r)| (v, caterpillar_resolution(r)))
        .collect();
    refine_with(tree, &choice)
}

/// Every binary refinement, up to `limit` of them, the canonical one first.
pub fn all_binary_refinements(tree: &BranchTree, limit: usize) -> Vec<Refinement> {
    let high = high_vertices(tree);
    let per_vertex: Vec<Vec<Resolution>> = high.iter().map(|&(_, r)| all_resolutions(r)).collect();
    let mut out = vec![binary_refinement(tree)];
    let mut index = vec![0usize; high.len()];
    'outer: loop {
        if out.len() >= limit {
            break;
        }
        let choice = high
            .iter()
            .zip(&index)
            .enumerate()
            .map(|(k, (&(v, _), &i))| (v, per_vertex[k][i].clone()))
            .collect();
        let r = refine_with(tree, &choice);
        if !out.contains(&r) {
            out.push(r);
        }
        for k in 0..index.len() {
            index[k] += 1;
            if index[k] < per_vertex[k].len() {
                continue 'outer;
            }
            index[k] = 0;
        }
        break;
    }
    out.truncate(limit.max(1));
    out
}

/// Source edges over `contracted` together with the source vertices over
/// their endpoints.
fn preimage_closure(m: &WeightedMorphism, contracted: &BTreeSet<EdgeId>) -> (Vec<VertexId>, Vec<EdgeId>) {
    let target = m.target();
    let ends: BTreeSet<VertexId> = contracted
        .iter()
        .flat_map(|e| target.edges()[e.0].ends)
        .collect();
    let vertices = m
        .source()
        .vertex_ids()
        .filter(|&v| ends.contains(&m.vertex_image(v)))
        .collect();
    let edges = m
        .source()
        .edge_ids()
        .filter(|&e| contracted.contains(&m.edge_image(e)))
        .collect();
    (vertices, edges)
}

/// Union-find components of `vertices` joined by `edges`.
fn components(curve: &TropicalCurve, vertices: &[VertexId], edges: &[EdgeId]) -> BTreeMap<VertexId, VertexId> {
    let mut parent: BTreeMap<VertexId, VertexId> = vertices.iter().map(|&v| (v, v)).collect();
    fn find(parent: &mut BTreeMap<VertexId, VertexId>, mut x: VertexId) -> VertexId {
        while parent[&x] != x {
            x = parent[&x];
        }
        x
    }
    for &e in edges {
        let [a, b] = curve.edges()[e.0].ends;
        let (x, y) = (find(&mut parent, a), find(&mut parent, b));
        if x != y {
            parent.insert(x.max(y), x.min(y));
        }
    }
    let keys: Vec<VertexId> = parent.keys().copied().collect();
    keys.into_iter().map(|v| (v, find(&mut parent, v))).collect()
}

/// First Betti number of the preimage of the closure of `contracted`.
pub fn preimage_betti(m: &WeightedMorphism, contracted: &BTreeSet<EdgeId>) -> usize {
    let (vertices, edges) = preimage_closure(m, contracted);
    let comps = components(m.source(), &vertices, &edges);
    let c = comps.values().collect::<BTreeSet<_>>().len();
    edges.len() + c - vertices.len()
}

/// Contracted curve, the new vertex of each old vertex, and the new edge
/// of each surviving old edge.
type Contraction = (TropicalCurve, Vec<VertexId>, Vec<Option<EdgeId>>);

/// Contracts `edges` of a curve. Each contracted component becomes one
/// vertex whose genus is its first Betti number plus the genera it absorbed.
/// Returns the curve, the new vertex of every old vertex, and the new edge
/// of every surviving old edge.
fn contract_curve(
    curve: &TropicalCurve,
    closure: &[VertexId],
    edges: &[EdgeId],
) -> Result<Contraction, GraphError> {
    let comps = components(curve, closure, edges);
    let root = |v: VertexId| comps.get(&v).copied().unwrap_or(v);
    let mut new_id: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for v in curve.vertex_ids() {
        let r = root(v);
        let next = VertexId(new_id.len());
        new_id.entry(r).or_insert(next);
    }
    let mut genus = vec![0u32; new_id.len()];
    for v in curve.vertex_ids() {
        genus[new_id[&root(v)].0] += curve.vertices()[v.0].genus;
    }
    let removed: BTreeSet<EdgeId> = edges.iter().copied().collect();
    let mut members: BTreeMap<VertexId, (usize, usize)> = BTreeMap::new();
    for &v in closure {
        members.entry(root(v)).or_insert((0, 0)).0 += 1;
    }
    for &e in edges {
        members.entry(root(curve.edges()[e.0].ends[0])).or_insert((0, 0)).1 += 1;
    }
    for (r, (nv, ne)) in members {
        genus[new_id[&r].0] += (ne + 1 - nv) as u32;
    }
    let mut b = TropicalCurve::builder();
    for g in genus {
        b.vertex_with_genus(g);
    }
    let mut edge_map = Vec::new();
    for (i, e) in curve.edges().iter().enumerate() {
        if removed.contains(&EdgeId(i)) {
            edge_map.push(None);
        } else {
            edge_map.push(Some(b.edge_with_length(
                new_id[&root(e.ends[0])],
                new_id[&root(e.ends[1])],
                e.length.clone(),
            )));
        }
    }
    for p in curve.punctures() {
        b.puncture(new_id[&root(p.vertex)]);
    }
    b.allow_loops(curve.loops_allowed());
    let vertex_map = curve.vertex_ids().map(|v| new_id[&root(v)]).collect();
    Ok((b.build()?, vertex_map, edge_map))
}

/// Source curve of `cover` with the preimage of the closure of `contracted`
/// collapsed component by component.
pub fn contract_edges(
    cover: &WeightedMorphism,
    contracted: &BTreeSet<EdgeId>,
) -> Result<TropicalCurve, MorphismError> {
    let (vertices, edges) = preimage_closure(cover, contracted);
    Ok(contract_curve(cover.source(), &vertices, &edges)?.0)
}

/// The cover of the contracted target induced by `cover`.
pub fn contract_cover(
    cover: &WeightedMorphism,
    contracted: &BTreeSet<EdgeId>,
) -> Result<WeightedMorphism, MorphismError> {
    let target = cover.target();
    let ends: Vec<VertexId> = contracted
        .iter()
        .flat_map(|e| target.edges()[e.0].ends)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let target_edges: Vec<EdgeId> = contracted.iter().copied().collect();
    let (new_target, t_vertex, t_edge) = contract_curve(target, &ends, &target_edges)?;
    let (vertices, edges) = preimage_closure(cover, contracted);
    let (new_source, s_vertex, s_edge) = contract_curve(cover.source(), &vertices, &edges)?;

    let mut vertex_map = vec![VertexId(0); new_source.num_vertices()];
    for v in cover.source().vertex_ids() {
        vertex_map[s_vertex[v.0].0] = t_vertex[cover.vertex_image(v).0];
    }
    let mut edge_map = vec![EdgeId(0); new_source.num_edges()];
    let mut edge_weights = vec![0; new_source.num_edges()];
    for e in cover.source().edge_ids() {
        if let Some(new) = s_edge[e.0] {
            edge_map[new.0] = t_edge[cover.edge_image(e).0].expect("image survives");
            edge_weights[new.0] = cover.edge_weight(e);
        }
    }
    let data = cover.data();
    WeightedMorphism::new(MorphismData {
        source: new_source,
        target: new_target,
        vertex_map,
        edge_map,
        puncture_map: data.puncture_map.clone(),
        edge_weights,
        puncture_weights: data.puncture_weights.clone(),
    })
}

/// Wiener weight of one refinement, with the tropical count it came from.
#[derive(Debug, Clone, Serialize)]
pub struct WienerReport {
    pub refinement: String,
    pub contracted: Vec<EdgeId>,
    #[serde(with = "crate::rational_str")]
    pub tropical: Rational,
    #[serde(with = "crate::rational_str")]
    pub classical: Rational,
    #[serde(with = "crate::rational_str")]
    pub wiener_weight: Rational,
    /// Tropical count minus wiener weight: the classes that contract to
    /// Mumford covers of the original tree.
    #[serde(with = "crate::rational_str")]
    pub mumford: Rational,
    #[serde(skip)]
    pub classes: Vec<CoverClass>,
}

/// Wiener weight over a given refinement.
pub fn wiener_weight_over(
    d: u32,
    profiles: &[Partition],
    refinement: &Refinement,
    limits: &Limits,
) -> Result<WienerReport, EnumError> {
    let count = tropical_hurwitz(d, profiles, &refinement.binary, limits)?;
    let w: Rational = count
        .classes
        .iter()
        .filter(|c| preimage_betti(&c.morphism, &refinement.contracted) > 0)
        .map(|c| c.multiplicity.clone())
        .sum();
    let mumford = &count.weighted - &w;
    assert!(!mumford.is_negative(), "wiener weight exceeds the tropical count");
    assert!(mumford <= count.classical);
    Ok(WienerReport {
        refinement: refinement.binary.canonical_newick(),
        contracted: refinement.contracted.iter().copied().collect(),
        tropical: count.weighted,
        classical: count.classical,
        wiener_weight: w,
        mumford,
        classes: count.classes,
    })
}

/// Wiener weight over the canonical refinement; zero for binary trees.
pub fn wiener_weight(
    d: u32,
    profiles: &[Partition],
    tree: &BranchTree,
    limits: &Limits,
) -> Result<WienerReport, EnumError> {
    tree.check_profiles(profiles.len())?;
    wiener_weight_over(d, profiles, &binary_refinement(tree), limits)
}

/// Number of Mumford covers over a branch point configuration with this tree.
pub fn mumford_hurwitz(
    d: u32,
    profiles: &[Partition],
    tree: &BranchTree,
    limits: &Limits,
) -> Result<Rational, EnumError> {
    Ok(wiener_weight(d, profiles, tree, limits)?.mumford)
}

#[derive(Debug, Clone, Serialize)]
pub struct IndependenceReport {
    pub trials: Vec<WienerReport>,
    /// All refinements give the same wiener weight.
    pub wiener_agree: bool,
    /// All refinements give the same Mumford count.
    pub mumford_agree: bool,
}

impl IndependenceReport {
    pub fn agree(&self) -> bool {
        self.wiener_agree && self.mumford_agree
    }
}

/// Computes the wiener weight over up to `trials` distinct refinements.
pub fn refinement_independence_check(
    d: u32,
    profiles: &[Partition],
    tree: &BranchTree,
    trials: usize,
    limits: &Limits,
) -> Result<IndependenceReport, EnumError> {
    tree.check_profiles(profiles.len())?;
    let reports = all_binary_refinements(tree, trials.max(1))
        .par_iter()
        .map(|r| wiener_weight_over(d, profiles, r, limits))
        .collect::<Result<Vec<_>, _>>()?;
    let same = |f: fn(&WienerReport) -> &Rational| reports.windows(2).all(|w| f(&w[0]) == f(&w[1]));
    Ok(IndependenceReport {
        wiener_agree: same(|r| &r.wiener_weight),
        mumford_agree: same(|r| &r.mumford),
        trials: reports,
    })
}
