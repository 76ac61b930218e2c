//! Enumeration of tropical covers of combs and binary trees.
//!
//! Covers are grown vertex by vertex away from leaf 0. Over each internal
//! vertex of the tree the strands arriving from the parent direction are
//! grouped into source vertices, and every source vertex of multiplicity `m`
//! sends strands of total weight `m` into each of the two other directions
//! so that it has exactly `m + 2` edges and ends. Over leaves the strand
//! weights must reproduce the prescribed profile.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::canon::{canonicalize, CanonicalForm};
use crate::graph::{EdgeId, GraphError, PunctureId, TropicalCurve, VertexId};
use crate::morphism::{Direction, MorphismData, MorphismError, WeightedMorphism};
use crate::oracle::{classical_hurwitz, genus_from_profiles, hurwitz_by_tropical_type, Limits, OracleError};
use crate::partition::Partition;
use crate::tree::{BranchTree, TreeError};
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("the branch tree is not binary")]
    NotBinary,
    #[error("requested genus {given} but the profiles force genus {forced}")]
    GenusMismatch { given: u32, forced: u32 },
    #[error("the oracle found a genus-zero cover class missing from the enumeration: {0}")]
    EnumerationIncomplete(String),
    #[error("double Hurwitz data needs at least one interior branch point, got 2g - 2 + l(eta) + l(nu) = {0}")]
    TooFewBranchPoints(i64),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

/// An isomorphism class of covers of a branch tree.
#[derive(Debug, Clone, Serialize)]
pub struct CoverClass {
    pub morphism: WeightedMorphism,
    pub aut_count: u64,
    #[serde(with = "crate::rational_str")]
    pub multiplicity: Rational,
    pub canonical_form: CanonicalForm,
}

impl CoverClass {
    pub fn new(morphism: WeightedMorphism) -> Self {
        let c = canonicalize(&morphism);
        CoverClass {
            morphism,
            aut_count: c.automorphisms,
            multiplicity: Rational::zero(),
            canonical_form: c.form,
        }
    }

    pub fn betti(&self) -> usize {
        self.morphism.source().first_betti()
    }
}

/// One source vertex produced by [`local_groupings`]: the incoming strands it
/// absorbs and the weights it sends into the two outgoing directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalVertex {
    pub strands: Vec<usize>,
    pub multiplicity: u32,
    pub first: Partition,
    pub second: Partition,
}

/// All ways to group `incoming` strand weights into source vertices over a
/// trivalent vertex. An outgoing direction that is a leaf carries `Some`
/// profile, and the weights sent into it by all vertices together must be
/// exactly that profile.
pub fn local_groupings(
    incoming: &[u32],
    first: Option<&Partition>,
    second: Option<&Partition>,
) -> Vec<Vec<LocalVertex>> {
    let mut out = Vec::new();
    for groups in set_partitions(incoming.len()) {
        let masses: Vec<u32> = groups
            .iter()
            .map(|g| g.iter().map(|&i| incoming[i]).sum())
            .collect();
        let mut remaining = [
            first.map(|p| p.parts().to_vec()),
            second.map(|p| p.parts().to_vec()),
        ];
        let mut chosen = Vec::new();
        choose_sides(&groups, &masses, &mut remaining, &mut chosen, &mut out);
    }
    out
}

fn choose_sides(
    groups: &[Vec<usize>],
    masses: &[u32],
    remaining: &mut [Option<Vec<u32>>; 2],
    chosen: &mut Vec<LocalVertex>,
    out: &mut Vec<Vec<LocalVertex>>,
) {
    let i = chosen.len();
    if i == groups.len() {
        if remaining.iter().all(|r| r.as_ref().is_none_or(Vec::is_empty)) {
            out.push(chosen.clone());
        }
        return;
    }
    let m = masses[i];
    let slots = m as usize + 2 - groups[i].len();
    for alpha in Partition::all(m) {
        if alpha.len() >= slots {
            continue;
        }
        let Some(taken_a) = take(&mut remaining[0], &alpha) else {
            continue;
        };
        for beta in Partition::all(m) {
            if alpha.len() + beta.len() != slots {
                continue;
            }
            let Some(taken_b) = take(&mut remaining[1], &beta) else {
                continue;
            };
            chosen.push(LocalVertex {
                strands: groups[i].clone(),
                multiplicity: m,
                first: alpha.clone(),
                second: beta,
            });
            choose_sides(groups, masses, remaining, chosen, out);
            chosen.pop();
            give_back(&mut remaining[1], taken_b);
        }
        give_back(&mut remaining[0], taken_a);
    }
}

/// Removes the parts of `p` from a prescribed multiset; `None` if they are
/// not all available. Free directions accept anything.
fn take(pool: &mut Option<Vec<u32>>, p: &Partition) -> Option<Vec<u32>> {
    let Some(pool) = pool else {
        return Some(Vec::new());
    };
    let mut trial = pool.clone();
    for part in p.parts() {
        let pos = trial.iter().position(|x| x == part)?;
        trial.swap_remove(pos);
    }
    let taken = p.parts().to_vec();
    *pool = trial;
    Some(taken)
}

fn give_back(pool: &mut Option<Vec<u32>>, taken: Vec<u32>) {
    if let Some(pool) = pool {
        pool.extend(taken);
    }
}

/// Set partitions of `0..n` as lists of blocks, via restricted growth strings.
fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(i: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            rec(i + 1, n, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        rec(i + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::new(), &mut out);
    out
}

/// A cover under construction.
#[derive(Debug, Clone, Default)]
struct Partial {
    vertex_map: Vec<VertexId>,
    edges: Vec<(VertexId, VertexId, EdgeId, u32)>,
    punctures: Vec<(VertexId, PunctureId, u32)>,
    /// Strands already emitted over a tree edge, waiting for their far end.
    pending: BTreeMap<EdgeId, Vec<(VertexId, u32)>>,
}

impl Partial {
    /// Strand weights arriving at tree vertex `v` from its parent direction.
    fn incoming(&self, tree: &BranchTree, profiles: &[Partition], v: VertexId) -> Vec<u32> {
        match tree.parent_direction(v) {
            Direction::Puncture(p) => profiles[p.0].parts().to_vec(),
            Direction::Edge(e) => self.pending[&e].iter().map(|s| s.1).collect(),
        }
    }

    fn apply(
        &self,
        tree: &BranchTree,
        profiles: &[Partition],
        v: VertexId,
        grouping: &[LocalVertex],
    ) -> Partial {
        let mut next = self.clone();
        let parent = tree.parent_direction(v);
        let arriving = match parent {
            Direction::Edge(e) => next.pending.remove(&e).expect("parent processed first"),
            Direction::Puncture(_) => Vec::new(),
        };
        let children = tree.child_directions(v);
        for local in grouping {
            let s = VertexId(next.vertex_map.len());
            next.vertex_map.push(v);
            for &i in &local.strands {
                match parent {
                    Direction::Puncture(p) => {
                        next.punctures.push((s, p, profiles[p.0].parts()[i]));
                    }
                    Direction::Edge(e) => {
                        let (from, w) = arriving[i];
                        next.edges.push((from, s, e, w));
                    }
                }
            }
            for (dir, parts) in children.iter().zip([&local.first, &local.second]) {
                for &w in parts.parts() {
                    match *dir {
                        Direction::Puncture(p) => next.punctures.push((s, p, w)),
                        Direction::Edge(e) => next.pending.entry(e).or_default().push((s, w)),
                    }
                }
            }
        }
        next
    }
}

/// Grouping options at tree vertex `v` of a partial cover.
fn options(
    partial: &Partial,
    tree: &BranchTree,
    profiles: &[Partition],
    v: VertexId,
) -> Vec<Vec<LocalVertex>> {
    let incoming = partial.incoming(tree, profiles, v);
    let leaf = |dir: Direction| match dir {
        Direction::Puncture(p) => Some(&profiles[p.0]),
        Direction::Edge(_) => None,
    };
    let children = tree.child_directions(v);
    local_groupings(&incoming, leaf(children[0]), leaf(children[1]))
}

fn finish(partial: Partial, tree: &BranchTree) -> Option<WeightedMorphism> {
    debug_assert!(partial.pending.values().all(Vec::is_empty));
    let mut b = TropicalCurve::builder();
    for _ in &partial.vertex_map {
        b.vertex();
    }
    for &(a, c, _, _) in &partial.edges {
        b.edge(a, c);
    }
    for &(v, _, _) in &partial.punctures {
        b.puncture(v);
    }
    let source = match b.build() {
        Ok(s) => s,
        Err(GraphError::Disconnected) => return None,
        Err(e) => panic!("enumeration produced an invalid curve: {e}"),
    };
    let data = MorphismData {
        source,
        target: tree.curve().clone(),
        vertex_map: partial.vertex_map,
        edge_map: partial.edges.iter().map(|e| e.2).collect(),
        puncture_map: partial.punctures.iter().map(|p| p.1).collect(),
        edge_weights: partial.edges.iter().map(|e| e.3).collect(),
        puncture_weights: partial.punctures.iter().map(|p| p.2).collect(),
    };
    Some(WeightedMorphism::new(data).expect("enumerated covers are harmonic"))
}

fn classify(
    candidates: Vec<Partial>,
    tree: &BranchTree,
    genus: u32,
) -> Vec<CoverClass> {
    let found: BTreeMap<CanonicalForm, CoverClass> = candidates
        .into_par_iter()
        .filter_map(|p| finish(p, tree))
        .map(CoverClass::new)
        .map(|c| (c.canonical_form.clone(), c))
        .collect();
    for c in found.values() {
        assert_eq!(
            c.betti(),
            genus as usize,
            "first Betti number of an enumerated cover differs from the forced genus"
        );
    }
    found.into_values().collect()
}

/// The genus forced by the profiles, or `None` when no connected cover
/// exists.
fn forced_genus(d: u32, profiles: &[Partition]) -> Result<Option<u32>, EnumError> {
    match genus_from_profiles(d, profiles) {
        Ok(g) => Ok(Some(g)),
        Err(OracleError::ParityObstruction(_)) | Err(OracleError::NegativeGenus(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Covers of the comb with handles `profiles[0]`, `profiles[k-1]` and teeth
/// `profiles[1..k-1]`, swept left to right along the backbone.
pub fn enumerate_comb_covers(
    d: u32,
    profiles: &[Partition],
    genus: Option<u32>,
) -> Result<Vec<CoverClass>, EnumError> {
    let comb = BranchTree::caterpillar(profiles.len())?;
    let forced = forced_genus(d, profiles)?;
    if let (Some(given), Some(forced)) = (genus, forced) {
        if given != forced {
            return Err(EnumError::GenusMismatch { given, forced });
        }
    }
    let Some(forced) = forced else {
        if let Some(given) = genus {
            // no cover has any genus here; report it against the naive value
            let naive = profiles.iter().map(Partition::defect).sum::<u32>() as i64 - 2 * d as i64;
            return Err(EnumError::GenusMismatch {
                given,
                forced: (naive.max(-2) / 2 + 1) as u32,
            });
        }
        return Ok(Vec::new());
    };
    let mut states = vec![Partial::default()];
    for v in comb.curve().vertex_ids() {
        states = states
            .iter()
            .flat_map(|s| {
                options(s, &comb, profiles, v)
                    .into_iter()
                    .map(|g| s.apply(&comb, profiles, v, &g))
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    Ok(classify(states, &comb, forced))
}

/// Covers of an arbitrary binary tree, leaf `i` carrying `profiles[i]`,
/// found by depth-first search over the internal vertices.
pub fn enumerate_binary_tree_covers(
    d: u32,
    profiles: &[Partition],
    tree: &BranchTree,
) -> Result<Vec<CoverClass>, EnumError> {
    if !tree.is_binary() {
        return Err(EnumError::NotBinary);
    }
    tree.check_profiles(profiles.len())?;
    let Some(forced) = forced_genus(d, profiles)? else {
        return Ok(Vec::new());
    };
    fn grow(
        partial: Partial,
        v: usize,
        tree: &BranchTree,
        profiles: &[Partition],
        out: &mut Vec<Partial>,
    ) {
        if v == tree.curve().num_vertices() {
            out.push(partial);
            return;
        }
        for g in options(&partial, tree, profiles, VertexId(v)) {
            grow(partial.apply(tree, profiles, VertexId(v), &g), v + 1, tree, profiles, out);
        }
    }
    let mut candidates = Vec::new();
    grow(Partial::default(), 0, tree, profiles, &mut candidates);
    Ok(classify(candidates, tree, forced))
}

/// Result of a tropical count.
#[derive(Debug, Clone, Serialize)]
pub struct TropicalCount {
    /// Enumerated classes with nonzero multiplicity.
    pub raw_count: usize,
    /// Sum of multiplicities of the enumerated classes.
    #[serde(with = "crate::rational_str")]
    pub weighted: Rational,
    #[serde(with = "crate::rational_str")]
    pub classical: Rational,
    /// Mass of the oracle classes having a vertex of positive local genus;
    /// these covers cannot satisfy the degree rule and are never enumerated.
    #[serde(with = "crate::rational_str")]
    pub higher_genus_weight: Rational,
    pub classes: Vec<CoverClass>,
    pub higher_genus: Vec<CoverClass>,
}

impl TropicalCount {
    pub fn agrees_with_classical(&self) -> bool {
        self.weighted == self.classical
    }
}

/// Sets each class's multiplicity to its share of the factorizations, and
/// returns the oracle classes that the enumeration cannot produce because
/// they have a vertex of positive local genus.
pub fn assign_multiplicities(
    classes: &mut [CoverClass],
    d: u32,
    profiles: &[Partition],
    tree: &BranchTree,
    limits: &Limits,
) -> Result<Vec<CoverClass>, EnumError> {
    let mut oracle = hurwitz_by_tropical_type(d, profiles, tree, limits)?;
    for c in classes.iter_mut() {
        c.multiplicity = oracle
            .remove(&c.canonical_form)
            .map(|t| t.multiplicity)
            .unwrap_or_else(Rational::zero);
    }
    let mut higher = Vec::new();
    for (form, t) in oracle {
        if t.representative.is_mumford()? {
            return Err(EnumError::EnumerationIncomplete(form.to_string()));
        }
        let mut c = CoverClass::new(t.representative);
        c.multiplicity = t.multiplicity;
        higher.push(c);
    }
    Ok(higher)
}

/// Tropical Hurwitz number over a binary tree; the standard caterpillar is
/// handled by the comb sweep.
pub fn tropical_hurwitz(
    d: u32,
    profiles: &[Partition],
    tree: &BranchTree,
    limits: &Limits,
) -> Result<TropicalCount, EnumError> {
    tree.check_profiles(profiles.len())?;
    let mut classes = if *tree == BranchTree::caterpillar(profiles.len())? {
        enumerate_comb_covers(d, profiles, None)?
    } else {
        enumerate_binary_tree_covers(d, profiles, tree)?
    };
    let higher_genus = assign_multiplicities(&mut classes, d, profiles, tree, limits)?;
    let classical = classical_hurwitz(d, profiles, limits)?;
    let weighted: Rational = classes.iter().map(|c| c.multiplicity.clone()).sum();
    let higher_genus_weight: Rational = higher_genus.iter().map(|c| c.multiplicity.clone()).sum();
    assert_eq!(
        &weighted + &higher_genus_weight,
        classical,
        "cover classes do not exhaust the factorizations"
    );
    Ok(TropicalCount {
        raw_count: classes.iter().filter(|c| !c.multiplicity.is_zero()).count(),
        weighted,
        classical,
        higher_genus_weight,
        classes,
        higher_genus,
    })
}

fn double_hurwitz_profiles(
    d: u32,
    eta: &Partition,
    nu: &Partition,
    genus: u32,
) -> Result<Vec<Partition>, EnumError> {
    let n = 2 * genus as i64 - 2 + eta.len() as i64 + nu.len() as i64;
    if n < 1 || d < 2 {
        return Err(EnumError::TooFewBranchPoints(n));
    }
    let mut profiles = vec![eta.clone()];
    profiles.extend(std::iter::repeat_n(Partition::simple(d), n as usize));
    profiles.push(nu.clone());
    Ok(profiles)
}

/// Double Hurwitz number: profiles `eta` and `nu` at the handles of a comb
/// and simple ramification at each of its `2g - 2 + l(eta) + l(nu)` teeth.
pub fn cjm_double_hurwitz(
    d: u32,
    eta: &Partition,
    nu: &Partition,
    genus: u32,
    limits: &Limits,
) -> Result<TropicalCount, EnumError> {
    let profiles = double_hurwitz_profiles(d, eta, nu, genus)?;
    let comb = BranchTree::caterpillar(profiles.len())?;
    let count = tropical_hurwitz(d, &profiles, &comb, limits)?;
    if let Some(c) = count.classes.first() {
        assert_eq!(c.betti(), genus as usize);
    }
    Ok(count)
}

/// Handle ends and backbone edges at a source vertex of a comb cover.
fn backbone_valence(c: &CoverClass, v: VertexId, handles: [PunctureId; 2]) -> usize {
    let src = c.morphism.source();
    src.incident_edges(v).len()
        + src
            .punctures_at(v)
            .into_iter()
            .filter(|&p| handles.contains(&c.morphism.puncture_image(p)))
            .count()
}

/// After contracting the teeth of a comb cover with simple ramification,
/// every source vertex has either three backbone strands or two (a vertex
/// that disappears when the teeth are removed).
pub fn cjm_backbone_check(c: &CoverClass) -> bool {
    let target = c.morphism.target();
    let handles = [PunctureId(0), PunctureId(target.num_punctures() - 1)];
    c.morphism
        .source()
        .vertex_ids()
        .all(|v| matches!(backbone_valence(c, v, handles), 2 | 3))
}

/// Closed-form weight of a comb cover with simple ramification: the product
/// of the weights of the bounded edges left after contracting teeth and
/// smoothing two-valent vertices, divided by the automorphisms of that
/// contracted graph.
pub fn cjm_product(c: &CoverClass) -> Rational {
    let m = &c.morphism;
    let src = m.source();
    let target = m.target();
    let handles = [PunctureId(0), PunctureId(target.num_punctures() - 1)];
    // items: bounded edges, then handle ends; chains through two-valent
    // vertices are merged
    let ne = src.num_edges();
    let mut parent: Vec<usize> = (0..ne + src.num_punctures()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut tooth_symmetry: u64 = 1;
    for v in src.vertex_ids() {
        let mut items: Vec<usize> = src.incident_edges(v).into_iter().map(|e| e.0).collect();
        let mut teeth: BTreeMap<(PunctureId, u32), u64> = BTreeMap::new();
        for p in src.punctures_at(v) {
            let image = m.puncture_image(p);
            if handles.contains(&image) {
                items.push(ne + p.0);
            } else {
                *teeth.entry((image, m.puncture_weight(p))).or_insert(0) += 1;
            }
        }
        tooth_symmetry *= teeth.values().map(|&k| (1..=k).product::<u64>()).product::<u64>();
        if items.len() == 2 {
            let (a, b) = (find(&mut parent, items[0]), find(&mut parent, items[1]));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut chains: BTreeMap<usize, (bool, u32)> = BTreeMap::new();
    for e in 0..ne {
        let r = find(&mut parent, e);
        chains.entry(r).or_insert((false, m.edge_weight(EdgeId(e))));
    }
    for p in src.puncture_ids() {
        if handles.contains(&m.puncture_image(p)) {
            let r = find(&mut parent, ne + p.0);
            if let Some(chain) = chains.get_mut(&r) {
                chain.0 = true;
            }
        }
    }
    let product: u64 = chains
        .values()
        .filter(|(is_end, _)| !is_end)
        .map(|&(_, w)| w as u64)
        .product();
    let contracted_aut = c.aut_count / tooth_symmetry;
    Rational::new(product.into(), contracted_aut.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_rational;
    use crate::tree::{Node, TreeBuilder};

    fn profiles(text: &[&str]) -> Vec<Partition> {
        text.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    pub(crate) fn balanced_four() -> BranchTree {
        let mut b = TreeBuilder::default();
        let x = b.internal();
        let y = b.internal();
        b.connect(Node::Leaf(0), x, None);
        b.connect(Node::Leaf(2), x, None);
        b.connect(Node::Leaf(1), y, None);
        b.connect(Node::Leaf(3), y, None);
        b.connect(x, y, None);
        b.build().unwrap().0
    }

    #[test]
    fn local_grouping_rules() {
        // one strand of weight 2 into a vertex with a (2) leaf: the third
        // direction gets (1,1)
        let two = Partition::full_cycle(2);
        let g = local_groupings(&[2], Some(&two), None);
        assert_eq!(g.len(), 1);
        assert_eq!(g[0][0].second.parts(), &[1, 1]);
        // two weight-1 strands and an unramified leaf: only two separate
        // sheets, since one vertex would have degree 4 + l(beta) > 4
        let ones = Partition::unramified(2);
        let g = local_groupings(&[1, 1], Some(&ones), None);
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].len(), 2);
        // with a ramified leaf the two strands must meet
        let g = local_groupings(&[1, 1], Some(&two), None);
        assert_eq!(g.len(), 1);
        assert_eq!(g[0][0].second.parts(), &[2]);
    }

    #[test]
    fn comb_examples() {
        let wiener = enumerate_comb_covers(2, &profiles(&["2"; 4]), Some(1)).unwrap();
        assert_eq!(wiener.len(), 1);
        assert_eq!(wiener[0].betti(), 1);
        assert_eq!(wiener[0].aut_count, 2);

        let single = enumerate_comb_covers(2, &profiles(&["2", "2", "1,1"]), None).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].morphism.source().num_vertices(), 1);
        assert_eq!(single[0].aut_count, 2);

        let id = enumerate_comb_covers(1, &profiles(&["1"; 3]), Some(0)).unwrap();
        assert_eq!(id.len(), 1);
        assert_eq!(id[0].aut_count, 1);

        assert_eq!(
            enumerate_comb_covers(2, &profiles(&["2"; 4]), Some(0)).unwrap_err(),
            EnumError::GenusMismatch { given: 0, forced: 1 }
        );
        assert!(enumerate_comb_covers(2, &profiles(&["2"; 3]), None)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn every_class_is_mumford() {
        for c in enumerate_comb_covers(3, profiles(&["2,1"; 5]).split_at(4).0, None)
            .unwrap()
        {
            c.morphism.check_riemann_hurwitz().unwrap();
            assert!(c.morphism.is_mumford().unwrap());
        }
    }

    #[test]
    fn binary_matches_comb_on_caterpillars() {
        for data in [&["2", "2", "2", "2"][..], &["2,1"; 4], &["3", "2,1", "2,1", "3"], &["2,1"; 6]] {
            let p = profiles(data);
            let d = p[0].degree();
            let comb = enumerate_comb_covers(d, &p, None).unwrap();
            let tree = BranchTree::caterpillar(p.len()).unwrap();
            let bin = enumerate_binary_tree_covers(d, &p, &tree).unwrap();
            let forms = |v: &[CoverClass]| v.iter().map(|c| c.canonical_form.clone()).collect::<Vec<_>>();
            assert_eq!(forms(&comb), forms(&bin));
        }
        let star = BranchTree::star(4).unwrap();
        assert_eq!(
            enumerate_binary_tree_covers(2, &profiles(&["2"; 4]), &star).unwrap_err(),
            EnumError::NotBinary
        );
    }

    #[test]
    fn balanced_tree_wiener() {
        let tree = balanced_four();
        let classes = enumerate_binary_tree_covers(2, &profiles(&["2"; 4]), &tree).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].betti(), 1);
        let count = tropical_hurwitz(2, &profiles(&["2"; 4]), &tree, &Limits::default()).unwrap();
        assert_eq!((count.raw_count, count.weighted), (1, q("1/2")));
    }

    #[test]
    fn tropical_counts() {
        let l = Limits::default();
        let comb = BranchTree::caterpillar(4).unwrap();
        let c = tropical_hurwitz(2, &profiles(&["2"; 4]), &comb, &l).unwrap();
        assert_eq!((c.raw_count, c.weighted.clone()), (1, q("1/2")));
        assert_eq!(c.classes[0].multiplicity, q("1/2"));

        let c = tropical_hurwitz(3, &profiles(&["2,1"; 4]), &comb, &l).unwrap();
        assert_eq!(c.weighted, q("4"));
        assert!(c.agrees_with_classical());

        let c = tropical_hurwitz(2, &profiles(&["2", "2", "2"]), &BranchTree::star(3).unwrap(), &l)
            .unwrap();
        assert_eq!((c.raw_count, c.weighted), (0, q("0")));

        let c = tropical_hurwitz(1, &profiles(&["1"; 3]), &BranchTree::star(3).unwrap(), &l).unwrap();
        assert_eq!(c.classes[0].multiplicity, q("1"));
    }

    #[test]
    fn positive_local_genus_is_reported_separately() {
        let l = Limits::default();
        let star = BranchTree::star(3).unwrap();
        let c = tropical_hurwitz(3, &profiles(&["3", "3", "3"]), &star, &l).unwrap();
        assert!(c.classes.is_empty());
        assert_eq!(c.higher_genus_weight, q("1/3"));
        assert_eq!(c.classical, q("1/3"));
        assert!(!c.agrees_with_classical());
        assert_eq!(c.higher_genus[0].morphism.source().vertices()[0].genus, 1);
    }

    #[test]
    fn double_hurwitz_numbers() {
        let l = Limits::default();
        let p = |s: &str| s.parse::<Partition>().unwrap();
        let c = cjm_double_hurwitz(2, &p("2"), &p("2"), 1, &l).unwrap();
        assert_eq!(c.weighted, q("1/2"));
        let c = cjm_double_hurwitz(3, &p("1,1,1"), &p("1,1,1"), 0, &l).unwrap();
        assert_eq!(c.weighted, q("4"));
        let c = cjm_double_hurwitz(2, &p("1,1"), &p("2"), 0, &l).unwrap();
        assert_eq!(c.weighted, q("1/2"));
        assert!(matches!(
            cjm_double_hurwitz(1, &p("1"), &p("1"), 0, &l),
            Err(EnumError::TooFewBranchPoints(0))
        ));
    }

    #[test]
    fn closed_form_for_simple_ramification() {
        let l = Limits::default();
        let p = |s: &str| s.parse::<Partition>().unwrap();
        for (d, eta, nu, g) in [
            (2, "2", "2", 1),
            (2, "1,1", "2", 0),
            (3, "1,1,1", "1,1,1", 0),
            (3, "3", "3", 1),
            (3, "2,1", "3", 0),
            (3, "2,1", "2,1", 1),
            (4, "4", "2,2", 0),
            (4, "2,2", "2,2", 1),
        ] {
            let c = cjm_double_hurwitz(d, &p(eta), &p(nu), g, &l).unwrap();
            for class in &c.classes {
                assert!(cjm_backbone_check(class));
                assert_eq!(cjm_product(class), class.multiplicity, "{d} {eta} {nu} {g}");
            }
        }
    }
}
