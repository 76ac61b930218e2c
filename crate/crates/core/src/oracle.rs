//! Classical Hurwitz numbers by brute force over the symmetric group, and
//! the tropical cover determined by a factorization.
//!
//! A cover of the projective line branched over `k` points with profiles
//! `eta_0..eta_{k-1}` corresponds to a tuple of permutations with those
//! cycle types, multiplying to the identity and generating a transitive
//! group. The Hurwitz number is the number of such tuples divided by `d!`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::canon::{canonicalize, CanonicalForm};
use crate::graph::{TropicalCurve, VertexId};
use crate::morphism::{Direction, MorphismData, MorphismError, WeightedMorphism};
use crate::partition::Partition;
use crate::perm::{is_transitive, orbit_labels, Perm};
use crate::tree::{BranchTree, TreeError};
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("no profiles given")]
    NoProfiles,
    #[error("profile {index} is a partition of {found}, expected {degree}")]
    DegreeMismatch {
        index: usize,
        degree: u32,
        found: u32,
    },
    #[error("total ramification {0} is odd")]
    ParityObstruction(u32),
    #[error("profiles force negative genus (2g - 2 = {0})")]
    NegativeGenus(i64),
    #[error("degree {degree} exceeds the limit {limit}")]
    DegreeTooLarge { degree: u32, limit: u32 },
    #[error("{count} profiles exceed the limit {limit}")]
    TooManyProfiles { count: usize, limit: usize },
    #[error("search needs {needed} steps, limit is {limit}")]
    WorkLimit { needed: u128, limit: u128 },
    #[error("permutations must all have degree {0}")]
    MixedDegrees(usize),
    #[error("product of the tuple in the required order is not the identity")]
    ProductNotIdentity,
    #[error("the permutations do not act transitively")]
    NotTransitive,
    #[error("tuple was built for leaf order {tuple:?} but the tree has {tree:?}")]
    OrderMismatch { tuple: Vec<usize>, tree: Vec<usize> },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

/// Resource ceilings for the brute-force search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_degree: u32,
    pub max_profiles: usize,
    /// Upper bound on the number of candidate tuples examined.
    pub max_work: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_degree: 6,
            max_profiles: 10,
            max_work: 2_000_000_000,
        }
    }
}

fn check_degrees(d: u32, profiles: &[Partition]) -> Result<(), OracleError> {
    if profiles.is_empty() {
        return Err(OracleError::NoProfiles);
    }
    for (index, p) in profiles.iter().enumerate() {
        if p.degree() != d {
            return Err(OracleError::DegreeMismatch {
                index,
                degree: d,
                found: p.degree(),
            });
        }
    }
    Ok(())
}

/// Genus of a connected cover with these profiles, from
/// `2g - 2 = -2d + sum (d - len)`.
pub fn genus_from_profiles(d: u32, profiles: &[Partition]) -> Result<u32, OracleError> {
    check_degrees(d, profiles)?;
    let total: u32 = profiles.iter().map(Partition::defect).sum();
    if !total.is_multiple_of(2) {
        return Err(OracleError::ParityObstruction(total));
    }
    let two_g_minus_two = total as i64 - 2 * d as i64;
    if two_g_minus_two < -2 {
        return Err(OracleError::NegativeGenus(two_g_minus_two));
    }
    Ok((two_g_minus_two / 2 + 1) as u32)
}

fn check_limits(d: u32, profiles: &[Partition], limits: &Limits) -> Result<(), OracleError> {
    check_degrees(d, profiles)?;
    if d > limits.max_degree {
        return Err(OracleError::DegreeTooLarge {
            degree: d,
            limit: limits.max_degree,
        });
    }
    if profiles.len() > limits.max_profiles {
        return Err(OracleError::TooManyProfiles {
            count: profiles.len(),
            limit: limits.max_profiles,
        });
    }
    Ok(())
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Walks every tuple `(sigma_{order[0]}, .., sigma_{order[k-1]})` with the
/// given cycle types, `sigma_{order[0]}` fixed to the class representative,
/// whose ordered product is the identity and which acts transitively. The
/// visitor receives the permutations indexed by profile position. Returns
/// the folded results of the parallel workers.
fn search<T, F, M>(
    d: u32,
    profiles: &[Partition],
    order: &[usize],
    limits: &Limits,
    init: T,
    visit: F,
    merge: M,
) -> Result<T, OracleError>
where
    T: Send + Sync + Clone,
    F: Fn(&mut T, &[Perm]) + Sync,
    M: Fn(T, T) -> T + Sync + Send,
{
    check_limits(d, profiles, limits)?;
    let k = order.len();
    let classes: Vec<Vec<Perm>> = order[1..k - 1]
        .iter()
        .map(|&i| Perm::conjugacy_class(&profiles[i]))
        .collect();
    let needed: u128 = classes.iter().map(|c| c.len() as u128).product();
    if needed > limits.max_work {
        return Err(OracleError::WorkLimit {
            needed,
            limit: limits.max_work,
        });
    }
    let first = Perm::representative(&profiles[order[0]]);
    let last_type = &profiles[order[k - 1]];
    let n = d as usize;

    let finish = |acc: &mut T, prefix: &Perm, chosen: &mut Vec<Perm>| {
        // the last factor is forced by the product
        let last = prefix.inverse();
        if last.cycle_type() != *last_type {
            return;
        }
        chosen.push(last);
        let gens: Vec<&Perm> = chosen.iter().collect();
        if is_transitive(n, &gens) {
            let mut by_position = vec![Perm::identity(n); k];
            for (slot, p) in order.iter().zip(chosen.iter()) {
                by_position[*slot] = p.clone();
            }
            visit(acc, &by_position);
        }
        chosen.pop();
    };

    fn descend<T>(
        classes: &[Vec<Perm>],
        depth: usize,
        prefix: &Perm,
        chosen: &mut Vec<Perm>,
        acc: &mut T,
        finish: &dyn Fn(&mut T, &Perm, &mut Vec<Perm>),
    ) {
        if depth == classes.len() {
            finish(acc, prefix, chosen);
            return;
        }
        for p in &classes[depth] {
            let next = prefix.then(p);
            chosen.push(p.clone());
            descend(classes, depth + 1, &next, chosen, acc, finish);
            chosen.pop();
        }
    }

    if classes.is_empty() {
        let mut acc = init;
        finish(&mut acc, &first, &mut vec![first.clone()]);
        return Ok(acc);
    }
    let result = classes[0]
        .par_iter()
        .fold(
            || init.clone(),
            |mut acc, p| {
                let mut chosen = vec![first.clone(), p.clone()];
                descend(&classes, 1, &first.then(p), &mut chosen, &mut acc, &finish);
                acc
            },
        )
        .reduce(|| init.clone(), &merge);
    Ok(result)
}

/// `d! / |centralizer|`, the size of the conjugacy class of `p`.
fn class_size(p: &Partition) -> BigInt {
    factorial(p.degree()) / BigInt::from(p.centralizer_order())
}

/// Number of transitive factorizations of the identity with the given cycle
/// types, divided by `d!`. Zero when the profiles admit no connected cover.
pub fn classical_hurwitz(
    d: u32,
    profiles: &[Partition],
    limits: &Limits,
) -> Result<Rational, OracleError> {
    check_limits(d, profiles, limits)?;
    match genus_from_profiles(d, profiles) {
        Err(OracleError::ParityObstruction(_)) | Err(OracleError::NegativeGenus(_)) => {
            return Ok(Rational::zero())
        }
        other => other?,
    };
    let order: Vec<usize> = (0..profiles.len()).collect();
    if profiles.len() == 1 {
        let trivial = d == 1;
        return Ok(Rational::from_integer(BigInt::from(trivial as u8)));
    }
    let count = search(d, profiles, &order, limits, 0u64, |n, _| *n += 1, |a, b| a + b)?;
    Ok(Rational::new(
        BigInt::from(count) * class_size(&profiles[0]),
        factorial(d),
    ))
}

/// Genus-zero part of the three-point Hurwitz number: the number of
/// connected covers of a three-pointed line by a line.
pub fn local_triple_hurwitz(
    m: u32,
    a: &Partition,
    b: &Partition,
    c: &Partition,
    limits: &Limits,
) -> Result<Rational, OracleError> {
    let profiles = [a.clone(), b.clone(), c.clone()];
    match genus_from_profiles(m, &profiles) {
        Ok(0) => classical_hurwitz(m, &profiles, limits),
        Ok(_) | Err(OracleError::ParityObstruction(_)) | Err(OracleError::NegativeGenus(_)) => {
            Ok(Rational::zero())
        }
        Err(e) => Err(e),
    }
}

/// Monodromy of a cover around each branch point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationTuple {
    perms: Vec<Perm>,
    order: Vec<usize>,
}

impl FactorizationTuple {
    /// `perms[0] * perms[1] * .. = id`, acting transitively.
    pub fn new(perms: Vec<Perm>) -> Result<Self, OracleError> {
        let order = (0..perms.len()).collect();
        Self::with_order(perms, order)
    }

    /// The product is taken in the order `perms[order[0]] * perms[order[1]] * ..`.
    pub fn with_order(perms: Vec<Perm>, order: Vec<usize>) -> Result<Self, OracleError> {
        let Some(first) = perms.first() else {
            return Err(OracleError::NoProfiles);
        };
        let d = first.degree();
        if perms.iter().any(|p| p.degree() != d) {
            return Err(OracleError::MixedDegrees(d));
        }
        let mut sorted = order.clone();
        sorted.sort_unstable();
        if sorted != (0..perms.len()).collect::<Vec<_>>() {
            return Err(OracleError::OrderMismatch {
                tuple: order,
                tree: (0..perms.len()).collect(),
            });
        }
        let product = order
            .iter()
            .fold(Perm::identity(d), |acc, &i| acc.then(&perms[i]));
        if !product.is_identity() {
            return Err(OracleError::ProductNotIdentity);
        }
        if !is_transitive(d, &perms.iter().collect::<Vec<_>>()) {
            return Err(OracleError::NotTransitive);
        }
        Ok(FactorizationTuple { perms, order })
    }

    pub fn degree(&self) -> usize {
        self.perms[0].degree()
    }

    pub fn perms(&self) -> &[Perm] {
        &self.perms
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn cycle_types(&self) -> Vec<Partition> {
        self.perms.iter().map(Perm::cycle_type).collect()
    }

    /// Relabels the sheets: every permutation becomes `c^{-1} sigma c`.
    pub fn conjugate_by(&self, c: &Perm) -> Self {
        FactorizationTuple {
            perms: self.perms.iter().map(|p| p.conjugate_by(c)).collect(),
            order: self.order.clone(),
        }
    }
}

/// Product of the leaf permutations on the far side of `dir`, in planar
/// order.
fn block_monodromy(tree: &BranchTree, perms: &[Perm], dir: Direction) -> Perm {
    match dir {
        Direction::Puncture(p) => perms[p.0].clone(),
        Direction::Edge(e) => {
            let below = tree.child_vertex(e);
            tree.child_directions(below)
                .iter()
                .fold(Perm::identity(perms[0].degree()), |acc, &d| {
                    acc.then(&block_monodromy(tree, perms, d))
                })
        }
    }
}

/// The tropical cover of `tree` determined by a factorization whose product
/// is taken in the tree's planar order.
///
/// Over an internal vertex the source vertices are the orbits of the
/// monodromies around its directions; over an edge or leaf the strands are
/// the cycles of the corresponding monodromy. Genus labels are set to the
/// local genera forced by the ramification divisor.
pub fn factorization_to_cover(
    t: &FactorizationTuple,
    tree: &BranchTree,
) -> Result<WeightedMorphism, OracleError> {
    tree.check_profiles(t.perms.len())?;
    if t.order != tree.planar_order() {
        return Err(OracleError::OrderMismatch {
            tuple: t.order.clone(),
            tree: tree.planar_order().to_vec(),
        });
    }
    let d = t.degree();
    let target = tree.curve();
    let mut monodromy: BTreeMap<Direction, Perm> = BTreeMap::new();
    for e in target.edge_ids() {
        monodromy.insert(Direction::Edge(e), block_monodromy(tree, &t.perms, Direction::Edge(e)));
    }

    let mut builder = TropicalCurve::builder();
    let mut vertex_map = Vec::new();
    // sheet -> source vertex, for each target vertex
    let mut owner: Vec<Vec<VertexId>> = Vec::new();
    for v in target.vertex_ids() {
        let gens: Vec<Perm> = tree
            .child_directions(v)
            .iter()
            .map(|&dir| match dir {
                Direction::Edge(_) => monodromy[&dir].clone(),
                Direction::Puncture(p) => t.perms[p.0].clone(),
            })
            .collect();
        let labels = orbit_labels(d, &gens.iter().collect::<Vec<_>>());
        let mut ids: BTreeMap<usize, VertexId> = BTreeMap::new();
        for &r in &labels {
            ids.entry(r).or_insert_with(|| {
                vertex_map.push(v);
                builder.vertex()
            });
        }
        owner.push(labels.iter().map(|r| ids[r]).collect());
    }

    let mut edge_map = Vec::new();
    let mut edge_weights = Vec::new();
    for e in target.edge_ids() {
        let ends = target.edges()[e.0].ends;
        for cycle in monodromy[&Direction::Edge(e)].cycles() {
            let sheet = cycle[0] as usize;
            builder.edge(owner[ends[0].0][sheet], owner[ends[1].0][sheet]);
            edge_map.push(e);
            edge_weights.push(cycle.len() as u32);
        }
    }

    let mut puncture_map = Vec::new();
    let mut puncture_weights = Vec::new();
    for p in target.puncture_ids() {
        let v = target.punctures()[p.0].vertex;
        for cycle in t.perms[p.0].cycles() {
            builder.puncture(owner[v.0][cycle[0] as usize]);
            puncture_map.push(p);
            puncture_weights.push(cycle.len() as u32);
        }
    }

    let mut data = MorphismData {
        source: builder.build().map_err(MorphismError::from)?,
        target: target.clone(),
        vertex_map,
        edge_map,
        puncture_map,
        edge_weights,
        puncture_weights,
    };
    let labels = WeightedMorphism::new(data.clone())?.infer_genus_labels()?;
    data.source = data
        .source
        .with_genus_labels(&labels)
        .map_err(MorphismError::from)?;
    Ok(WeightedMorphism::new(data)?)
}

/// One isomorphism class of covers in the oracle's partition of tuples.
#[derive(Debug, Clone)]
pub struct TropicalType {
    pub representative: WeightedMorphism,
    /// `#tuples in the class / d!`.
    pub multiplicity: Rational,
    /// Tuples with the first factor fixed to its class representative.
    pub fixed_tuples: u64,
}

/// Partitions every factorization by the isomorphism class of its tropical
/// cover over `tree` (leaf `i` carries `profiles[i]`).
pub fn hurwitz_by_tropical_type(
    d: u32,
    profiles: &[Partition],
    tree: &BranchTree,
    limits: &Limits,
) -> Result<BTreeMap<CanonicalForm, TropicalType>, OracleError> {
    tree.check_profiles(profiles.len())?;
    check_limits(d, profiles, limits)?;
    match genus_from_profiles(d, profiles) {
        Err(OracleError::ParityObstruction(_)) | Err(OracleError::NegativeGenus(_)) => {
            return Ok(BTreeMap::new())
        }
        other => other?,
    };
    let order = tree.planar_order().to_vec();
    type Acc = BTreeMap<CanonicalForm, (u64, WeightedMorphism)>;
    let visit = |acc: &mut Acc, perms: &[Perm]| {
        let tuple = FactorizationTuple {
            perms: perms.to_vec(),
            order: order.clone(),
        };
        let cover = factorization_to_cover(&tuple, tree).expect("oracle tuples give valid covers");
        let form = canonicalize(&cover).form;
        acc.entry(form).or_insert((0, cover)).0 += 1;
    };
    let merge = |mut a: Acc, b: Acc| {
        for (form, (n, cover)) in b {
            a.entry(form).or_insert((0, cover)).0 += n;
        }
        a
    };
    let raw = search(d, profiles, &order, limits, Acc::new(), visit, merge)?;
    let scale = class_size(&profiles[order[0]]);
    let total = factorial(d);
    Ok(raw
        .into_iter()
        .map(|(form, (n, cover))| {
            (
                form,
                TropicalType {
                    representative: cover,
                    multiplicity: Rational::new(BigInt::from(n) * &scale, total.clone()),
                    fixed_tuples: n,
                },
            )
        })
        .collect())
}
