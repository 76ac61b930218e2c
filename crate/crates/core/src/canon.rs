//! Canonical forms and automorphism groups of covers.
//!
//! Two covers of the same target are isomorphic when a bijection of source
//! vertices, edges and punctures commutes with the maps to the target and
//! preserves weights. Covers are reduced to a vertex-level structure (vertex
//! labels carry the target vertex, genus and puncture data; each vertex pair
//! carries the multiset of `(target edge, weight)` of the edges joining it),
//! colour refinement splits the vertex set, and an exhaustive
//! individualization search picks the smallest certificate.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::graph::{TropicalCurve, VertexId};
use crate::morphism::{MorphismData, MorphismError, WeightedMorphism};

/// Certificate string; equal iff the covers are isomorphic over the target.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalForm(String);

impl CanonicalForm {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn as_bytes(&self) -> &[u8] {
        self.0.as_bytes()
    }

    /// First `len` hex digits of the SHA-256 of the form.
    pub fn hash_prefix(&self, len: usize) -> String {
        let digest = Sha256::digest(self.0.as_bytes());
        let mut hex = String::with_capacity(64);
        for b in digest.iter() {
            let _ = write!(hex, "{b:02x}");
        }
        hex.truncate(len);
        hex
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonical {
    pub form: CanonicalForm,
    /// Order of the automorphism group of the cover.
    pub automorphisms: u64,
    /// Source vertices in canonical order.
    pub order: Vec<VertexId>,
}

struct Structure {
    labels: Vec<String>,
    /// `adjacency[u][v]`: sorted `(target edge, weight)` of edges joining u, v
    adjacency: Vec<Vec<Vec<(usize, u32)>>>,
    /// automorphisms that fix every vertex: permutations of parallel,
    /// indistinguishable edges and punctures
    fixing: u64,
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn multiset_symmetry<T: Ord + Clone>(items: &[T]) -> u64 {
    let mut counts: BTreeMap<T, usize> = BTreeMap::new();
    for x in items {
        *counts.entry(x.clone()).or_insert(0) += 1;
    }
    counts.values().map(|&c| factorial(c)).product()
}

fn structure(m: &WeightedMorphism) -> Structure {
    let src = m.source();
    let n = src.num_vertices();
    let mut adjacency = vec![vec![Vec::new(); n]; n];
    let mut loops: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n];
    for e in src.edge_ids() {
        let ends = src.edges()[e.0].ends;
        let entry = (m.edge_image(e).0, m.edge_weight(e));
        if ends[0] == ends[1] {
            loops[ends[0].0].push(entry);
        } else {
            adjacency[ends[0].0][ends[1].0].push(entry);
            adjacency[ends[1].0][ends[0].0].push(entry);
        }
    }
    let mut fixing = 1u64;
    for (u, row) in adjacency.iter_mut().enumerate() {
        for (v, cell) in row.iter_mut().enumerate() {
            cell.sort_unstable();
            if u < v {
                fixing *= multiset_symmetry(cell);
            }
        }
    }
    let labels = src
        .vertex_ids()
        .map(|v| {
            let mut punctures: Vec<(usize, u32)> = src
                .punctures_at(v)
                .into_iter()
                .map(|p| (m.puncture_image(p).0, m.puncture_weight(p)))
                .collect();
            punctures.sort_unstable();
            fixing *= multiset_symmetry(&punctures);
            let own_loops = &mut loops[v.0];
            own_loops.sort_unstable();
            // a loop can also be reversed
            fixing *= multiset_symmetry(own_loops) * 2u64.pow(own_loops.len() as u32);
            let mut label = format!("t{}g{}", m.vertex_image(v).0, src.vertices()[v.0].genus);
            for (p, w) in &punctures {
                let _ = write!(label, "p{p}w{w}");
            }
            for (e, w) in own_loops.iter() {
                let _ = write!(label, "l{e}w{w}");
            }
            label
        })
        .collect();
    Structure {
        labels,
        adjacency,
        fixing,
    }
}

/// Replace colours by their ranks among the distinct colours.
fn rank<T: Ord + Clone>(keys: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).expect("present"))
        .collect()
}

/// A vertex colour with the sorted (neighbour colour, parallel edges) list.
type Signature<'a> = (usize, Vec<(usize, &'a [(usize, u32)])>);

fn refine(s: &Structure, mut colours: Vec<usize>) -> Vec<usize> {
    let n = colours.len();
    let mut classes = colours.iter().collect::<std::collections::BTreeSet<_>>().len();
    loop {
        let signatures: Vec<Signature> = (0..n)
            .map(|v| {
                let mut sig: Vec<(usize, &[(usize, u32)])> = (0..n)
                    .filter(|&u| !s.adjacency[v][u].is_empty())
                    .map(|u| (colours[u], s.adjacency[v][u].as_slice()))
                    .collect();
                sig.sort_unstable();
                (colours[v], sig)
            })
            .collect();
        let next = rank(&signatures);
        let next_classes = next.iter().collect::<std::collections::BTreeSet<_>>().len();
        colours = next;
        if next_classes == classes {
            return colours;
        }
        classes = next_classes;
    }
}

fn certificate(s: &Structure, order: &[usize]) -> String {
    let mut out = String::new();
    for (i, &v) in order.iter().enumerate() {
        if i > 0 {
            out.push(';');
        }
        out.push_str(&s.labels[v]);
    }
    out.push('|');
    let mut first = true;
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            let cell = &s.adjacency[order[i]][order[j]];
            if cell.is_empty() {
                continue;
            }
            if !first {
                out.push(';');
            }
            first = false;
            let _ = write!(out, "{i}-{j}");
            for (e, w) in cell {
                let _ = write!(out, "e{e}w{w}");
            }
        }
    }
    out
}

struct Search<'a> {
    s: &'a Structure,
    best: Option<(String, Vec<usize>)>,
    ties: u64,
}

impl Search<'_> {
    fn run(&mut self, colours: Vec<usize>) {
        let colours = refine(self.s, colours);
        let n = colours.len();
        let mut sizes = vec![0usize; n];
        for &c in &colours {
            sizes[c] += 1;
        }
        let Some(target) = (0..n).find(|&c| sizes[c] > 1) else {
            let mut order = vec![0; n];
            for (v, &c) in colours.iter().enumerate() {
                order[c] = v;
            }
            let cert = certificate(self.s, &order);
            match &self.best {
                Some((b, _)) if *b < cert => {}
                Some((b, _)) if *b == cert => self.ties += 1,
                _ => {
                    self.best = Some((cert, order));
                    self.ties = 1;
                }
            }
            return;
        };
        for v in (0..n).filter(|&v| colours[v] == target) {
            let split: Vec<(usize, bool)> = colours
                .iter()
                .enumerate()
                .map(|(u, &c)| (c, !(c == target && u == v)))
                .collect();
            self.run(rank(&split));
        }
    }
}

pub fn canonicalize(m: &WeightedMorphism) -> Canonical {
    let s = structure(m);
    let mut search = Search {
        s: &s,
        best: None,
        ties: 0,
    };
    search.run(rank(&s.labels));
    let (cert, order) = search.best.expect("source has a vertex");
    Canonical {
        form: CanonicalForm(cert),
        automorphisms: search.ties * s.fixing,
        order: order.into_iter().map(VertexId).collect(),
    }
}

pub fn canonical_form(m: &WeightedMorphism) -> CanonicalForm {
    canonicalize(m).form
}

/// Order of the group of source automorphisms commuting with the cover.
pub fn cover_automorphisms(m: &WeightedMorphism) -> u64 {
    canonicalize(m).automorphisms
}

/// Renames source vertex `v` to `vertices[v]`, edge `e` to `edges[e]` and
/// puncture `p` to `punctures[p]`, giving an isomorphic cover.
pub fn relabel_source(
    m: &WeightedMorphism,
    vertices: &[usize],
    edges: &[usize],
    punctures: &[usize],
) -> Result<WeightedMorphism, MorphismError> {
    let src = m.source();
    let data = m.data();
    let n = src.num_vertices();
    let mut b = TropicalCurve::builder();
    let mut genus = vec![0; n];
    for v in src.vertex_ids() {
        genus[vertices[v.0]] = src.vertices()[v.0].genus;
    }
    for g in genus {
        b.vertex_with_genus(g);
    }
    let mut new_edges = vec![None; src.num_edges()];
    for (i, e) in src.edges().iter().enumerate() {
        new_edges[edges[i]] = Some((
            VertexId(vertices[e.ends[0].0]),
            VertexId(vertices[e.ends[1].0]),
            e.length.clone(),
            data.edge_map[i],
            data.edge_weights[i],
        ));
    }
    let mut edge_map = Vec::new();
    let mut edge_weights = Vec::new();
    for slot in new_edges {
        let (a, c, len, image, w) = slot.ok_or(MorphismError::MapSize("edge"))?;
        b.edge_with_length(a, c, len);
        edge_map.push(image);
        edge_weights.push(w);
    }
    let mut new_punctures = vec![None; src.num_punctures()];
    for (i, p) in src.punctures().iter().enumerate() {
        new_punctures[punctures[i]] = Some((
            VertexId(vertices[p.vertex.0]),
            data.puncture_map[i],
            data.puncture_weights[i],
        ));
    }
    let mut puncture_map = Vec::new();
    let mut puncture_weights = Vec::new();
    for slot in new_punctures {
        let (v, image, w) = slot.ok_or(MorphismError::MapSize("puncture"))?;
        b.puncture(v);
        puncture_map.push(image);
        puncture_weights.push(w);
    }
    let mut vertex_map = vec![VertexId(0); n];
    for v in src.vertex_ids() {
        vertex_map[vertices[v.0]] = m.vertex_image(v);
    }
    b.allow_loops(src.loops_allowed());
    WeightedMorphism::new(MorphismData {
        source: b.build()?,
        target: m.target().clone(),
        vertex_map,
        edge_map,
        puncture_map,
        edge_weights,
        puncture_weights,
    })
}
