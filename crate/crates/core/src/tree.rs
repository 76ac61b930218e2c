//! Branch trees: the tree shape of a punctured projective line, with leaves
//! labelled `0..k`.
//!
//! Every `BranchTree` is stored in a normal form so that two trees with the
//! same shape and labelling have identical vertex, edge and puncture ids:
//! the root is the vertex next to leaf 0, vertices and edges are numbered in
//! depth-first preorder with children ordered by their smallest leaf label,
//! and leaf `i` is puncture `i`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{EdgeId, GraphError, Length, PunctureId, TropicalCurve, VertexId};
use crate::morphism::Direction;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("leaf {0} appears more than once")]
    DuplicateLeaf(usize),
    #[error("leaf labels must be 0..{count}, label {missing} is missing")]
    MissingLeaf { missing: usize, count: usize },
    #[error("a branch tree needs at least three leaves")]
    TooFewLeaves,
    #[error("internal vertex {0} has degree below three")]
    LowDegree(usize),
    #[error("not a tree")]
    NotATree,
    #[error("tree has {leaves} leaves but {profiles} profiles were given")]
    LeafProfileMismatch { leaves: usize, profiles: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Node of an unnormalized tree description.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Leaf(usize),
    Internal(usize),
}

/// Free-form tree description, normalized by [`TreeBuilder::build`].
#[derive(Debug, Clone, Default)]
pub struct TreeBuilder {
    internal: usize,
    edges: Vec<(Node, Node, Option<Length>)>,
}

impl TreeBuilder {
    pub fn internal(&mut self) -> Node {
        self.internal += 1;
        Node::Internal(self.internal - 1)
    }

    /// Adds an edge and returns its index in this builder.
    pub fn connect(&mut self, a: Node, b: Node, length: Option<Length>) -> usize {
        self.edges.push((a, b, length));
        self.edges.len() - 1
    }

    /// Normalizes the description. Also returns, for each builder edge, the
    /// bounded edge it became (`None` for leaf edges).
    pub fn build(self) -> Result<(BranchTree, Vec<Option<EdgeId>>), TreeError> {
        let mut leaves = BTreeSet::new();
        for &(a, b, _) in &self.edges {
            for x in [a, b] {
                match x {
                    Node::Leaf(l) if !leaves.insert(l) => return Err(TreeError::DuplicateLeaf(l)),
                    Node::Internal(v) if v >= self.internal => return Err(TreeError::NotATree),
                    _ => {}
                }
            }
        }
        let count = leaves.len();
        if let Some(missing) = (0..count).find(|l| !leaves.contains(l)) {
            return Err(TreeError::MissingLeaf { missing, count });
        }
        if count < 3 {
            return Err(TreeError::TooFewLeaves);
        }
        let index = |n: Node| match n {
            Node::Leaf(l) => l,
            Node::Internal(v) => count + v,
        };
        let nodes = count + self.internal;
        if self.edges.len() + 1 != nodes {
            return Err(TreeError::NotATree);
        }
        let mut parent: Vec<usize> = (0..nodes).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut adjacency: Vec<Vec<(Node, usize)>> = vec![Vec::new(); self.internal];
        let mut leaf_edge = vec![None; count];
        for (i, &(a, b, _)) in self.edges.iter().enumerate() {
            let (x, y) = (find(&mut parent, index(a)), find(&mut parent, index(b)));
            if x == y {
                return Err(TreeError::NotATree);
            }
            parent[x] = y;
            for (p, q) in [(a, b), (b, a)] {
                match p {
                    Node::Leaf(l) => {
                        if matches!(q, Node::Leaf(_)) {
                            return Err(TreeError::NotATree);
                        }
                        leaf_edge[l] = Some((q, i));
                    }
                    Node::Internal(v) => adjacency[v].push((q, i)),
                }
            }
        }
        for (v, adj) in adjacency.iter().enumerate() {
            if adj.len() < 3 {
                return Err(TreeError::LowDegree(v));
            }
        }
        let Some((Node::Internal(root), root_edge)) = leaf_edge[0] else {
            return Err(TreeError::NotATree);
        };

        struct Walk<'a> {
            adjacency: &'a [Vec<(Node, usize)>],
            lengths: Vec<Option<Length>>,
            builder: crate::graph::CurveBuilder,
            edge_of_input: Vec<Option<EdgeId>>,
            leaf_vertex: Vec<VertexId>,
            parent: Vec<Direction>,
            children: Vec<Vec<Direction>>,
            planar: Vec<usize>,
        }

        impl Walk<'_> {
            fn min_leaf(&self, node: Node, via: usize) -> usize {
                match node {
                    Node::Leaf(l) => l,
                    Node::Internal(v) => self.adjacency[v]
                        .iter()
                        .filter(|(_, e)| *e != via)
                        .map(|&(n, e)| self.min_leaf(n, e))
                        .min()
                        .expect("internal vertices have degree >= 3"),
                }
            }

            fn visit(&mut self, v: usize, via: usize, id: VertexId) {
                let mut kids: Vec<(usize, Node, usize)> = self.adjacency[v]
                    .iter()
                    .filter(|(_, e)| *e != via)
                    .map(|&(n, e)| (self.min_leaf(n, e), n, e))
                    .collect();
                kids.sort();
                for (_, n, e) in kids {
                    match n {
                        Node::Leaf(l) => {
                            self.leaf_vertex[l] = id;
                            self.planar.push(l);
                            self.children[id.0].push(Direction::Puncture(PunctureId(l)));
                        }
                        Node::Internal(c) => {
                            let child = self.builder.vertex();
                            let edge = self.builder.edge_with_length(id, child, self.lengths[e].clone());
                            self.edge_of_input[e] = Some(edge);
                            self.children[id.0].push(Direction::Edge(edge));
                            self.children.push(Vec::new());
                            self.parent.push(Direction::Edge(edge));
                            self.visit(c, e, child);
                        }
                    }
                }
            }
        }

        let mut walk = Walk {
            adjacency: &adjacency,
            lengths: self.edges.iter().map(|e| e.2.clone()).collect(),
            builder: TropicalCurve::builder(),
            edge_of_input: vec![None; self.edges.len()],
            leaf_vertex: vec![VertexId(0); count],
            parent: vec![Direction::Puncture(PunctureId(0))],
            children: vec![Vec::new()],
            planar: vec![0],
        };
        let root_id = walk.builder.vertex();
        walk.leaf_vertex[0] = root_id;
        walk.visit(root, root_edge, root_id);
        let Walk {
            mut builder,
            edge_of_input,
            leaf_vertex,
            parent,
            children,
            planar,
            ..
        } = walk;
        for v in leaf_vertex {
            builder.puncture(v);
        }
        let curve = builder.build()?;
        Ok((
            BranchTree {
                curve,
                parent,
                children,
                planar,
            },
            edge_of_input,
        ))
    }
}

/// Shape of a branch tree; profiles are attached separately.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchTree {
    curve: TropicalCurve,
    /// For each vertex: the direction towards leaf 0.
    parent: Vec<Direction>,
    /// For each vertex: directions away from leaf 0, ordered by smallest leaf.
    children: Vec<Vec<Direction>>,
    /// Leaf labels in depth-first order.
    planar: Vec<usize>,
}

impl BranchTree {
    pub fn curve(&self) -> &TropicalCurve {
        &self.curve
    }

    pub fn num_leaves(&self) -> usize {
        self.curve.num_punctures()
    }

    pub fn leaf_puncture(&self, label: usize) -> PunctureId {
        PunctureId(label)
    }

    pub fn leaf_vertex(&self, label: usize) -> VertexId {
        self.curve.punctures()[label].vertex
    }

    /// Direction of `v` towards leaf 0 (leaf 0 itself for the root).
    pub fn parent_direction(&self, v: VertexId) -> Direction {
        self.parent[v.0]
    }

    /// Directions of `v` away from leaf 0, ordered by smallest leaf label.
    pub fn child_directions(&self, v: VertexId) -> &[Direction] {
        &self.children[v.0]
    }

    /// Leaf labels in planar (depth-first) order; always starts with 0.
    pub fn planar_order(&self) -> &[usize] {
        &self.planar
    }

    pub fn is_binary(&self) -> bool {
        self.children.iter().all(|c| c.len() == 2)
    }

    /// All internal vertices lie on one path.
    pub fn is_caterpillar(&self) -> bool {
        self.curve
            .vertex_ids()
            .all(|v| self.curve.incident_edges(v).len() <= 2)
    }

    /// The endpoint of a bounded edge further from leaf 0.
    pub fn child_vertex(&self, e: EdgeId) -> VertexId {
        let ends = self.curve.edges()[e.0].ends;
        if self.parent[ends[1].0] == Direction::Edge(e) {
            ends[1]
        } else {
            ends[0]
        }
    }

    /// Leaf labels on the far side (from leaf 0) of a direction.
    pub fn leaves_below(&self, dir: Direction) -> Vec<usize> {
        match dir {
            Direction::Puncture(p) => vec![p.0],
            Direction::Edge(e) => {
                let mut out = Vec::new();
                let mut stack = vec![self.child_vertex(e)];
                while let Some(v) = stack.pop() {
                    for d in &self.children[v.0] {
                        match *d {
                            Direction::Puncture(p) => out.push(p.0),
                            Direction::Edge(e) => stack.push(self.child_vertex(e)),
                        }
                    }
                }
                out.sort_unstable();
                out
            }
        }
    }

    /// Comb with `leaves` ends: leaf 0 and leaf `leaves-1` are the handles
    /// and leaf `i` is the tooth at the `i`-th backbone vertex.
    pub fn caterpillar(leaves: usize) -> Result<BranchTree, TreeError> {
        if leaves < 3 {
            return Err(TreeError::TooFewLeaves);
        }
        let mut b = TreeBuilder::default();
        let backbone: Vec<Node> = (0..leaves - 2).map(|_| b.internal()).collect();
        b.connect(Node::Leaf(0), backbone[0], None);
        for (i, &v) in backbone.iter().enumerate() {
            b.connect(Node::Leaf(i + 1), v, None);
        }
        for w in backbone.windows(2) {
            b.connect(w[0], w[1], None);
        }
        b.connect(Node::Leaf(leaves - 1), backbone[leaves - 3], None);
        Ok(b.build()?.0)
    }

    /// One internal vertex carrying every leaf.
    pub fn star(leaves: usize) -> Result<BranchTree, TreeError> {
        let mut b = TreeBuilder::default();
        let v = b.internal();
        for l in 0..leaves {
            b.connect(Node::Leaf(l), v, None);
        }
        Ok(b.build()?.0)
    }

    /// The same shape as a builder description (internal vertex `i` is
    /// `Node::Internal(i)`, builder edge `i` is bounded edge `i`).
    pub fn to_builder(&self) -> TreeBuilder {
        let mut b = TreeBuilder {
            internal: self.curve.num_vertices(),
            edges: Vec::new(),
        };
        for e in self.curve.edges() {
            b.connect(
                Node::Internal(e.ends[0].0),
                Node::Internal(e.ends[1].0),
                e.length.clone(),
            );
        }
        for (l, p) in self.curve.punctures().iter().enumerate() {
            b.connect(Node::Leaf(l), Node::Internal(p.vertex.0), None);
        }
        b
    }

    /// Renames leaf `l` to `relabel[l]`.
    pub fn relabel(&self, relabel: &[usize]) -> Result<BranchTree, TreeError> {
        let mut b = self.to_builder();
        for e in &mut b.edges {
            if let Node::Leaf(l) = e.0 {
                e.0 = Node::Leaf(*relabel.get(l).ok_or(TreeError::NotATree)?);
            }
        }
        Ok(b.build()?.0)
    }

    pub fn check_profiles(&self, profiles: usize) -> Result<(), TreeError> {
        if profiles != self.num_leaves() {
            return Err(TreeError::LeafProfileMismatch {
                leaves: self.num_leaves(),
                profiles,
            });
        }
        Ok(())
    }

    /// Newick text rooted at the vertex next to leaf 0, children ordered by
    /// smallest leaf label. Two trees are equal iff their canonical Newick
    /// strings are equal.
    pub fn canonical_newick(&self) -> String {
        self.newick(false)
    }

    /// Like [`canonical_newick`](Self::canonical_newick) but with `:length`
    /// annotations on bounded edges that carry one.
    pub fn to_newick(&self) -> String {
        self.newick(true)
    }

    fn newick(&self, lengths: bool) -> String {
        fn subtree(t: &BranchTree, v: VertexId, lengths: bool, out: &mut String) {
            out.push('(');
            let mut first = true;
            if v.0 == 0 {
                out.push('0');
                first = false;
            }
            for d in &t.children[v.0] {
                if !first {
                    out.push(',');
                }
                first = false;
                match *d {
                    Direction::Puncture(p) => out.push_str(&p.0.to_string()),
                    Direction::Edge(e) => {
                        subtree(t, t.child_vertex(e), lengths, out);
                        if lengths {
                            if let Some(l) = &t.curve.edges()[e.0].length {
                                out.push(':');
                                out.push_str(&l.to_string());
                            }
                        }
                    }
                }
            }
            out.push(')');
        }
        let mut out = String::new();
        subtree(self, VertexId(0), lengths, &mut out);
        out.push(';');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caterpillar_shape() {
        let t = BranchTree::caterpillar(6).unwrap();
        assert!(t.is_binary());
        assert!(t.is_caterpillar());
        assert_eq!(t.planar_order(), &[0, 1, 2, 3, 4, 5]);
        assert_eq!(t.curve().num_vertices(), 4);
        assert_eq!(t.canonical_newick(), "(0,1,(2,(3,(4,5))));");
        assert_eq!(t.leaf_vertex(0), VertexId(0));
        assert_eq!(t.leaf_vertex(5), VertexId(3));
        assert_eq!(t.leaves_below(Direction::Edge(EdgeId(1))), vec![3, 4, 5]);
    }

    #[test]
    fn star_shape() {
        let t = BranchTree::star(5).unwrap();
        assert!(!t.is_binary());
        assert!(t.is_caterpillar());
        assert_eq!(t.canonical_newick(), "(0,1,2,3,4);");
    }

    #[test]
    fn normal_form_is_independent_of_description() {
        // {0,3} | {1,2}, described two ways
        let mut a = TreeBuilder::default();
        let x = a.internal();
        let y = a.internal();
        a.connect(Node::Leaf(2), x, None);
        a.connect(x, y, None);
        a.connect(Node::Leaf(1), x, None);
        a.connect(Node::Leaf(3), y, None);
        a.connect(y, Node::Leaf(0), None);
        let (a, map) = a.build().unwrap();
        assert_eq!(map, vec![None, Some(EdgeId(0)), None, None, None]);

        let mut b = TreeBuilder::default();
        let x = b.internal();
        let y = b.internal();
        b.connect(Node::Leaf(0), x, None);
        b.connect(Node::Leaf(3), x, None);
        b.connect(x, y, None);
        b.connect(Node::Leaf(1), y, None);
        b.connect(Node::Leaf(2), y, None);
        let (b, _) = b.build().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.planar_order(), &[0, 1, 2, 3]);
        assert!(!a.is_caterpillar() || a.num_leaves() == 4);
    }

    #[test]
    fn rejects_bad_descriptions() {
        let mut b = TreeBuilder::default();
        let x = b.internal();
        b.connect(Node::Leaf(0), x, None);
        b.connect(Node::Leaf(0), x, None);
        b.connect(Node::Leaf(1), x, None);
        assert_eq!(b.build().unwrap_err(), TreeError::DuplicateLeaf(0));

        let mut b = TreeBuilder::default();
        let x = b.internal();
        b.connect(Node::Leaf(0), x, None);
        b.connect(Node::Leaf(2), x, None);
        b.connect(Node::Leaf(3), x, None);
        assert!(matches!(b.build(), Err(TreeError::MissingLeaf { missing: 1, .. })));

        let mut b = TreeBuilder::default();
        let x = b.internal();
        let y = b.internal();
        b.connect(Node::Leaf(0), x, None);
        b.connect(x, y, None);
        b.connect(Node::Leaf(1), y, None);
        b.connect(Node::Leaf(2), y, None);
        b.connect(Node::Leaf(3), y, None);
        b.connect(Node::Leaf(4), y, None);
        assert_eq!(b.build().unwrap_err(), TreeError::LowDegree(0));
    }

    #[test]
    fn relabel_moves_leaves() {
        let t = BranchTree::caterpillar(4).unwrap();
        let r = t.relabel(&[0, 2, 1, 3]).unwrap();
        assert_eq!(r.canonical_newick(), "(0,(1,3),2);");
        assert_eq!(r.planar_order(), &[0, 1, 3, 2]);
        assert_eq!(t.relabel(&[0, 1, 2, 3]).unwrap(), t);
    }
}
