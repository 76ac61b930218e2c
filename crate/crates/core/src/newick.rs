//! Newick input and output for branch trees.
//!
//! Leaves are non-negative integers. Edge lengths (`:len`, a decimal, a
//! fraction `p/q` or `inf`) are kept on bounded edges and dropped on leaf
//! edges. Internal vertices of degree two, such as the root of
//! `((0,1),(2,3));`, are smoothed away.

use num_bigint::BigInt;
use num_traits::Signed;
use thiserror::Error;

use crate::graph::Length;
use crate::tree::{BranchTree, Node, TreeBuilder, TreeError};
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NewickError {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("leaf {0} appears more than once")]
    DuplicateLeaf(usize),
    #[error(transparent)]
    Tree(TreeError),
}

impl From<TreeError> for NewickError {
    fn from(e: TreeError) -> Self {
        match e {
            TreeError::DuplicateLeaf(l) => NewickError::DuplicateLeaf(l),
            other => NewickError::Tree(other),
        }
    }
}

#[derive(Debug)]
enum Item {
    Leaf(usize),
    Group(Vec<(Item, Option<Length>)>),
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T, NewickError> {
        Err(NewickError::Parse {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), NewickError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected '{}'", c as char))
        }
    }

    fn token(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && !b"(),:;".contains(&self.text[self.pos]) && !self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.text[start..self.pos]).unwrap_or("")
    }

    fn item(&mut self) -> Result<(Item, Option<Length>), NewickError> {
        let item = if self.peek() == Some(b'(') {
            self.pos += 1;
            let mut children = vec![self.item()?];
            while self.peek() == Some(b',') {
                self.pos += 1;
                children.push(self.item()?);
            }
            self.expect(b')')?;
            // internal node names carry no meaning here
            let _ = self.token();
            Item::Group(children)
        } else {
            let start = self.pos;
            let name = self.token().to_string();
            match name.parse::<usize>() {
                Ok(l) => Item::Leaf(l),
                Err(_) => {
                    self.pos = start;
                    return self.error(format!("expected a leaf label, found {name:?}"));
                }
            }
        };
        let length = if self.peek() == Some(b':') {
            self.pos += 1;
            let start = self.pos;
            let text = self.token().to_string();
            match parse_length(&text) {
                Some(l) => Some(l),
                None => {
                    self.pos = start;
                    return self.error(format!("bad edge length {text:?}"));
                }
            }
        } else {
            None
        };
        Ok((item, length))
    }
}

/// `inf`, `p/q`, or a decimal such as `0.25`; must be positive.
fn parse_length(text: &str) -> Option<Length> {
    if text == "inf" {
        return Some(Length::Infinite);
    }
    let value = if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let digits: BigInt = format!("{whole}{frac}").parse().ok()?;
        Rational::new(digits, BigInt::from(10).pow(frac.len() as u32))
    } else {
        crate::parse_rational(text)?
    };
    (value.is_positive()).then_some(Length::Finite(value))
}

fn join(a: Option<Length>, b: Option<Length>) -> Option<Length> {
    match (a, b) {
        (Some(Length::Finite(x)), Some(Length::Finite(y))) => Some(Length::Finite(x + y)),
        (Some(Length::Infinite), _) | (_, Some(Length::Infinite)) => Some(Length::Infinite),
        (x, None) | (None, x) => x,
    }
}

/// Unsmoothed graph: nodes are leaves or groups, edges carry lengths.
#[derive(Default)]
struct Raw {
    internal: usize,
    edges: Vec<Option<(Node, Node, Option<Length>)>>,
}

impl Raw {
    fn add(&mut self, item: Item) -> Node {
        match item {
            Item::Leaf(l) => Node::Leaf(l),
            Item::Group(children) => {
                let v = Node::Internal(self.internal);
                self.internal += 1;
                for (child, length) in children {
                    let c = self.add(child);
                    self.edges.push(Some((v, c, length)));
                }
                v
            }
        }
    }

    /// Removes internal vertices with two neighbours, merging their edges.
    fn smooth(&mut self) {
        loop {
            let mut incident: Vec<Vec<usize>> = vec![Vec::new(); self.internal];
            for (i, e) in self.edges.iter().enumerate() {
                if let Some((a, b, _)) = e {
                    for n in [a, b] {
                        if let Node::Internal(v) = n {
                            incident[*v].push(i);
                        }
                    }
                }
            }
            let Some((v, pair)) = incident.iter().enumerate().find(|(_, inc)| inc.len() == 2) else {
                return;
            };
            let me = Node::Internal(v);
            let (i, j) = (pair[0], pair[1]);
            let (a1, b1, l1) = self.edges[i].take().expect("live edge");
            let (a2, b2, l2) = self.edges[j].take().expect("live edge");
            let x = if a1 == me { b1 } else { a1 };
            let y = if a2 == me { b2 } else { a2 };
            self.edges[i] = Some((x, y, join(l1, l2)));
        }
    }

    /// Internal vertices renumbered densely.
    fn into_builder(self) -> TreeBuilder {
        let mut used = vec![None; self.internal];
        let mut b = TreeBuilder::default();
        let mut map = |n: Node, b: &mut TreeBuilder| match n {
            Node::Leaf(_) => n,
            Node::Internal(v) => *used[v].get_or_insert_with(|| b.internal()),
        };
        for (x, y, len) in self.edges.into_iter().flatten() {
            let (x, y) = (map(x, &mut b), map(y, &mut b));
            b.connect(x, y, len);
        }
        b
    }
}

/// Parses a Newick string such as `"((0,1),(2,3));"` or `"(0,1,2,3);"`.
pub fn parse_newick(text: &str) -> Result<BranchTree, NewickError> {
    let mut p = Parser {
        text: text.as_bytes(),
        pos: 0,
    };
    if p.peek() != Some(b'(') {
        return p.error("a tree starts with '('");
    }
    let (root, _) = p.item()?;
    p.expect(b';')?;
    if p.peek().is_some() {
        return p.error("trailing input after ';'");
    }
    let mut raw = Raw::default();
    raw.add(root);
    raw.smooth();
    if raw
        .edges
        .iter()
        .flatten()
        .any(|(a, b, _)| a == b || (matches!(a, Node::Leaf(_)) && matches!(b, Node::Leaf(_))))
    {
        return Err(NewickError::Tree(TreeError::TooFewLeaves));
    }
    Ok(raw.into_builder().build()?.0)
}

/// Newick text of a tree, with edge lengths where present.
pub fn to_newick(tree: &BranchTree) -> String {
    tree.to_newick()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let balanced = parse_newick("((0,1),(2,3));").unwrap();
        assert!(balanced.is_binary());
        assert_eq!(balanced.curve().num_edges(), 1);
        assert_eq!(balanced.leaves_below(balanced.child_directions(crate::VertexId(0))[1]), vec![2, 3]);
        assert_eq!(balanced.canonical_newick(), "(0,1,(2,3));");

        let star = parse_newick("(0,1,2,3);").unwrap();
        assert_eq!(star, BranchTree::star(4).unwrap());

        let cat = parse_newick("(0,1,(2,(3,(4,5))));").unwrap();
        assert_eq!(cat, BranchTree::caterpillar(6).unwrap());
        assert_eq!(
            parse_newick(" ( (5,4) ,3, (2 ,(1, 0)) ) ; ").unwrap(),
            cat
        );
    }

    #[test]
    fn errors() {
        assert_eq!(
            parse_newick("((0,1),(0,2));").unwrap_err(),
            NewickError::DuplicateLeaf(0)
        );
        assert!(matches!(parse_newick("((0,1),(2,3))"), Err(NewickError::Parse { .. })));
        assert!(matches!(parse_newick("((0,a),(2,3));"), Err(NewickError::Parse { .. })));
        assert!(matches!(parse_newick("((0,1),(2,3));x"), Err(NewickError::Parse { .. })));
        assert!(matches!(parse_newick("(0,1,3);"), Err(NewickError::Tree(TreeError::MissingLeaf { .. }))));
        assert!(matches!(parse_newick("(0,1);"), Err(NewickError::Tree(_))));
        assert!(matches!(parse_newick("((0,1):-2,(2,3));"), Err(NewickError::Parse { .. })));
    }

    #[test]
    fn lengths_are_kept() {
        let t = parse_newick("((0,1):0.5,(2,3):1/4);").unwrap();
        assert_eq!(t.to_newick(), "(0,1,(2,3):3/4);");
        let t = parse_newick("((0:7,1),(2,3):inf);").unwrap();
        assert_eq!(t.to_newick(), "(0,1,(2,3):inf);");
    }

    #[test]
    fn round_trip() {
        for text in ["((0,1),(2,3));", "(0,1,2,3);", "((0,2),(1,3),4);", "(((0,5),1),(2,(3,4)));"] {
            let t = parse_newick(text).unwrap();
            let again = parse_newick(&to_newick(&t)).unwrap();
            assert_eq!(t, again);
        }
    }
}
