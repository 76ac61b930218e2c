//! Classical, tropical and Mumford-curve Hurwitz numbers for covers of the
//! projective line.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`]: tropical curves and divisors on their completions;
//! * [`morphism`]: weighted harmonic morphisms and tropical Riemann–Hurwitz;
//! * [`oracle`]: brute-force transitive factorizations in the symmetric group;
//! * [`enumerate`]: graph-theoretic enumeration of covers of branch trees;
//! * [`mumford`]: edge contraction and Mumford-curve counts for arbitrary trees;
//! * [`cli`]: request parsing and report assembly for the `hurwitz` binary.

pub mod canon;
pub mod cli;
pub mod enumerate;
pub mod graph;
pub mod morphism;
pub mod mumford;
pub mod newick;
pub mod oracle;
pub mod partition;
pub mod perm;
pub mod tree;

use num_bigint::BigInt;


pub use graph::{Divisor, EdgeId, Point, PunctureId, TropicalCurve, VertexId};
pub use enumerate::{CoverClass, TropicalCount};
pub use morphism::{MorphismData, WeightedMorphism};
pub use oracle::Limits;

pub use partition::Partition;
pub use perm::Perm;
pub use tree::BranchTree;

/// Exact rational numbers; every count in the crate is one of these.
pub type Rational = num_rational::BigRational;

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => text.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Formats as `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod rational_str {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse_rational(&text)
            .ok_or_else(|| serde::de::Error::custom(format!("bad rational {text:?}")))
    }
}
