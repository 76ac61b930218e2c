//! Ramification profiles.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("a partition needs at least one part")]
    Empty,
    #[error("partition parts must be positive")]
    ZeroPart,
    #[error("malformed partition {0:?}")]
    Malformed(String),
}

/// Weakly decreasing list of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Sorts `parts` into weakly decreasing order.
    pub fn new(mut parts: Vec<u32>) -> Result<Self, PartitionError> {
        if parts.is_empty() {
            return Err(PartitionError::Empty);
        }
        if parts.contains(&0) {
            return Err(PartitionError::ZeroPart);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    /// `(d)`, a single cycle.
    pub fn full_cycle(d: u32) -> Self {
        Partition { parts: vec![d] }
    }

    /// `(1^d)`, the unramified profile.
    pub fn unramified(d: u32) -> Self {
        Partition {
            parts: vec![1; d as usize],
        }
    }

    /// `(2, 1^{d-2})`, simple ramification.
    pub fn simple(d: u32) -> Self {
        assert!(d >= 2, "simple ramification needs d >= 2");
        let mut parts = vec![2];
        parts.extend(std::iter::repeat_n(1, d as usize - 2));
        Partition { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// The number being partitioned.
    pub fn degree(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_unramified(&self) -> bool {
        self.parts.iter().all(|&p| p == 1)
    }

    /// `d - len`, the ramification contributed to Riemann–Hurwitz.
    pub fn defect(&self) -> u32 {
        self.degree() - self.parts.len() as u32
    }

    /// All partitions of `n` in reverse lexicographic order, `(n)` first.
    pub fn all(n: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        fn rec(rest: u32, max: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition {
                    parts: current.clone(),
                });
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                current.push(p);
                rec(rest - p, p, current, out);
                current.pop();
            }
        }
        if n > 0 {
            rec(n, n, &mut current, &mut out);
        }
        out
    }

    /// Size of the centralizer of a permutation of this cycle type:
    /// `prod_k k^{m_k} m_k!`.
    pub fn centralizer_order(&self) -> u128 {
        let mut order: u128 = 1;
        let mut i = 0;
        while i < self.parts.len() {
            let k = self.parts[i];
            let mut m = 0u128;
            while i < self.parts.len() && self.parts[i] == k {
                m += 1;
                order *= k as u128 * m;
                i += 1;
            }
        }
        order
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = PartitionError;

    /// Comma-separated parts in any order, e.g. `"1,2"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| PartitionError::Malformed(s.to_string()))?;
        Partition::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let parts = Vec::<u32>::deserialize(d)?;
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}
