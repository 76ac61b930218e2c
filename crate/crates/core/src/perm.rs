//! Permutations of `{0, .., d-1}`.
//!
//! Permutations act on the right of points and products are read left to
//! right: `a.then(&b)` applies `a` first. This is the only convention used
//! anywhere in the crate.

use std::fmt;

use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<u8>,
}

impl Perm {
    pub fn identity(d: usize) -> Self {
        Perm {
            images: (0..d as u8).collect(),
        }
    }

    /// From an image array; `None` if it is not a bijection.
    pub fn from_images(images: Vec<u8>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen.get_mut(i as usize)?;
            if *slot {
                return None;
            }
            *slot = true;
        }
        Some(Perm { images })
    }

    /// From disjoint cycles on `{0, .., d-1}`.
    pub fn from_cycles(d: usize, cycles: &[&[u8]]) -> Option<Self> {
        let mut images: Vec<u8> = (0..d as u8).collect();
        for c in cycles {
            for (i, &x) in c.iter().enumerate() {
                *images.get_mut(x as usize)? = c[(i + 1) % c.len()];
            }
        }
        Perm::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u8;
        }
        Perm { images }
    }

    /// `c^{-1} self c`, i.e. relabel point `x` as `c(x)`.
    pub fn conjugate_by(&self, c: &Perm) -> Perm {
        c.inverse().then(self).then(c)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// Cycles, each starting at its smallest point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<u8>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x as u8);
                x = self.images[x] as usize;
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> Partition {
        Partition::new(self.cycles().iter().map(|c| c.len() as u32).collect())
            .expect("nonempty permutation")
    }

    /// A fixed representative of the conjugacy class `cycle_type`, filling
    /// consecutive points cycle by cycle.
    pub fn representative(cycle_type: &Partition) -> Perm {
        let d = cycle_type.degree() as usize;
        let mut images: Vec<u8> = (0..d as u8).collect();
        let mut start = 0usize;
        for &len in cycle_type.parts() {
            let len = len as usize;
            for i in 0..len {
                images[start + i] = (start + (i + 1) % len) as u8;
            }
            start += len;
        }
        Perm { images }
    }

    /// All permutations of `{0, .., d-1}` in lexicographic image order.
    pub fn all(d: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut images: Vec<u8> = (0..d as u8).collect();
        loop {
            out.push(Perm {
                images: images.clone(),
            });
            // next permutation
            let Some(i) = (1..images.len()).rev().find(|&i| images[i - 1] < images[i]) else {
                break;
            };
            let j = (i..images.len()).rev().find(|&j| images[j] > images[i - 1]).unwrap();
            images.swap(i - 1, j);
            images[i..].reverse();
        }
        out
    }

    /// All permutations with the given cycle type.
    pub fn conjugacy_class(cycle_type: &Partition) -> Vec<Perm> {
        Perm::all(cycle_type.degree() as usize)
            .into_iter()
            .filter(|p| p.cycle_type() == *cycle_type)
            .collect()
    }
}

impl fmt::Display for Perm {
    /// Cycle notation with points numbered from 1; fixed points omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Orbits of the group generated by `gens` on `{0, .., d-1}`, as a
/// representative index per point (smallest point of its orbit).
pub fn orbit_labels(d: usize, gens: &[&Perm]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for g in gens {
        for x in 0..d {
            let (a, b) = (find(&mut parent, x), find(&mut parent, g.apply(x)));
            if a != b {
                let (lo, hi) = (a.min(b), a.max(b));
                parent[hi] = lo;
            }
        }
    }
    (0..d).map(|x| find(&mut parent, x)).collect()
}

pub fn is_transitive(d: usize, gens: &[&Perm]) -> bool {
    orbit_labels(d, gens).iter().all(|&r| r == 0)
}
