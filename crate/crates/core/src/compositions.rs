//! Weak compositions of `r` into `r` parts, ordered by refinement.

use std::cmp::Reverse;
use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::model::{Edge, Vertex};

/// A vector of `r` non-negative entries summing to `r`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeakComposition {
    entries: Vec<usize>,
}

impl WeakComposition {
    pub fn new(entries: Vec<usize>) -> Result<WeakComposition> {
        let sum: usize = entries.iter().sum();
        if entries.is_empty() || sum != entries.len() {
            return Err(Error::InvalidEdge(format!(
                "{entries:?} is not a weak composition of its length"
            )));
        }
        Ok(WeakComposition { entries })
    }

    /// `(1, 1, ..., 1)`.
    pub fn ones(r: usize) -> WeakComposition {
        WeakComposition { entries: vec![1; r] }
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn r(&self) -> usize {
        self.entries.len()
    }

    pub fn rho_max(&self) -> usize {
        self.entries.iter().copied().max().unwrap_or(0)
    }

    /// Number of non-zero entries.
    pub fn support(&self) -> usize {
        self.entries.iter().filter(|&&x| x > 0).count()
    }

    pub fn nonzero(&self) -> Vec<usize> {
        self.entries.iter().copied().filter(|&x| x > 0).collect()
    }

    pub fn is_ones(&self) -> bool {
        self.entries.iter().all(|&x| x == 1)
    }
}

impl fmt::Debug for WeakComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for WeakComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// All weak compositions of `r` into `r` parts, in descending lexicographic order.
pub fn weak_compositions(r: usize) -> Vec<WeakComposition> {
    fn rec(slot: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<WeakComposition>) {
        if slot + 1 == cur.len() {
            cur[slot] = left;
            out.push(WeakComposition { entries: cur.clone() });
            return;
        }
        for x in (0..=left).rev() {
            cur[slot] = x;
            rec(slot + 1, left - x, cur, out);
        }
    }
    let mut out = Vec::new();
    if r == 0 {
        return out;
    }
    rec(0, r, &mut vec![0; r], &mut out);
    out
}

/// Whether the non-zero entries of `parts` can be grouped into bins whose
/// sums are exactly `bins` (each bin used once, any order).
fn groups_into(parts: &[usize], bins: &[usize]) -> bool {
    fn place(i: usize, parts: &[usize], room: &mut [usize]) -> bool {
        if i == parts.len() {
            return room.iter().all(|&x| x == 0);
        }
        let mut tried: Vec<usize> = Vec::new();
        for b in 0..room.len() {
            // bins with equal remaining room are interchangeable
            if room[b] < parts[i] || tried.contains(&room[b]) {
                continue;
            }
            tried.push(room[b]);
            room[b] -= parts[i];
            if place(i + 1, parts, room) {
                room[b] += parts[i];
                return true;
            }
            room[b] += parts[i];
        }
        false
    }
    if parts.iter().sum::<usize>() != bins.iter().sum::<usize>() {
        return false;
    }
    let mut parts = parts.to_vec();
    parts.sort_unstable_by_key(|&x| Reverse(x));
    let mut room = bins.to_vec();
    place(0, &parts, &mut room)
}

/// `rho ≺ tau`: `rho` has strictly larger support and its non-zero entries
/// can be grouped to reproduce the non-zero entries of `tau`.
pub fn precedes(rho: &WeakComposition, tau: &WeakComposition) -> bool {
    rho.r() == tau.r() && rho.support() > tau.support() && groups_into(&rho.nonzero(), &tau.nonzero())
}

/// A total order on `P_r` compatible with [`precedes`], starting at `(1, ..., 1)`.
///
/// Sorted by descending support, ties by descending lexicographic order.
pub fn linear_extension(r: usize) -> Vec<WeakComposition> {
    let mut all = weak_compositions(r);
    all.sort_by(|a, b| b.support().cmp(&a.support()).then_with(|| b.entries.cmp(&a.entries)));
    all
}

/// Counts how many vertices of `e` fall in each part.
pub fn type_vector(e: &Edge, parts: &[Range<Vertex>]) -> Result<WeakComposition> {
    let mut entries = vec![0usize; parts.len()];
    for &v in e.vertices() {
        let i = parts
            .iter()
            .position(|p| p.contains(&v))
            .ok_or_else(|| Error::PartitionMismatch(e.vertices().to_vec()))?;
        entries[i] += 1;
    }
    if parts.len() != e.len() {
        return Err(Error::PartitionMismatch(e.vertices().to_vec()));
    }
    Ok(WeakComposition { entries })
}
