//! Edge classification after splitting parts into subparts, and the diagonal
//! combination of Type I classes.

use std::collections::BTreeMap;
use std::ops::Range;

use crate::compositions::{type_vector, WeakComposition};
use crate::error::{Error, Result};
use crate::model::{Edge, Vertex};

/// Each active part of `rho` cut into `rho_max` consecutive subparts of
/// size `ceil(|part| / rho_max)` (the last ones may be short or empty).
#[derive(Clone, Debug)]
pub struct SubpartSplit {
    parts: Vec<Range<Vertex>>,
    rho: WeakComposition,
    size: Vec<usize>,
}

impl SubpartSplit {
    pub fn new(parts: Vec<Range<Vertex>>, rho: WeakComposition) -> Result<SubpartSplit> {
        if parts.len() != rho.r() {
            return Err(Error::SizeMismatch(format!("{} parts for {rho}", parts.len())));
        }
        let k = rho.rho_max();
        let size = parts.iter().map(|p| (p.len()).div_ceil(k).max(1)).collect();
        Ok(SubpartSplit { parts, rho, size })
    }

    pub fn rho(&self) -> &WeakComposition {
        &self.rho
    }

    /// Subpart `j` of part `i`.
    pub fn subpart(&self, i: usize, j: usize) -> Range<Vertex> {
        let start = self.parts[i].start as usize + j * self.size[i];
        let end = (start + self.size[i]).min(self.parts[i].end as usize);
        start.min(end) as Vertex..end as Vertex
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeTypeTag {
    /// `j[l]` is the subpart holding the edge's vertices in the `l`-th active part.
    TypeI { j: Vec<usize> },
    /// `subparts` lists the `(part, subpart)` pairs met, in order; `tau` gives
    /// the edge's intersection sizes with them, padded with zeros.
    TypeII { tau: WeakComposition, subparts: Vec<(usize, usize)> },
}

/// Type I iff, in every part, the edge's vertices lie in a single subpart.
pub fn classify_edge(e: &Edge, split: &SubpartSplit) -> Result<EdgeTypeTag> {
    let rho = type_vector(e, &split.parts)?;
    if rho != split.rho {
        return Err(Error::PartitionMismatch(e.vertices().to_vec()));
    }
    let mut met: Vec<((usize, usize), usize)> = Vec::new();
    for &v in e.vertices() {
        let i = split.parts.iter().position(|p| p.contains(&v)).expect("type vector checked membership");
        let j = (v - split.parts[i].start) as usize / split.size[i];
        match met.last_mut() {
            Some((key, count)) if *key == (i, j) => *count += 1,
            _ => met.push(((i, j), 1)),
        }
    }
    let active = split.rho.support();
    if met.len() == active {
        return Ok(EdgeTypeTag::TypeI { j: met.iter().map(|((_, j), _)| *j).collect() });
    }
    let mut entries: Vec<usize> = met.iter().map(|(_, c)| *c).collect();
    entries.resize(e.len(), 0);
    Ok(EdgeTypeTag::TypeII {
        tau: WeakComposition::new(entries)?,
        subparts: met.into_iter().map(|(key, _)| key).collect(),
    })
}

/// Position of the diagonal through `j` among the `rho_max^(len-1)` diagonals:
/// the shifts `k_l = j_l - j_1 mod rho_max` read as a base-`rho_max` number.
pub fn diagonal_index(j: &[usize], rho_max: usize) -> usize {
    j[1..].iter().fold(0, |acc, &x| acc * rho_max + (x + rho_max - j[0]) % rho_max)
}

/// Merges the Type I classes of all subpart selections `j` into
/// `rho_max^(support-1) * T` classes: for each shift tuple `k` and class
/// index `t`, the union of `classes_by_j[(i, i+k_2, ..)][t]` over all `i`.
///
/// Output order is by shift tuple (as in [`diagonal_index`]), then `t`.
/// Selections are 0-based vectors of length `support`; missing ones count
/// as empty lists of classes.
pub fn diagonal_combine<T: Clone>(
    classes_by_j: &BTreeMap<Vec<usize>, Vec<Vec<T>>>,
    rho_max: usize,
    support: usize,
) -> Result<Vec<Vec<T>>> {
    if rho_max == 0 || support == 0 {
        return Err(Error::EmptyDomain("diagonal combination needs rho_max, support >= 1".into()));
    }
    let mut lengths = classes_by_j.values().map(Vec::len);
    let t = lengths.next().unwrap_or(0);
    if lengths.any(|l| l != t) {
        return Err(Error::RaggedInput("selections carry different numbers of classes".into()));
    }
    if let Some(j) = classes_by_j.keys().find(|j| j.len() != support || j.iter().any(|&x| x >= rho_max)) {
        return Err(Error::RaggedInput(format!("selection {j:?} outside {{0..{rho_max}}}^{support}")));
    }
    let diagonals = rho_max.pow(support as u32 - 1);
    let mut out = vec![Vec::new(); diagonals * t];
    for (j, classes) in classes_by_j {
        let d = diagonal_index(j, rho_max);
        for (ti, class) in classes.iter().enumerate() {
            out[d * t + ti].extend(class.iter().cloned());
        }
    }
    Ok(out)
}
