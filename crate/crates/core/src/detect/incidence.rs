//! Vertex/edge incidence with pair lookups and an incremental
//! distinct-representative (matching) structure.

use smallvec::SmallVec;

use crate::model::{Hypergraph, Vertex};

pub(crate) type EdgeList = SmallVec<[u32; 8]>;

/// Incidence structure on compressed vertex ids; edge ids follow the host's
/// lexicographic edge order.
pub(crate) struct Incidence {
    /// local vertex -> host vertex, ascending
    pub verts: Vec<Vertex>,
    pub edges: Vec<SmallVec<[u32; 8]>>,
    pub alive: Vec<bool>,
    /// local vertex -> alive edges containing it, ascending
    pub vert_edges: Vec<Vec<u32>>,
    /// local vertex -> vertices sharing an alive edge, ascending
    pub neighbors: Vec<Vec<u32>>,
}

impl Incidence {
    pub fn new(h: &Hypergraph) -> Incidence {
        let host_edges: Vec<_> = h.edges().collect();
        let mut verts: Vec<Vertex> = host_edges.iter().flat_map(|e| e.vertices().iter().copied()).collect();
        verts.sort_unstable();
        verts.dedup();
        let edges: Vec<SmallVec<[u32; 8]>> = host_edges
            .iter()
            .map(|e| e.vertices().iter().map(|v| verts.binary_search(v).unwrap() as u32).collect())
            .collect();
        let alive = vec![true; edges.len()];
        let mut inc = Incidence { verts, edges, alive, vert_edges: Vec::new(), neighbors: Vec::new() };
        inc.rebuild();
        inc
    }

    fn rebuild(&mut self) {
        let nv = self.verts.len();
        let mut vert_edges = vec![Vec::new(); nv];
        for (i, e) in self.edges.iter().enumerate() {
            if self.alive[i] {
                for &v in e {
                    vert_edges[v as usize].push(i as u32);
                }
            }
        }
        let mut neighbors = vec![Vec::new(); nv];
        for (v, list) in vert_edges.iter().enumerate() {
            let nb: &mut Vec<u32> = &mut neighbors[v];
            for &e in list {
                nb.extend(self.edges[e as usize].iter().copied().filter(|&w| w as usize != v));
            }
            nb.sort_unstable();
            nb.dedup();
        }
        self.vert_edges = vert_edges;
        self.neighbors = neighbors;
    }

    /// Drops edges that cannot lie on any Berge cycle: an edge on a cycle
    /// holds two cycle vertices, each of degree at least 2. Repeats to a fixpoint.
    pub fn prune_for_cycles(&mut self) {
        let nv = self.verts.len();
        let mut deg = vec![0usize; nv];
        for (i, e) in self.edges.iter().enumerate() {
            if self.alive[i] {
                for &v in e {
                    deg[v as usize] += 1;
                }
            }
        }
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..self.edges.len() {
                if !self.alive[i] {
                    continue;
                }
                let heavy = self.edges[i].iter().filter(|&&v| deg[v as usize] >= 2).count();
                if heavy < 2 {
                    self.alive[i] = false;
                    for &v in &self.edges[i] {
                        deg[v as usize] -= 1;
                    }
                    changed = true;
                }
            }
        }
        self.rebuild();
    }

    pub fn alive_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    pub fn degree(&self, v: u32) -> usize {
        self.vert_edges[v as usize].len()
    }

    /// Alive edges containing both `u` and `v`, ascending.
    pub fn pair_edges(&self, u: u32, v: u32) -> EdgeList {
        let (a, b) = (&self.vert_edges[u as usize], &self.vert_edges[v as usize]);
        let (mut i, mut j) = (0, 0);
        let mut out = EdgeList::new();
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }

    pub fn adjacent(&self, u: u32, v: u32) -> bool {
        self.neighbors[u as usize].binary_search(&v).is_ok()
    }
}

/// Distinct representatives for a growing list of pairs, each with its
/// candidate edges. Pushing a pair succeeds iff the extended list still has
/// a system of distinct representatives.
#[derive(Default)]
pub(crate) struct Sdr {
    cand: Vec<EdgeList>,
    assign: Vec<u32>,
}

impl Sdr {
    fn owner(&self, e: u32) -> Option<usize> {
        self.assign.iter().position(|&x| x == e)
    }

    fn augment(&mut self, p: usize, visited: &mut [bool]) -> bool {
        for k in 0..self.cand[p].len() {
            let e = self.cand[p][k];
            match self.owner(e) {
                None => {
                    self.assign[p] = e;
                    return true;
                }
                Some(q) if q != p && !visited[q] => {
                    visited[q] = true;
                    if self.augment(q, visited) {
                        self.assign[p] = e;
                        return true;
                    }
                }
                _ => {}
            }
        }
        false
    }

    pub fn push(&mut self, cand: EdgeList) -> bool {
        if cand.is_empty() {
            return false;
        }
        self.cand.push(cand);
        self.assign.push(u32::MAX);
        let p = self.cand.len() - 1;
        let mut visited = vec![false; self.cand.len()];
        visited[p] = true;
        if self.augment(p, &mut visited) {
            true
        } else {
            self.cand.pop();
            self.assign.pop();
            false
        }
    }

    /// Removes the most recent pair; the remaining assignment stays a matching.
    pub fn pop(&mut self) {
        self.cand.pop();
        self.assign.pop();
    }

    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.cand.len()
    }

    /// The lexicographically least representative list, by edge id.
    pub fn least_assignment(&self) -> Vec<u32> {
        let n = self.cand.len();
        let mut fixed: Vec<u32> = Vec::with_capacity(n);
        for p in 0..n {
            let chosen = self.cand[p].iter().copied().find(|&e| {
                if fixed.contains(&e) {
                    return false;
                }
                let mut rest = Sdr::default();
                (p + 1..n).all(|q| {
                    let c: EdgeList =
                        self.cand[q].iter().copied().filter(|x| *x != e && !fixed.contains(x)).collect();
                    rest.push(c)
                })
            });
            fixed.push(chosen.expect("a representative system exists"));
        }
        fixed
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use smallvec::smallvec;

    #[test]
    fn sdr_detects_hall_violation() {
        let mut s = Sdr::default();
        assert!(s.push(smallvec![0, 1]));
        assert!(s.push(smallvec![0]));
        assert!(!s.push(smallvec![0, 1]));
        assert_eq!(s.len(), 2);
        assert!(s.push(smallvec![1, 2]));
        assert_eq!(s.least_assignment(), vec![1, 0, 2]);
        s.pop();
        s.pop();
        assert!(s.push(smallvec![0, 1]));
    }
}
