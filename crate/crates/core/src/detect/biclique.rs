use crate::detect::cycle::build_witness;
use crate::detect::incidence::{Incidence, Sdr};
use crate::model::{Hypergraph, Pattern, Witness};

/// Finds a Berge-`K_{a,b}`: disjoint core sets `{v_1..v_a}`, `{u_1..u_b}` and
/// distinct edges `e_ij ⊇ {v_i, u_j}`.
///
/// The witness core is `v_1 < .. < v_a` followed by `u_1 < .. < u_b`, least
/// in lexicographic order; pairs are listed row by row.
pub fn contains_berge_biclique(h: &Hypergraph, a: usize, b: usize) -> Option<Witness> {
    if a == 0 || b == 0 || h.edge_count() < a * b {
        return None;
    }
    let inc = Incidence::new(h);
    let mut search = Search { inc: &inc, a, b, left: Vec::new(), right: Vec::new(), sdr: Sdr::default() };
    let all: Vec<u32> = (0..inc.verts.len() as u32).collect();
    if !search.choose_left(0, &all) {
        return None;
    }
    let mut core = search.left.clone();
    core.extend(&search.right);
    // re-run the matching in row-major pair order for the witness
    let mut ordered = Sdr::default();
    for &v in &search.left {
        for &u in &search.right {
            let ok = ordered.push(inc.pair_edges(v, u));
            debug_assert!(ok);
        }
    }
    Some(build_witness(h, &inc, Pattern::Biclique(a, b), &core, &ordered))
}

struct Search<'a> {
    inc: &'a Incidence,
    a: usize,
    b: usize,
    left: Vec<u32>,
    right: Vec<u32>,
    sdr: Sdr,
}

impl Search<'_> {
    /// Picks left vertices in increasing order; `common` holds the vertices
    /// adjacent to every left vertex chosen so far.
    fn choose_left(&mut self, from: u32, common: &[u32]) -> bool {
        if self.left.len() == self.a {
            let cands: Vec<u32> = common
                .iter()
                .copied()
                .filter(|u| !self.left.contains(u) && self.inc.degree(*u) >= self.a)
                .collect();
            return cands.len() >= self.b && self.choose_right(0, &cands);
        }
        let inc = self.inc;
        for v in from..inc.verts.len() as u32 {
            if inc.degree(v) < self.b {
                continue;
            }
            let next: Vec<u32> = if self.left.is_empty() {
                inc.neighbors[v as usize].clone()
            } else {
                intersect(common, &inc.neighbors[v as usize])
            };
            let room = next.iter().filter(|u| !self.left.contains(u) && **u != v).count();
            if room < self.b {
                continue;
            }
            self.left.push(v);
            if self.choose_left(v + 1, &next) {
                return true;
            }
            self.left.pop();
        }
        false
    }

    fn choose_right(&mut self, from: usize, cands: &[u32]) -> bool {
        if self.right.len() == self.b {
            return true;
        }
        let need = self.b - self.right.len();
        for i in from..cands.len() {
            if cands.len() - i < need {
                break;
            }
            let u = cands[i];
            let mut pushed = 0;
            let mut ok = true;
            for k in 0..self.left.len() {
                if self.sdr.push(self.inc.pair_edges(self.left[k], u)) {
                    pushed += 1;
                } else {
                    ok = false;
                    break;
                }
            }
            if ok {
                self.right.push(u);
                if self.choose_right(i + 1, cands) {
                    return true;
                }
                self.right.pop();
            }
            for _ in 0..pushed {
                self.sdr.pop();
            }
        }
        false
    }
}

fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartite::c4free_partition;
    use crate::enlarge::{enlarge, EnlargementSpec};
    use crate::model::{BipartiteGraph, Edge, Vertex};

    #[test]
    fn enlarged_k22_has_witness() {
        let k22 = BipartiteGraph::new(2, 2, vec![(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        let h = enlarge(&k22, EnlargementSpec::new(2, 1).unwrap());
        // A-copies x = {0,1}, y = {2,3}; B-copies p = {4}, q = {5}
        let w = contains_berge_biclique(&h, 2, 2).unwrap();
        w.validate(&h).unwrap();
        assert_eq!(w.core, vec![0, 2, 4, 5]);
    }

    #[test]
    fn enlarged_q3_classes_have_no_k22() {
        let p = c4free_partition(3).unwrap();
        for g in p.classes() {
            let h = enlarge(g, EnlargementSpec::new(2, 1).unwrap());
            assert!(contains_berge_biclique(&h, 2, 2).is_none());
        }
    }

    #[test]
    fn too_few_edges() {
        let h = Hypergraph::new(
            6,
            3,
            vec![Edge::new(&[0, 1, 2], 6).unwrap(), Edge::new(&[0, 1, 3], 6).unwrap(), Edge::new(&[0, 4, 5], 6).unwrap()],
        )
        .unwrap();
        assert!(contains_berge_biclique(&h, 2, 2).is_none());
        let star = contains_berge_biclique(&h, 1, 3).unwrap();
        star.validate(&h).unwrap();
        assert_eq!(star.core[0], 0 as Vertex);
    }
}
