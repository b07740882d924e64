use crate::detect::incidence::{Incidence, Sdr};
use crate::model::{Hypergraph, Pattern, Witness};

/// Finds a Berge cycle of length `g`: distinct core vertices `v_1..v_g` and
/// distinct edges `e_1..e_g` with `{v_i, v_(i+1 mod g)} ⊆ e_i`.
///
/// Cores are enumerated in the pair shadow as canonical sequences (least
/// vertex first, second vertex below the last) in lexicographic order, and each
/// prefix must keep a system of distinct edges. The first hit is therefore the
/// lexicographically least canonical core; its edges are the least assignment.
pub fn contains_berge_cycle(h: &Hypergraph, g: usize) -> Option<Witness> {
    if g < 2 || h.edge_count() < g {
        return None;
    }
    let mut inc = Incidence::new(h);
    inc.prune_for_cycles();
    if inc.alive_count() < g {
        return None;
    }
    let (core, sdr) = if g == 2 { find_double_pair(&inc)? } else { find_cycle(&inc, g)? };
    Some(build_witness(h, &inc, Pattern::Cycle(g), &core, &sdr))
}

fn find_double_pair(inc: &Incidence) -> Option<(Vec<u32>, Sdr)> {
    for u in 0..inc.verts.len() as u32 {
        for &v in &inc.neighbors[u as usize] {
            if v <= u {
                continue;
            }
            let edges = inc.pair_edges(u, v);
            if edges.len() >= 2 {
                let mut sdr = Sdr::default();
                sdr.push(edges.clone());
                sdr.push(edges);
                return Some((vec![u, v], sdr));
            }
        }
    }
    None
}

fn find_cycle(inc: &Incidence, g: usize) -> Option<(Vec<u32>, Sdr)> {
    struct Search<'a> {
        inc: &'a Incidence,
        g: usize,
        path: Vec<u32>,
        on_path: Vec<bool>,
        sdr: Sdr,
    }

    impl Search<'_> {
        fn extend(&mut self) -> bool {
            let start = self.path[0];
            let last = *self.path.last().unwrap();
            if self.path.len() == self.g {
                let closing = self.inc.pair_edges(last, start);
                if self.sdr.push(closing) {
                    return true;
                }
                return false;
            }
            let final_step = self.path.len() + 1 == self.g;
            let inc = self.inc;
            for &w in &inc.neighbors[last as usize] {
                if w <= start || self.on_path[w as usize] {
                    continue;
                }
                if final_step && (w <= self.path[1] || !inc.adjacent(w, start)) {
                    continue;
                }
                if !self.sdr.push(inc.pair_edges(last, w)) {
                    continue;
                }
                self.path.push(w);
                self.on_path[w as usize] = true;
                if self.extend() {
                    return true;
                }
                self.on_path[w as usize] = false;
                self.path.pop();
                self.sdr.pop();
            }
            false
        }
    }

    let mut search = Search {
        inc,
        g,
        path: Vec::with_capacity(g),
        on_path: vec![false; inc.verts.len()],
        sdr: Sdr::default(),
    };
    for v in 0..inc.verts.len() as u32 {
        if inc.degree(v) < 2 {
            continue;
        }
        search.path.clear();
        search.path.push(v);
        search.on_path[v as usize] = true;
        if search.extend() {
            return Some((search.path, search.sdr));
        }
        search.on_path[v as usize] = false;
    }
    None
}

pub(crate) fn build_witness(h: &Hypergraph, inc: &Incidence, kind: Pattern, core: &[u32], sdr: &Sdr) -> Witness {
    let core: Vec<_> = core.iter().map(|&v| inc.verts[v as usize]).collect();
    let pairs = kind.core_pairs(&core);
    let edge_map = pairs
        .into_iter()
        .zip(sdr.least_assignment())
        .map(|(p, e)| (p, h.edge(e as usize)))
        .collect();
    Witness { kind, core, edge_map }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Edge, Vertex};

    fn hyper(n: usize, edges: &[&[Vertex]]) -> Hypergraph {
        let r = edges.first().map_or(3, |e| e.len());
        Hypergraph::new(n, r, edges.iter().map(|e| Edge::new(e, n).unwrap()).collect()).unwrap()
    }

    #[test]
    fn square_of_private_edges() {
        let h = hyper(9, &[&[1, 2, 5], &[2, 3, 6], &[3, 4, 7], &[4, 1, 8]]);
        let w = contains_berge_cycle(&h, 4).unwrap();
        assert_eq!(w.core, vec![1, 2, 3, 4]);
        w.validate(&h).unwrap();
        assert!(contains_berge_cycle(&h, 3).is_none());
        assert!(contains_berge_cycle(&h, 5).is_none());
    }

    #[test]
    fn too_few_edges() {
        let h = hyper(9, &[&[1, 2, 3], &[1, 2, 4], &[2, 3, 4]]);
        assert!(contains_berge_cycle(&h, 4).is_none());
        assert!(contains_berge_cycle(&h, 3).is_some());
    }

    #[test]
    fn sunflower_has_no_four_cycle() {
        let h = hyper(7, &[&[1, 2, 3], &[1, 2, 4], &[1, 2, 5], &[1, 2, 6]]);
        assert!(contains_berge_cycle(&h, 4).is_none());
        // every triangle needs a petal vertex in two edges; the core pair {1,2} is a C_2
        assert!(contains_berge_cycle(&h, 3).is_none());
        let two = contains_berge_cycle(&h, 2).unwrap();
        assert_eq!(two.core, vec![1, 2]);
        two.validate(&h).unwrap();
    }

    #[test]
    fn witness_is_least() {
        // two 4-cycles; the one through 0 must be reported
        let h = hyper(
            12,
            &[&[0, 1, 8], &[1, 2, 9], &[2, 3, 10], &[3, 0, 11], &[4, 5, 8], &[5, 6, 9], &[6, 7, 10], &[7, 4, 11]],
        );
        let w = contains_berge_cycle(&h, 4).unwrap();
        assert_eq!(w.core[0], 0);
        w.validate(&h).unwrap();
    }
}
