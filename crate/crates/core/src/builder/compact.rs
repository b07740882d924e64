use std::sync::Arc;

use crate::detect::ForbiddenFamily;
use crate::model::{ColorId, Coloring, Hypergraph, Label, Palette};

struct Merged {
    members: Vec<ColorId>,
    edges: Vec<usize>,
    verts: Vec<u64>,
}

impl Merged {
    fn disjoint(&self, other: &[u64]) -> bool {
        self.verts.iter().zip(other).all(|(a, b)| a & b == 0)
    }
}

fn vertex_set(host: &Hypergraph, edges: &[u32]) -> Vec<u64> {
    let mut bits = vec![0u64; host.n().div_ceil(64)];
    for &i in edges {
        for &v in host.edge(i as usize).vertices() {
            bits[v as usize / 64] |= 1 << (v % 64);
        }
    }
    bits
}

/// Greedily merges color classes, first fit in ascending color order, while
/// every merged class stays free of `fam`. Vertex-disjoint classes merge
/// without detection: all patterns are connected, so a copy would have to
/// lie inside one side.
pub fn compact(c: &Coloring, fam: &ForbiddenFamily) -> Coloring {
    let host = c.host();
    let index = c.class_index();
    let mut merged: Vec<Merged> = Vec::new();
    let mut target = vec![0 as ColorId; index.len()];
    for color in 0..index.len() as ColorId {
        let class = index.class(color);
        let verts = vertex_set(host, class);
        let slot = merged.iter().position(|m| {
            if m.disjoint(&verts) {
                return true;
            }
            let mut edges: Vec<usize> = m.edges.iter().copied().chain(class.iter().map(|&i| i as usize)).collect();
            edges.sort_unstable();
            fam.find(&host.subgraph(edges)).is_none()
        });
        let slot = match slot {
            Some(s) => s,
            None => {
                merged.push(Merged { members: Vec::new(), edges: Vec::new(), verts: vec![0; verts.len()] });
                merged.len() - 1
            }
        };
        let m = &mut merged[slot];
        m.members.push(color);
        m.edges.extend(class.iter().map(|&i| i as usize));
        for (a, b) in m.verts.iter_mut().zip(&verts) {
            *a |= b;
        }
        target[color as usize] = slot as ColorId;
    }
    let labels: Vec<Label> = merged
        .iter()
        .map(|m| match m.members.as_slice() {
            [single] => c.label(*single),
            many => {
                let mut l = vec![format!("merged:{}", many.len())];
                l.extend(many.iter().map(|&x| c.label(x).join("/")));
                l
            }
        })
        .collect();
    let colors = c.colors().iter().map(|&x| target.get(x as usize).copied().unwrap_or(x)).collect();
    Coloring::new(Arc::clone(c.host_arc()), colors, Palette::Labels(labels)).expect("same host, same length")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_coloring, Edge, Vertex};

    fn coloring(n: usize, edges: &[[Vertex; 3]], colors: &[ColorId], k: usize) -> Coloring {
        let edges: Vec<Edge> = edges.iter().map(|e| Edge::new(e, n).unwrap()).collect();
        let host = Arc::new(Hypergraph::new(n, 3, edges.clone()).unwrap());
        let pairs = edges.into_iter().zip(colors.iter().copied());
        let palette = Palette::Labels((0..k).map(|i| vec![format!("c{i}")]).collect());
        Coloring::from_pairs(host, pairs, palette).unwrap()
    }

    #[test]
    fn disjoint_classes_merge() {
        let c = coloring(12, &[[0, 1, 2], [1, 2, 3], [6, 7, 8], [7, 8, 9]], &[0, 0, 1, 1], 2);
        let out = compact(&c, &ForbiddenFamily::cycles(2));
        assert_eq!(out.num_colors(), 1);
        assert!(validate_coloring(&out).is_valid());
        assert_eq!(out.label(0)[0], "merged:2");
    }

    #[test]
    fn planted_square_is_not_merged() {
        // halves of a Berge C4 in two colors
        let c = coloring(9, &[[1, 2, 5], [2, 3, 6], [3, 4, 7], [1, 4, 8]], &[0, 0, 1, 1], 2);
        let out = compact(&c, &ForbiddenFamily::cycles(2));
        assert_eq!(out.num_colors(), 2);
        assert_eq!(out.colors(), c.colors());
    }

    #[test]
    fn compact_is_a_fixpoint() {
        let c = coloring(9, &[[1, 2, 5], [2, 3, 6], [3, 4, 7], [1, 4, 8], [0, 5, 6]], &[0, 0, 1, 1, 0], 2);
        let once = compact(&c, &ForbiddenFamily::cycles(2));
        let twice = compact(&once, &ForbiddenFamily::cycles(2));
        assert_eq!(once.colors(), twice.colors());
        assert_eq!(once.num_colors(), twice.num_colors());
    }
}
