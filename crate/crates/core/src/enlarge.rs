//! Enlarging bipartite graphs into uniform hypergraphs, and the shifted-copy
//! cover of the complete `(s+t)`-partite `(s+t)`-uniform hypergraph.
//!
//! Part layout for the multipartite host: `A_1..A_s` then `B_1..B_t`, each a
//! copy of `Z/nZ`; coordinate `k` of an edge lives in part `k` and the vertex
//! id is `k * n + x`.

use std::sync::Arc;

use crate::bipartite::BipartitePartition;
use crate::error::{Error, Result};
use crate::model::{BipartiteGraph, ColorId, Coloring, Edge, Hypergraph, Label, Palette, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EnlargementSpec {
    s: usize,
    t: usize,
}

impl EnlargementSpec {
    pub fn new(s: usize, t: usize) -> Result<EnlargementSpec> {
        if s == 0 || t == 0 {
            return Err(Error::InvalidEdge(format!("enlargement ({s},{t}) needs s, t >= 1")));
        }
        Ok(EnlargementSpec { s, t })
    }

    /// The balanced split `(⌈r/2⌉, ⌊r/2⌋)`.
    pub fn balanced(r: usize) -> Result<EnlargementSpec> {
        Self::new(r.div_ceil(2), r / 2)
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn r(&self) -> usize {
        self.s + self.t
    }
}

/// Replaces every A-vertex by `s` copies and every B-vertex by `t` copies.
///
/// Copies of A-vertex `a` are `a*s .. a*s+s`; copies of B-vertex `b` follow
/// all A-copies at `s*nA + b*t .. s*nA + b*t + t`.
pub fn enlarge(g: &BipartiteGraph, spec: EnlargementSpec) -> Hypergraph {
    let (s, t) = (spec.s as Vertex, spec.t as Vertex);
    let b_base = s * g.n_a() as Vertex;
    let n = spec.s * g.n_a() + spec.t * g.n_b();
    let edges = g
        .edges()
        .iter()
        .map(|&(a, b)| {
            let verts: Vec<Vertex> =
                (0..s).map(|i| a * s + i).chain((0..t).map(|j| b_base + b * t + j)).collect();
            Edge::from_sorted(&verts)
        })
        .collect();
    Hypergraph::new(n, spec.r(), edges).expect("enlarged edges are valid")
}

/// Maps vertex ids of [`enlarge`]`(g, spec)` to the part-indexed ids used by
/// [`shifted_copy`] with zero shifts.
pub fn part_relabeling(spec: EnlargementSpec, n: usize) -> Vec<Vertex> {
    let mut map = vec![0; (spec.s + spec.t) * n];
    for a in 0..n {
        for i in 0..spec.s {
            map[a * spec.s + i] = (i * n + a) as Vertex;
        }
    }
    for b in 0..n {
        for j in 0..spec.t {
            map[spec.s * n + b * spec.t + j] = ((spec.s + j) * n + b) as Vertex;
        }
    }
    map
}

/// Shifts `a_2..a_s` and `b_2..b_t`, residues mod `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ShiftVector {
    a_shifts: Vec<u32>,
    b_shifts: Vec<u32>,
}

impl ShiftVector {
    pub fn new(spec: EnlargementSpec, n: usize, a_shifts: Vec<u32>, b_shifts: Vec<u32>) -> Result<ShiftVector> {
        if a_shifts.len() != spec.s - 1 || b_shifts.len() != spec.t - 1 {
            return Err(Error::SizeMismatch(format!(
                "shift lengths ({}, {}) for enlargement ({}, {})",
                a_shifts.len(),
                b_shifts.len(),
                spec.s,
                spec.t
            )));
        }
        if a_shifts.iter().chain(&b_shifts).any(|&x| x as usize >= n) {
            return Err(Error::SizeMismatch(format!("shift entries must be below {n}")));
        }
        Ok(ShiftVector { a_shifts, b_shifts })
    }

    pub fn zero(spec: EnlargementSpec) -> ShiftVector {
        ShiftVector { a_shifts: vec![0; spec.s - 1], b_shifts: vec![0; spec.t - 1] }
    }

    pub fn a_shifts(&self) -> &[u32] {
        &self.a_shifts
    }

    pub fn b_shifts(&self) -> &[u32] {
        &self.b_shifts
    }
}

fn multipartite_parts(r: usize, n: usize) -> Vec<std::ops::Range<Vertex>> {
    (0..r).map(|k| (k * n) as Vertex..((k + 1) * n) as Vertex).collect()
}

/// `{(u, u+a_2, .., u+a_s, v, v+b_2, .., v+b_t) : uv ∈ E(g)}` on the multipartite host.
pub fn shifted_copy(g: &BipartiteGraph, spec: EnlargementSpec, shifts: &ShiftVector, n: usize) -> Result<Hypergraph> {
    if g.n_a() != n || g.n_b() != n {
        return Err(Error::SizeMismatch(format!("{}x{} graph for modulus {n}", g.n_a(), g.n_b())));
    }
    let nn = n as Vertex;
    let edges = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            let mut coords = Vec::with_capacity(spec.r());
            coords.push(u);
            coords.extend(shifts.a_shifts.iter().map(|&a| (u + a) % nn));
            coords.push(v);
            coords.extend(shifts.b_shifts.iter().map(|&b| (v + b) % nn));
            let verts: Vec<Vertex> = coords.iter().enumerate().map(|(k, &x)| k as Vertex * nn + x).collect();
            Edge::from_sorted(&verts)
        })
        .collect();
    Hypergraph::new(spec.r() * n, spec.r(), edges)?.with_parts(multipartite_parts(spec.r(), n))
}

/// How a pair covered by several classes picks its class.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CoverMode {
    /// Classes must partition `K_{n,n}`.
    #[default]
    Partition,
    /// Classes may overlap; the smallest class index wins.
    SmallestIndex,
}

/// Color lookup for the shifted-copy cover; shared by [`multipartite_cover`]
/// and the base colorer of the complete-hypergraph builder.
#[derive(Clone, Debug)]
pub struct CoverTable {
    n: usize,
    spec: EnlargementSpec,
    classes: usize,
    /// class of `(a, b)` at `a * n + b`, renumbered over non-empty classes
    table: Vec<u32>,
    /// original class index of each renumbered class
    original: Vec<usize>,
    shift_count: u64,
}

impl CoverTable {
    pub fn new(p: &BipartitePartition, spec: EnlargementSpec, mode: CoverMode) -> Result<CoverTable> {
        let ok = match mode {
            CoverMode::Partition => p.is_partition(),
            CoverMode::SmallestIndex => p.is_cover(),
        };
        if !ok {
            return Err(Error::RequiresVerifiedPartition);
        }
        if p.n_a() != p.n_b() {
            return Err(Error::SizeMismatch(format!("{}x{} partition", p.n_a(), p.n_b())));
        }
        let n = p.n_a();
        let raw = p.class_table();
        let mut renumber = vec![u32::MAX; p.len()];
        let mut original = Vec::new();
        for (i, class) in p.classes().iter().enumerate() {
            if !class.edges().is_empty() {
                renumber[i] = original.len() as u32;
                original.push(i);
            }
        }
        let table = raw.iter().map(|&c| renumber[c as usize]).collect();
        let shift_count = (n as u64).pow((spec.r() - 2) as u32);
        Ok(CoverTable { n, spec, classes: original.len(), table, original, shift_count })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spec(&self) -> EnlargementSpec {
        self.spec
    }

    /// Number of non-empty bipartite classes (`T`).
    pub fn classes(&self) -> usize {
        self.classes
    }

    /// `T * n^(s+t-2)`.
    pub fn palette_size(&self) -> u64 {
        self.classes as u64 * self.shift_count
    }

    /// Color of the edge with coordinate `coords[k]` in part `k`.
    pub fn color(&self, coords: &[Vertex]) -> u64 {
        let s = self.spec.s;
        let n = self.n as u64;
        let (u, v) = (coords[0] as u64, coords[s] as u64);
        let class = self.table[(u * n + v) as usize] as u64;
        let mut shift = 0u64;
        for &x in &coords[1..s] {
            shift = shift * n + (x as u64 + n - u) % n;
        }
        for &x in &coords[s + 1..] {
            shift = shift * n + (x as u64 + n - v) % n;
        }
        class * self.shift_count + shift
    }

    /// Splits a color into its bipartite class and shift vector.
    pub fn decode(&self, color: u64) -> (usize, ShiftVector) {
        let class = (color / self.shift_count) as usize;
        let mut rest = color % self.shift_count;
        let mut digits = vec![0u32; self.spec.r() - 2];
        for d in digits.iter_mut().rev() {
            *d = (rest % self.n as u64) as u32;
            rest /= self.n as u64;
        }
        let b_shifts = digits.split_off(self.spec.s - 1);
        (self.original[class], ShiftVector { a_shifts: digits, b_shifts })
    }

    pub fn label(&self, color: u64) -> Label {
        let (class, shifts) = self.decode(color);
        vec![
            format!("cover:n={}", self.n),
            format!("class:{class}"),
            format!("shift:{:?}|{:?}", shifts.a_shifts, shifts.b_shifts),
        ]
    }
}

struct CoverLabels(CoverTable);

impl crate::model::LabelDecoder for CoverLabels {
    fn label(&self, raw: u64) -> Label {
        self.0.label(raw)
    }
}

/// Colors the complete `(s+t)`-partite `(s+t)`-uniform hypergraph with `n`
/// vertices per part using `T * n^(s+t-2)` shifted copies of the classes of `p`.
pub fn multipartite_cover(p: &BipartitePartition, spec: EnlargementSpec, n: usize, mode: CoverMode) -> Result<Coloring> {
    if p.n_a() != n || p.n_b() != n {
        return Err(Error::SizeMismatch(format!("{}x{} partition for n = {n}", p.n_a(), p.n_b())));
    }
    let table = CoverTable::new(p, spec, mode)?;
    let r = spec.r();
    let mut edges = Vec::with_capacity(n.pow(r as u32));
    let mut colors = Vec::with_capacity(edges.capacity());
    let mut coords = vec![0 as Vertex; r];
    loop {
        let verts: Vec<Vertex> = coords.iter().enumerate().map(|(k, &x)| (k * n) as Vertex + x).collect();
        edges.push(Edge::from_sorted(&verts));
        colors.push(table.color(&coords) as ColorId);
        // odometer, last coordinate fastest, so edges come out in lexicographic order
        let mut k = r;
        loop {
            if k == 0 {
                let host = Hypergraph::new(r * n, r, edges)?.with_parts(multipartite_parts(r, n))?;
                let palette = Palette::Decoded {
                    raw: (0..table.palette_size()).collect(),
                    decoder: Arc::new(CoverLabels(table)),
                };
                return Coloring::new(Arc::new(host), colors, palette);
            }
            k -= 1;
            coords[k] += 1;
            if (coords[k] as usize) < n {
                break;
            }
            coords[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartite::c4free_partition;
    use crate::model::validate_coloring;

    fn graph(n_a: usize, n_b: usize, edges: &[(Vertex, Vertex)]) -> BipartiteGraph {
        BipartiteGraph::new(n_a, n_b, edges.to_vec()).unwrap()
    }

    fn k22() -> BipartiteGraph {
        graph(2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)])
    }

    #[test]
    fn enlarge_counts() {
        let one = enlarge(&graph(1, 1, &[(0, 0)]), EnlargementSpec::new(2, 1).unwrap());
        assert_eq!((one.n(), one.r(), one.edge_count()), (3, 3, 1));
        assert_eq!(one.edge(0).vertices(), &[0, 1, 2]);

        let c6 = graph(3, 3, &[(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 0)]);
        let h = enlarge(&c6, EnlargementSpec::new(1, 2).unwrap());
        assert_eq!((h.n(), h.r(), h.edge_count()), (9, 3, 6));
    }

    #[test]
    fn unit_enlargement_is_identity() {
        let c6 = graph(3, 3, &[(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 0)]);
        let h = enlarge(&c6, EnlargementSpec::new(1, 1).unwrap());
        let pairs: Vec<(Vertex, Vertex)> =
            h.edges().map(|e| (e.vertices()[0], e.vertices()[1] - 3)).collect();
        assert_eq!(pairs, c6.edges());
    }

    #[test]
    fn shifted_copy_k22() {
        let spec = EnlargementSpec::new(2, 1).unwrap();
        let shifts = ShiftVector::new(spec, 2, vec![1], vec![]).unwrap();
        let h = shifted_copy(&k22(), spec, &shifts, 2).unwrap();
        // (u, u+1 mod 2, v) on parts {0,1},{2,3},{4,5}
        let got: Vec<Vec<Vertex>> = h.edges().map(|e| e.vertices().to_vec()).collect();
        assert_eq!(got, vec![vec![0, 3, 4], vec![0, 3, 5], vec![1, 2, 4], vec![1, 2, 5]]);
        assert!(shifted_copy(&graph(2, 3, &[]), spec, &shifts, 2).is_err());
    }

    #[test]
    fn zero_shift_matches_enlargement() {
        let p = c4free_partition(3).unwrap();
        for (s, t) in [(2, 1), (1, 2), (2, 2), (3, 1)] {
            let spec = EnlargementSpec::new(s, t).unwrap();
            let map = part_relabeling(spec, 9);
            for g in p.classes() {
                let e = enlarge(g, spec);
                let mut relabeled: Vec<Edge> = e
                    .edges()
                    .map(|x| {
                        let vs: Vec<Vertex> = x.vertices().iter().map(|&v| map[v as usize]).collect();
                        Edge::new(&vs, spec.r() * 9).unwrap()
                    })
                    .collect();
                relabeled.sort();
                let copy = shifted_copy(g, spec, &ShiftVector::zero(spec), 9).unwrap();
                assert_eq!(copy.edges().collect::<Vec<_>>(), relabeled);
            }
        }
    }

    #[test]
    fn distinct_shifts_are_edge_disjoint() {
        let p = c4free_partition(3).unwrap();
        let spec = EnlargementSpec::new(2, 2).unwrap();
        let g = &p.classes()[1];
        let mut seen = std::collections::HashSet::new();
        for a in 0..9 {
            for b in 0..9 {
                let sv = ShiftVector::new(spec, 9, vec![a], vec![b]).unwrap();
                for e in shifted_copy(g, spec, &sv, 9).unwrap().edges() {
                    assert!(seen.insert(e));
                }
            }
        }
    }

    #[test]
    fn cover_of_single_class() {
        let p = BipartitePartition::new(2, 2, vec![k22()]).unwrap();
        let c = multipartite_cover(&p, EnlargementSpec::new(2, 1).unwrap(), 2, CoverMode::Partition).unwrap();
        assert_eq!(c.host().edge_count(), 8);
        assert_eq!(c.num_colors(), 2);
        let idx = c.class_index();
        assert_eq!(idx.class(0).len(), 4);
        assert_eq!(idx.class(1).len(), 4);
        assert!(validate_coloring(&c).is_valid());
    }

    #[test]
    fn unit_cover_reproduces_partition() {
        let p = c4free_partition(3).unwrap();
        let c = multipartite_cover(&p, EnlargementSpec::new(1, 1).unwrap(), 9, CoverMode::Partition).unwrap();
        assert_eq!(c.num_colors(), 3);
        for (i, e) in c.host().edges().enumerate() {
            let (a, b) = (e.vertices()[0], e.vertices()[1] - 9);
            assert!(p.classes()[c.colors()[i] as usize].contains(a, b));
        }
    }

    #[test]
    fn cover_requires_verified_partition() {
        let p = c4free_partition(3).unwrap();
        let mut classes = p.classes().to_vec();
        classes[0] = graph(9, 9, &classes[0].edges()[1..]);
        let broken = BipartitePartition::from_classes(9, 9, classes).unwrap();
        let spec = EnlargementSpec::new(2, 1).unwrap();
        assert!(matches!(
            multipartite_cover(&broken, spec, 9, CoverMode::Partition),
            Err(Error::RequiresVerifiedPartition)
        ));

        // an overlapping cover is accepted only in the tolerant mode
        let mut classes = p.classes().to_vec();
        let mut e1 = classes[1].edges().to_vec();
        e1.push(classes[0].edges()[0]);
        classes[1] = graph(9, 9, &e1);
        let overlap = BipartitePartition::from_classes(9, 9, classes).unwrap();
        assert!(multipartite_cover(&overlap, spec, 9, CoverMode::Partition).is_err());
        let c = multipartite_cover(&overlap, spec, 9, CoverMode::SmallestIndex).unwrap();
        assert_eq!(c.num_colors(), 27);
    }

    #[test]
    fn labels_decode_class_and_shift() {
        let p = c4free_partition(3).unwrap();
        let spec = EnlargementSpec::new(2, 2).unwrap();
        let table = CoverTable::new(&p, spec, CoverMode::Partition).unwrap();
        let coords = [4, 6, 2, 1];
        let color = table.color(&coords);
        let (class, shifts) = table.decode(color);
        assert!(p.classes()[class].contains(4, 2));
        assert_eq!(shifts.a_shifts(), &[2]);
        assert_eq!(shifts.b_shifts(), &[8]);
    }
}
