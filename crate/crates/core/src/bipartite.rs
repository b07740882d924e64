//! Partitions of `K_{n,n}` into classes of large girth.
//!
//! The native construction covers girth 6 over a prime field. Partitions
//! with other guarantees (girth 8 or 12, `K_{a,b}`-freeness) are imported from
//! files and certified class by class.

use std::collections::VecDeque;
use std::io::BufRead;
use std::ops::{Add, Mul, Sub};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::io::read_partition_classes;
use crate::model::{BipartiteGraph, Vertex};

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime `q` with `q * q >= n`.
pub fn prime_for_side(n: usize) -> u64 {
    let mut q = 2u64;
    while (q * q) < n as u64 || !is_prime(q) {
        q += 1;
    }
    q
}

/// The field of integers modulo a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    q: u64,
}

impl PrimeField {
    pub fn new(q: u64) -> Result<PrimeField> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(PrimeField { q })
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn elem(&self, value: u64) -> FieldElement {
        FieldElement { value: value % self.q, q: self.q }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(|v| self.elem(v))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    q: u64,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        debug_assert_eq!(self.q, rhs.q);
        FieldElement { value: (self.value + rhs.value) % self.q, q: self.q }
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        debug_assert_eq!(self.q, rhs.q);
        FieldElement { value: (self.value + self.q - rhs.value) % self.q, q: self.q }
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        debug_assert_eq!(self.q, rhs.q);
        FieldElement { value: (self.value * rhs.value) % self.q, q: self.q }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartitionReport {
    /// Pairs found in more than one class, with the classes holding them.
    pub duplicated: Vec<((Vertex, Vertex), Vec<usize>)>,
    /// Pairs of `K_{nA,nB}` found in no class.
    pub missing: Vec<(Vertex, Vertex)>,
}

impl PartitionReport {
    pub fn is_partition(&self) -> bool {
        self.duplicated.is_empty() && self.missing.is_empty()
    }

    pub fn is_cover(&self) -> bool {
        self.missing.is_empty()
    }
}

/// Checks pairwise disjointness and exact coverage of all `nA * nB` pairs.
pub fn verify_partition_classes(n_a: usize, n_b: usize, classes: &[BipartiteGraph]) -> PartitionReport {
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); n_a * n_b];
    for (i, class) in classes.iter().enumerate() {
        for &(a, b) in class.edges() {
            if (a as usize) < n_a && (b as usize) < n_b {
                owners[a as usize * n_b + b as usize].push(i);
            }
        }
    }
    let mut report = PartitionReport::default();
    for (k, o) in owners.into_iter().enumerate() {
        let pair = ((k / n_b) as Vertex, (k % n_b) as Vertex);
        match o.len() {
            0 => report.missing.push(pair),
            1 => {}
            _ => report.duplicated.push((pair, o)),
        }
    }
    report
}

pub fn verify_partition(p: &BipartitePartition) -> PartitionReport {
    verify_partition_classes(p.n_a, p.n_b, &p.classes)
}

/// An ordered list of bipartite graphs on shared parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartitePartition {
    n_a: usize,
    n_b: usize,
    classes: Vec<BipartiteGraph>,
    is_partition: bool,
    is_cover: bool,
}

impl BipartitePartition {
    /// Wraps `classes` and records whether they partition (or cover) `K_{nA,nB}`.
    pub fn from_classes(n_a: usize, n_b: usize, classes: Vec<BipartiteGraph>) -> Result<BipartitePartition> {
        if let Some(c) = classes.iter().find(|c| c.n_a() != n_a || c.n_b() != n_b) {
            return Err(Error::SizeMismatch(format!(
                "class on {}x{} in a {n_a}x{n_b} partition",
                c.n_a(),
                c.n_b()
            )));
        }
        let report = verify_partition_classes(n_a, n_b, &classes);
        Ok(BipartitePartition {
            n_a,
            n_b,
            classes,
            is_partition: report.is_partition(),
            is_cover: report.is_cover(),
        })
    }

    /// Like [`from_classes`](Self::from_classes) but fails unless the classes partition `K_{nA,nB}`.
    pub fn new(n_a: usize, n_b: usize, classes: Vec<BipartiteGraph>) -> Result<BipartitePartition> {
        let p = Self::from_classes(n_a, n_b, classes)?;
        if !p.is_partition {
            let report = verify_partition(&p);
            return Err(Error::InvalidPartition(format!(
                "{} missing and {} duplicated pairs",
                report.missing.len(),
                report.duplicated.len()
            )));
        }
        Ok(p)
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    pub fn classes(&self) -> &[BipartiteGraph] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn is_partition(&self) -> bool {
        self.is_partition
    }

    pub fn is_cover(&self) -> bool {
        self.is_cover
    }

    /// The induced partition of `K_{n,n}` on the first `n` vertices of each side.
    pub fn restrict(&self, n: usize) -> BipartitePartition {
        let classes: Vec<BipartiteGraph> = self.classes.iter().map(|c| c.restrict(n)).collect();
        BipartitePartition {
            n_a: n.min(self.n_a),
            n_b: n.min(self.n_b),
            classes,
            is_partition: self.is_partition,
            is_cover: self.is_cover,
        }
    }

    /// `table[a * nB + b]` is the smallest class index containing `(a, b)`.
    pub fn class_table(&self) -> Vec<u32> {
        let mut table = vec![u32::MAX; self.n_a * self.n_b];
        for (i, class) in self.classes.iter().enumerate().rev() {
            for &(a, b) in class.edges() {
                table[a as usize * self.n_b + b as usize] = i as u32;
            }
        }
        table
    }
}

/// The outcome of a girth check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GirthReport {
    /// `true` iff there is no cycle shorter than the requested bound.
    pub ok: bool,
    /// The girth, when it is below the bound.
    pub girth: Option<usize>,
    /// Lexicographically least shortest cycle (combined ids: A-vertex `a` is `a`,
    /// B-vertex `b` is `nA + b`), started at its minimum vertex with the smaller
    /// neighbour second.
    pub witness: Option<Vec<Vertex>>,
}

/// Length of a shortest cycle of length below `bound`, if any, by BFS from every vertex.
fn short_girth(adj: &[Vec<Vertex>], bound: usize) -> Option<usize> {
    let n = adj.len();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        parent[root] = usize::MAX;
        queue.clear();
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            if 2 * dist[u] + 1 >= best.min(bound) {
                break;
            }
            for &w in &adj[u] {
                let w = w as usize;
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    best = best.min(dist[u] + dist[w] + 1);
                }
            }
        }
    }
    (best < bound).then_some(best)
}

/// The lexicographically least cycle of exactly `len` vertices in canonical form.
fn least_cycle(adj: &[Vec<Vertex>], len: usize) -> Option<Vec<Vertex>> {
    fn extend(adj: &[Vec<Vertex>], len: usize, path: &mut Vec<Vertex>, on_path: &mut [bool]) -> bool {
        let start = path[0];
        let last = *path.last().unwrap();
        if path.len() == len {
            return path[1] < last && adj[last as usize].binary_search(&start).is_ok();
        }
        for &w in &adj[last as usize] {
            if w <= start || on_path[w as usize] {
                continue;
            }
            path.push(w);
            on_path[w as usize] = true;
            if extend(adj, len, path, on_path) {
                return true;
            }
            on_path[w as usize] = false;
            path.pop();
        }
        false
    }
    let mut on_path = vec![false; adj.len()];
    for v in 0..adj.len() as Vertex {
        let mut path = vec![v];
        on_path[v as usize] = true;
        if extend(adj, len, &mut path, &mut on_path) {
            return Some(path);
        }
        on_path[v as usize] = false;
    }
    None
}

/// Checks that `g` has no cycle of length less than `gmin`.
pub fn verify_girth(g: &BipartiteGraph, gmin: usize) -> GirthReport {
    let adj = g.adjacency();
    match short_girth(&adj, gmin) {
        None => GirthReport { ok: true, girth: None, witness: None },
        Some(len) => GirthReport { ok: false, girth: Some(len), witness: least_cycle(&adj, len) },
    }
}

/// Splits `K_{q², q²}` into `q` classes of girth at least 6.
///
/// Both sides are `F_q × F_q` with `(x1, x2)` stored as `x1 * q + x2`; class
/// `c` holds the pairs with `a2 + b2 = a1 * b1 + c`. Every class is certified
/// before the partition is returned.
pub fn c4free_partition(q: u64) -> Result<BipartitePartition> {
    let field = PrimeField::new(q)?;
    let n = (q * q) as usize;
    let index = |x1: FieldElement, x2: FieldElement| (x1.value() * q + x2.value()) as Vertex;
    let mut classes = Vec::with_capacity(q as usize);
    for c in field.elements() {
        let mut edges = Vec::with_capacity((q * q * q) as usize);
        for a1 in field.elements() {
            for a2 in field.elements() {
                for b1 in field.elements() {
                    let b2 = a1 * b1 + c - a2;
                    edges.push((index(a1, a2), index(b1, b2)));
                }
            }
        }
        classes.push(BipartiteGraph::new(n, n, edges)?);
    }
    let p = BipartitePartition::new(n, n, classes)
        .map_err(|e| Error::ConstructionInvalid(e.to_string()))?;
    let failures: Vec<usize> = p
        .classes()
        .par_iter()
        .enumerate()
        .filter(|(_, class)| !verify_girth(class, 6).ok)
        .map(|(i, _)| i)
        .collect();
    if !failures.is_empty() {
        return Err(Error::ConstructionInvalid(format!("classes {failures:?} contain a 4-cycle")));
    }
    Ok(p)
}

/// Reads a partition document. Coverage is checked; class freeness is left to the caller.
pub fn import_partition<R: BufRead>(r: R) -> Result<BipartitePartition> {
    let (n_a, n_b, classes) = read_partition_classes(r)?;
    BipartitePartition::new(n_a, n_b, classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{to_bytes, write_partition};

    fn graph(n_a: usize, n_b: usize, edges: &[(Vertex, Vertex)]) -> BipartiteGraph {
        BipartiteGraph::new(n_a, n_b, edges.to_vec()).unwrap()
    }

    fn c6() -> BipartiteGraph {
        graph(3, 3, &[(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 0)])
    }

    #[test]
    fn field_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!((f.elem(5) + f.elem(4)).value(), 2);
        assert_eq!((f.elem(3) * f.elem(5)).value(), 1);
        assert_eq!((f.elem(2) - f.elem(5)).value(), 4);
        assert!(matches!(PrimeField::new(4), Err(Error::NotPrime(4))));
        assert!(matches!(PrimeField::new(1), Err(Error::NotPrime(1))));
    }

    #[test]
    fn girth_examples() {
        assert!(verify_girth(&c6(), 6).ok);
        let r = verify_girth(&c6(), 8);
        assert!(!r.ok);
        assert_eq!(r.girth, Some(6));
        // a0-b0-a2-b2-a1-b1 rotated to start at 0 with the smaller neighbour second
        assert_eq!(r.witness, Some(vec![0, 3, 2, 5, 1, 4]));

        let k22 = graph(2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)]);
        let r = verify_girth(&k22, 6);
        assert_eq!(r.girth, Some(4));
        assert_eq!(r.witness, Some(vec![0, 2, 1, 3]));

        let forest = graph(3, 3, &[(0, 0), (0, 1), (1, 1), (2, 2)]);
        for gmin in [3, 6, 100] {
            assert!(verify_girth(&forest, gmin).ok);
        }
    }

    #[test]
    fn q2_partition_shape() {
        let p = c4free_partition(2).unwrap();
        assert_eq!(p.len(), 2);
        for class in p.classes() {
            assert_eq!(class.edges().len(), 8);
            let adj = class.adjacency();
            assert!(adj.iter().all(|a| a.len() == 2));
        }
    }

    #[test]
    fn q5_partition_covers() {
        let p = c4free_partition(5).unwrap();
        assert_eq!(p.len(), 5);
        assert!(p.classes().iter().all(|c| c.edges().len() == 125));
        let rep = verify_partition(&p);
        assert!(rep.is_partition());
    }

    #[test]
    fn non_prime_rejected() {
        assert!(matches!(c4free_partition(4), Err(Error::NotPrime(4))));
        assert!(matches!(c4free_partition(9), Err(Error::NotPrime(9))));
    }

    #[test]
    fn partition_reports() {
        let p = c4free_partition(3).unwrap();
        assert!(verify_partition(&p).is_partition());

        let mut classes = p.classes().to_vec();
        let dropped = classes[0].edges()[0];
        classes[0] = graph(9, 9, &classes[0].edges()[1..]);
        let rep = verify_partition_classes(9, 9, &classes);
        assert_eq!(rep.missing, vec![dropped]);
        assert!(rep.duplicated.is_empty());

        let mut classes = p.classes().to_vec();
        let extra = classes[0].edges()[0];
        let mut e1 = classes[1].edges().to_vec();
        e1.push(extra);
        classes[1] = graph(9, 9, &e1);
        let rep = verify_partition_classes(9, 9, &classes);
        assert_eq!(rep.duplicated, vec![(extra, vec![0, 1])]);
        assert!(rep.is_cover() && !rep.is_partition());
    }

    #[test]
    fn import_round_trip_and_errors() {
        let p = c4free_partition(3).unwrap();
        let bytes = to_bytes(|w| write_partition(w, &p)).unwrap();
        let back = import_partition(&bytes[..]).unwrap();
        assert_eq!(back, p);

        let mut classes = p.classes().to_vec();
        classes[2] = graph(9, 9, &classes[2].edges()[1..]);
        let broken = BipartitePartition::from_classes(9, 9, classes).unwrap();
        let bytes = to_bytes(|w| write_partition(w, &broken)).unwrap();
        assert!(matches!(import_partition(&bytes[..]), Err(Error::InvalidPartition(_))));

        let all: Vec<(Vertex, Vertex)> = (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).collect();
        let single = BipartitePartition::new(3, 3, vec![graph(3, 3, &all)]).unwrap();
        let bytes = to_bytes(|w| write_partition(w, &single)).unwrap();
        let back = import_partition(&bytes[..]).unwrap();
        assert_eq!(back.len(), 1);
        assert!(!verify_girth(&back.classes()[0], 6).ok);

        assert!(matches!(import_partition(&b"{\"version\":1}"[..]), Err(Error::Parse(_))));
    }

    #[test]
    fn prime_sides() {
        assert_eq!(prime_for_side(1), 2);
        assert_eq!(prime_for_side(9), 3);
        assert_eq!(prime_for_side(10), 5);
        assert_eq!(prime_for_side(49), 7);
        assert_eq!(prime_for_side(50), 11);
    }
}
