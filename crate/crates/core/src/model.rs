//! Uniform hypergraphs, bipartite graphs, colorings and Berge witnesses.
//!
//! Vertices are dense `u32` indices. Partite structure is a list of
//! contiguous ranges, so part membership is a range test.

use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Vertex = u32;
pub type ColorId = u32;

/// Sentinel stored in [`Coloring`] for an edge without a color.
pub const UNCOLORED: ColorId = ColorId::MAX;

/// Largest uniformity the construction engine accepts.
pub const MAX_UNIFORMITY: usize = 16;

/// A hyperedge: strictly increasing vertex ids.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(SmallVec<[Vertex; 6]>);

impl Edge {
    /// Builds an edge from already sorted, duplicate-free vertices.
    pub(crate) fn from_sorted(vertices: &[Vertex]) -> Edge {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Edge(SmallVec::from_slice(vertices))
    }

    /// Sorts and validates `vertices` against a vertex count `n`.
    pub fn new(vertices: &[Vertex], n: usize) -> Result<Edge> {
        let wide: Vec<u64> = vertices.iter().map(|&v| v as u64).collect();
        canonical_edge(&wide, n)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn contains_pair(&self, u: Vertex, v: Vertex) -> bool {
        self.contains(u) && self.contains(v)
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Sorts a vertex list into canonical edge form.
pub fn canonical_edge(vertices: &[u64], n: usize) -> Result<Edge> {
    let mut sorted: SmallVec<[Vertex; 6]> = SmallVec::with_capacity(vertices.len());
    for &v in vertices {
        if v >= n as u64 || v > Vertex::MAX as u64 {
            return Err(Error::InvalidVertex { vertex: v, n });
        }
        sorted.push(v as Vertex);
    }
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidEdge(format!("duplicate vertex in {vertices:?}")));
    }
    Ok(Edge(sorted))
}

/// Binomial coefficient, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Advances `c` to the next `c.len()`-subset of `0..n` in lexicographic order.
/// Returns false (leaving `c` unspecified) once the last subset has been passed.
pub fn next_combination(c: &mut [Vertex], n: usize) -> bool {
    let r = c.len();
    let mut i = r;
    while i > 0 {
        i -= 1;
        if (c[i] as usize) < n - r + i {
            c[i] += 1;
            for j in i + 1..r {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Position of a sorted `r`-subset of `0..n` in lexicographic order.
pub fn lex_rank(c: &[Vertex], n: usize) -> u64 {
    let r = c.len() as u64;
    let n = n as u64;
    let mut rank = 0u64;
    let mut lo = 0u64;
    for (i, &x) in c.iter().enumerate() {
        let x = x as u64;
        let k = r - 1 - i as u64;
        // subsets whose i-th element lies in lo..x
        rank += binomial(n - lo, k + 1) - binomial(n - x, k + 1);
        lo = x + 1;
    }
    rank
}

/// Inverse of [`lex_rank`].
pub fn lex_unrank(mut rank: u64, n: usize, r: usize, out: &mut [Vertex]) {
    let mut x = 0u64;
    for i in 0..r {
        let k = (r - 1 - i) as u64;
        loop {
            let block = binomial(n as u64 - x - 1, k);
            if rank < block {
                break;
            }
            rank -= block;
            x += 1;
        }
        out[i] = x as Vertex;
        x += 1;
    }
}

/// Lexicographic stream of all `r`-subsets of `0..n`.
pub struct CompleteEdges {
    n: usize,
    current: Option<SmallVec<[Vertex; 6]>>,
}

impl Iterator for CompleteEdges {
    type Item = Edge;

    fn next(&mut self) -> Option<Edge> {
        let cur = self.current.as_mut()?;
        let out = Edge(cur.clone());
        if !next_combination(cur, self.n) {
            self.current = None;
        }
        Some(out)
    }
}

/// All `C(n, r)` edges of the complete `r`-uniform hypergraph, lexicographically.
pub fn complete_edges(n: usize, r: usize) -> Result<CompleteEdges> {
    if r == 0 || r > n {
        return Err(Error::EmptyDomain(format!("no {r}-subsets of {n} vertices")));
    }
    Ok(CompleteEdges {
        n,
        current: Some((0..r as Vertex).collect()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum EdgeStore {
    /// Every `r`-subset of `0..n`, in lexicographic order.
    Complete,
    Listed(Vec<Edge>),
}

/// An `r`-uniform hypergraph on vertices `0..n`.
///
/// Edges are kept sorted lexicographically; edge indices refer to that order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    r: usize,
    parts: Option<Vec<Range<Vertex>>>,
    edges: EdgeStore,
}

impl Hypergraph {
    pub fn new(n: usize, r: usize, mut edges: Vec<Edge>) -> Result<Hypergraph> {
        if r < 2 {
            return Err(Error::InvalidEdge(format!("uniformity {r} < 2")));
        }
        for e in &edges {
            if e.len() != r {
                return Err(Error::InvalidEdge(format!("{e:?} has size {} != {r}", e.len())));
            }
            if let Some(&v) = e.vertices().last() {
                if v as usize >= n {
                    return Err(Error::InvalidVertex { vertex: v as u64, n });
                }
            }
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidEdge(format!("duplicate edge {:?}", w[0])));
        }
        Ok(Hypergraph { n, r, parts: None, edges: EdgeStore::Listed(edges) })
    }

    /// `K_n^{(r)}` without materializing its edges.
    pub fn complete(n: usize, r: usize) -> Result<Hypergraph> {
        if r < 2 || r > n {
            return Err(Error::EmptyDomain(format!("K_{n}^({r})")));
        }
        Ok(Hypergraph { n, r, parts: None, edges: EdgeStore::Complete })
    }

    /// Attaches a partite structure. Parts must be consecutive ranges starting at 0.
    pub fn with_parts(mut self, parts: Vec<Range<Vertex>>) -> Result<Hypergraph> {
        let mut next = 0;
        for p in &parts {
            if p.start != next || p.end < p.start {
                return Err(Error::InvalidPartition(format!(
                    "part {p:?} does not continue the prefix ending at {next}"
                )));
            }
            next = p.end;
        }
        if next as usize > self.n {
            return Err(Error::InvalidPartition(format!("parts cover {next} > n = {}", self.n)));
        }
        self.parts = Some(parts);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn parts(&self) -> Option<&[Range<Vertex>]> {
        self.parts.as_deref()
    }

    pub fn is_complete(&self) -> bool {
        matches!(self.edges, EdgeStore::Complete)
    }

    pub fn edge_count(&self) -> usize {
        match &self.edges {
            EdgeStore::Complete => binomial(self.n as u64, self.r as u64) as usize,
            EdgeStore::Listed(v) => v.len(),
        }
    }

    pub fn edge(&self, index: usize) -> Edge {
        match &self.edges {
            EdgeStore::Complete => {
                let mut buf: SmallVec<[Vertex; 6]> = smallvec::smallvec![0; self.r];
                lex_unrank(index as u64, self.n, self.r, &mut buf);
                Edge(buf)
            }
            EdgeStore::Listed(v) => v[index].clone(),
        }
    }

    pub fn index_of(&self, e: &Edge) -> Option<usize> {
        if e.len() != self.r || e.vertices().last().is_some_and(|&v| v as usize >= self.n) {
            return None;
        }
        match &self.edges {
            EdgeStore::Complete => Some(lex_rank(e.vertices(), self.n) as usize),
            EdgeStore::Listed(v) => v.binary_search(e).ok(),
        }
    }

    pub fn edges(&self) -> Box<dyn Iterator<Item = Edge> + '_> {
        match &self.edges {
            EdgeStore::Complete => Box::new(complete_edges(self.n, self.r).expect("validated")),
            EdgeStore::Listed(v) => Box::new(v.iter().cloned()),
        }
    }

    /// Sub-hypergraph formed by the edges at `indices`.
    pub fn subgraph(&self, indices: impl IntoIterator<Item = usize>) -> Hypergraph {
        let edges: Vec<Edge> = indices.into_iter().map(|i| self.edge(i)).collect();
        let mut h = Hypergraph::new(self.n, self.r, edges).expect("edges come from a valid host");
        h.parts = self.parts.clone();
        h
    }

    pub fn part_of(&self, v: Vertex) -> Option<usize> {
        let parts = self.parts.as_ref()?;
        let i = parts.partition_point(|p| p.end <= v);
        (i < parts.len() && parts[i].contains(&v)).then_some(i)
    }
}

/// A bipartite graph with parts `0..n_a` and `0..n_b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    n_a: usize,
    n_b: usize,
    edges: Vec<(Vertex, Vertex)>,
}

impl BipartiteGraph {
    pub fn new(n_a: usize, n_b: usize, mut edges: Vec<(Vertex, Vertex)>) -> Result<BipartiteGraph> {
        for &(a, b) in &edges {
            if a as usize >= n_a {
                return Err(Error::InvalidVertex { vertex: a as u64, n: n_a });
            }
            if b as usize >= n_b {
                return Err(Error::InvalidVertex { vertex: b as u64, n: n_b });
            }
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidEdge(format!("duplicate pair {:?}", w[0])));
        }
        Ok(BipartiteGraph { n_a, n_b, edges })
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    /// Pairs `(a, b)` in lexicographic order.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn contains(&self, a: Vertex, b: Vertex) -> bool {
        self.edges.binary_search(&(a, b)).is_ok()
    }

    /// Adjacency over the combined vertex set: A-vertex `a` is `a`, B-vertex `b` is `n_a + b`.
    pub fn adjacency(&self) -> Vec<Vec<Vertex>> {
        let mut adj = vec![Vec::new(); self.n_a + self.n_b];
        for &(a, b) in &self.edges {
            let bb = self.n_a as Vertex + b;
            adj[a as usize].push(bb);
            adj[bb as usize].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Induced subgraph on `0..n` of both sides.
    pub fn restrict(&self, n: usize) -> BipartiteGraph {
        BipartiteGraph {
            n_a: n.min(self.n_a),
            n_b: n.min(self.n_b),
            edges: self
                .edges
                .iter()
                .copied()
                .filter(|&(a, b)| (a as usize) < n && (b as usize) < n)
                .collect(),
        }
    }
}

/// A forbidden Berge pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pattern {
    Cycle(usize),
    Biclique(usize, usize),
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Cycle(g) => write!(f, "cycle:{g}"),
            Pattern::Biclique(a, b) => write!(f, "biclique:{a},{b}"),
        }
    }
}

impl Pattern {
    pub fn parse(s: &str) -> Result<Pattern> {
        let bad = || Error::Parse(format!("pattern {s:?}: expected cycle:G or biclique:A,B"));
        let (kind, args) = s.trim().split_once(':').ok_or_else(bad)?;
        match kind {
            "cycle" => {
                let g: usize = args.trim().parse().map_err(|_| bad())?;
                if g < 2 {
                    return Err(bad());
                }
                Ok(Pattern::Cycle(g))
            }
            "biclique" => {
                let (a, b) = args.split_once(',').ok_or_else(bad)?;
                let a: usize = a.trim().parse().map_err(|_| bad())?;
                let b: usize = b.trim().parse().map_err(|_| bad())?;
                if a == 0 || b == 0 {
                    return Err(bad());
                }
                Ok(Pattern::Biclique(a, b))
            }
            _ => Err(bad()),
        }
    }

    /// Number of host edges a Berge copy needs.
    pub fn edge_count(&self) -> usize {
        match *self {
            Pattern::Cycle(g) => g,
            Pattern::Biclique(a, b) => a * b,
        }
    }

    /// Core vertex pairs implied by an ordered core vertex list.
    pub fn core_pairs(&self, core: &[Vertex]) -> Vec<(Vertex, Vertex)> {
        match *self {
            Pattern::Cycle(g) => (0..g).map(|i| (core[i], core[(i + 1) % g])).collect(),
            Pattern::Biclique(a, b) => {
                let mut out = Vec::with_capacity(a * b);
                for i in 0..a {
                    for j in 0..b {
                        out.push((core[i], core[a + j]));
                    }
                }
                out
            }
        }
    }

    pub fn core_size(&self) -> usize {
        match *self {
            Pattern::Cycle(g) => g,
            Pattern::Biclique(a, b) => a + b,
        }
    }
}

/// A concrete Berge embedding: core vertices and one distinct host edge per core pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub kind: Pattern,
    pub core: Vec<Vertex>,
    pub edge_map: Vec<((Vertex, Vertex), Edge)>,
}

impl Witness {
    /// Re-checks the embedding against `host`.
    pub fn validate(&self, host: &Hypergraph) -> std::result::Result<(), String> {
        if self.core.len() != self.kind.core_size() {
            return Err(format!("core has {} vertices, expected {}", self.core.len(), self.kind.core_size()));
        }
        let mut seen = self.core.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err("core vertices repeat".into());
        }
        let pairs = self.kind.core_pairs(&self.core);
        if pairs.len() != self.edge_map.len() {
            return Err("edge map does not cover the core pairs".into());
        }
        let mut used = Vec::with_capacity(pairs.len());
        for (expected, (pair, edge)) in pairs.iter().zip(&self.edge_map) {
            if expected != pair {
                return Err(format!("pair {pair:?} out of order, expected {expected:?}"));
            }
            if !edge.contains_pair(pair.0, pair.1) {
                return Err(format!("{edge:?} does not contain {pair:?}"));
            }
            if host.index_of(edge).is_none() {
                return Err(format!("{edge:?} is not a host edge"));
            }
            used.push(edge.clone());
        }
        used.sort_unstable();
        if used.windows(2).any(|w| w[0] == w[1]) {
            return Err("edge assignment is not injective".into());
        }
        Ok(())
    }
}

/// Branch tags recording where a color came from.
pub type Label = Vec<String>;

/// Turns raw palette ids into labels on demand.
pub trait LabelDecoder: Send + Sync {
    fn label(&self, raw: u64) -> Label;
}

#[derive(Clone)]
pub enum Palette {
    Labels(Vec<Label>),
    /// `raw[c]` is the pre-flattening id of color `c`.
    Decoded { raw: Vec<u64>, decoder: Arc<dyn LabelDecoder> },
}

impl Palette {
    pub fn len(&self) -> usize {
        match self {
            Palette::Labels(l) => l.len(),
            Palette::Decoded { raw, .. } => raw.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn label(&self, c: ColorId) -> Label {
        match self {
            Palette::Labels(l) => l[c as usize].clone(),
            Palette::Decoded { raw, decoder } => decoder.label(raw[c as usize]),
        }
    }
}

impl fmt::Debug for Palette {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Palette({} colors)", self.len())
    }
}

/// Edge indices grouped by color (CSR layout).
#[derive(Clone, Debug)]
pub struct ClassIndex {
    offsets: Vec<usize>,
    members: Vec<u32>,
}

impl ClassIndex {
    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn class(&self, c: ColorId) -> &[u32] {
        &self.members[self.offsets[c as usize]..self.offsets[c as usize + 1]]
    }
}

/// An assignment of colors to the edges of a host hypergraph.
#[derive(Clone, Debug)]
pub struct Coloring {
    host: Arc<Hypergraph>,
    colors: Vec<ColorId>,
    palette: Palette,
}

impl Coloring {
    /// `colors[i]` is the color of host edge `i`, or [`UNCOLORED`].
    pub fn new(host: Arc<Hypergraph>, colors: Vec<ColorId>, palette: Palette) -> Result<Coloring> {
        if colors.len() != host.edge_count() {
            return Err(Error::SizeMismatch(format!(
                "{} colors for {} edges",
                colors.len(),
                host.edge_count()
            )));
        }
        Ok(Coloring { host, colors, palette })
    }

    /// Colors given as `(edge, color)` pairs; unlisted edges stay uncolored.
    pub fn from_pairs(
        host: Arc<Hypergraph>,
        pairs: impl IntoIterator<Item = (Edge, ColorId)>,
        palette: Palette,
    ) -> Result<Coloring> {
        let mut colors = vec![UNCOLORED; host.edge_count()];
        for (e, c) in pairs {
            let i = host
                .index_of(&e)
                .ok_or_else(|| Error::InvalidEdge(format!("{e:?} is not a host edge")))?;
            colors[i] = c;
        }
        Coloring::new(host, colors, palette)
    }

    pub fn host(&self) -> &Hypergraph {
        &self.host
    }

    pub fn host_arc(&self) -> &Arc<Hypergraph> {
        &self.host
    }

    pub fn colors(&self) -> &[ColorId] {
        &self.colors
    }

    pub fn color_of(&self, edge_index: usize) -> Option<ColorId> {
        let c = self.colors[edge_index];
        (c != UNCOLORED).then_some(c)
    }

    pub fn palette(&self) -> &Palette {
        &self.palette
    }

    pub fn num_colors(&self) -> usize {
        self.palette.len()
    }

    pub fn label(&self, c: ColorId) -> Label {
        self.palette.label(c)
    }

    /// Groups edge indices by color; uncolored edges and unknown ids are skipped.
    pub fn class_index(&self) -> ClassIndex {
        let k = self.num_colors();
        let mut offsets = vec![0usize; k + 1];
        for &c in &self.colors {
            if (c as usize) < k {
                offsets[c as usize + 1] += 1;
            }
        }
        for i in 0..k {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut members = vec![0u32; offsets[k]];
        for (i, &c) in self.colors.iter().enumerate() {
            if (c as usize) < k {
                members[fill[c as usize]] = i as u32;
                fill[c as usize] += 1;
            }
        }
        ClassIndex { offsets, members }
    }

    /// The color class of `c` as a hypergraph on the host's vertex set.
    pub fn class_hypergraph(&self, index: &ClassIndex, c: ColorId) -> Hypergraph {
        self.host.subgraph(index.class(c).iter().map(|&i| i as usize))
    }

    /// Largest color class size.
    pub fn max_class_size(&self) -> usize {
        let mut sizes = vec![0usize; self.num_colors()];
        for &c in &self.colors {
            if let Some(s) = sizes.get_mut(c as usize) {
                *s += 1;
            }
        }
        sizes.into_iter().max().unwrap_or(0)
    }

    /// Replaces the colors of the given edges.
    pub fn recolor(&mut self, edges: &[Edge], color: ColorId) -> Result<()> {
        for e in edges {
            let i = self
                .host
                .index_of(e)
                .ok_or_else(|| Error::InvalidEdge(format!("{e:?} is not a host edge")))?;
            self.colors[i] = color;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    UncoloredEdge { index: usize, edge: Edge },
    UnknownColor { index: usize, color: ColorId },
    NonContiguousPalette { unused: Vec<ColorId> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UncoloredEdge { index, edge } => write!(f, "uncolored edge #{index} {edge:?}"),
            Violation::UnknownColor { index, color } => {
                write!(f, "unknown color {color} on edge #{index}")
            }
            Violation::NonContiguousPalette { unused } => {
                write!(f, "non-contiguous palette: ids {unused:?} are never used")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that every host edge has exactly one color and colors are `0..k`.
pub fn validate_coloring(c: &Coloring) -> ValidationReport {
    let k = c.num_colors();
    let mut used = vec![false; k];
    let mut violations = Vec::new();
    for (i, &col) in c.colors.iter().enumerate() {
        if col == UNCOLORED {
            violations.push(Violation::UncoloredEdge { index: i, edge: c.host.edge(i) });
        } else if col as usize >= k {
            violations.push(Violation::UnknownColor { index: i, color: col });
        } else {
            used[col as usize] = true;
        }
    }
    let unused: Vec<ColorId> = (0..k as ColorId).filter(|&i| !used[i as usize]).collect();
    if !unused.is_empty() {
        violations.push(Violation::NonContiguousPalette { unused });
    }
    ValidationReport { violations }
}
