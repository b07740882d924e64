use crate::error::{Error, Result};
use crate::model::{Edge, Hypergraph, Pattern, Vertex};

pub const ORACLE_MAX_CORE_VERTICES: usize = 10;
pub const ORACLE_MAX_HOST_EDGES: usize = 12;

/// A small (multi)graph used as the core of a Berge pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorePattern {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl CorePattern {
    /// The cycle on `g` vertices; for `g = 2` a doubled edge.
    pub fn cycle(g: usize) -> CorePattern {
        CorePattern { vertices: g, edges: (0..g).map(|i| (i, (i + 1) % g)).collect() }
    }

    pub fn biclique(a: usize, b: usize) -> CorePattern {
        let edges = (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j))).collect();
        CorePattern { vertices: a + b, edges }
    }

    pub fn from_pattern(p: Pattern) -> CorePattern {
        match p {
            Pattern::Cycle(g) => Self::cycle(g),
            Pattern::Biclique(a, b) => Self::biclique(a, b),
        }
    }
}

/// Brute-force Berge containment: every injection of core vertices into host
/// vertices, then every injective assignment of host edges to core edges.
pub fn naive_berge_contains(h: &Hypergraph, core: &CorePattern) -> Result<bool> {
    if core.vertices > ORACLE_MAX_CORE_VERTICES || h.edge_count() > ORACLE_MAX_HOST_EDGES {
        return Err(Error::OracleTooLarge(format!(
            "{} core vertices, {} host edges",
            core.vertices,
            h.edge_count()
        )));
    }
    let edges: Vec<Edge> = h.edges().collect();
    let mut image = vec![0 as Vertex; core.vertices];
    let mut used_vertex = vec![false; h.n()];
    Ok(inject(0, h.n(), core, &edges, &mut image, &mut used_vertex))
}

fn inject(k: usize, n: usize, core: &CorePattern, edges: &[Edge], image: &mut [Vertex], used: &mut [bool]) -> bool {
    if k == core.vertices {
        let mut taken = vec![false; edges.len()];
        return assign(0, core, edges, image, &mut taken);
    }
    for v in 0..n {
        if used[v] {
            continue;
        }
        used[v] = true;
        image[k] = v as Vertex;
        let found = inject(k + 1, n, core, edges, image, used);
        used[v] = false;
        if found {
            return true;
        }
    }
    false
}

fn assign(i: usize, core: &CorePattern, edges: &[Edge], image: &[Vertex], taken: &mut [bool]) -> bool {
    if i == core.edges.len() {
        return true;
    }
    let (x, y) = core.edges[i];
    for (j, e) in edges.iter().enumerate() {
        if !taken[j] && e.contains(image[x]) && e.contains(image[y]) {
            taken[j] = true;
            if assign(i + 1, core, edges, image, taken) {
                return true;
            }
            taken[j] = false;
        }
    }
    false
}
