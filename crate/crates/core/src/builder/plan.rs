//! The recursion tree of the complete-hypergraph construction, laid out once
//! so that the color of any edge is a pure function of the edge.
//!
//! A node colors `H_w(p)`: `w` lists the non-zero intersection sizes with
//! the active parts (in part order), `p` is the part size. An edge is given
//! to a node as its local coordinates, the sorted coordinates in each
//! active part concatenated in part order.

use std::collections::HashMap;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::builder::base::{BaseColorer, BaseInstance};
use crate::builder::classify::diagonal_index;
use crate::error::{Error, Result};
use crate::model::{binomial, lex_rank, Label, LabelDecoder, Vertex};

pub(crate) type Shape = SmallVec<[u8; 16]>;
type NodeId = usize;

pub(crate) struct Group {
    /// local vertices of the group, i.e. `(segment, subpart, count)` for every subpart met
    pub met: Vec<(u8, u8, u8)>,
    pub node: NodeId,
    pub offset: u64,
}

pub(crate) enum Kind {
    Base { instance: usize },
    /// Below the floor every edge is its own color.
    Fresh,
    Split {
        s: usize,
        rho_max: usize,
        /// per segment: number of distributions of `w_i` over `rho_max` subparts
        radices: Vec<u64>,
        /// sorted `(distribution rank, group)`
        lookup: Vec<(u64, u32)>,
        groups: Vec<Group>,
        type2: u64,
        inner: NodeId,
    },
}

pub(crate) struct Node {
    pub w: Shape,
    pub p: usize,
    pub palette: u64,
    pub depth: usize,
    pub kind: Kind,
}

pub(crate) struct Plan {
    pub r: usize,
    pub floor: usize,
    pub nodes: Vec<Node>,
    pub instances: Vec<(usize, Box<dyn BaseInstance>)>,
    memo: HashMap<(Shape, usize), NodeId>,
}

impl Plan {
    pub fn new(r: usize, floor: usize) -> Plan {
        Plan { r, floor, nodes: Vec::new(), instances: Vec::new(), memo: HashMap::new() }
    }

    /// Node coloring `H_w(p)`, creating it (and its subtree) if needed.
    pub fn node(&mut self, w: &[u8], p: usize, base: &dyn BaseColorer) -> Result<NodeId> {
        let key = (Shape::from_slice(w), p);
        if let Some(&id) = self.memo.get(&key) {
            return Ok(id);
        }
        let node = self.build_node(w, p, base)?;
        let id = self.nodes.len();
        self.nodes.push(node);
        self.memo.insert(key, id);
        Ok(id)
    }

    fn build_node(&mut self, w: &[u8], p: usize, base: &dyn BaseColorer) -> Result<Node> {
        let shape = Shape::from_slice(w);
        if w.iter().all(|&x| x == 1) {
            let instance = match self.instances.iter().position(|(q, _)| *q == p) {
                Some(i) => i,
                None => {
                    self.instances.push((p, base.instantiate(self.r, p)?));
                    self.instances.len() - 1
                }
            };
            let palette = self.instances[instance].1.palette_size();
            return Ok(Node { w: shape, p, palette, depth: 0, kind: Kind::Base { instance } });
        }
        let rho_max = *w.iter().max().unwrap() as usize;
        if p < self.floor.max(rho_max) {
            let palette = w.iter().map(|&x| binomial(p as u64, x as u64)).product();
            return Ok(Node { w: shape, p, palette, depth: 0, kind: Kind::Fresh });
        }
        let s = p.div_ceil(rho_max);
        let radices: Vec<u64> =
            w.iter().map(|&x| binomial(x as u64 + rho_max as u64 - 1, rho_max as u64 - 1)).collect();
        let total: u64 = radices.iter().product();
        let mut groups = Vec::new();
        let mut lookup = Vec::new();
        let mut type2 = 0u64;
        let mut depth = 0;
        for rank in 0..total {
            let dists = unrank_distributions(rank, w, rho_max, &radices);
            if dists.iter().all(|d| d.iter().filter(|&&c| c > 0).count() == 1) {
                continue;
            }
            let mut met = Vec::new();
            for (seg, d) in dists.iter().enumerate() {
                for (j, &c) in d.iter().enumerate() {
                    if c > 0 {
                        met.push((seg as u8, j as u8, c));
                    }
                }
            }
            let tau: Shape = met.iter().map(|m| m.2).collect();
            let node = self.node(&tau, s, base)?;
            depth = depth.max(self.nodes[node].depth + 1);
            lookup.push((rank, groups.len() as u32));
            groups.push(Group { met, node, offset: type2 });
            type2 = type2
                .checked_add(self.nodes[node].palette)
                .ok_or_else(|| Error::Unsupported("palette exceeds 64 bits".into()))?;
        }
        let inner = self.node(w, s, base)?;
        depth = depth.max(self.nodes[inner].depth + 1);
        let diagonals = (rho_max as u64).pow(w.len() as u32 - 1);
        let palette = diagonals
            .checked_mul(self.nodes[inner].palette)
            .and_then(|x| x.checked_add(type2))
            .ok_or_else(|| Error::Unsupported("palette exceeds 64 bits".into()))?;
        Ok(Node { w: shape, p, palette, depth, kind: Kind::Split { s, rho_max, radices, lookup, groups, type2, inner } })
    }

    /// Color of an edge of `H_w(p)` at node `id`, given its local coordinates.
    pub fn color(&self, mut id: NodeId, coords: &mut [Vertex]) -> u64 {
        let mut acc = 0u64;
        loop {
            let node = &self.nodes[id];
            match &node.kind {
                Kind::Base { instance } => return acc + self.instances[*instance].1.color(coords),
                Kind::Fresh => {
                    let mut rank = 0u64;
                    let mut start = 0;
                    for &x in node.w.iter() {
                        let seg = &coords[start..start + x as usize];
                        rank = rank * binomial(node.p as u64, x as u64) + lex_rank(seg, node.p);
                        start += x as usize;
                    }
                    return acc + rank;
                }
                Kind::Split { s, rho_max, radices, lookup, groups, type2, inner } => {
                    let (s, k) = (*s as Vertex, *rho_max);
                    let mut dist_rank = 0u64;
                    let mut type1 = true;
                    let mut j: SmallVec<[usize; 16]> = SmallVec::new();
                    let mut start = 0;
                    for (seg, &x) in node.w.iter().enumerate() {
                        let part = &coords[start..start + x as usize];
                        let first = part[0] / s;
                        type1 &= part.iter().all(|&v| v / s == first);
                        j.push(first as usize);
                        let mut counts = [0u8; 16];
                        for &v in part {
                            counts[(v / s) as usize] += 1;
                        }
                        dist_rank = dist_rank * radices[seg] + rank_distribution(&counts[..k], x);
                        start += x as usize;
                    }
                    for v in coords.iter_mut() {
                        *v %= s;
                    }
                    if type1 {
                        let inner_palette = self.nodes[*inner].palette;
                        acc += type2 + diagonal_index(&j, k) as u64 * inner_palette;
                        id = *inner;
                    } else {
                        let g = lookup.binary_search_by_key(&dist_rank, |e| e.0).expect("every type II pattern has a group");
                        let group = &groups[lookup[g].1 as usize];
                        acc += group.offset;
                        id = group.node;
                    }
                }
            }
        }
    }

    /// Branch path of color `c` of node `id`.
    pub fn label(&self, mut id: NodeId, mut c: u64) -> Label {
        let mut out = Vec::new();
        loop {
            let node = &self.nodes[id];
            match &node.kind {
                Kind::Base { instance } => {
                    out.push(format!("base:p={}", node.p));
                    out.extend(self.instances[*instance].1.label(c));
                    return out;
                }
                Kind::Fresh => {
                    out.push(format!("fresh:p={},edge={c}", node.p));
                    return out;
                }
                Kind::Split { rho_max, groups, type2, inner, .. } => {
                    if c < *type2 {
                        let g = groups.partition_point(|g| g.offset <= c) - 1;
                        let met: Vec<String> =
                            groups[g].met.iter().map(|(seg, j, n)| format!("{seg}.{j}:{n}")).collect();
                        out.push(format!("type2:p={},group={g},met=[{}]", node.p, met.join(" ")));
                        c -= groups[g].offset;
                        id = groups[g].node;
                    } else {
                        let inner_palette = self.nodes[*inner].palette;
                        let d = (c - type2) / inner_palette;
                        let mut k = vec![0u64; node.w.len() - 1];
                        let mut rest = d;
                        for x in k.iter_mut().rev() {
                            *x = rest % *rho_max as u64;
                            rest /= *rho_max as u64;
                        }
                        out.push(format!("type1:p={},shift={k:?}", node.p));
                        c = (c - type2) % inner_palette;
                        id = *inner;
                    }
                }
            }
        }
    }
}

/// Rank of a distribution of `total` items over `counts.len()` bins among
/// all such distributions (stars and bars, lexicographic by count vector).
pub(crate) fn rank_distribution(counts: &[u8], total: u8) -> u64 {
    let k = counts.len() as u64;
    let mut rank = 0u64;
    let mut left = total as u64;
    for (i, &c) in counts.iter().enumerate().take(counts.len().saturating_sub(1)) {
        let bins_after = k - i as u64 - 1;
        // distributions with a smaller count in bin i
        for smaller in 0..c as u64 {
            rank += binomial(left - smaller + bins_after - 1, bins_after - 1);
        }
        left -= c as u64;
    }
    rank
}

fn unrank_distributions(mut rank: u64, w: &[u8], k: usize, radices: &[u64]) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new(); w.len()];
    for seg in (0..w.len()).rev() {
        let r = rank % radices[seg];
        rank /= radices[seg];
        out[seg] = unrank_distribution(r, w[seg], k);
    }
    out
}

fn unrank_distribution(mut rank: u64, total: u8, k: usize) -> Vec<u8> {
    let mut counts = vec![0u8; k];
    let mut left = total as u64;
    for i in 0..k - 1 {
        let bins_after = (k - i - 1) as u64;
        let mut c = 0u64;
        loop {
            let block = binomial(left - c + bins_after - 1, bins_after - 1);
            if rank < block {
                break;
            }
            rank -= block;
            c += 1;
        }
        counts[i] = c as u8;
        left -= c;
    }
    counts[k - 1] = left as u8;
    counts
}

/// Labels for the raw ids of a top-level build: `offsets[i]` starts the
/// block of composition `rhos[i]`.
pub(crate) struct PlanLabels {
    pub plan: Arc<Plan>,
    pub blocks: Vec<(u64, String, NodeId)>,
}

impl LabelDecoder for PlanLabels {
    fn label(&self, raw: u64) -> Label {
        let b = self.blocks.partition_point(|(start, _, _)| *start <= raw) - 1;
        let (start, rho, node) = &self.blocks[b];
        let mut out = vec![format!("rho:{rho}")];
        out.extend(self.plan.label(*node, raw - start));
        out
    }
}
