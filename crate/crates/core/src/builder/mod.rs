//! Colorings of the complete `r`-uniform hypergraph built from a colorer of
//! the complete `r`-partite one.
//!
//! The vertex set is cut into `r` equal parts and each class `H_rho` of edges
//! with type vector `rho` is colored with its own palette. Within `H_rho`,
//! every active part is split into `rho_max` subparts: edges spread over
//! several subparts of some part (Type II) are grouped by the subparts they
//! meet and recurse on a composition of larger support; the rest (Type I)
//! recurse on `rho` at the subpart size, and their classes are combined
//! along diagonals of the subpart grid into vertex-disjoint unions.

pub mod base;
pub mod classify;
mod compact;
mod plan;

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::compositions::{linear_extension, WeakComposition};
use crate::detect::ForbiddenFamily;
use crate::error::{Error, Result};
use crate::model::{
    binomial, lex_unrank, next_combination, ColorId, Coloring, Edge, Hypergraph, Palette, Vertex,
};
use plan::{Kind, Plan, PlanLabels};

pub use base::{BaseColorer, BaseInstance, CoverBase, PartitionSource, TrivialBase};
pub use classify::{classify_edge, diagonal_combine, diagonal_index, EdgeTypeTag, SubpartSplit};
pub use compact::compact;

/// A positive rational exponent `num / den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exponent {
    pub num: u64,
    pub den: u64,
}

impl Exponent {
    pub fn new(num: u64, den: u64) -> Result<Exponent> {
        if den == 0 {
            return Err(Error::Parse("exponent with zero denominator".into()));
        }
        Ok(Exponent { num, den })
    }

    /// `r - 1 - 1/m`, the exponent of the cycle construction.
    pub fn for_cycles(r: usize, m: usize) -> Exponent {
        let m = m as u64;
        Exponent { num: (r as u64 - 1) * m - 1, den: m }
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Strict comparison with an integer.
    pub fn exceeds(&self, x: u64) -> bool {
        self.num > x * self.den
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Clone)]
pub struct BuildConfig {
    pub r: usize,
    pub n: usize,
    pub beta: Exponent,
    pub base: Arc<dyn BaseColorer>,
    /// Part sizes below this (or below `rho_max`) color every edge distinctly.
    pub recursion_floor: usize,
    /// Merge classes afterwards while they stay free of `family`.
    pub compaction: bool,
    pub family: ForbiddenFamily,
}

impl BuildConfig {
    pub fn new(r: usize, n: usize, beta: Exponent, base: Arc<dyn BaseColorer>, family: ForbiddenFamily) -> BuildConfig {
        BuildConfig { r, n, beta, base, recursion_floor: r, compaction: false, family }
    }

    fn check(&self) -> Result<()> {
        if self.r < 2 {
            return Err(Error::EmptyDomain(format!("uniformity {} < 2", self.r)));
        }
        if !self.beta.exceeds(self.r as u64 - 2) {
            return Err(Error::HypothesisViolated(format!("beta = {} must exceed r - 2 = {}", self.beta, self.r - 2)));
        }
        if self.recursion_floor < self.r {
            return Err(Error::HypothesisViolated(format!(
                "recursion floor {} below r = {}",
                self.recursion_floor, self.r
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RhoCount {
    pub rho: String,
    pub palette: u64,
    pub used: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LedgerEntry {
    pub rho: String,
    /// colors of `H_rho` at the top part size, over `p^beta`
    pub c_rho: f64,
    /// Type II colors at the top part size, over `p^beta`
    pub type2_constant: f64,
    /// largest `colors / size^beta` along the Type I chain
    pub type1_constant: f64,
    /// `C + C_1 rho_max^(support - 1 - beta) < C_1`
    pub inequality_holds: bool,
    /// `C / (1 - rho_max^(support - 1 - beta)) * p^beta`
    pub predicted_bound: f64,
    pub actual: u64,
}

/// Predicted versus actual color counts, for reporting only.
#[derive(Clone, Debug, Serialize)]
pub struct ConstantLedger {
    pub beta: f64,
    pub base_constant: f64,
    pub entries: Vec<LedgerEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BuildManifest {
    pub r: usize,
    pub n: usize,
    pub padded_n: usize,
    pub part_size: usize,
    pub beta: String,
    pub base: String,
    pub recursion_floor: usize,
    pub depth: usize,
    pub palette: u64,
    pub colors: usize,
    pub colors_before_compaction: usize,
    pub per_rho: Vec<RhoCount>,
    pub ledger: ConstantLedger,
}

pub struct BuildOutput {
    pub coloring: Coloring,
    pub manifest: BuildManifest,
}

fn shape(rho: &WeakComposition) -> Vec<u8> {
    rho.nonzero().into_iter().map(|x| x as u8).collect()
}

fn composition_key(entries: impl Iterator<Item = usize>, r: usize) -> u128 {
    entries.fold(0u128, |acc, x| acc * (r as u128 + 1) + x as u128)
}

/// Colors `K_n^(r)`, building at `n' = r * ceil(n / r)` and keeping the
/// edges on the first `n` vertices.
pub fn build_coloring(cfg: &BuildConfig) -> Result<BuildOutput> {
    cfg.check()?;
    let (r, n) = (cfg.r, cfg.n);
    let host = Arc::new(Hypergraph::complete(n, r)?);
    let p = n.div_ceil(r);
    let mut plan = Plan::new(r, cfg.recursion_floor);
    let order = linear_extension(r);
    let mut blocks = Vec::with_capacity(order.len());
    let mut keys = Vec::with_capacity(order.len());
    let mut total = 0u64;
    for rho in &order {
        let node = plan.node(&shape(rho), p, cfg.base.as_ref())?;
        keys.push((composition_key(rho.entries().iter().copied(), r), blocks.len()));
        blocks.push((total, rho.to_string(), node));
        total += plan.nodes[node].palette;
    }
    if total >= ColorId::MAX as u64 {
        return Err(Error::Unsupported(format!("{total} raw colors exceed the 32-bit color range")));
    }
    keys.sort_unstable();
    let plan = Arc::new(plan);

    let mut colors = vec![0 as ColorId; host.edge_count()];
    const CHUNK: usize = 1 << 14;
    colors.par_chunks_mut(CHUNK).enumerate().for_each(|(chunk, out)| {
        let mut e: Vec<Vertex> = vec![0; r];
        lex_unrank((chunk * CHUNK) as u64, n, r, &mut e);
        let mut coords: Vec<Vertex> = vec![0; r];
        let mut counts = [0usize; crate::model::MAX_UNIFORMITY];
        for slot in out.iter_mut() {
            counts[..r].fill(0);
            for (k, &v) in e.iter().enumerate() {
                counts[v as usize / p] += 1;
                coords[k] = v % p as Vertex;
            }
            let key = composition_key(counts[..r].iter().copied(), r);
            let b = keys[keys.binary_search_by_key(&key, |k| k.0).expect("every type vector is a composition")].1;
            let (start, _, node) = &blocks[b];
            *slot = (start + plan.color(*node, &mut coords)) as ColorId;
            next_combination(&mut e, n);
        }
    });

    let (raw, used_per_block) = flatten(&mut colors, total, &blocks);
    let per_rho = blocks
        .iter()
        .zip(&used_per_block)
        .map(|((_, rho, node), &used)| RhoCount { rho: rho.clone(), palette: plan.nodes[*node].palette, used })
        .collect();
    let depth = blocks.iter().map(|b| plan.nodes[b.2].depth).max().unwrap_or(0);
    let ledger = ledger(&plan, &blocks, &used_per_block, cfg.beta.value(), p);
    let decoder = Arc::new(PlanLabels { plan, blocks });
    let mut coloring = Coloring::new(host, colors, Palette::Decoded { raw, decoder })?;
    let before = coloring.num_colors();
    if cfg.compaction {
        coloring = compact(&coloring, &cfg.family);
    }
    let manifest = BuildManifest {
        r,
        n,
        padded_n: r * p,
        part_size: p,
        beta: cfg.beta.to_string(),
        base: cfg.base.describe(),
        recursion_floor: cfg.recursion_floor,
        depth,
        palette: total,
        colors: coloring.num_colors(),
        colors_before_compaction: before,
        per_rho,
        ledger,
    };
    Ok(BuildOutput { coloring, manifest })
}

/// Renumbers raw ids to `0..k` in increasing order; returns the raw id of
/// each final color and the number of used ids per block.
fn flatten(colors: &mut [ColorId], total: u64, blocks: &[(u64, String, usize)]) -> (Vec<u64>, Vec<u64>) {
    let mut used = vec![false; total as usize];
    for &c in colors.iter() {
        used[c as usize] = true;
    }
    let mut map = vec![ColorId::MAX; total as usize];
    let mut raw = Vec::new();
    for (i, &u) in used.iter().enumerate() {
        if u {
            map[i] = raw.len() as ColorId;
            raw.push(i as u64);
        }
    }
    colors.par_iter_mut().for_each(|c| *c = map[*c as usize]);
    let mut per_block = vec![0u64; blocks.len()];
    for &x in &raw {
        per_block[blocks.partition_point(|b| b.0 <= x) - 1] += 1;
    }
    (raw, per_block)
}

fn ledger(plan: &Plan, blocks: &[(u64, String, usize)], used: &[u64], beta: f64, p: usize) -> ConstantLedger {
    let scaled = |colors: u64, size: usize| colors as f64 / (size as f64).powf(beta);
    let base_constant = plan
        .nodes
        .iter()
        .filter(|node| matches!(node.kind, Kind::Base { .. }))
        .map(|node| scaled(node.palette, node.p))
        .fold(0.0, f64::max);
    let mut entries = Vec::new();
    for ((_, rho, id), &actual) in blocks.iter().zip(used) {
        let node = &plan.nodes[*id];
        let Kind::Split { rho_max, type2, .. } = node.kind else { continue };
        let mut type1_constant: f64 = 0.0;
        let mut cur = *id;
        loop {
            let n = &plan.nodes[cur];
            type1_constant = type1_constant.max(scaled(n.palette, n.p));
            match n.kind {
                Kind::Split { inner, .. } => cur = inner,
                _ => break,
            }
        }
        let support = node.w.len() as f64;
        let decay = (rho_max as f64).powf(support - 1.0 - beta);
        let c = scaled(type2, p);
        entries.push(LedgerEntry {
            rho: rho.clone(),
            c_rho: scaled(node.palette, p),
            type2_constant: c,
            type1_constant,
            inequality_holds: c + type1_constant * decay < type1_constant,
            predicted_bound: c / (1.0 - decay) * (p as f64).powf(beta),
            actual,
        });
    }
    ConstantLedger { beta, base_constant, entries }
}

/// Colors `H_rho^(r)(n)` on parts `[0,n), [n,2n), ...` with the same
/// recursion the complete build uses.
pub fn color_h_rho(rho: &WeakComposition, n: usize, cfg: &BuildConfig) -> Result<Coloring> {
    cfg.check()?;
    let r = rho.r();
    if r != cfg.r {
        return Err(Error::SizeMismatch(format!("{rho} for r = {}", cfg.r)));
    }
    let parts: Vec<_> = (0..r).map(|i| (i * n) as Vertex..((i + 1) * n) as Vertex).collect();
    let mut edges = Vec::new();
    let mut segs: Vec<(usize, Vec<Vertex>)> =
        rho.entries().iter().enumerate().filter(|(_, &x)| x > 0).map(|(i, &x)| (i, (0..x as Vertex).collect())).collect();
    let valid = segs.iter().all(|(_, s)| s.len() <= n);
    if valid && n > 0 {
        loop {
            let verts: Vec<Vertex> =
                segs.iter().flat_map(|(i, s)| s.iter().map(move |&x| x + (i * n) as Vertex)).collect();
            edges.push(Edge::new(&verts, r * n)?);
            // odometer over the per-part combinations, last part fastest
            let mut k = segs.len();
            let advanced = loop {
                if k == 0 {
                    break false;
                }
                k -= 1;
                if next_combination(&mut segs[k].1, n) {
                    break true;
                }
                let len = segs[k].1.len();
                segs[k].1 = (0..len as Vertex).collect();
            };
            if !advanced {
                break;
            }
        }
    }
    let host = Arc::new(Hypergraph::new(r * n, r, edges)?.with_parts(parts)?);
    let mut plan = Plan::new(r, cfg.recursion_floor);
    let node = plan.node(&shape(rho), n.max(1), cfg.base.as_ref())?;
    let total = plan.nodes[node].palette;
    let mut colors: Vec<ColorId> = host
        .edges()
        .map(|e| {
            let mut coords: Vec<Vertex> = e.vertices().iter().map(|&v| v % n as Vertex).collect();
            plan.color(node, &mut coords) as ColorId
        })
        .collect();
    let blocks = vec![(0u64, rho.to_string(), node)];
    let (raw, _) = flatten(&mut colors, total, &blocks);
    let decoder = Arc::new(PlanLabels { plan: Arc::new(plan), blocks });
    Coloring::new(host, colors, Palette::Decoded { raw, decoder })
}

/// `|E(H_rho(n))|`.
pub fn h_rho_edge_count(rho: &WeakComposition, n: usize) -> u64 {
    rho.entries().iter().map(|&x| binomial(n as u64, x as u64)).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compositions::weak_compositions;
    use crate::detect::verify_coloring_free;
    use crate::enlarge::{CoverMode, EnlargementSpec};
    use crate::model::validate_coloring;

    fn trivial(r: usize, n: usize) -> BuildConfig {
        BuildConfig::new(r, n, Exponent::for_cycles(r, 2), Arc::new(TrivialBase), ForbiddenFamily::cycles(2))
    }

    fn cover(r: usize, n: usize) -> BuildConfig {
        let base = CoverBase {
            source: PartitionSource::NativeC4Free,
            spec: EnlargementSpec::balanced(r).unwrap(),
            mode: CoverMode::Partition,
        };
        BuildConfig::new(r, n, Exponent::for_cycles(r, 2), Arc::new(base), ForbiddenFamily::cycles(2))
    }

    #[test]
    fn hypothesis_is_checked() {
        let mut cfg = trivial(3, 9);
        cfg.beta = Exponent::new(1, 1).unwrap();
        assert!(matches!(build_coloring(&cfg), Err(Error::HypothesisViolated(_))));
        let mut cfg = trivial(3, 9);
        cfg.recursion_floor = 2;
        assert!(build_coloring(&cfg).is_err());
    }

    #[test]
    fn smallest_cases() {
        let out = build_coloring(&trivial(3, 3)).unwrap();
        assert_eq!(out.coloring.num_colors(), 1);
        assert_eq!(out.manifest.per_rho.iter().filter(|c| c.used > 0).count(), 1);
        let out = build_coloring(&trivial(3, 9)).unwrap();
        assert_eq!(out.coloring.host().edge_count(), 84);
        assert!(validate_coloring(&out.coloring).is_valid());
    }

    #[test]
    fn every_size_is_a_valid_partition() {
        for r in 2..=4 {
            for n in r..=14 {
                let out = build_coloring(&cover(r, n)).unwrap();
                assert!(validate_coloring(&out.coloring).is_valid(), "r={r} n={n}");
            }
        }
    }

    #[test]
    fn small_builds_are_cycle_free() {
        for (r, n) in [(3, 12), (3, 17), (4, 16)] {
            let out = build_coloring(&cover(r, n)).unwrap();
            let report = verify_coloring_free(&out.coloring, &ForbiddenFamily::cycles(2));
            assert!(report.passed(), "r={r} n={n}: {:?}", report.failures.first());
        }
    }

    #[test]
    fn h_rho_pieces_add_up() {
        for r in 2..=4 {
            let n = 3;
            let total: u64 = weak_compositions(r).iter().map(|rho| h_rho_edge_count(rho, n)).sum();
            assert_eq!(total, binomial((r * n) as u64, r as u64));
        }
    }

    #[test]
    fn h_rho_base_case_is_the_base_colorer() {
        let cfg = cover(3, 9);
        let c = color_h_rho(&WeakComposition::ones(3), 9, &cfg).unwrap();
        assert_eq!(c.host().edge_count(), 729);
        assert_eq!(c.num_colors(), 27);
        assert_eq!(c.label(0)[1], "base:p=9");
    }

    #[test]
    fn h_rho_split_at_size_two() {
        // rho = (2,1,0), n = 2: one type I subpart pair per selection, size 1
        let mut cfg = trivial(3, 6);
        cfg.recursion_floor = 3;
        let rho = WeakComposition::new(vec![2, 1, 0]).unwrap();
        let c = color_h_rho(&rho, 2, &cfg).unwrap();
        assert_eq!(c.host().edge_count(), 2);
        assert!(validate_coloring(&c).is_valid());
        let c = color_h_rho(&WeakComposition::new(vec![3, 0, 0]).unwrap(), 1, &cfg).unwrap();
        assert_eq!(c.host().edge_count(), 0);
    }

    #[test]
    fn h_rho_colorings_are_free() {
        let cfg = cover(3, 24);
        for rho in weak_compositions(3) {
            let c = color_h_rho(&rho, 8, &cfg).unwrap();
            assert!(validate_coloring(&c).is_valid());
            assert!(verify_coloring_free(&c, &ForbiddenFamily::cycles(2)).passed(), "{rho}");
        }
    }

    #[test]
    fn labels_are_distinct() {
        let out = build_coloring(&cover(3, 12)).unwrap();
        let mut labels: Vec<_> = (0..out.coloring.num_colors() as ColorId).map(|c| out.coloring.label(c)).collect();
        assert!(labels.iter().all(|l| l[0].starts_with("rho:")));
        labels.sort();
        labels.dedup();
        assert_eq!(labels.len(), out.coloring.num_colors());
    }

    #[test]
    fn compaction_never_adds_colors() {
        let mut cfg = cover(3, 12);
        let plain = build_coloring(&cfg).unwrap();
        cfg.compaction = true;
        let packed = build_coloring(&cfg).unwrap();
        assert!(packed.coloring.num_colors() <= plain.coloring.num_colors());
        assert!(validate_coloring(&packed.coloring).is_valid());
        assert!(verify_coloring_free(&packed.coloring, &cfg.family).passed());
    }
}
