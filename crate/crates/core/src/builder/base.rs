//! Colorers of the complete `r`-partite `r`-uniform hypergraph, used at the
//! bottom of the recursion.

use crate::bipartite::{c4free_partition, prime_for_side, BipartitePartition};
use crate::enlarge::{CoverMode, CoverTable, EnlargementSpec};
use crate::error::{Error, Result};
use crate::model::{Label, Vertex};

/// Produces a colorer for `K^(r)_{p,...,p}` at a given part size.
pub trait BaseColorer: Send + Sync {
    fn instantiate(&self, r: usize, p: usize) -> Result<Box<dyn BaseInstance>>;
    /// Short description recorded in manifests.
    fn describe(&self) -> String;
}

/// A colorer of one `K^(r)_{p,...,p}`. Colors are `0..palette_size()`.
pub trait BaseInstance: Send + Sync {
    fn palette_size(&self) -> u64;
    /// Color of the edge whose vertex in part `k` has local index `coords[k]`.
    fn color(&self, coords: &[Vertex]) -> u64;
    fn label(&self, color: u64) -> Label;
}

/// Every edge gets its own color.
#[derive(Clone, Copy, Debug, Default)]
pub struct TrivialBase;

struct TrivialInstance {
    p: u64,
    r: u32,
}

impl BaseColorer for TrivialBase {
    fn instantiate(&self, r: usize, p: usize) -> Result<Box<dyn BaseInstance>> {
        Ok(Box::new(TrivialInstance { p: p as u64, r: r as u32 }))
    }

    fn describe(&self) -> String {
        "trivial".into()
    }
}

impl BaseInstance for TrivialInstance {
    fn palette_size(&self) -> u64 {
        self.p.pow(self.r)
    }

    fn color(&self, coords: &[Vertex]) -> u64 {
        coords.iter().fold(0, |acc, &x| acc * self.p + x as u64)
    }

    fn label(&self, color: u64) -> Label {
        vec![format!("edge:{color}")]
    }
}

#[derive(Clone, Debug)]
pub enum PartitionSource {
    /// The finite-field partition for the smallest prime `q` with `q^2 >= p`.
    NativeC4Free,
    /// An imported partition of `K_{N,N}`, restricted to each requested size.
    Imported(BipartitePartition),
}

/// Shifted copies of the classes of a bipartite partition, enlarged by `spec`.
#[derive(Clone, Debug)]
pub struct CoverBase {
    pub source: PartitionSource,
    pub spec: EnlargementSpec,
    pub mode: CoverMode,
}

struct CoverInstance(CoverTable);

impl BaseColorer for CoverBase {
    fn instantiate(&self, r: usize, p: usize) -> Result<Box<dyn BaseInstance>> {
        if self.spec.r() != r {
            return Err(Error::SizeMismatch(format!("enlargement of uniformity {} for r = {r}", self.spec.r())));
        }
        let partition = match &self.source {
            PartitionSource::NativeC4Free => c4free_partition(prime_for_side(p))?.restrict(p),
            PartitionSource::Imported(full) => {
                if full.n_a() < p || full.n_b() < p {
                    return Err(Error::SizeMismatch(format!(
                        "imported partition has sides {}x{}, part size {p} requested",
                        full.n_a(),
                        full.n_b()
                    )));
                }
                full.restrict(p)
            }
        };
        Ok(Box::new(CoverInstance(CoverTable::new(&partition, self.spec, self.mode)?)))
    }

    fn describe(&self) -> String {
        let source = match &self.source {
            PartitionSource::NativeC4Free => "native-c4free".to_string(),
            PartitionSource::Imported(p) => format!("imported:{}x{}:{}", p.n_a(), p.n_b(), p.len()),
        };
        format!("cover(s={},t={},{source})", self.spec.s(), self.spec.t())
    }
}

impl BaseInstance for CoverInstance {
    fn palette_size(&self) -> u64 {
        self.0.palette_size()
    }

    fn color(&self, coords: &[Vertex]) -> u64 {
        self.0.color(coords)
    }

    fn label(&self, color: u64) -> Label {
        self.0.label(color)
    }
}
