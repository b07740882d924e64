//! Versioned JSON documents for hypergraphs, colorings and bipartite partitions.
//!
//! Writers emit a canonical form (edges in lexicographic order, fixed field
//! order, no insignificant whitespace beyond one newline per field), so
//! write → read → write is byte-identical.

use std::io::{BufRead, Write};
use std::ops::Range;
use std::sync::Arc;

use serde::Deserialize;

use crate::bipartite::BipartitePartition;
use crate::error::{Error, Result};
use crate::model::{
    canonical_edge, BipartiteGraph, ColorId, Coloring, Edge, Hypergraph, Palette, Vertex, UNCOLORED,
};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HypergraphDoc {
    version: u32,
    n: usize,
    r: usize,
    parts: Option<Vec<[Vertex; 2]>>,
    edges: Vec<Vec<u64>>,
    #[serde(default)]
    colors: Option<Vec<Option<ColorId>>>,
    #[serde(default)]
    palette: Option<Vec<Vec<String>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PartitionDoc {
    version: u32,
    #[serde(rename = "nA")]
    n_a: usize,
    #[serde(rename = "nB")]
    n_b: usize,
    classes: Vec<Vec<[Vertex; 2]>>,
}

fn write_header<W: Write>(w: &mut W, h: &Hypergraph) -> Result<()> {
    write!(w, "{{\"version\":{FORMAT_VERSION},\"n\":{},\"r\":{},\"parts\":", h.n(), h.r())?;
    match h.parts() {
        None => write!(w, "null")?,
        Some(parts) => {
            write!(w, "[")?;
            for (i, p) in parts.iter().enumerate() {
                if i > 0 {
                    write!(w, ",")?;
                }
                write!(w, "[{},{}]", p.start, p.end)?;
            }
            write!(w, "]")?;
        }
    }
    write!(w, ",\n\"edges\":[")?;
    for (i, e) in h.edges().enumerate() {
        if i > 0 {
            write!(w, ",")?;
        }
        write_edge(w, &e)?;
    }
    write!(w, "]")?;
    Ok(())
}

fn write_edge<W: Write>(w: &mut W, e: &Edge) -> Result<()> {
    write!(w, "[")?;
    for (j, v) in e.vertices().iter().enumerate() {
        if j > 0 {
            write!(w, ",")?;
        }
        write!(w, "{v}")?;
    }
    write!(w, "]")?;
    Ok(())
}

pub fn write_hypergraph<W: Write>(w: &mut W, h: &Hypergraph) -> Result<()> {
    write_header(w, h)?;
    writeln!(w, "}}")?;
    Ok(())
}

pub fn write_coloring<W: Write>(w: &mut W, c: &Coloring) -> Result<()> {
    write_header(w, c.host())?;
    write!(w, ",\n\"colors\":[")?;
    for (i, &col) in c.colors().iter().enumerate() {
        if i > 0 {
            write!(w, ",")?;
        }
        if col == UNCOLORED {
            write!(w, "null")?;
        } else {
            write!(w, "{col}")?;
        }
    }
    write!(w, "],\n\"palette\":[")?;
    for col in 0..c.num_colors() as ColorId {
        if col > 0 {
            write!(w, ",")?;
        }
        serde_json::to_writer(&mut *w, &c.label(col))?;
    }
    writeln!(w, "]}}")?;
    Ok(())
}

fn parse_host(doc: &HypergraphDoc) -> Result<Hypergraph> {
    if doc.version != FORMAT_VERSION {
        return Err(Error::Parse(format!("unsupported version {}", doc.version)));
    }
    let edges = doc
        .edges
        .iter()
        .map(|e| canonical_edge(e, doc.n))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::Parse(e.to_string()))?;
    let mut h = Hypergraph::new(doc.n, doc.r, edges).map_err(|e| Error::Parse(e.to_string()))?;
    if let Some(parts) = &doc.parts {
        let ranges: Vec<Range<Vertex>> = parts.iter().map(|p| p[0]..p[1]).collect();
        h = h.with_parts(ranges).map_err(|e| Error::Parse(e.to_string()))?;
    }
    Ok(h)
}

pub fn read_hypergraph<R: BufRead>(r: R) -> Result<Hypergraph> {
    let doc: HypergraphDoc = serde_json::from_reader(r)?;
    parse_host(&doc)
}

pub fn read_coloring<R: BufRead>(r: R) -> Result<Coloring> {
    let doc: HypergraphDoc = serde_json::from_reader(r)?;
    let host = parse_host(&doc)?;
    let colors = doc.colors.as_ref().ok_or_else(|| Error::Parse("missing colors".into()))?;
    let palette = doc.palette.clone().ok_or_else(|| Error::Parse("missing palette".into()))?;
    if colors.len() != doc.edges.len() {
        return Err(Error::Parse(format!("{} colors for {} edges", colors.len(), doc.edges.len())));
    }
    // The file may list edges in any order; carry colors along with the canonical sort.
    let mut pairs = Vec::with_capacity(colors.len());
    for (e, c) in doc.edges.iter().zip(colors) {
        let edge = canonical_edge(e, doc.n).map_err(|e| Error::Parse(e.to_string()))?;
        pairs.push((edge, c.unwrap_or(UNCOLORED)));
    }
    Coloring::from_pairs(Arc::new(host), pairs, Palette::Labels(palette))
}

pub fn write_partition<W: Write>(w: &mut W, p: &BipartitePartition) -> Result<()> {
    write!(w, "{{\"version\":{FORMAT_VERSION},\"nA\":{},\"nB\":{},\n\"classes\":[", p.n_a(), p.n_b())?;
    for (i, class) in p.classes().iter().enumerate() {
        if i > 0 {
            write!(w, ",\n")?;
        }
        write!(w, "[")?;
        for (j, (a, b)) in class.edges().iter().enumerate() {
            if j > 0 {
                write!(w, ",")?;
            }
            write!(w, "[{a},{b}]")?;
        }
        write!(w, "]")?;
    }
    writeln!(w, "]}}")?;
    Ok(())
}

/// Parses a partition document into its classes without checking coverage.
pub fn read_partition_classes<R: BufRead>(r: R) -> Result<(usize, usize, Vec<BipartiteGraph>)> {
    let doc: PartitionDoc = serde_json::from_reader(r)?;
    if doc.version != FORMAT_VERSION {
        return Err(Error::Parse(format!("unsupported version {}", doc.version)));
    }
    let classes = doc
        .classes
        .into_iter()
        .map(|pairs| {
            BipartiteGraph::new(doc.n_a, doc.n_b, pairs.into_iter().map(|[a, b]| (a, b)).collect())
                .map_err(|e| Error::Parse(e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((doc.n_a, doc.n_b, classes))
}

pub fn to_bytes(f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Hypergraph;
    use proptest::prelude::*;

    fn sample_coloring() -> Coloring {
        let host = Arc::new(Hypergraph::complete(5, 3).unwrap());
        let colors = (0..10).map(|i| (i % 4) as ColorId).collect();
        let palette = Palette::Labels((0..4).map(|i| vec!["base".to_string(), format!("c{i}")]).collect());
        Coloring::new(host, colors, palette).unwrap()
    }

    #[test]
    fn coloring_round_trip_is_byte_identical() {
        let c = sample_coloring();
        let first = to_bytes(|w| write_coloring(w, &c)).unwrap();
        let back = read_coloring(&first[..]).unwrap();
        let second = to_bytes(|w| write_coloring(w, &back)).unwrap();
        assert_eq!(first, second);
        assert!(!back.host().is_complete());
        assert_eq!(back.colors(), c.colors());
    }

    #[test]
    fn unsorted_edges_are_canonicalized() {
        let doc = r#"{"version":1,"n":4,"r":3,"parts":null,"edges":[[3,2,1],[0,1,2]],"colors":[1,0],"palette":[["a"],["b"]]}"#;
        let c = read_coloring(doc.as_bytes()).unwrap();
        assert_eq!(c.host().edge(0).vertices(), &[0, 1, 2]);
        assert_eq!(c.colors(), &[0, 1]);
    }

    #[test]
    fn malformed_documents_fail() {
        assert!(read_coloring(&b"{\"version\":2}"[..]).is_err());
        let dup = r#"{"version":1,"n":4,"r":3,"parts":null,"edges":[[0,1,2],[2,1,0]],"colors":[0,0],"palette":[["a"]]}"#;
        assert!(matches!(read_coloring(dup.as_bytes()), Err(Error::Parse(_))));
        let wrong_version = r#"{"version":9,"n":4,"r":3,"parts":null,"edges":[]}"#;
        assert!(matches!(read_hypergraph(wrong_version.as_bytes()), Err(Error::Parse(_))));
    }

    proptest! {
        #[test]
        fn hypergraph_round_trip(n in 3usize..9, raw in proptest::collection::vec(proptest::collection::vec(0u64..9, 3), 0..12), with_parts in any::<bool>()) {
            let edges: Vec<Edge> = raw.iter().filter_map(|e| canonical_edge(e, n).ok()).collect();
            let mut edges = edges;
            edges.sort();
            edges.dedup();
            let mut h = Hypergraph::new(n, 3, edges).unwrap();
            if with_parts {
                let k = n as Vertex / 3;
                h = h.with_parts(vec![0..k, k..2 * k, 2 * k..3 * k]).unwrap();
            }
            let first = to_bytes(|w| write_hypergraph(w, &h)).unwrap();
            let back = read_hypergraph(&first[..]).unwrap();
            prop_assert_eq!(&back, &h);
            let second = to_bytes(|w| write_hypergraph(w, &back)).unwrap();
            prop_assert_eq!(first, second);
        }
    }
}
