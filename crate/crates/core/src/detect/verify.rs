use std::fmt;
use std::io::Write;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::detect::{contains_berge_biclique, contains_berge_cycle};
use crate::error::{Error, Result};
use crate::model::{ColorId, Coloring, Hypergraph, Pattern, Witness};

/// The patterns no color class may contain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForbiddenFamily {
    patterns: Vec<Pattern>,
}

impl ForbiddenFamily {
    pub fn new(patterns: Vec<Pattern>) -> Result<ForbiddenFamily> {
        if patterns.is_empty() {
            return Err(Error::EmptyDomain("forbidden family has no patterns".into()));
        }
        Ok(ForbiddenFamily { patterns })
    }

    /// `{cycle(2m), cycle(2m+1)}`.
    pub fn cycles(m: usize) -> ForbiddenFamily {
        ForbiddenFamily { patterns: vec![Pattern::Cycle(2 * m), Pattern::Cycle(2 * m + 1)] }
    }

    /// Parses a comma list such as `cycle:4,cycle:5` or `biclique:2,2`.
    pub fn parse(s: &str) -> Result<ForbiddenFamily> {
        let mut patterns = Vec::new();
        let mut tokens = s.split(',').map(str::trim).peekable();
        while let Some(tok) = tokens.next() {
            if tok.is_empty() {
                continue;
            }
            if tok.starts_with("biclique:") {
                // the second size follows the next comma
                let b = tokens.next().ok_or_else(|| Error::Parse(format!("pattern {tok:?} lacks its second size")))?;
                patterns.push(Pattern::parse(&format!("{tok},{b}"))?);
            } else {
                patterns.push(Pattern::parse(tok)?);
            }
        }
        ForbiddenFamily::new(patterns)
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    /// First pattern contained in `h`, with its witness.
    pub fn find(&self, h: &Hypergraph) -> Option<Witness> {
        self.patterns.iter().find_map(|p| detect(h, *p))
    }

    /// Fewest edges any pattern of the family needs.
    pub fn min_edges(&self) -> usize {
        self.patterns.iter().map(Pattern::edge_count).min().unwrap_or(0)
    }
}

impl fmt::Display for ForbiddenFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.patterns.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

pub fn detect(h: &Hypergraph, p: Pattern) -> Option<Witness> {
    match p {
        Pattern::Cycle(g) => contains_berge_cycle(h, g),
        Pattern::Biclique(a, b) => contains_berge_biclique(h, a, b),
    }
}

#[derive(Clone, Debug)]
pub struct ClassFailure {
    pub color: ColorId,
    pub witnesses: Vec<Witness>,
}

#[derive(Clone, Debug)]
pub struct FreenessReport {
    pub family: ForbiddenFamily,
    /// `status[c]` is true iff color class `c` contains no pattern.
    pub status: Vec<bool>,
    pub failures: Vec<ClassFailure>,
    pub elapsed: Duration,
}

impl FreenessReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn witness_count(&self) -> usize {
        self.failures.iter().map(|f| f.witnesses.len()).sum()
    }
}

/// Runs every detector of `fam` on every color class of `c`.
pub fn verify_coloring_free(c: &Coloring, fam: &ForbiddenFamily) -> FreenessReport {
    let start = Instant::now();
    let index = c.class_index();
    let min_edges = fam.min_edges();
    let results: Vec<Vec<Witness>> = (0..index.len() as ColorId)
        .into_par_iter()
        .map(|color| {
            if index.class(color).len() < min_edges {
                return Vec::new();
            }
            let h = c.class_hypergraph(&index, color);
            fam.patterns.iter().filter_map(|p| detect(&h, *p)).collect()
        })
        .collect();
    let status = results.iter().map(Vec::is_empty).collect();
    let failures = results
        .into_iter()
        .enumerate()
        .filter(|(_, w)| !w.is_empty())
        .map(|(color, witnesses)| ClassFailure { color: color as ColorId, witnesses })
        .collect();
    FreenessReport { family: fam.clone(), status, failures, elapsed: start.elapsed() }
}

#[derive(Serialize)]
struct ReportDoc {
    version: u32,
    family: String,
    pass: bool,
    classes: usize,
    /// one character per class in color order: `.` passed, `F` failed
    status: String,
    failures: Vec<FailureDoc>,
    elapsed_ms: u128,
}

#[derive(Serialize)]
struct FailureDoc {
    color: ColorId,
    label: Vec<String>,
    witnesses: Vec<WitnessDoc>,
}

#[derive(Serialize)]
struct WitnessDoc {
    pattern: String,
    core: Vec<u32>,
    edges: Vec<Vec<u32>>,
}

/// Writes the report as a JSON document.
pub fn write_report<W: Write>(w: &mut W, report: &FreenessReport, c: &Coloring) -> Result<()> {
    let doc = ReportDoc {
        version: crate::io::FORMAT_VERSION,
        family: report.family.to_string(),
        pass: report.passed(),
        classes: report.status.len(),
        status: report.status.iter().map(|&ok| if ok { '.' } else { 'F' }).collect(),
        failures: report
            .failures
            .iter()
            .map(|f| FailureDoc {
                color: f.color,
                label: c.label(f.color),
                witnesses: f
                    .witnesses
                    .iter()
                    .map(|w| WitnessDoc {
                        pattern: w.kind.to_string(),
                        core: w.core.clone(),
                        edges: w.edge_map.iter().map(|(_, e)| e.vertices().to_vec()).collect(),
                    })
                    .collect(),
            })
            .collect(),
        elapsed_ms: report.elapsed.as_millis(),
    };
    serde_json::to_writer_pretty(&mut *w, &doc)?;
    writeln!(w)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::model::{Edge, Palette};

    #[test]
    fn family_parsing() {
        let f = ForbiddenFamily::parse("cycle:4,cycle:5").unwrap();
        assert_eq!(f.patterns(), &[Pattern::Cycle(4), Pattern::Cycle(5)]);
        let f = ForbiddenFamily::parse("biclique:2,2, cycle:3").unwrap();
        assert_eq!(f.patterns(), &[Pattern::Biclique(2, 2), Pattern::Cycle(3)]);
        assert_eq!(f.to_string(), "biclique:2,2,cycle:3");
        assert!(ForbiddenFamily::parse("").is_err());
        assert!(ForbiddenFamily::parse("biclique:2").is_err());
        assert!(ForbiddenFamily::parse("path:3").is_err());
    }

    #[test]
    fn empty_coloring_passes() {
        let host = Arc::new(Hypergraph::new(4, 3, vec![]).unwrap());
        let c = Coloring::new(host, vec![], Palette::Labels(vec![])).unwrap();
        let report = verify_coloring_free(&c, &ForbiddenFamily::cycles(2));
        assert!(report.passed());
        assert!(report.status.is_empty());
    }

    #[test]
    fn planted_square_fails() {
        let edges: Vec<Edge> = [[1, 2, 5], [2, 3, 6], [3, 4, 7], [1, 4, 8], [0, 5, 6]]
            .iter()
            .map(|e| Edge::new(e, 9).unwrap())
            .collect();
        let host = Arc::new(Hypergraph::new(9, 3, edges).unwrap());
        let labels = Palette::Labels(vec![vec!["a".into()], vec!["b".into()]]);
        // host order: (0,5,6) (1,2,5) (1,4,8) (2,3,6) (3,4,7)
        let c = Coloring::new(host, vec![1, 0, 0, 0, 0], labels).unwrap();
        let report = verify_coloring_free(&c, &ForbiddenFamily::cycles(2));
        assert!(!report.passed());
        assert_eq!(report.status, vec![false, true]);
        let w = &report.failures[0].witnesses[0];
        assert_eq!(w.core, vec![1, 2, 3, 4]);
        w.validate(c.host()).unwrap();
        let mut out = Vec::new();
        write_report(&mut out, &report, &c).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("\"pass\": false"));
    }
}
