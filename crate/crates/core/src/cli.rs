//! The `berge-ramsey` command line: construct, verify, stats, partition.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::bipartite::{c4free_partition, import_partition, verify_girth, BipartitePartition};
use crate::builder::{build_coloring, BuildConfig, BuildManifest, CoverBase, Exponent, PartitionSource};
use crate::detect::{contains_berge_biclique, verify_coloring_free, write_report, ForbiddenFamily};
use crate::enlarge::{CoverMode, EnlargementSpec};
use crate::error::{Error, Result};
use crate::io::{read_coloring, to_bytes, write_coloring, write_partition};
use crate::model::{Edge, Hypergraph, Pattern};

#[derive(Parser, Debug)]
#[command(name = "berge-ramsey", version, about = "Berge-cycle-free colorings of complete uniform hypergraphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a coloring of K_n^(r) from a girth-certified bipartite partition.
    Construct(ConstructArgs),
    /// Check every color class of a coloring against a forbidden family.
    Verify(VerifyArgs),
    /// Summarize colorings, one row per file.
    Stats(StatsArgs),
    /// Write a certified bipartite partition of K_{n,n}.
    Partition(PartitionArgs),
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["q", "partition"])))]
pub struct ConstructArgs {
    #[arg(long)]
    pub r: usize,
    /// Forbid Berge cycles of length 2m and 2m+1.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Prime for the native partition (m = 2 only); parts have q^2 vertices.
    #[arg(long)]
    pub q: Option<u64>,
    /// Partition file to use instead of the native construction.
    #[arg(long)]
    pub partition: Option<PathBuf>,
    /// Family to certify against; defaults to cycle:2m,cycle:2m+1.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub compact: bool,
    /// Run the exact detectors on every color class of the result.
    #[arg(long)]
    pub certify: bool,
    /// Permit r >= 4m - 1, where the balanced split no longer keeps s, t < 2m.
    #[arg(long)]
    pub allow_large_r: bool,
    #[arg(long, requires = "t")]
    pub s: Option<usize>,
    #[arg(long, requires = "s")]
    pub t: Option<usize>,
    #[arg(long)]
    pub floor: Option<usize>,
    /// Output directory for coloring.json, manifest.json and report.json.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub coloring: PathBuf,
    #[arg(long, default_value = "cycle:4,cycle:5")]
    pub family: String,
    /// Where to write the JSON report.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["q", "import"])))]
pub struct PartitionArgs {
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub import: Option<PathBuf>,
    /// Required girth of every class.
    #[arg(long, default_value_t = 6)]
    pub girth: usize,
    #[arg(long)]
    pub out: PathBuf,
    /// Certification report; defaults to the output path with `.report.json`.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

/// Process exit status: certification outcome, or a failure before it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Certified,
    Rejected,
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    parameters: BTreeMap<String, String>,
    inputs: Vec<String>,
    outputs: Vec<String>,
    wall_time_ms: u128,
    stages: BTreeMap<String, u64>,
    certification: String,
    build: Option<BuildManifest>,
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(a),
        Command::Stats(a) => stats(a),
        Command::Partition(a) => partition(a),
    }
}

/// Checks a bipartite class against every pattern of `fam`: cycles by girth,
/// bicliques by direct search on the graph.
fn certify_class(class: &crate::model::BipartiteGraph, fam: &ForbiddenFamily) -> Result<bool> {
    let longest = fam.patterns().iter().filter_map(|p| if let Pattern::Cycle(g) = p { Some(*g) } else { None }).max();
    if let Some(g) = longest {
        if !verify_girth(class, g + 1).ok {
            return Ok(false);
        }
    }
    let bicliques: Vec<(usize, usize)> =
        fam.patterns().iter().filter_map(|p| if let Pattern::Biclique(a, b) = p { Some((*a, *b)) } else { None }).collect();
    if !bicliques.is_empty() {
        let n = class.n_a() + class.n_b();
        let edges = class
            .edges()
            .iter()
            .map(|&(a, b)| Edge::new(&[a, class.n_a() as u32 + b], n))
            .collect::<Result<Vec<_>>>()?;
        let g = Hypergraph::new(n, 2, edges)?;
        for (a, b) in bicliques {
            if contains_berge_biclique(&g, a, b).is_some() || contains_berge_biclique(&g, b, a).is_some() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn construct(a: ConstructArgs) -> Result<Outcome> {
    let start = Instant::now();
    if a.m < 2 {
        return Err(Error::HypothesisViolated(format!("m = {} must be at least 2", a.m)));
    }
    if a.r < 2 {
        return Err(Error::EmptyDomain(format!("uniformity {} < 2", a.r)));
    }
    if a.r >= 4 * a.m - 1 && !a.allow_large_r {
        return Err(Error::HypothesisViolated(format!(
            "r = {} needs r < 4m - 1 = {} (pass --allow-large-r to override)",
            a.r,
            4 * a.m - 1
        )));
    }
    let spec = match (a.s, a.t) {
        (Some(s), Some(t)) if s + t == a.r => EnlargementSpec::new(s, t)?,
        (Some(s), Some(t)) => return Err(Error::SizeMismatch(format!("s + t = {} but r = {}", s + t, a.r))),
        _ => EnlargementSpec::balanced(a.r)?,
    };
    let family = match &a.family {
        Some(f) => ForbiddenFamily::parse(f)?,
        None => ForbiddenFamily::cycles(a.m),
    };
    let mut inputs = Vec::new();
    let (top, source) = match (&a.q, &a.partition) {
        (Some(q), None) => {
            if a.m != 2 {
                return Err(Error::Unsupported(format!(
                    "native partitions have girth 6 and serve m = 2 only; supply --partition for m = {}",
                    a.m
                )));
            }
            (c4free_partition(*q)?, PartitionSource::NativeC4Free)
        }
        (None, Some(path)) => {
            inputs.push(path.display().to_string());
            let p = import_partition(BufReader::new(File::open(path)?))?;
            if p.n_a() != p.n_b() {
                return Err(Error::SizeMismatch(format!("partition sides {}x{}", p.n_a(), p.n_b())));
            }
            for (i, class) in p.classes().iter().enumerate() {
                if !certify_class(class, &family)? {
                    return Err(Error::CertificationRequired(format!(
                        "class {i} of {} contains a forbidden pattern",
                        path.display()
                    )));
                }
            }
            (p.clone(), PartitionSource::Imported(p))
        }
        _ => unreachable!("clap enforces exactly one source"),
    };
    let side = top.n_a();
    let n = a.r * side;
    let base = CoverBase { source, spec, mode: CoverMode::Partition };
    let base_colors = top.classes().iter().filter(|c| !c.edges().is_empty()).count() as u64
        * (side as u64).pow(a.r as u32 - 2);
    let mut cfg = BuildConfig::new(a.r, n, Exponent::for_cycles(a.r, a.m), Arc::new(base), family.clone());
    cfg.compaction = a.compact;
    if let Some(f) = a.floor {
        cfg.recursion_floor = f;
    }
    let built = build_coloring(&cfg)?;

    std::fs::create_dir_all(&a.out)?;
    let coloring_path = a.out.join("coloring.json");
    let manifest_path = a.out.join("manifest.json");
    write_atomic(&coloring_path, &to_bytes(|w| write_coloring(w, &built.coloring))?)?;
    let mut outputs = vec![coloring_path.display().to_string(), manifest_path.display().to_string()];

    let mut outcome = Outcome::Certified;
    let certification = if a.certify {
        let report = verify_coloring_free(&built.coloring, &family);
        let report_path = a.out.join("report.json");
        write_atomic(&report_path, &to_bytes(|w| write_report(w, &report, &built.coloring))?)?;
        outputs.push(report_path.display().to_string());
        if report.passed() {
            "passed".to_string()
        } else {
            outcome = Outcome::Rejected;
            format!("failed: {} classes with witnesses", report.failures.len())
        }
    } else {
        "not requested".to_string()
    };

    let mut parameters = BTreeMap::new();
    parameters.insert("r".into(), a.r.to_string());
    parameters.insert("m".into(), a.m.to_string());
    parameters.insert("n".into(), n.to_string());
    if let Some(q) = a.q {
        parameters.insert("q".into(), q.to_string());
    }
    parameters.insert("s".into(), spec.s().to_string());
    parameters.insert("t".into(), spec.t().to_string());
    parameters.insert("family".into(), family.to_string());
    parameters.insert("compact".into(), a.compact.to_string());
    parameters.insert("floor".into(), cfg.recursion_floor.to_string());
    let mut stages = BTreeMap::new();
    stages.insert("base_multipartite_colors".into(), base_colors);
    stages.insert("built_colors".into(), built.manifest.colors_before_compaction as u64);
    stages.insert("final_colors".into(), built.coloring.num_colors() as u64);
    let manifest = RunManifest {
        command: "construct".into(),
        parameters,
        inputs,
        outputs,
        wall_time_ms: start.elapsed().as_millis(),
        stages,
        certification: certification.clone(),
        build: Some(built.manifest),
    };
    write_atomic(&manifest_path, &serde_json::to_vec_pretty(&manifest)?)?;
    println!(
        "K_{n}^({}) colored with {} colors; certification {certification}",
        a.r,
        built.coloring.num_colors()
    );
    Ok(outcome)
}

fn verify(a: VerifyArgs) -> Result<Outcome> {
    let family = ForbiddenFamily::parse(&a.family)?;
    let coloring = read_coloring(BufReader::new(File::open(&a.coloring)?))?;
    let report = verify_coloring_free(&coloring, &family);
    let bytes = to_bytes(|w| write_report(w, &report, &coloring))?;
    match &a.report {
        Some(path) => write_atomic(path, &bytes)?,
        None => std::io::stdout().write_all(&bytes)?,
    }
    if report.passed() {
        eprintln!("pass: {} classes free of {family}", report.status.len());
        Ok(Outcome::Certified)
    } else {
        let first = &report.failures[0];
        let w = &first.witnesses[0];
        eprintln!(
            "fail: {} of {} classes contain a pattern; color {} has {} on core {:?}",
            report.failures.len(),
            report.status.len(),
            first.color,
            w.kind,
            w.core
        );
        Ok(Outcome::Rejected)
    }
}

#[derive(serde::Deserialize)]
struct ManifestBeta {
    build: Option<BetaOnly>,
}

#[derive(serde::Deserialize)]
struct BetaOnly {
    beta: String,
}

fn manifest_beta(coloring: &Path) -> Option<f64> {
    let path = coloring.with_file_name("manifest.json");
    let doc: ManifestBeta = serde_json::from_reader(BufReader::new(File::open(path).ok()?)).ok()?;
    let (num, den) = doc.build?.beta.split_once('/').map(|(a, b)| (a.to_string(), b.to_string()))?;
    Some(num.parse::<f64>().ok()? / den.parse::<f64>().ok()?)
}

fn stats(a: StatsArgs) -> Result<Outcome> {
    let mut rows = vec![["file", "n", "r", "colors", "max_class", "beta", "colors/n^beta"].map(String::from).to_vec()];
    for path in &a.files {
        let c = read_coloring(BufReader::new(File::open(path)?))?;
        let beta = manifest_beta(path);
        if beta.is_none() {
            eprintln!("warning: no manifest with beta next to {}", path.display());
        }
        let n = c.host().n();
        rows.push(vec![
            path.display().to_string(),
            n.to_string(),
            c.host().r().to_string(),
            c.num_colors().to_string(),
            c.max_class_size().to_string(),
            beta.map(|b| format!("{b:.4}")).unwrap_or_default(),
            beta.map(|b| format!("{:.4}", c.num_colors() as f64 / (n as f64).powf(b))).unwrap_or_default(),
        ]);
    }
    let widths: Vec<usize> = (0..rows[0].len()).map(|i| rows.iter().map(|r| r[i].len()).max().unwrap()).collect();
    for row in rows {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        println!("{}", cells.join("  ").trim_end());
    }
    Ok(Outcome::Certified)
}

#[derive(Serialize)]
struct PartitionReportDoc {
    version: u32,
    source: String,
    girth: usize,
    n_a: usize,
    n_b: usize,
    classes: usize,
    is_partition: bool,
    certified: bool,
    failing_classes: Vec<ClassGirth>,
}

#[derive(Serialize)]
struct ClassGirth {
    class: usize,
    girth: Option<usize>,
    cycle: Option<Vec<u32>>,
}

fn girth_sweep(p: &BipartitePartition, gmin: usize) -> Vec<ClassGirth> {
    p.classes()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| {
            let rep = verify_girth(c, gmin);
            (!rep.ok).then_some(ClassGirth { class: i, girth: rep.girth, cycle: rep.witness })
        })
        .collect()
}

fn partition(a: PartitionArgs) -> Result<Outcome> {
    let (p, source) = match (&a.q, &a.import) {
        (Some(q), None) => (c4free_partition(*q)?, format!("native:q={q}")),
        (None, Some(path)) => {
            (import_partition(BufReader::new(File::open(path)?))?, format!("import:{}", path.display()))
        }
        _ => unreachable!("clap enforces exactly one source"),
    };
    let failing = girth_sweep(&p, a.girth);
    let certified = failing.is_empty();
    if !certified && a.q.is_some() {
        return Err(Error::ConstructionInvalid(format!(
            "native classes have girth 6; {} classes miss girth {}",
            failing.len(),
            a.girth
        )));
    }
    let doc = PartitionReportDoc {
        version: crate::io::FORMAT_VERSION,
        source,
        girth: a.girth,
        n_a: p.n_a(),
        n_b: p.n_b(),
        classes: p.len(),
        is_partition: p.is_partition(),
        certified,
        failing_classes: failing,
    };
    write_atomic(&a.out, &to_bytes(|w| write_partition(w, &p))?)?;
    let report_path = a.report.clone().unwrap_or_else(|| a.out.with_extension("report.json"));
    write_atomic(&report_path, &serde_json::to_vec_pretty(&doc)?)?;
    println!(
        "{} classes on {}x{}; girth {} {}",
        p.len(),
        p.n_a(),
        p.n_b(),
        a.girth,
        if certified { "certified" } else { "NOT certified" }
    );
    Ok(if certified { Outcome::Certified } else { Outcome::Rejected })
}
