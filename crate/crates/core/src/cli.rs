//! Command-line front end and the on-disk family format.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circulant::{PathFamily, PathSeq};
use crate::constructions::{
    self, catalog_generator, construct_best, is_prime, prime_generator, prime_plus_one,
    theorem_bound, theorem_family, theorem_family_attempt, ConstructionProvenance, Method,
};
use crate::error::{Error, Result};
use crate::search::{exact_min_sps, search_generator, Outcome, SearchBudget};
use crate::verify::{verify, verify_weak, verify_weak_naive, Mode, STRONG_DEFAULT_MAX_N};

pub const FORMAT_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMeta {
    pub method: String,
    pub size: usize,
    /// Ceiling of the claimed size bound.
    pub bound_claimed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<serde_json::Value>,
}

/// JSON family file with 1-based standard labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyFile {
    pub format_version: u32,
    pub n: usize,
    pub paths: Vec<Vec<usize>>,
    pub meta: FamilyMeta,
}

impl FamilyFile {
    pub fn from_family(family: &PathFamily, prov: &ConstructionProvenance) -> Result<Self> {
        Ok(FamilyFile {
            format_version: FORMAT_VERSION,
            n: family.n(),
            paths: family
                .paths()
                .iter()
                .map(|p| p.vertices().to_vec())
                .collect(),
            meta: FamilyMeta {
                method: prov.method.name().into(),
                size: family.len(),
                bound_claimed: prov.bound_claimed.map(|b| b.ceil() as u64),
                trace: prov.trace.as_ref().map(serde_json::to_value).transpose()?,
            },
        })
    }

    /// Validates every path; errors name the first bad path index.
    pub fn family(&self) -> Result<PathFamily> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported format_version {}",
                self.format_version
            )));
        }
        if self.meta.size != self.paths.len() {
            return Err(Error::Format(format!(
                "meta.size is {} but there are {} paths",
                self.meta.size,
                self.paths.len()
            )));
        }
        let paths = self
            .paths
            .iter()
            .enumerate()
            .map(|(i, p)| {
                PathSeq::new(self.n, p.clone()).map_err(|e| Error::Format(format!("path {i}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        PathFamily::new(self.n, paths)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Catalog,
    Prime,
    PrimePlusOne,
    Main,
    Search,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Weak,
    Strong,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RenderFormat {
    Dot,
    Svg,
}

#[derive(Debug, Parser)]
#[command(
    name = "sepath",
    version,
    about = "Separating path systems for complete graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a family for K_n and write it as JSON.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        #[arg(long)]
        out: PathBuf,
        /// Time limit in seconds for --method search.
        #[arg(long, default_value_t = 60)]
        time_limit: u64,
    },
    /// Check a family file for weak or strong separation.
    Verify {
        #[arg(long)]
        family: PathBuf,
        #[arg(long, value_enum, default_value = "weak")]
        mode: ModeArg,
        /// Cross-check weak separation with the pairwise verifier.
        #[arg(long)]
        naive: bool,
        /// Allow strong verification above n = 100.
        #[arg(long)]
        allow_large: bool,
    },
    /// Look for a generator path of K_n by backtracking.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_nodes: Option<u64>,
        #[arg(long)]
        time_limit: Option<u64>,
        /// Write the rotations of the found path here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact minimum separating path system size for n <= 5.
    Exact {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_nodes: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Best construction for every n in a range, as CSV.
    Report {
        /// Inclusive range `A..B`.
        #[arg(long)]
        range: String,
        #[arg(long)]
        out: PathBuf,
        /// Also write a circular-layout SVG of the first path for each n.
        #[arg(long)]
        figures: Option<PathBuf>,
    },
    /// Draw one path of a family on a circular layout.
    Render {
        #[arg(long)]
        family: PathBuf,
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, value_enum, default_value = "svg")]
        format: RenderFormat,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Parses `A..B` (inclusive).
pub fn parse_range(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Format(format!("range must look like A..B, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a < 2 || a > b {
        return Err(Error::Format(format!("need 2 <= A <= B, got {a}..{b}")));
    }
    Ok((a, b))
}

/// Best known upper bound on `f(K_n)` among the results implemented here.
pub fn upper_bound(n: usize) -> u64 {
    let edges = (n * (n - 1) / 2) as u64;
    let mut best = edges;
    if n <= 20 || is_prime(n as u64) || (n >= 4 && is_prime(n as u64 - 1)) {
        best = best.min(n as u64);
    }
    if n >= 10 {
        best = best.min(2 * n as u64 + 4);
    }
    if n >= constructions::theorem::THEOREM_MIN_N {
        best = best.min(theorem_bound(n).ceil() as u64);
    }
    best
}

/// One row of the report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRow {
    pub n: usize,
    pub method: Method,
    pub size: usize,
    pub lower_bound: usize,
    pub upper_bound: u64,
    pub separating: bool,
}

pub const REPORT_HEADER: &str = "n,method,size,lower_bound,upper_bound,separating";

pub fn report_row(n: usize) -> Result<(ReportRow, PathFamily)> {
    let (family, prov) = construct_best(n)?;
    let row = ReportRow {
        n,
        method: prov.method,
        size: family.len(),
        lower_bound: n - 1,
        upper_bound: upper_bound(n),
        separating: verify_weak(&family).separating,
    };
    Ok((row, family))
}

pub fn report_csv(rows: &[ReportRow]) -> String {
    let mut s = String::from(REPORT_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            r.n,
            r.method.name(),
            r.size,
            r.lower_bound,
            r.upper_bound,
            r.separating
        );
    }
    s
}

fn circle_point(n: usize, v: usize, radius: f64, c: f64) -> (f64, f64) {
    let theta = std::f64::consts::TAU * (v as f64 - 1.0) / n as f64 - std::f64::consts::FRAC_PI_2;
    (c + radius * theta.cos(), c + radius * theta.sin())
}

/// Graphviz source with pinned circular positions (render with `neato -n`).
pub fn render_dot(path: &PathSeq) -> String {
    let n = path.n();
    let mut s = String::from("graph path {\n  node [shape=circle, width=0.3, fontsize=10];\n");
    for v in 1..=n {
        let (x, y) = circle_point(n, v, 200.0, 220.0);
        let _ = writeln!(s, "  {v} [pos=\"{x:.1},{:.1}!\"];", 440.0 - y);
    }
    for e in path.edges() {
        let _ = writeln!(s, "  {} -- {};", e.0, e.1);
    }
    s.push_str("}\n");
    s
}

/// Standalone SVG: vertices on a circle, path edges as chords.
pub fn render_svg(path: &PathSeq) -> String {
    let n = path.n();
    let (size, r, c) = (440.0, 200.0, 220.0);
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n"
    );
    s.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for e in path.edges() {
        let (x1, y1) = circle_point(n, e.0, r, c);
        let (x2, y2) = circle_point(n, e.1, r, c);
        let _ = writeln!(
            s,
            "  <line x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\" stroke=\"#1f4e9c\" stroke-width=\"1.5\"/>"
        );
    }
    for v in 1..=n {
        let (x, y) = circle_point(n, v, r, c);
        let _ = writeln!(
            s,
            "  <circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"4\" fill=\"black\"/>"
        );
        if n <= 60 {
            let (lx, ly) = circle_point(n, v, r + 12.0, c);
            let _ = writeln!(
                s,
                "  <text x=\"{lx:.1}\" y=\"{ly:.1}\" font-size=\"9\" text-anchor=\"middle\" dominant-baseline=\"middle\">{v}</text>"
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

fn explicit(
    n: usize,
    method: MethodArg,
    time_limit: u64,
) -> Result<(PathFamily, ConstructionProvenance)> {
    let nf = n as f64;
    let prov = |method, family: &PathFamily, bound| ConstructionProvenance {
        method,
        size: family.len(),
        bound_claimed: bound,
        trace: None,
    };
    match method {
        MethodArg::Auto => construct_best(n),
        MethodArg::Catalog => {
            let f = PathFamily::rotations(&catalog_generator(n)?);
            let p = prov(Method::Catalog, &f, Some(nf));
            Ok((f, p))
        }
        MethodArg::Prime => {
            let f = PathFamily::rotations(&prime_generator(n as u64)?);
            let p = prov(Method::Prime, &f, Some(nf));
            Ok((f, p))
        }
        MethodArg::PrimePlusOne => {
            if n < 4 {
                return Err(Error::NotOddPrime(n.saturating_sub(1) as u64));
            }
            let f = prime_plus_one(n as u64 - 1)?;
            let p = prov(Method::PrimePlusOne, &f, Some(nf));
            Ok((f, p))
        }
        MethodArg::Main => {
            let (family, trace, bound) = if n >= constructions::theorem::THEOREM_MIN_N {
                let (f, t) = theorem_family(n)?;
                (f, t, Some(theorem_bound(n)))
            } else {
                let (f, t) = theorem_family_attempt(n)?;
                (f, t, None)
            };
            let p = ConstructionProvenance {
                method: Method::main_case(trace.case),
                size: family.len(),
                bound_claimed: bound,
                trace: Some(trace),
            };
            Ok((family, p))
        }
        MethodArg::Search => {
            let budget = SearchBudget::unlimited().with_time(Duration::from_secs(time_limit));
            let r = search_generator(n, budget);
            let path = r.path.ok_or_else(|| {
                Error::Construction(format!("no generator found for n={n} ({:?})", r.outcome))
            })?;
            let f = PathFamily::rotations(&path);
            let p = prov(Method::Search, &f, Some(nf));
            Ok((f, p))
        }
    }
}

fn is_usage_error(e: &Error) -> bool {
    !matches!(e, Error::Construction(_) | Error::BudgetExceeded { .. })
}

fn fail(e: &Error) -> i32 {
    eprintln!("error: {e}");
    if is_usage_error(e) {
        EXIT_USAGE
    } else {
        EXIT_FAIL
    }
}

fn cmd_construct(n: usize, method: MethodArg, out: &Path, time_limit: u64) -> i32 {
    if n < 2 {
        return fail(&Error::InvalidOrder(n));
    }
    let (family, prov) = match explicit(n, method, time_limit) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let report = verify_weak(&family);
    let file = match FamilyFile::from_family(&family, &prov) {
        Ok(f) => f,
        Err(e) => return fail(&e),
    };
    if let Err(e) = file.save(out) {
        return fail(&e);
    }
    let bound = prov
        .bound_claimed
        .map_or_else(|| "none".to_string(), |b| format!("{b:.3}"));
    println!(
        "n={n} method={} size={} bound={bound} separating={}",
        prov.method.name(),
        family.len(),
        report.separating
    );
    if report.separating {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn cmd_verify(path: &Path, mode: ModeArg, naive: bool, allow_large: bool) -> i32 {
    let family = match FamilyFile::load(path).and_then(|f| f.family()) {
        Ok(f) => f,
        Err(e) => return fail(&e),
    };
    let mode = match mode {
        ModeArg::Weak => Mode::Weak,
        ModeArg::Strong => Mode::Strong,
    };
    if mode == Mode::Strong && family.n() > STRONG_DEFAULT_MAX_N && !allow_large {
        eprintln!(
            "error: strong verification above n = {STRONG_DEFAULT_MAX_N} needs --allow-large"
        );
        return EXIT_USAGE;
    }
    let report = verify(&family, mode);
    match serde_json::to_string_pretty(&report) {
        Ok(s) => println!("{s}"),
        Err(e) => return fail(&e.into()),
    }
    if naive && mode == Mode::Weak && verify_weak_naive(&family) != report.separating {
        eprintln!("error: pairwise verifier disagrees");
        return EXIT_FAIL;
    }
    if report.separating {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn budget(max_nodes: Option<u64>, time_limit: Option<u64>) -> SearchBudget {
    SearchBudget {
        max_nodes,
        wall_time_limit: time_limit.map(Duration::from_secs),
    }
}

fn cmd_search(
    n: usize,
    max_nodes: Option<u64>,
    time_limit: Option<u64>,
    out: Option<&Path>,
) -> i32 {
    if n < 3 {
        return fail(&Error::InvalidOrder(n));
    }
    let r = search_generator(n, budget(max_nodes, time_limit));
    let summary = serde_json::json!({
        "n": n,
        "outcome": r.outcome,
        "nodes": r.nodes,
        "path": r.path.as_ref().map(|p| p.vertices().to_vec()),
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&summary).unwrap_or_default()
    );
    let Some(path) = r.path else {
        return EXIT_FAIL;
    };
    if let Some(out) = out {
        let family = PathFamily::rotations(&path);
        let prov = ConstructionProvenance {
            method: Method::Search,
            size: family.len(),
            bound_claimed: Some(n as f64),
            trace: None,
        };
        if let Err(e) = FamilyFile::from_family(&family, &prov).and_then(|f| f.save(out)) {
            return fail(&e);
        }
    }
    debug_assert_eq!(r.outcome, Outcome::Found);
    EXIT_OK
}

fn cmd_exact(n: usize, max_nodes: Option<u64>, out: Option<&Path>) -> i32 {
    let r = match exact_min_sps(n, budget(max_nodes, None)) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    println!(
        "n={n} minimum={} nodes={} witness={:?}",
        r.size,
        r.nodes,
        r.family
            .paths()
            .iter()
            .map(|p| p.vertices().to_vec())
            .collect::<Vec<_>>()
    );
    if let Some(out) = out {
        let prov = ConstructionProvenance {
            method: Method::Search,
            size: r.size,
            bound_claimed: None,
            trace: None,
        };
        if let Err(e) = FamilyFile::from_family(&r.family, &prov).and_then(|f| f.save(out)) {
            return fail(&e);
        }
    }
    EXIT_OK
}

fn cmd_report(range: &str, out: &Path, figures: Option<&Path>) -> i32 {
    let (a, b) = match parse_range(range) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let results: Vec<Result<(ReportRow, PathFamily)>> =
        (a..=b).into_par_iter().map(report_row).collect();
    let mut rows = Vec::with_capacity(results.len());
    let mut families = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok((row, fam)) => {
                rows.push(row);
                families.push(fam);
            }
            Err(e) => return fail(&e),
        }
    }
    if let Err(e) = fs::write(out, report_csv(&rows)) {
        return fail(&e.into());
    }
    if let Some(dir) = figures {
        if let Err(e) = fs::create_dir_all(dir) {
            return fail(&e.into());
        }
        for fam in &families {
            if let Some(p) = fam.paths().first() {
                let file = dir.join(format!("n{}.svg", fam.n()));
                if let Err(e) = fs::write(file, render_svg(p)) {
                    return fail(&e.into());
                }
            }
        }
    }
    let ok = rows
        .iter()
        .all(|r| r.separating && r.size as u64 <= r.upper_bound);
    println!("{} rows written to {}", rows.len(), out.display());
    if ok {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn cmd_render(path: &Path, index: usize, format: RenderFormat, out: &Path) -> i32 {
    let family = match FamilyFile::load(path).and_then(|f| f.family()) {
        Ok(f) => f,
        Err(e) => return fail(&e),
    };
    let Some(p) = family.paths().get(index) else {
        eprintln!("error: family has {} paths, no index {index}", family.len());
        return EXIT_USAGE;
    };
    let text = match format {
        RenderFormat::Dot => render_dot(p),
        RenderFormat::Svg => render_svg(p),
    };
    match fs::write(out, text) {
        Ok(()) => EXIT_OK,
        Err(e) => fail(&e.into()),
    }
}

/// Sizes the global thread pool from `SEPATH_THREADS` when set.
pub fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("SEPATH_THREADS") else {
        return Ok(());
    };
    let threads: usize = v.parse().ok().filter(|&t| t >= 1).ok_or_else(|| {
        Error::Format(format!("SEPATH_THREADS must be an integer >= 1, got {v:?}"))
    })?;
    // a pool may already exist when called twice in one process
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    if let Err(e) = configure_threads() {
        return fail(&e);
    }
    match cli.command {
        Command::Construct {
            n,
            method,
            out,
            time_limit,
        } => cmd_construct(n, method, &out, time_limit),
        Command::Verify {
            family,
            mode,
            naive,
            allow_large,
        } => cmd_verify(&family, mode, naive, allow_large),
        Command::Search {
            n,
            max_nodes,
            time_limit,
            out,
        } => cmd_search(n, max_nodes, time_limit, out.as_deref()),
        Command::Exact { n, max_nodes, out } => cmd_exact(n, max_nodes, out.as_deref()),
        Command::Report {
            range,
            out,
            figures,
        } => cmd_report(&range, &out, figures.as_deref()),
        Command::Render {
            family,
            index,
            format,
            out,
        } => cmd_render(&family, index, format, &out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("2..20").unwrap(), (2, 20));
        assert!(parse_range("5..4").is_err());
        assert!(parse_range("1..4").is_err());
        assert!(parse_range("7").is_err());
    }

    #[test]
    fn upper_bounds() {
        assert_eq!(upper_bound(5), 5);
        assert_eq!(upper_bound(30), 30);
        assert_eq!(upper_bound(27), 58);
        assert_eq!(upper_bound(44), 44);
        assert_eq!(upper_bound(50), theorem_bound(50).ceil() as u64);
    }

    #[test]
    fn file_round_trip() {
        let (fam, prov) = construct_best(7).unwrap();
        let file = FamilyFile::from_family(&fam, &prov).unwrap();
        let text = file.to_json().unwrap();
        let back = FamilyFile::from_json(&text).unwrap();
        assert_eq!(back.to_json().unwrap(), text);
        assert_eq!(back.family().unwrap(), fam);
    }

    #[test]
    fn bad_path_is_named() {
        let text = r#"{"format_version":1,"n":4,"paths":[[1,2],[1,3,1]],"meta":{"method":"x","size":2,"bound_claimed":null}}"#;
        let err = FamilyFile::from_json(text).unwrap().family().unwrap_err();
        assert!(err.to_string().contains("path 1"), "{err}");
    }

    #[test]
    fn svg_has_all_vertices() {
        let p = catalog_generator(9).unwrap();
        let svg = render_svg(&p);
        assert_eq!(svg.matches("<circle").count(), 9);
        assert_eq!(svg.matches("<line").count(), p.len_edges());
        assert_eq!(render_dot(&p).matches(" -- ").count(), p.len_edges());
    }
}
