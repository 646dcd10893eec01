//! Subcommand implementations for the `kcoal` binary.
//!
//! Each command returns a [`CmdOutput`]: the body goes to `--out` or stdout,
//! the notes go to stderr. Commands never exit the process themselves.

use std::fmt;
use std::ops::RangeInclusive;
use std::path::Path;
use std::str::FromStr;

use kcoal_core::family::{build_family, Family, FamilySpec, SpecParseError};
use kcoal_core::graph::{Graph, GraphError};
use kcoal_core::indices::{
    all_definition_values, supported_indices, verify, IndexError, IndexKind, VerifyTarget,
};
use kcoal_core::report::{fmt_sig, round_sig, write_csv, write_json, write_table, write_text, ReportError, ReportRecord, Summary};
use kcoal_core::resistance::{closed_form, rd_kcoal_complete, resistance_oracle, ResistanceError, ResistanceMatrix};
use kcoal_core::indices::resistance_energy;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

pub mod table;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Spec(#[from] SpecParseError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Resistance(#[from] ResistanceError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("the closed route needs a family spec, not an edge-list file")]
    ClosedRouteNeedsSpec,
    #[error("graph is disconnected; resistance distances are undefined")]
    Disconnected,
    #[error("no closed form for {target} on the {family} family")]
    Unsupported { target: VerifyTarget, family: Family },
    #[error("bad sweep range `{token}`: {msg}")]
    Range { token: String, msg: String },
    #[error(transparent)]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
    Text,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format `{s}` (expected csv, json or text)")),
        }
    }
}

/// Text for the output destination plus diagnostics for stderr.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CmdOutput {
    pub body: String,
    pub notes: Vec<String>,
}

fn utf8(buf: Vec<u8>) -> String {
    String::from_utf8(buf).expect("writers emit UTF-8")
}

/// A graph named either by a family spec or by an edge-list file.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Spec(FamilySpec),
    File(Graph),
}

impl Source {
    /// An existing path is read as an edge list; anything else must parse
    /// as a family spec.
    pub fn resolve(arg: &str) -> Result<Self, CliError> {
        let path = Path::new(arg);
        if path.is_file() {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: arg.to_string(), source })?;
            return Ok(Source::File(Graph::parse_edge_list(&text)?));
        }
        Ok(Source::Spec(arg.parse()?))
    }

    pub fn graph(&self) -> Result<Graph, CliError> {
        match self {
            Source::Spec(s) => Ok(build_family(s)?),
            Source::File(g) => Ok(g.clone()),
        }
    }
}

/// Canonical edge list of the source graph.
pub fn cmd_gen(source: &Source) -> Result<CmdOutput, CliError> {
    let g = source.graph()?;
    Ok(CmdOutput { body: g.to_edge_list(), notes: vec![format!("n={} m={}", g.order(), g.size())] })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Oracle,
    Closed,
    Both,
}

impl FromStr for Route {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "oracle" => Ok(Route::Oracle),
            "closed" => Ok(Route::Closed),
            "both" => Ok(Route::Both),
            _ => Err(format!("unknown route `{s}` (expected oracle, closed or both)")),
        }
    }
}

fn oracle_for(g: &Graph) -> Result<ResistanceMatrix, CliError> {
    if !g.is_connected() {
        return Err(CliError::Disconnected);
    }
    Ok(resistance_oracle(g)?)
}

fn matrix_rows(r: &ResistanceMatrix) -> Vec<Vec<f64>> {
    (0..r.dim()).map(|i| (0..r.dim()).map(|j| round_sig(r.get(i, j))).collect()).collect()
}

/// Resistance matrix by the requested route. CSV is long form (`i,j,...`),
/// text is the 17-digit dump format.
pub fn cmd_resist(source: &Source, route: Route, format: Format) -> Result<CmdOutput, CliError> {
    let spec = match (source, route) {
        (Source::Spec(s), _) => Some(s),
        (Source::File(_), Route::Oracle) => None,
        (Source::File(_), _) => return Err(CliError::ClosedRouteNeedsSpec),
    };
    let mut named: Vec<(&str, ResistanceMatrix)> = Vec::new();
    if route != Route::Closed {
        named.push(("oracle", oracle_for(&source.graph()?)?));
    }
    if route != Route::Oracle {
        named.push(("closed", closed_form(spec.expect("checked above"))?));
    }
    let deviation = match named.as_slice() {
        [(_, a), (_, b)] => Some(a.max_deviation(b)?),
        _ => None,
    };
    let mut notes = Vec::new();
    if let Some((d, (i, j))) = deviation {
        notes.push(format!("max_deviation={} at ({i},{j})", fmt_sig(d)));
    }

    let n = named[0].1.dim();
    let body = match format {
        Format::Text => {
            let mut s = String::new();
            for (name, r) in &named {
                if named.len() > 1 {
                    s.push_str(&format!("# {name}\n"));
                }
                s.push_str(&r.entries().dump());
            }
            if let Some((d, (i, j))) = deviation {
                s.push_str(&format!("# max_deviation {:.16e} at ({i},{j})\n", d));
            }
            s
        }
        Format::Csv => {
            let mut header = vec!["i".to_string(), "j".to_string()];
            header.extend(named.iter().map(|(name, _)| name.to_string()));
            if deviation.is_some() {
                header.push("abs_diff".into());
            }
            let mut rows = vec![header];
            for i in 0..n {
                for j in 0..n {
                    let mut row = vec![i.to_string(), j.to_string()];
                    row.extend(named.iter().map(|(_, r)| fmt_sig(r.get(i, j))));
                    if deviation.is_some() {
                        row.push(fmt_sig((named[0].1.get(i, j) - named[1].1.get(i, j)).abs()));
                    }
                    rows.push(row);
                }
            }
            let mut buf = Vec::new();
            write_csv(&mut buf, &rows)?;
            utf8(buf)
        }
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("n".into(), json!(n));
            for (name, r) in &named {
                obj.insert((*name).into(), json!(matrix_rows(r)));
            }
            if let Some((d, (i, j))) = deviation {
                obj.insert("max_deviation".into(), json!({ "value": round_sig(d), "i": i, "j": j }));
            }
            let mut buf = Vec::new();
            write_json(&mut buf, &[serde_json::Value::Object(obj)])?;
            utf8(buf)
        }
    };
    Ok(CmdOutput { body, notes })
}

#[derive(Debug, Serialize)]
struct IndexRow {
    index: &'static str,
    value: f64,
}

/// The six indices by definition, on the oracle resistance matrix.
pub fn cmd_indices(source: &Source, format: Format) -> Result<CmdOutput, CliError> {
    let g = source.graph()?;
    let r = oracle_for(&g)?;
    let rows: Vec<IndexRow> = all_definition_values(&g, &r)?
        .into_iter()
        .map(|v| IndexRow { index: v.index.name(), value: round_sig(v.value) })
        .collect();
    let mut buf = Vec::new();
    match format {
        Format::Csv => write_csv(&mut buf, &rows)?,
        Format::Json => write_json(&mut buf, &rows)?,
        Format::Text => {
            let cells: Vec<Vec<String>> = rows.iter().map(|r| vec![r.index.to_string(), fmt_sig(r.value)]).collect();
            write_table(&mut buf, &["index", "value"], &cells)?
        }
    }
    Ok(CmdOutput { body: utf8(buf), notes: vec![] })
}

/// Inclusive per-parameter ranges for a verification sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRange {
    pub family: Family,
    /// One range per family parameter, in [`Family::param_names`] order.
    pub ranges: Vec<RangeInclusive<usize>>,
    pub tol: f64,
    /// Skip `K_{p1} ∘_k K_{p2}` tuples with `p2 > p1`, which repeat the
    /// graphs of the swapped tuple.
    pub canonical: bool,
}

/// Random graphs used as `G` in the join families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphSample {
    pub count: usize,
    pub max_order: usize,
    pub seed: u64,
}

impl Default for GraphSample {
    fn default() -> Self {
        Self { count: 20, max_order: 8, seed: 1 }
    }
}

impl GraphSample {
    /// Graph `i` of the sample: order uniform in `1..=max_order`, each pair
    /// an edge with probability 1/2. Depends only on `seed` and `i`.
    pub fn graph(&self, i: usize) -> Graph {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(i as u64));
        let n = rng.random_range(1..=self.max_order.max(1));
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(0.5) {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(n, edges).expect("generated edges are valid")
    }
}

fn default_range(family: Family, param: &str) -> RangeInclusive<usize> {
    match (family, param) {
        (Family::KCoalComplete, _) => 1..=8,
        (Family::Windmill, "n") => 2..=6,
        (Family::Windmill, _) => 2..=5,
        (Family::JoinCoal, "p") => 1..=6,
        (Family::JoinCoal, _) => 1..=4,
        (Family::StarJoinCoal, _) => 2..=6,
        (Family::BipartiteStar | Family::BipartiteComplete, _) => 1..=6,
        (Family::Pineapple, "p") => 2..=8,
        (Family::Pineapple, _) => 1..=6,
        (Family::Kite, _) => 2..=10,
        (Family::Dandelion, "n") => 3..=15,
        (Family::Dandelion, _) => 2..=14,
        _ => 1..=1,
    }
}

impl SweepRange {
    pub fn defaults(family: Family, tol: f64) -> Self {
        let ranges = family.param_names().iter().map(|p| default_range(family, p)).collect();
        Self { family, ranges, tol, canonical: false }
    }

    /// Replaces one range from `name=lo..hi` or `name=v`.
    pub fn set(&mut self, token: &str) -> Result<(), CliError> {
        let err = |msg: &str| CliError::Range { token: token.to_string(), msg: msg.to_string() };
        let (name, value) = token.split_once('=').ok_or_else(|| err("expected name=lo..hi"))?;
        let slot = self
            .family
            .param_names()
            .iter()
            .position(|p| *p == name)
            .ok_or_else(|| err(&format!("{} has no parameter `{name}`", self.family)))?;
        let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| err("bounds must be non-negative integers"));
        let (lo, hi) = match value.split_once("..") {
            Some((lo, hi)) => (parse(lo)?, parse(hi.trim_start_matches('='))?),
            None => {
                let v = parse(value)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(err("empty range"));
        }
        self.ranges[slot] = lo..=hi;
        Ok(())
    }

    /// Valid parameter tuples in lexicographic order.
    pub fn tuples(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for r in &self.ranges {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    r.clone().map(move |v| {
                        let mut t = prefix.clone();
                        t.push(v);
                        t
                    })
                })
                .collect();
        }
        out
    }

    /// Valid specs in the sweep; join families get every sampled `G`.
    pub fn specs(&self, sample: &GraphSample) -> Vec<FamilySpec> {
        let graphs: Vec<Option<Graph>> = if self.family.takes_graph() {
            (0..sample.count).map(|i| Some(sample.graph(i))).collect()
        } else {
            vec![None]
        };
        self.tuples()
            .iter()
            .flat_map(|t| graphs.iter().map(move |g| FamilySpec::from_params(self.family, t, g.clone())))
            .filter_map(Result::ok)
            .filter(|s| s.validate().is_ok())
            .filter(|s| !(self.canonical && matches!(s, FamilySpec::KCoalComplete { p1, p2, .. } if p2 > p1)))
            .collect()
    }
}

/// What to verify: a single target, or everything the family supports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetChoice {
    One(VerifyTarget),
    All,
}

impl FromStr for TargetChoice {
    type Err = IndexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "all" {
            Ok(TargetChoice::All)
        } else {
            s.parse().map(TargetChoice::One)
        }
    }
}

impl fmt::Display for TargetChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetChoice::One(t) => t.fmt(f),
            TargetChoice::All => f.write_str("all"),
        }
    }
}

pub fn targets_for(family: Family, choice: TargetChoice) -> Result<Vec<VerifyTarget>, CliError> {
    let supported: Vec<VerifyTarget> = std::iter::once(VerifyTarget::Resistance)
        .chain(supported_indices(family).iter().map(|&k| VerifyTarget::Index(k)))
        .collect();
    match choice {
        TargetChoice::All => Ok(supported),
        TargetChoice::One(t) if supported.contains(&t) => Ok(vec![t]),
        TargetChoice::One(target) => Err(CliError::Unsupported { target, family }),
    }
}

/// Runs every (spec, target) comparison of the sweep on `jobs` threads
/// (0 picks the rayon default) and returns records sorted by spec, then target.
pub fn run_sweep(
    sweep: &SweepRange,
    choice: TargetChoice,
    sample: &GraphSample,
    jobs: usize,
) -> Result<Vec<ReportRecord>, CliError> {
    let targets = targets_for(sweep.family, choice)?;
    let specs = sweep.specs(sample);
    let work: Vec<(usize, &FamilySpec, VerifyTarget)> = specs
        .iter()
        .enumerate()
        .flat_map(|(i, s)| targets.iter().map(move |&t| (i, s, t)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    let mut done: Vec<(usize, VerifyTarget, ReportRecord)> = pool.install(|| {
        work.par_iter()
            .map(|&(i, s, t)| (i, t, ReportRecord::from_result(s, t, sweep.tol, &verify(t, s, sweep.tol))))
            .collect()
    });
    let keys: Vec<_> = specs.iter().map(FamilySpec::sort_key).collect();
    done.sort_by(|a, b| keys[a.0].cmp(&keys[b.0]).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
    Ok(done.into_iter().map(|(_, _, r)| r).collect())
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    records: &'a [ReportRecord],
    summary: &'a Summary,
}

/// Formats a sweep: one row per comparison and a summary. Mismatches are
/// findings, not failures.
pub fn cmd_verify(
    sweep: &SweepRange,
    choice: TargetChoice,
    sample: &GraphSample,
    jobs: usize,
    format: Format,
) -> Result<CmdOutput, CliError> {
    let records = run_sweep(sweep, choice, sample, jobs)?;
    let summary = Summary::of(&records);
    let mut buf = Vec::new();
    match format {
        Format::Csv => write_csv(&mut buf, &records)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut buf, &VerifyJson { records: &records, summary: &summary })
                .map_err(ReportError::from)?;
            buf.push(b'\n');
        }
        Format::Text => {
            write_text(&mut buf, &records)?;
            buf.extend_from_slice(format!("{}\n", summary.line()).as_bytes());
        }
    }
    // Text output already ends with the summary line.
    let notes = if format == Format::Text { vec![] } else { vec![summary.line()] };
    Ok(CmdOutput { body: utf8(buf), notes })
}

/// One row of the regenerated resistance-energy table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RetableRow {
    pub row: usize,
    pub p1: usize,
    pub p2: usize,
    pub k: usize,
    #[serde(rename = "RE_paper")]
    pub re_printed: f64,
    #[serde(rename = "RE_computed")]
    pub re_computed: f64,
    pub diff: f64,
}

/// Resistance energy of every tabulated `K_{p1} ∘_k K_{p2}`, from the
/// eigenvalues of its closed-form resistance matrix, beside the printed value.
pub fn retable_rows() -> Result<Vec<RetableRow>, CliError> {
    table::RE_TABLE
        .iter()
        .map(|e| {
            let re = resistance_energy(&rd_kcoal_complete(e.p1, e.p2, e.k)?);
            Ok(RetableRow {
                row: e.row,
                p1: e.p1,
                p2: e.p2,
                k: e.k,
                re_printed: e.re,
                re_computed: round_sig(re),
                diff: round_sig(re - e.re),
            })
        })
        .collect()
}

pub fn cmd_retable(format: Format) -> Result<CmdOutput, CliError> {
    let rows = retable_rows()?;
    let mut buf = Vec::new();
    match format {
        Format::Csv => write_csv(&mut buf, &rows)?,
        Format::Json => write_json(&mut buf, &rows)?,
        Format::Text => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.row.to_string(),
                        r.p1.to_string(),
                        r.p2.to_string(),
                        r.k.to_string(),
                        fmt_sig(r.re_printed),
                        fmt_sig(r.re_computed),
                        fmt_sig(r.diff),
                    ]
                })
                .collect();
            write_table(&mut buf, &["row", "p1", "p2", "k", "RE_paper", "RE_computed", "diff"], &cells)?
        }
    }
    Ok(CmdOutput { body: utf8(buf), notes: vec![] })
}

/// Index kinds accepted on the command line, for help text.
pub fn index_names() -> Vec<&'static str> {
    IndexKind::ALL.iter().map(|k| k.name()).collect()
}
