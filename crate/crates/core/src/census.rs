//! Exhaustive censuses over all networks on a few nodes.
//!
//! A census enumerates the `4^{C(n,2)}` networks, groups them by sufficient
//! statistic and runs one exact decision (MLE existence, or vertex test) per
//! distinct statistic. Decisions can be checkpointed to a text file so that
//! long runs resume where they stopped.
//!
//! Checkpoint format (version 1), one record per line:
//!
//! ```text
//! p1geom-checkpoint 1
//! kind census
//! n 5
//! variant edge
//! theta 0
//! entries 2
//! 0 1 2 1 1 0 3 1 0 1 1
//! 1 1 1 1 1 1 1 1 1 1 0
//! ```
//!
//! Each record lists the non-lambda coordinates of a statistic followed by
//! the decision (`1` or `0`). Files are replaced atomically by writing a
//! sibling `.tmp` file and renaming it.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mle::check_mle_exists;
use crate::model::{
    common_submatrix, common_submatrix_cell, network_at, sample_space_size, DesignMatrix, MarginVector, Network,
    ReciprocityVariant, DEFAULT_ENUMERATION_CAP,
};
use crate::polyhedra::{cone_facets, is_minkowski_vertex, PolyhedralCone};

/// Default node cap for facet tables.
pub const DEFAULT_FACET_CAP: usize = 5;
/// Default node cap for vertex counts.
pub const DEFAULT_VERTEX_CAP: usize = 4;
/// Largest `n` accepted by the zero-pattern catalog.
pub const MAX_PATTERN_N: usize = 8;
/// Largest `n` accepted by the conjecture harness.
pub const MAX_CONJECTURE_N: usize = 10;

const CHECKPOINT_MAGIC: &str = "p1geom-checkpoint";
const CHECKPOINT_VERSION: u32 = 1;
const BATCH: usize = 4096;

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::TooFewNodes(n));
    }
    if n > cap {
        return Err(Error::SizeCap { n, cap });
    }
    Ok(())
}

/// Run settings shared by the enumeration censuses.
#[derive(Debug, Clone)]
pub struct CensusOptions {
    /// Largest accepted `n`.
    pub cap: usize,
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
    pub checkpoint: Option<PathBuf>,
    /// Print progress lines to standard error.
    pub progress: bool,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions { cap: DEFAULT_ENUMERATION_CAP, jobs: 0, checkpoint: None, progress: false }
    }
}

/// Aggregate counts of a statistic census.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusTable {
    pub n: usize,
    pub variant: ReciprocityVariant,
    pub theta_included: bool,
    pub networks_total: u64,
    pub distinct_statistics: u64,
    pub statistics_with_mle: u64,
    pub networks_with_mle: u64,
    /// Wall-clock seconds; excluded from comparisons of results.
    #[serde(skip)]
    pub runtime: f64,
}

impl CensusTable {
    pub const CSV_HEADER: [&'static str; 7] = [
        "n",
        "variant",
        "theta",
        "networks_total",
        "distinct_statistics",
        "statistics_with_mle",
        "networks_with_mle",
    ];

    fn csv_record(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.variant.to_string(),
            if self.theta_included { "keep" } else { "drop" }.to_string(),
            self.networks_total.to_string(),
            self.distinct_statistics.to_string(),
            self.statistics_with_mle.to_string(),
            self.networks_with_mle.to_string(),
        ]
    }

    /// Writes the table as CSV; `timing` appends a `runtime_seconds` column.
    pub fn write_csv<W: Write>(tables: &[CensusTable], out: W, timing: bool) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<&str> = Self::CSV_HEADER.to_vec();
        if timing {
            header.push("runtime_seconds");
        }
        w.write_record(&header)?;
        for t in tables {
            let mut rec = t.csv_record();
            if timing {
                rec.push(format!("{:.3}", t.runtime));
            }
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    /// JSON document with every field; `runtime` only when `timing` is set.
    pub fn to_json(&self, timing: bool) -> Result<String> {
        let mut v = serde_json::to_value(self)?;
        if timing {
            v["runtime"] = serde_json::json!(self.runtime);
        }
        Ok(serde_json::to_string_pretty(&v)?)
    }
}

/// One distinct statistic seen by a census.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatisticRecord {
    pub statistic: MarginVector,
    pub fiber_size: u64,
    /// Smallest enumeration index of a network with this statistic.
    pub representative: u64,
    /// The per-statistic decision: MLE exists, or statistic is a vertex.
    pub flag: bool,
}

impl StatisticRecord {
    pub fn network(&self, n: usize) -> Network {
        network_at(n, self.representative)
    }
}

/// Full output of a statistic census.
#[derive(Debug, Clone)]
pub struct CensusRun {
    pub table: CensusTable,
    /// Sorted by statistic.
    pub records: Vec<StatisticRecord>,
}

impl CensusRun {
    /// Every network whose statistic has an MLE, in enumeration order.
    pub fn networks_with_mle(&self) -> Vec<Network> {
        let a = DesignMatrix::new(self.table.n, self.table.variant, self.table.theta_included)
            .expect("census matrix");
        let interior: BTreeSet<&MarginVector> =
            self.records.iter().filter(|r| r.flag).map(|r| &r.statistic).collect();
        (0..self.table.networks_total)
            .map(|i| network_at(self.table.n, i))
            .filter(|x| interior.contains(&a.sufficient_statistic(x).expect("statistic")))
            .collect()
    }
}

/// Statistic without its lambda block (which is all ones), packed in bytes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct StatKey(Box<[u8]>);

impl StatKey {
    fn of(a: &DesignMatrix, x: &Network) -> StatKey {
        let t = a.sufficient_statistic(x).expect("network size matches");
        StatKey(t.0[a.num_dyads()..].iter().map(|&v| v as u8).collect())
    }

    fn expand(&self, a: &DesignMatrix) -> MarginVector {
        let mut v = vec![1i64; a.num_dyads()];
        v.extend(self.0.iter().map(|&b| b as i64));
        MarginVector(v)
    }
}

#[derive(Debug, Clone, Copy)]
struct Fiber {
    size: u64,
    first: u64,
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Inconsistent(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Groups all networks by statistic; parallel over contiguous index ranges.
fn group_statistics(a: &DesignMatrix) -> Vec<(StatKey, Fiber)> {
    let n = a.n();
    let total = sample_space_size(n);
    let chunks = 256u64.min(total);
    let per = total.div_ceil(chunks);
    let merged = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut map: HashMap<StatKey, Fiber> = HashMap::new();
            for idx in c * per..((c + 1) * per).min(total) {
                let key = StatKey::of(a, &network_at(n, idx));
                map.entry(key).and_modify(|f| f.size += 1).or_insert(Fiber { size: 1, first: idx });
            }
            map
        })
        .reduce(HashMap::new, |mut acc, part| {
            for (k, f) in part {
                acc.entry(k)
                    .and_modify(|g| {
                        g.size += f.size;
                        g.first = g.first.min(f.first);
                    })
                    .or_insert(f);
            }
            acc
        });
    let mut out: Vec<(StatKey, Fiber)> = merged.into_iter().collect();
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct CheckpointHeader {
    kind: String,
    n: usize,
    variant: ReciprocityVariant,
    theta: bool,
}

fn write_checkpoint(path: &Path, header: &CheckpointHeader, decided: &HashMap<StatKey, bool>) -> Result<()> {
    let mut entries: Vec<(&StatKey, &bool)> = decided.iter().collect();
    entries.sort();
    let mut text = String::new();
    text.push_str(&format!("{CHECKPOINT_MAGIC} {CHECKPOINT_VERSION}\n"));
    text.push_str(&format!("kind {}\n", header.kind));
    text.push_str(&format!("n {}\n", header.n));
    text.push_str(&format!("variant {}\n", header.variant));
    text.push_str(&format!("theta {}\n", header.theta as u8));
    text.push_str(&format!("entries {}\n", entries.len()));
    for (k, flag) in entries {
        for v in k.0.iter() {
            text.push_str(&v.to_string());
            text.push(' ');
        }
        text.push_str(if *flag { "1\n" } else { "0\n" });
    }
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(text.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

fn read_checkpoint(path: &Path, expected: &CheckpointHeader) -> Result<HashMap<StatKey, bool>> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(HashMap::new()),
        Err(e) => return Err(e.into()),
    };
    let bad = |what: &str| Error::Checkpoint(format!("{}: {what}", path.display()));
    let mut lines = text.lines();
    let mut field = |name: &str| -> Result<String> {
        let line = lines.next().ok_or_else(|| bad("truncated header"))?;
        line.strip_prefix(name)
            .and_then(|rest| rest.strip_prefix(' '))
            .map(str::to_string)
            .ok_or_else(|| bad(&format!("expected '{name}' line")))
    };
    let version = field(CHECKPOINT_MAGIC)?;
    if version != CHECKPOINT_VERSION.to_string() {
        return Err(bad(&format!("unsupported version {version}")));
    }
    let header = CheckpointHeader {
        kind: field("kind")?,
        n: field("n")?.parse().map_err(|_| bad("bad n"))?,
        variant: field("variant")?.parse().map_err(|_| bad("bad variant"))?,
        theta: field("theta")? == "1",
    };
    if &header != expected {
        return Err(bad("written by a different run configuration"));
    }
    let count: usize = field("entries")?.parse().map_err(|_| bad("bad entry count"))?;
    let mut decided = HashMap::with_capacity(count);
    for line in lines {
        let vals: Vec<u8> = line
            .split_whitespace()
            .map(|t| t.parse::<u8>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad("bad record"))?;
        let (flag, key) = vals.split_last().ok_or_else(|| bad("empty record"))?;
        if *flag > 1 {
            return Err(bad("decision must be 0 or 1"));
        }
        decided.insert(StatKey(key.into()), *flag == 1);
    }
    if decided.len() != count {
        return Err(bad("entry count does not match records"));
    }
    Ok(decided)
}

/// Decides every grouped statistic, in parallel batches, checkpointing
/// after each batch.
fn decide_all(
    a: &DesignMatrix,
    groups: &[(StatKey, Fiber)],
    kind: &str,
    opts: &CensusOptions,
    decide: impl Fn(&MarginVector, Fiber) -> Result<bool> + Sync + Send,
) -> Result<Vec<bool>> {
    let header = CheckpointHeader { kind: kind.into(), n: a.n(), variant: a.variant(), theta: a.include_theta() };
    let mut decided = match &opts.checkpoint {
        Some(p) => read_checkpoint(p, &header)?,
        None => HashMap::new(),
    };
    let pending: Vec<usize> = (0..groups.len()).filter(|&i| !decided.contains_key(&groups[i].0)).collect();
    if opts.progress && !decided.is_empty() {
        eprintln!("{kind}: resumed {} decided statistics", decided.len());
    }
    for (b, batch) in pending.chunks(BATCH).enumerate() {
        let results: Vec<bool> = batch
            .par_iter()
            .map(|&i| decide(&groups[i].0.expand(a), groups[i].1))
            .collect::<Result<_>>()?;
        for (&i, r) in batch.iter().zip(results) {
            decided.insert(groups[i].0.clone(), r);
        }
        if let Some(p) = &opts.checkpoint {
            write_checkpoint(p, &header, &decided)?;
        }
        if opts.progress {
            let done = (b * BATCH + batch.len()).min(pending.len());
            eprintln!("{kind}: {done}/{} statistics decided", pending.len());
        }
    }
    Ok(groups.iter().map(|(k, _)| decided[k]).collect())
}

fn run_grouped(
    a: &DesignMatrix,
    kind: &str,
    opts: &CensusOptions,
    decide: impl Fn(&MarginVector, Fiber) -> Result<bool> + Sync + Send,
) -> Result<Vec<StatisticRecord>> {
    check_cap(a.n(), opts.cap)?;
    with_pool(opts.jobs, || {
        if opts.progress {
            eprintln!("{kind}: enumerating {} networks", sample_space_size(a.n()));
        }
        let groups = group_statistics(a);
        let flags = decide_all(a, &groups, kind, opts, decide)?;
        Ok(groups
            .iter()
            .zip(flags)
            .map(|((k, f), flag)| StatisticRecord {
                statistic: k.expand(a),
                fiber_size: f.size,
                representative: f.first,
                flag,
            })
            .collect())
    })?
}

/// Counts distinct statistics and MLE existence over all networks.
pub fn statistic_census(n: usize, variant: ReciprocityVariant, include_theta: bool) -> Result<CensusTable> {
    Ok(statistic_census_with(n, variant, include_theta, &CensusOptions::default())?.table)
}

/// [`statistic_census`] with explicit run settings; keeps per-statistic records.
pub fn statistic_census_with(
    n: usize,
    variant: ReciprocityVariant,
    include_theta: bool,
    opts: &CensusOptions,
) -> Result<CensusRun> {
    check_cap(n, opts.cap)?;
    let start = Instant::now();
    let a = DesignMatrix::new(n, variant, include_theta)?;
    let records = run_grouped(&a, "census", opts, |t, _| Ok(check_mle_exists(&a, t)?.exists))?;
    let with: Vec<&StatisticRecord> = records.iter().filter(|r| r.flag).collect();
    let table = CensusTable {
        n,
        variant,
        theta_included: include_theta,
        networks_total: sample_space_size(n),
        distinct_statistics: records.len() as u64,
        statistics_with_mle: with.len() as u64,
        networks_with_mle: with.iter().map(|r| r.fiber_size).sum(),
        runtime: start.elapsed().as_secs_f64(),
    };
    Ok(CensusRun { table, records })
}

/// Number of vertices of the marginal polytope.
pub fn vertex_count(n: usize, variant: ReciprocityVariant) -> Result<u64> {
    let opts = CensusOptions { cap: DEFAULT_VERTEX_CAP, ..CensusOptions::default() };
    Ok(vertex_census_with(n, variant, &opts)?.iter().filter(|r| r.flag).count() as u64)
}

/// Vertex decision for every distinct statistic. The theta row is a sum of
/// alpha rows, so it is dropped without changing the polytope's vertices.
pub fn vertex_census_with(n: usize, variant: ReciprocityVariant, opts: &CensusOptions) -> Result<Vec<StatisticRecord>> {
    check_cap(n, opts.cap)?;
    let a = DesignMatrix::new(n, variant, false)?;
    run_grouped(&a, "vertices", opts, |_, fiber| {
        if fiber.size > 1 {
            return Ok(false);
        }
        is_minkowski_vertex(&a, &network_at(a.n(), fiber.first), Some(1))
    })
}

/// One row of vertex counts in the layout of the vertex table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexRow {
    pub n: usize,
    pub zero: Option<u64>,
    pub constant: Option<u64>,
    pub edge: Option<u64>,
    /// Columns of the design matrix, `2n(n-1)`.
    pub columns: usize,
}

impl VertexRow {
    pub fn set(&mut self, variant: ReciprocityVariant, count: u64) {
        match variant {
            ReciprocityVariant::Zero => self.zero = Some(count),
            ReciprocityVariant::Constant => self.constant = Some(count),
            ReciprocityVariant::EdgeDependent => self.edge = Some(count),
        }
    }

    pub fn write_csv<W: Write>(rows: &[VertexRow], out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "rho_zero", "rho_const", "rho_edge", "columns"])?;
        let cell = |v: Option<u64>| v.map(|c| c.to_string()).unwrap_or_default();
        for r in rows {
            w.write_record([r.n.to_string(), cell(r.zero), cell(r.constant), cell(r.edge), r.columns.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Facet count, dimension and ambient dimension of a marginal cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FacetCounts {
    pub facets: usize,
    /// Dimension of the cone's cross-section polytope, `rank(A) - 1`.
    pub dim: usize,
    /// Rows of `A` with the theta row dropped.
    pub ambient_dim: usize,
}

/// Facet table entry for `A(n, variant)` with the theta row dropped.
pub fn facet_table(n: usize, variant: ReciprocityVariant) -> Result<FacetCounts> {
    facet_table_capped(n, variant, DEFAULT_FACET_CAP)
}

pub fn facet_table_capped(n: usize, variant: ReciprocityVariant, cap: usize) -> Result<FacetCounts> {
    check_cap(n, cap)?;
    let a = DesignMatrix::new(n, variant, false)?;
    let cone = PolyhedralCone::from_design(&a);
    Ok(FacetCounts { facets: cone.facets()?.len(), dim: cone.dimension() - 1, ambient_dim: cone.ambient_dimension() })
}

/// One row of the facet table: counts per variant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FacetRow {
    pub n: usize,
    pub zero: Option<FacetCounts>,
    pub constant: Option<FacetCounts>,
    pub edge: Option<FacetCounts>,
}

impl FacetRow {
    pub fn set(&mut self, variant: ReciprocityVariant, counts: FacetCounts) {
        match variant {
            ReciprocityVariant::Zero => self.zero = Some(counts),
            ReciprocityVariant::Constant => self.constant = Some(counts),
            ReciprocityVariant::EdgeDependent => self.edge = Some(counts),
        }
    }

    pub fn write_csv<W: Write>(rows: &[FacetRow], out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["n".to_string()];
        for v in ReciprocityVariant::ALL {
            for f in ["facets", "dim", "ambient_dim"] {
                header.push(format!("{}_{f}", v.as_str()));
            }
        }
        w.write_record(&header)?;
        for r in rows {
            let mut rec = vec![r.n.to_string()];
            for c in [r.zero, r.constant, r.edge] {
                match c {
                    Some(c) => rec.extend([c.facets.to_string(), c.dim.to_string(), c.ambient_dim.to_string()]),
                    None => rec.extend([String::new(), String::new(), String::new()]),
                }
            }
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// How a pattern of zeros forces the MLE to the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternClass {
    /// A row or column sum equal to `n - 1`.
    RowColMax,
    /// A row or column sum equal to zero.
    RowColZero,
    /// Neither of the above.
    Subtle,
}

impl fmt::Display for PatternClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PatternClass::RowColMax => "row_col_max",
            PatternClass::RowColZero => "row_col_zero",
            PatternClass::Subtle => "subtle",
        })
    }
}

/// A set of off-diagonal incidence cells that are zero together.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ZeroPattern {
    pub n: usize,
    /// One-based `(from, to)` cells, ascending.
    pub cells: BTreeSet<(usize, usize)>,
    pub class: PatternClass,
}

impl ZeroPattern {
    /// Incidence matrix with `0` on the pattern, `1` elsewhere, `x` on the diagonal.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for i in 1..=self.n {
            let row: Vec<&str> = (1..=self.n)
                .map(|j| {
                    if i == j {
                        "x"
                    } else if self.cells.contains(&(i, j)) {
                        "0"
                    } else {
                        "1"
                    }
                })
                .collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// The complete network with the pattern's cells removed.
    pub fn imposed_on_complete(&self) -> Network {
        Network::from_edges(self.n, |i, j| !self.cells.contains(&(i + 1, j + 1)))
    }
}

fn classify(n: usize, cells: &BTreeSet<(usize, usize)>) -> PatternClass {
    let row_or_col = (1..=n).any(|i| {
        let row: BTreeSet<_> = (1..=n).filter(|&j| j != i).map(|j| (i, j)).collect();
        let col: BTreeSet<_> = (1..=n).filter(|&j| j != i).map(|j| (j, i)).collect();
        *cells == row || *cells == col
    });
    if row_or_col {
        PatternClass::RowColZero
    } else {
        PatternClass::Subtle
    }
}

/// The zero pattern of every facet of `cone(B(n))`: the cells off the facet.
pub fn facet_patterns(n: usize) -> Result<Vec<ZeroPattern>> {
    check_cap(n, MAX_PATTERN_N.max(MAX_CONJECTURE_N))?;
    let b = common_submatrix(n)?;
    let mut out: Vec<ZeroPattern> = cone_facets(&b)?
        .into_iter()
        .map(|f| {
            let cells: BTreeSet<(usize, usize)> = (0..b.ncols())
                .filter(|c| f.tight.binary_search(c).is_err())
                .map(|c| {
                    let (i, j) = common_submatrix_cell(n, c);
                    (i + 1, j + 1)
                })
                .collect();
            let class = classify(n, &cells);
            ZeroPattern { n, cells, class }
        })
        .collect();
    out.sort();
    Ok(out)
}

/// The Subtle zero patterns for `n` nodes.
pub fn zero_pattern_catalog(n: usize) -> Result<Vec<ZeroPattern>> {
    check_cap(n, MAX_PATTERN_N)?;
    Ok(facet_patterns(n)?.into_iter().filter(|p| p.class == PatternClass::Subtle).collect())
}

/// Facet count of `cone(B(n))` against the predicted `3n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureRow {
    pub n: usize,
    pub facets: usize,
    pub predicted: usize,
    pub row_col_zero: usize,
    pub subtle: usize,
    /// `facets == 3n`.
    pub count_agrees: bool,
    /// `row_col_zero == 2n` and `subtle == n`.
    pub split_agrees: bool,
}

impl ConjectureRow {
    pub fn write_csv<W: Write>(rows: &[ConjectureRow], out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "facets", "predicted", "row_col_zero", "subtle", "count_agrees", "split_agrees"])?;
        for r in rows {
            w.write_record([
                r.n.to_string(),
                r.facets.to_string(),
                r.predicted.to_string(),
                r.row_col_zero.to_string(),
                r.subtle.to_string(),
                r.count_agrees.to_string(),
                r.split_agrees.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Computes facet counts of `cone(B(n))` for each `n` and records, without
/// assuming it, whether they match `3n` with a `2n + n` split.
pub fn conjecture_check(range: RangeInclusive<usize>) -> Result<Vec<ConjectureRow>> {
    range
        .map(|n| {
            check_cap(n, MAX_CONJECTURE_N)?;
            let patterns = facet_patterns(n)?;
            let row_col_zero = patterns.iter().filter(|p| p.class == PatternClass::RowColZero).count();
            let subtle = patterns.iter().filter(|p| p.class == PatternClass::Subtle).count();
            Ok(ConjectureRow {
                n,
                facets: patterns.len(),
                predicted: 3 * n,
                row_col_zero,
                subtle,
                count_agrees: patterns.len() == 3 * n,
                split_agrees: row_col_zero == 2 * n && subtle == n,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_census() {
        let t = statistic_census(3, ReciprocityVariant::Zero, true).unwrap();
        assert_eq!((t.networks_total, t.distinct_statistics, t.statistics_with_mle, t.networks_with_mle), (64, 63, 1, 2));
    }

    #[test]
    fn caps() {
        assert!(matches!(statistic_census(6, ReciprocityVariant::Zero, true), Err(Error::SizeCap { .. })));
        assert!(matches!(vertex_count(5, ReciprocityVariant::Zero), Err(Error::SizeCap { .. })));
        assert!(matches!(facet_table(2, ReciprocityVariant::Zero), Err(Error::TooFewNodes(2))));
        assert!(zero_pattern_catalog(9).is_err());
    }

    #[test]
    fn checkpoint_round_trip_and_resume() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ck.txt");
        let opts = CensusOptions { checkpoint: Some(path.clone()), ..CensusOptions::default() };
        let first = statistic_census_with(3, ReciprocityVariant::Zero, false, &opts).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("p1geom-checkpoint 1\nkind census\nn 3\nvariant zero\ntheta 0\nentries 63\n"));
        // Resume from a complete checkpoint reproduces the run.
        let second = statistic_census_with(3, ReciprocityVariant::Zero, false, &opts).unwrap();
        assert_eq!(first.records, second.records);
        // A mismatched configuration is refused.
        assert!(matches!(
            statistic_census_with(3, ReciprocityVariant::Constant, false, &opts),
            Err(Error::Checkpoint(_))
        ));
        fs::write(&path, "garbage\n").unwrap();
        assert!(matches!(
            statistic_census_with(3, ReciprocityVariant::Zero, false, &opts),
            Err(Error::Checkpoint(_))
        ));
    }

    #[test]
    fn patterns_n3() {
        let all = facet_patterns(3).unwrap();
        assert_eq!(all.len(), 9);
        let subtle = zero_pattern_catalog(3).unwrap();
        let cells: Vec<Vec<(usize, usize)>> = subtle.iter().map(|p| p.cells.iter().copied().collect()).collect();
        assert_eq!(cells, vec![vec![(1, 2), (2, 1)], vec![(1, 3), (3, 1)], vec![(2, 3), (3, 2)]]);
        assert_eq!(subtle[0].render(), "x 0 1\n0 x 1\n1 1 x\n");
    }

    #[test]
    fn csv_layouts() {
        let mut row = VertexRow { n: 3, zero: None, constant: None, edge: None, columns: 12 };
        row.set(ReciprocityVariant::Constant, 62);
        let mut buf = Vec::new();
        VertexRow::write_csv(&[row], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,rho_zero,rho_const,rho_edge,columns\n3,,62,,12\n");
    }
}
