//! The `p1geom` command-line front end.
//!
//! Exit status: 0 on success, 1 on domain errors (unreadable or malformed
//! network input, statistic outside the cone), 2 on usage errors (unknown
//! flags, invalid option values, size caps).

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::census::{
    conjecture_check, facet_patterns, facet_table_capped, statistic_census_with, vertex_census_with,
    zero_pattern_catalog, CensusOptions, CensusTable, ConjectureRow, FacetRow, VertexRow, DEFAULT_FACET_CAP,
    DEFAULT_VERTEX_CAP, MAX_CONJECTURE_N, MAX_PATTERN_N,
};
use crate::error::Error;
use crate::mle::{check_mle_exists, facial_set_of, fit, FitOptions, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::model::{DesignMatrix, Network, NetworkFormat, ReciprocityVariant};
use crate::polyhedra::PolyhedralCone;

/// Largest `n` accepted by enumeration commands with --allow-big.
pub const BIG_CAP: usize = 8;
/// Largest `n` for census without --allow-big.
pub const DEFAULT_CENSUS_CAP: usize = 4;

const FORMATS_HELP: &str = "\
Network formats:
  vector     2n(n-1) whitespace-separated 0/1 tokens, dyads (1,2),(1,3),...,(n-1,n)
             in order; each block of four is p(0,0) p(1,0) p(0,1) p(1,1) with exactly
             one 1, where (a,b) = (edge i->j, edge j->i).
  incidence  n rows of n whitespace-separated symbols; entry (i,j) is 1 for an edge
             i->j, 0 otherwise; the diagonal is ignored (write x or 0).

Exit status: 0 success, 1 domain error (bad network input), 2 usage error.";

#[derive(Debug, Parser)]
#[command(name = "p1geom", version, about = "MLE existence, facial sets and polyhedral censuses for p1 network models", after_help = FORMATS_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Rho {
    Zero,
    Const,
    Edge,
}

impl From<Rho> for ReciprocityVariant {
    fn from(r: Rho) -> Self {
        match r {
            Rho::Zero => ReciprocityVariant::Zero,
            Rho::Const => ReciprocityVariant::Constant,
            Rho::Edge => ReciprocityVariant::EdgeDependent,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Theta {
    Keep,
    Drop,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Vector,
    Incidence,
}

impl From<Format> for NetworkFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Vector => NetworkFormat::Vector,
            Format::Incidence => NetworkFormat::Incidence,
        }
    }
}

#[derive(Debug, Args)]
struct Output {
    /// Write results to PATH instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Reciprocation variant.
    #[arg(long, value_enum, default_value = "zero")]
    rho: Rho,
    /// Keep or drop the theta (density) row.
    #[arg(long, value_enum, default_value = "keep")]
    theta: Theta,
}

#[derive(Debug, Args)]
struct NetworkInput {
    /// Number of nodes; inferred from the input when omitted.
    #[arg(long)]
    n: Option<usize>,
    /// Input network format.
    #[arg(long, value_enum, default_value = "vector")]
    format: Format,
    /// Network file; standard input when omitted or `-`.
    input: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Sizes {
    /// Number of nodes.
    #[arg(long)]
    n: usize,
    /// Lift the default size cap (long runs).
    #[arg(long)]
    allow_big: bool,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the design matrix A as CSV (first column = parameter labels,
    /// header = column labels p_{i,j}(a,b)).
    Matrix {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Print the sufficient statistic t = A x of a network as CSV `param,value`.
    #[command(after_help = FORMATS_HELP)]
    Stat {
        #[command(flatten)]
        input: NetworkInput,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Decide whether the MLE exists (exact LP) and print the facial set.
    ///
    /// Output lines: exists=, in_cone=, s_star=, facial_set= (1-based column indices).
    #[command(after_help = FORMATS_HELP)]
    Check {
        #[command(flatten)]
        input: NetworkInput,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Fit the MLE or extended MLE; prints a JSON report.
    #[command(after_help = FORMATS_HELP)]
    Fit {
        #[command(flatten)]
        input: NetworkInput,
        #[command(flatten)]
        model: ModelArgs,
        /// Tolerance on max |A p - t|.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Enumerate all networks and count distinct statistics and existent MLEs.
    ///
    /// CSV columns: n,variant,theta,networks_total,distinct_statistics,
    /// statistics_with_mle,networks_with_mle. Without --rho all three variants
    /// are run. n > 4 needs --allow-big.
    Census {
        #[command(flatten)]
        sizes: Sizes,
        #[arg(long, value_enum)]
        rho: Option<Rho>,
        #[arg(long, value_enum, default_value = "keep")]
        theta: Theta,
        /// Resume from and save progress to this checkpoint file (single variant only).
        #[arg(long, value_name = "PATH")]
        checkpoint: Option<PathBuf>,
        /// Print JSON instead of CSV.
        #[arg(long)]
        json: bool,
        /// Include wall-clock runtime (output is then not reproducible).
        #[arg(long)]
        timing: bool,
        /// Progress lines on standard error.
        #[arg(long)]
        progress: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Count vertices of the marginal polytope P_A.
    ///
    /// CSV columns: n,rho_zero,rho_const,rho_edge,columns. With --list, prints
    /// the vertices instead (one margin vector per row, theta dropped). n > 4
    /// needs --allow-big.
    Vertices {
        #[command(flatten)]
        sizes: Sizes,
        #[arg(long, value_enum)]
        rho: Option<Rho>,
        /// List vertex margin vectors (requires --rho).
        #[arg(long, requires = "rho")]
        list: bool,
        #[arg(long)]
        progress: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Facets, dimension and ambient dimension of the marginal cone C_A.
    ///
    /// CSV columns: n, then facets,dim,ambient_dim per variant. dim is
    /// rank(A) - 1. With --list, prints the facet normals instead (one integer
    /// functional per row). n > 5 needs --allow-big.
    Facets {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        rho: Option<Rho>,
        #[arg(long, value_enum, default_value = "drop")]
        theta: Theta,
        #[arg(long)]
        allow_big: bool,
        /// List facet normals (requires --rho).
        #[arg(long, requires = "rho")]
        list: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Zero patterns leading to a nonexistent MLE (rho = 0), as incidence
    /// matrices with 0 on the pattern and x on the diagonal.
    Patterns {
        #[arg(long)]
        n: usize,
        /// Include the row/column-zero patterns too.
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Facet counts of cone(B(n)) against 3n, with the 2n/n split.
    ///
    /// CSV columns: n,facets,predicted,row_col_zero,subtle,count_agrees,split_agrees.
    Conjecture {
        #[arg(long, default_value_t = 3)]
        from: usize,
        #[arg(long, default_value_t = 8)]
        to: usize,
        #[command(flatten)]
        output: Output,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TooFewNodes(_) | Error::SizeCap { .. } => Failure::Usage(e.to_string()),
            other => Failure::Domain(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn variants(rho: Option<Rho>) -> Vec<ReciprocityVariant> {
    match rho {
        Some(r) => vec![r.into()],
        None => ReciprocityVariant::ALL.to_vec(),
    }
}

fn cap(allow_big: bool, default: usize) -> usize {
    if allow_big {
        BIG_CAP
    } else {
        default
    }
}

fn read_network(input: &NetworkInput, stdin: &mut dyn Read) -> CliResult<Network> {
    let (name, text) = match &input.input {
        Some(p) if p.as_os_str() != "-" => {
            let name = p.display().to_string();
            let text = fs::read_to_string(p).map_err(|e| Failure::Domain(format!("{name}: {e}")))?;
            (name, text)
        }
        _ => {
            let mut text = String::new();
            stdin.read_to_string(&mut text).map_err(|e| Failure::Domain(format!("<stdin>: {e}")))?;
            ("<stdin>".to_string(), text)
        }
    };
    let net = Network::parse(&text, input.format.into()).map_err(|e| Failure::Domain(format!("{name}: {e}")))?;
    if let Some(n) = input.n {
        if n != net.n() {
            return Err(Failure::Domain(format!("{name}: network has {} nodes but --n is {n}", net.n())));
        }
    }
    Ok(net)
}

fn design(n: usize, model: &ModelArgs) -> CliResult<DesignMatrix> {
    Ok(DesignMatrix::new(n, model.rho.into(), matches!(model.theta, Theta::Keep))?)
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn execute(cmd: Command, stdin: &mut dyn Read, stderr: &mut dyn Write) -> CliResult<(Vec<u8>, Option<PathBuf>)> {
    let mut buf: Vec<u8> = Vec::new();
    let io = |e: std::io::Error| Failure::Domain(e.to_string());
    let out = match cmd {
        Command::Matrix { n, model, output } => {
            design(n, &model)?.write_csv(&mut buf)?;
            output.out
        }
        Command::Stat { input, model, output } => {
            let x = read_network(&input, stdin)?;
            let a = design(x.n(), &model)?;
            let t = a.sufficient_statistic(&x)?;
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(["param", "value"]).map_err(Error::from)?;
            for (label, v) in a.row_labels().iter().zip(t.values()) {
                w.write_record([label.clone(), v.to_string()]).map_err(Error::from)?;
            }
            w.flush().map_err(io)?;
            drop(w);
            output.out
        }
        Command::Check { input, model, output } => {
            let x = read_network(&input, stdin)?;
            let a = design(x.n(), &model)?;
            let t = a.sufficient_statistic(&x)?;
            let report = check_mle_exists(&a, &t)?;
            let face = facial_set_of(&a, &t)?;
            writeln!(buf, "exists={}", report.exists).map_err(io)?;
            writeln!(buf, "in_cone={}", report.in_cone).map_err(io)?;
            writeln!(buf, "s_star={}", report.s_star).map_err(io)?;
            writeln!(buf, "facial_set={}", join(&face.one_based())).map_err(io)?;
            output.out
        }
        Command::Fit { input, model, tol, max_iter, output } => {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Failure::Usage(format!("--tol must be a positive number, got {tol}")));
            }
            let x = read_network(&input, stdin)?;
            let a = design(x.n(), &model)?;
            let result = fit(&a, &x, FitOptions { tol, max_iter })?;
            if !result.converged {
                writeln!(stderr, "warning: fit did not converge within {max_iter} iterations").map_err(io)?;
            }
            writeln!(buf, "{}", result.to_json()?).map_err(io)?;
            output.out
        }
        Command::Census { sizes, rho, theta, checkpoint, json, timing, progress, output } => {
            let vs = variants(rho);
            if checkpoint.is_some() && vs.len() > 1 {
                return Err(Failure::Usage("--checkpoint needs a single --rho".into()));
            }
            let opts = CensusOptions {
                cap: cap(sizes.allow_big, DEFAULT_CENSUS_CAP),
                jobs: sizes.jobs,
                checkpoint,
                progress,
            };
            let mut tables: Vec<CensusTable> = Vec::new();
            for v in vs {
                tables.push(statistic_census_with(sizes.n, v, matches!(theta, Theta::Keep), &opts)?.table);
            }
            if json {
                let docs: Vec<String> = tables.iter().map(|t| t.to_json(timing)).collect::<Result<_, _>>()?;
                writeln!(buf, "[{}]", docs.join(",\n")).map_err(io)?;
            } else {
                CensusTable::write_csv(&tables, &mut buf, timing)?;
            }
            output.out
        }
        Command::Vertices { sizes, rho, list, progress, output } => {
            let opts = CensusOptions {
                cap: cap(sizes.allow_big, DEFAULT_VERTEX_CAP),
                jobs: sizes.jobs,
                checkpoint: None,
                progress,
            };
            let mut row = VertexRow { n: sizes.n, zero: None, constant: None, edge: None, columns: 0 };
            for v in variants(rho) {
                let records = vertex_census_with(sizes.n, v, &opts)?;
                if list {
                    let a = DesignMatrix::new(sizes.n, v, false)?;
                    let mut w = csv::Writer::from_writer(&mut buf);
                    w.write_record(a.row_labels()).map_err(Error::from)?;
                    for r in records.iter().filter(|r| r.flag) {
                        w.write_record(r.statistic.values().iter().map(i64::to_string)).map_err(Error::from)?;
                    }
                    w.flush().map_err(io)?;
                } else {
                    row.columns = 2 * sizes.n * (sizes.n - 1);
                    row.set(v, records.iter().filter(|r| r.flag).count() as u64);
                }
            }
            if !list {
                VertexRow::write_csv(&[row], &mut buf)?;
            }
            output.out
        }
        Command::Facets { n, rho, theta, allow_big, list, output } => {
            let cap = cap(allow_big, DEFAULT_FACET_CAP);
            let keep = matches!(theta, Theta::Keep);
            if list {
                let v: ReciprocityVariant = rho.expect("clap enforces --rho").into();
                if n > cap {
                    return Err(Error::SizeCap { n, cap }.into());
                }
                let a = DesignMatrix::new(n, v, keep)?;
                let cone = PolyhedralCone::from_design(&a);
                let mut w = csv::Writer::from_writer(&mut buf);
                w.write_record(a.row_labels()).map_err(Error::from)?;
                for f in cone.facets()? {
                    w.write_record(f.normal.iter().map(i64::to_string)).map_err(Error::from)?;
                }
                w.flush().map_err(io)?;
            } else {
                let mut row = FacetRow { n, zero: None, constant: None, edge: None };
                for v in variants(rho) {
                    let mut counts = facet_table_capped(n, v, cap)?;
                    if keep {
                        counts.ambient_dim += 1;
                    }
                    row.set(v, counts);
                }
                FacetRow::write_csv(&[row], &mut buf)?;
            }
            output.out
        }
        Command::Patterns { n, all, output } => {
            let patterns = if all {
                if n > MAX_PATTERN_N {
                    return Err(Error::SizeCap { n, cap: MAX_PATTERN_N }.into());
                }
                facet_patterns(n)?
            } else {
                zero_pattern_catalog(n)?
            };
            for (k, p) in patterns.iter().enumerate() {
                writeln!(buf, "# pattern {} ({})", k + 1, p.class).map_err(io)?;
                write!(buf, "{}", p.render()).map_err(io)?;
            }
            output.out
        }
        Command::Conjecture { from, to, output } => {
            if from > to {
                return Err(Failure::Usage(format!("--from {from} exceeds --to {to}")));
            }
            if to > MAX_CONJECTURE_N {
                return Err(Error::SizeCap { n: to, cap: MAX_CONJECTURE_N }.into());
            }
            ConjectureRow::write_csv(&conjecture_check(from..=to)?, &mut buf)?;
            output.out
        }
    };
    Ok((buf, out))
}

/// Runs the CLI on `args` (program name first) with explicit streams;
/// returns the exit status.
pub fn run_with<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    match execute(cli.command, stdin, stderr) {
        Ok((bytes, None)) => match stdout.write_all(&bytes) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                1
            }
        },
        Ok((bytes, Some(path))) => match fs::write(&path, bytes) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(stderr, "error: {}: {e}", path.display());
                1
            }
        },
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
    }
}

/// Runs the CLI on the process arguments and standard streams.
pub fn run() -> i32 {
    let mut stdin = std::io::stdin().lock();
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    run_with(std::env::args_os(), &mut stdin, &mut stdout, &mut stderr)
}
