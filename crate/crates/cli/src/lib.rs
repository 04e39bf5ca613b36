//! Command-line frontend: parse Gram files, dispatch to the lattice
//! operations, and emit deterministic machine-readable reports.
//!
//! Exit codes: 0 success, 2 validation or parse errors (bad matrix, not
//! well-rounded, unknown name), 3 work-budget exceeded.

use std::io::Read;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use wrlat_core::gram::{format_rat, parse_rat};
use wrlat_core::invariants::{quotient_code_of, watson_check};
use wrlat_core::engine::{
    index_system_of_vectors, quotient_of_vectors, IndexSystemOptions,
};
use wrlat_core::catalog::{self, FamilySpec, GlueSpec, NAMED_MATRICES};
use wrlat_core::invariants::perfection_rank_of;
use wrlat_core::minvec::minimal_vectors;
use wrlat_core::{GramMatrix, LatticeError, Rat, DEFAULT_BUDGET};

/// Environment variable providing the default thread count.
pub const THREADS_ENV: &str = "WRLAT_THREADS";

#[derive(Parser)]
#[command(
    name = "wrlat",
    about = "Exact invariants of well-rounded lattices: minimal vectors, index systems, quotient codes",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    /// Gram file path, '-' for stdin, or 'catalog:NAME'
    input: String,
    /// Worker threads (default: WRLAT_THREADS or all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Cap on the number of basis subsets a scan may visit
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Append wall-clock timing to the report (off keeps output byte-identical)
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Minimum and minimal-vector count (text format lists the vectors)
    Minvec(Common),
    /// Index system over all minimal-vector bases
    IndexSystem {
        #[command(flatten)]
        common: Common,
        /// Include per-type occurrence counts
        #[arg(long)]
        counts: bool,
    },
    /// Maximal index over all minimal-vector bases
    MaxIndex(Common),
    /// Rank of the projections x x^T over the minimal vectors
    PerfectionRank(Common),
    /// Quotient code of one chosen minimal-vector basis
    Code {
        #[command(flatten)]
        common: Common,
        /// Comma-separated indices into the sorted minimal-vector list
        #[arg(long, value_delimiter = ',')]
        subset: Vec<usize>,
    },
    /// Watson identity certificate for e = (sum a_i e_i)/d over a base Gram
    Watson {
        #[command(flatten)]
        common: Common,
        /// Glue denominator
        #[arg(long)]
        d: u64,
        /// Comma-separated glue coefficients a_1,...,a_n
        #[arg(long, value_delimiter = ',')]
        a: Vec<i64>,
    },
    /// Build a lattice and print its Gram matrix in the shared text format
    ///
    /// Family form:  construct --family d=<d> m=<m1,m2,...> x=<x1,...> y=<y12,...> [n=<n>]
    /// Glue form:    construct --glue base=<file> v=<p/q,...> [v=<p/q,...> ...]
    Construct {
        /// Block-family construction (key=value tokens follow)
        #[arg(long, conflicts_with = "glue")]
        family: bool,
        /// Glue-vector construction (key=value tokens follow)
        #[arg(long)]
        glue: bool,
        /// key=value parameters
        #[arg(trailing_var_arg = true)]
        params: Vec<String>,
    },
    /// List catalog names or export one as Gram text
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Print the available names
    List,
    /// Print a catalog Gram matrix in the shared text format
    Export { name: String },
}

/// Runs the CLI; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Lattice(LatticeError::BudgetExceeded { .. }) => 3,
                _ => 2,
            }
        }
    }
}

enum CliError {
    Lattice(LatticeError),
    Io(String),
    Usage(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lattice(e) => write!(f, "{e}"),
            CliError::Io(m) | CliError::Usage(m) => f.write_str(m),
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        CliError::Lattice(e)
    }
}

fn load_gram(input: &str) -> Result<GramMatrix, CliError> {
    if let Some(name) = input.strip_prefix("catalog:") {
        return Ok(catalog::by_name(name)?);
    }
    let text = if input == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Io(format!("cannot read stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(input)
            .map_err(|e| CliError::Io(format!("cannot read {input}: {e}")))?
    };
    Ok(GramMatrix::parse_text(&text)?)
}

fn thread_count(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(t) = flag {
        if t == 0 {
            return Err(CliError::Usage("--threads must be >= 1".into()));
        }
        return Ok(t);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .parse::<usize>()
            .ok()
            .filter(|&t| t >= 1)
            .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer"))),
        Err(_) => Ok(0), // all cores
    }
}

fn emit(report: Map<String, Value>, lines: Vec<String>, format: Format) {
    match format {
        Format::Json => println!("{}", Value::Object(report)),
        Format::Text => {
            for l in lines {
                println!("{l}");
            }
        }
    }
}

fn rat_str(x: &Rat) -> String {
    format_rat(x)
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Minvec(c) => {
            let started = Instant::now();
            let g = load_gram(&c.input)?;
            let mv = minimal_vectors(&g);
            let mut m = Map::new();
            m.insert("n".into(), json!(g.dim()));
            m.insert("minimum".into(), json!(rat_str(&mv.minimum)));
            m.insert("s".into(), json!(mv.s()));
            let mut lines = vec![
                format!("n = {}", g.dim()),
                format!("minimum = {}", rat_str(&mv.minimum)),
                format!("s = {}", mv.s()),
            ];
            for v in &mv.vectors {
                lines.push(
                    v.iter().map(i64::to_string).collect::<Vec<_>>().join(" "),
                );
            }
            finish(&mut m, &mut lines, c.timing, started);
            emit(m, lines, c.format);
            Ok(())
        }
        Command::IndexSystem { common: c, counts } => {
            let started = Instant::now();
            let g = load_gram(&c.input)?;
            let opts = IndexSystemOptions {
                want_counts: counts,
                threads: thread_count(c.threads)?,
                budget: check_budget(c.budget)?,
            };
            let mv = minimal_vectors(&g);
            let report = index_system_of_vectors(g.dim(), &mv, &opts)?;
            let mut m = Map::new();
            m.insert("n".into(), json!(report.n));
            m.insert("minimum".into(), json!(rat_str(&report.minimum)));
            m.insert("s".into(), json!(report.s));
            let types: Vec<String> = report.system.iter().map(|t| t.to_string()).collect();
            m.insert("index_system".into(), json!(types));
            let mut lines = vec![
                format!("n = {}", report.n),
                format!("minimum = {}", rat_str(&report.minimum)),
                format!("s = {}", report.s),
                format!("index_system = {{{}}}", types.join(", ")),
            ];
            if let Some(cmap) = &report.counts {
                let mut obj = Map::new();
                for t in &report.system {
                    obj.insert(t.to_string(), json!(cmap[t]));
                }
                m.insert("counts".into(), Value::Object(obj));
                for t in &report.system {
                    lines.push(format!("count[{t}] = {}", cmap[t]));
                }
            }
            m.insert("max_index".into(), json!(report.max_index));
            lines.push(format!("max_index = {}", report.max_index));
            lines.push(format!("bases_full_rank = {}", report.bases_full_rank));
            lines.push(format!("subsets_examined = {}", report.subsets_examined));
            finish(&mut m, &mut lines, c.timing, started);
            emit(m, lines, c.format);
            Ok(())
        }
        Command::MaxIndex(c) => {
            let started = Instant::now();
            let g = load_gram(&c.input)?;
            let opts = IndexSystemOptions {
                want_counts: false,
                threads: thread_count(c.threads)?,
                budget: check_budget(c.budget)?,
            };
            let mv = minimal_vectors(&g);
            let report = index_system_of_vectors(g.dim(), &mv, &opts)?;
            let mut m = Map::new();
            m.insert("n".into(), json!(report.n));
            m.insert("minimum".into(), json!(rat_str(&report.minimum)));
            m.insert("s".into(), json!(report.s));
            m.insert("max_index".into(), json!(report.max_index));
            let mut lines = vec![
                format!("n = {}", report.n),
                format!("minimum = {}", rat_str(&report.minimum)),
                format!("s = {}", report.s),
                format!("max_index = {}", report.max_index),
            ];
            finish(&mut m, &mut lines, c.timing, started);
            emit(m, lines, c.format);
            Ok(())
        }
        Command::PerfectionRank(c) => {
            let started = Instant::now();
            let g = load_gram(&c.input)?;
            let mv = minimal_vectors(&g);
            let rank = perfection_rank_of(g.dim(), &mv);
            let mut m = Map::new();
            m.insert("n".into(), json!(g.dim()));
            m.insert("minimum".into(), json!(rat_str(&mv.minimum)));
            m.insert("s".into(), json!(mv.s()));
            m.insert("perfection_rank".into(), json!(rank));
            let mut lines = vec![
                format!("n = {}", g.dim()),
                format!("minimum = {}", rat_str(&mv.minimum)),
                format!("s = {}", mv.s()),
                format!("perfection_rank = {rank}"),
            ];
            finish(&mut m, &mut lines, c.timing, started);
            emit(m, lines, c.format);
            Ok(())
        }
        Command::Code { common: c, subset } => {
            let started = Instant::now();
            let g = load_gram(&c.input)?;
            let mv = minimal_vectors(&g);
            let (index, t) = quotient_of_vectors(g.dim(), &mv, &subset)?;
            let code = quotient_code_of(g.dim(), &mv, &subset)?;
            let mut m = Map::new();
            m.insert("n".into(), json!(g.dim()));
            m.insert("subset".into(), json!(subset));
            m.insert("index".into(), json!(index));
            m.insert("quotient".into(), json!(t.to_string()));
            m.insert("d".into(), json!(code.d));
            m.insert("codewords".into(), json!(code.generators));
            m.insert("support_size".into(), json!(code.support_size()));
            let mut lines = vec![
                format!("index = {index}"),
                format!("quotient = {t}"),
                format!("d = {}", code.d),
                format!("support_size = {}", code.support_size()),
            ];
            for w in &code.generators {
                lines.push(format!(
                    "codeword: {}",
                    w.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
                ));
            }
            finish(&mut m, &mut lines, c.timing, started);
            emit(m, lines, c.format);
            Ok(())
        }
        Command::Watson { common: c, d, a } => {
            let started = Instant::now();
            let g = load_gram(&c.input)?;
            let cert = watson_check(&g, &a, d)?;
            let mut m = Map::new();
            m.insert("d".into(), json!(cert.d));
            m.insert("a".into(), json!(cert.coeffs));
            m.insert("lhs".into(), json!(rat_str(&cert.lhs)));
            m.insert("rhs".into(), json!(rat_str(&cert.rhs)));
            m.insert("balanced".into(), json!(cert.balanced));
            m.insert("minimal_shifts".into(), json!(cert.minimal_shifts));
            let mut lines = vec![
                format!("lhs = {}", rat_str(&cert.lhs)),
                format!("rhs = {}", rat_str(&cert.rhs)),
                format!("balanced = {}", cert.balanced),
                format!(
                    "minimal_shifts = [{}]",
                    cert.minimal_shifts
                        .iter()
                        .map(usize::to_string)
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
            ];
            finish(&mut m, &mut lines, c.timing, started);
            emit(m, lines, c.format);
            Ok(())
        }
        Command::Construct { family, glue, params } => {
            if family == glue {
                return Err(CliError::Usage(
                    "construct needs exactly one of --family or --glue".into(),
                ));
            }
            let kv = parse_kv(&params)?;
            let (gram, index) = if family {
                construct_family(&kv)?
            } else {
                construct_glue(&kv)?
            };
            print!("# index over the base lattice: {index}\n{}", gram.to_text());
            Ok(())
        }
        Command::Catalog { action } => match action {
            CatalogAction::List => {
                println!("A<n> (n >= 1), D<n> (n >= 4), E6, E7, E8");
                for name in NAMED_MATRICES {
                    println!("{name}");
                }
                Ok(())
            }
            CatalogAction::Export { name } => {
                let g = catalog::by_name(&name)?;
                print!("{}", g.to_text());
                Ok(())
            }
        },
    }
}

fn check_budget(budget: u64) -> Result<u64, CliError> {
    if budget == 0 {
        return Err(CliError::Usage("--budget must be >= 1".into()));
    }
    Ok(budget)
}

fn finish(m: &mut Map<String, Value>, lines: &mut Vec<String>, timing: bool, started: Instant) {
    if timing {
        let secs = started.elapsed().as_secs_f64();
        m.insert("timing".into(), json!(secs));
        lines.push(format!("timing = {secs}"));
    }
}

fn parse_kv(params: &[String]) -> Result<Vec<(String, String)>, CliError> {
    params
        .iter()
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| CliError::Usage(format!("expected key=value, got {p:?}")))
        })
        .collect()
}

fn one<'a>(kv: &'a [(String, String)], key: &str) -> Result<&'a str, CliError> {
    let mut values = kv.iter().filter(|(k, _)| k == key).map(|(_, v)| v.as_str());
    let v = values
        .next()
        .ok_or_else(|| CliError::Usage(format!("missing {key}=<...>")))?;
    if values.next().is_some() {
        return Err(CliError::Usage(format!("duplicate {key}=<...>")));
    }
    Ok(v)
}

fn rat_list(text: &str) -> Result<Vec<Rat>, CliError> {
    text.split(',')
        .map(|t| parse_rat(t.trim()).map_err(CliError::Usage))
        .collect()
}

fn construct_family(kv: &[(String, String)]) -> Result<(GramMatrix, u64), CliError> {
    let d: u64 = one(kv, "d")?
        .parse()
        .map_err(|_| CliError::Usage("d must be an integer >= 2".into()))?;
    let block_sizes: Vec<usize> = one(kv, "m")?
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| CliError::Usage("bad m list".into())))
        .collect::<Result<_, _>>()?;
    let intra = rat_list(one(kv, "x")?)?;
    let inter = match kv.iter().find(|(k, _)| k == "y") {
        Some((_, v)) => rat_list(v)?,
        None => Vec::new(),
    };
    let m: usize = block_sizes.iter().sum();
    let n: usize = match kv.iter().find(|(k, _)| k == "n") {
        Some((_, v)) => v.parse().map_err(|_| CliError::Usage("bad n".into()))?,
        None => m,
    };
    let spec = FamilySpec { block_sizes, d, n, intra, inter, overrides: vec![] };
    let base = spec.base_gram()?;
    let v = spec.glue_vector();
    let (gram, index) = catalog::glue(&GlueSpec { base, glue_vectors: vec![v] })?;
    Ok((gram, index))
}

fn construct_glue(kv: &[(String, String)]) -> Result<(GramMatrix, u64), CliError> {
    let base = load_gram(one(kv, "base")?)?;
    let vectors: Vec<Vec<Rat>> = kv
        .iter()
        .filter(|(k, _)| k == "v")
        .map(|(_, v)| rat_list(v))
        .collect::<Result<_, _>>()?;
    if vectors.is_empty() {
        return Err(CliError::Usage("missing v=<p/q,...>".into()));
    }
    Ok(catalog::glue(&GlueSpec { base, glue_vectors: vectors })?)
}
