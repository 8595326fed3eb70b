use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use dq::cache::Cache;
use dq::csv_io::records_to_csv;
use dq::record::{PointParams, ResultRecord};
use dq::render::{bounds_table, comparison, comparisons_to_csv};
use insdel::code::{read_code_file, verify_code_distance, write_code_file, Code};
use insdel::combinat::ceil;
use insdel::exact_solver::{exact_d, ExactValue, SolveLimits};
use insdel::isolation::{check_isolation, IsolationConfig};
use insdel::lower_bounds::{greedy_matching_code, gv_lower, matching_main_term, HypergraphSpec};
use insdel::report::{all_bounds, certified_only};
use insdel::rs_construct::{construct_insdel_code_rs, OrderStrategy, RSSpec};
use insdel::{Error, Params, Word};

const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(name = "dq", version, about = "Bounds, exact values and constructions for q-ary insdel codes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    GreedyHypergraph,
    RsIndependentSet,
}

#[derive(clap::Args)]
struct Point {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    q: u64,
    /// Minimum edit distance; odd values are raised to the next even one.
    #[arg(long)]
    d: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Every bound on D_q(n,d) at one point.
    Bounds {
        #[command(flatten)]
        point: Point,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        /// Drop estimates and keep certified or exact values only.
        #[arg(long)]
        certified_only: bool,
    },
    /// D_q(n,d) by exhaustive search, cached in $DQ_CACHE.
    Exact {
        #[command(flatten)]
        point: Point,
        /// Write the witness code here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Neither read nor write the cache.
        #[arg(long)]
        no_cache: bool,
        /// Stop the search after this many seconds.
        #[arg(long)]
        time_budget: Option<f64>,
        /// On timeout, report the best code found instead of failing.
        #[arg(long)]
        allow_incomplete: bool,
        #[arg(long, default_value_t = 4096)]
        vertex_cap: u128,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Build a code and verify its distance.
    Construct {
        #[command(flatten)]
        point: Point,
        #[arg(long, value_enum)]
        method: Method,
        /// Window length for the nonrepeating filter (RS method).
        #[arg(long, default_value_t = 3)]
        lambda: u64,
        /// Comma-separated evaluation points (RS method); default 0..n-1.
        #[arg(long, value_delimiter = ',')]
        alpha: Option<Vec<u64>>,
        /// generation, reverse or most-distinct-first (RS method).
        #[arg(long, default_value = "generation")]
        order: OrderStrategy,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the minimum edit distance of a code file.
    Verify {
        file: PathBuf,
        /// Required distance; defaults to the one in the file header.
        #[arg(long)]
        d: Option<usize>,
    },
    /// Bounds over a grid of points, one record per point.
    Table {
        /// A value or an inclusive range such as 4..6.
        #[arg(long)]
        n: String,
        #[arg(long)]
        q: String,
        /// Odd values in the range are skipped.
        #[arg(long)]
        d: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Emit comparison columns instead of the full records.
        #[arg(long)]
        compare: bool,
        #[arg(long)]
        certified_only: bool,
    },
    /// Randomized check of the isolated-position distance property.
    CheckIsolation {
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        lambda: usize,
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        #[arg(long, default_value_t = 4)]
        max_q: u32,
        #[arg(long, default_value_t = 3)]
        max_pairs: usize,
        #[arg(long)]
        json: bool,
    },
}

/// Validates the point, warning on stderr when `d` was odd.
fn params(pt: &Point) -> Result<Params> {
    let p = Params::new(pt.n, pt.q, pt.d)?;
    if p.normalized_from_odd {
        eprintln!("warning: d={} is odd; using d={} (same maximum size)", pt.d, p.d);
    }
    Ok(p)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = match e.downcast_ref::<Error>() {
                Some(Error::Resource { .. } | Error::Timeout(_)) => EXIT_RESOURCE,
                Some(Error::Internal(_)) => 1,
                Some(_) => EXIT_USAGE,
                None if e.downcast_ref::<Usage>().is_some() => EXIT_USAGE,
                None => 1,
            };
            ExitCode::from(code)
        }
    }
}

/// A mistake in the invocation rather than a failure while running.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(Usage(msg.into()))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Bounds { point, format, certified_only: only } => cmd_bounds(&point, format, only),
        Cmd::Exact { point, out, no_cache, time_budget, allow_incomplete, vertex_cap, format } => {
            let limits =
                SolveLimits { vertex_cap, time_budget: time_budget.map(Duration::from_secs_f64), allow_incomplete };
            cmd_exact(&point, out, no_cache, &limits, format)
        }
        Cmd::Construct { point, method, lambda, alpha, order, out } => {
            cmd_construct(&point, method, lambda, alpha, order, out)
        }
        Cmd::Verify { file, d } => cmd_verify(&file, d),
        Cmd::Table { n, q, d, format, compare, certified_only: only } => cmd_table(&n, &q, &d, format, compare, only),
        Cmd::CheckIsolation { trials, seed, lambda, max_n, max_q, max_pairs, json } => {
            let cfg = IsolationConfig { trials, seed, lambda, max_n, max_q, max_pairs };
            let r = check_isolation(&cfg)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&r)?);
            } else {
                println!(
                    "{} trials (seed {seed}, lambda {lambda}, n <= {max_n}, q <= {max_q}), {} rejected samples",
                    r.trials, r.rejected
                );
                println!("{} trials had an isolated position", r.with_isolated);
                println!("{} counterexamples", r.counterexamples.len());
                for c in r.counterexamples.iter().take(5) {
                    println!(
                        "  u={} v={} positions={:?} isolated={} distance={}",
                        c.u, c.v, c.positions, c.isolated, c.distance
                    );
                }
            }
            Ok(if r.counterexamples.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_VERIFY) })
        }
    }
}

fn cmd_bounds(pt: &Point, format: Format, only: bool) -> Result<ExitCode> {
    let p = params(pt)?;
    let mut bounds = all_bounds(&p)?;
    if only {
        bounds = certified_only(bounds);
    }
    match format {
        Format::Table => print!("{}", bounds_table(&p, &bounds)),
        Format::Json => println!("{}", serde_json::to_string_pretty(&ResultRecord::new(&p, bounds))?),
        Format::Csv => print!("{}", records_to_csv(&[ResultRecord::new(&p, bounds)])?),
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_word_line(line: &str, q: u32) -> Result<Word> {
    let symbols = line
        .split_whitespace()
        .map(|s| s.parse::<u32>().with_context(|| format!("bad symbol {s:?} in cached witness")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Word::new(symbols, q)?)
}

fn write_witness(path: &PathBuf, code: &Code, d: u64) -> Result<()> {
    std::fs::write(path, write_code_file(code, Some(d as usize))).with_context(|| format!("writing {}", path.display()))
}

fn cmd_exact(
    pt: &Point,
    out: Option<PathBuf>,
    no_cache: bool,
    limits: &SolveLimits,
    format: Format,
) -> Result<ExitCode> {
    let p = params(pt)?;
    let cache = Cache::from_env();
    let key = PointParams::from(&p);

    let hit = if no_cache { None } else { cache.lookup(key)? };
    let (record, witness, cache_hit) = match hit {
        Some(r) => {
            let words = r
                .witness
                .as_ref()
                .ok_or_else(|| anyhow!("cached record for {p} has no witness"))?
                .iter()
                .map(|w| parse_word_line(w, p.q as u32))
                .collect::<Result<Vec<_>>>()?;
            // re-verify instead of trusting the file
            let code = Code::new(p.n as usize, p.q as u32, words, "cache")?.certify(p.d as usize)?;
            if Some(code.len() as u64) != r.exact {
                bail!("cached witness for {p} has {} words but the record says {:?}", code.len(), r.exact);
            }
            (r, code, true)
        }
        None => {
            let res = exact_d(&p, limits)?;
            let mut r = ResultRecord::new(&p, all_bounds(&p)?);
            r.exact = res.exact().map(|v| v as u64);
            r.witness = Some(res.witness.words.iter().map(Word::to_string).collect());
            if let ExactValue::LowerWitnessOnly { proven_upper } = res.value {
                eprintln!("search stopped early after {} nodes", res.nodes);
                println!("n={} q={} d={}", p.n, p.q, p.d);
                println!("{} <= D <= {proven_upper}", res.witness.len());
                if let Some(path) = &out {
                    write_witness(path, &res.witness, p.d)?;
                }
                return Ok(ExitCode::SUCCESS);
            }
            if !no_cache {
                cache.append(&r)?;
            }
            (r, res.witness, false)
        }
    };

    if let Some(path) = &out {
        write_witness(path, &witness, p.d)?;
    }
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&record)?),
        Format::Csv => print!("{}", records_to_csv(std::slice::from_ref(&record))?),
        Format::Table => {
            println!("n={} q={} d={}", p.n, p.q, p.d);
            println!("D = {}", record.exact.expect("complete search"));
            println!("witness: {} codewords, minimum distance {}", witness.len(), witness_distance(&witness));
        }
    }
    if cache_hit {
        println!("(cache hit: {})", cache.path().display());
    }
    Ok(ExitCode::SUCCESS)
}

fn witness_distance(code: &Code) -> String {
    code.verified_min_edit_distance.map_or("n/a".into(), |d| d.to_string())
}

fn cmd_construct(
    pt: &Point,
    method: Method,
    lambda: u64,
    alpha: Option<Vec<u64>>,
    order: OrderStrategy,
    out: Option<PathBuf>,
) -> Result<ExitCode> {
    let p = params(pt)?;
    let code = match method {
        Method::GreedyHypergraph => {
            let t = p.t();
            if t == 0 {
                return Err(usage("greedy-hypergraph needs d >= 4"));
            }
            greedy_matching_code(&HypergraphSpec::new(p.n, p.q, t)?)?
        }
        Method::RsIndependentSet => {
            let k = (p.n + 1).checked_sub(p.half_d()).filter(|&k| k >= 1).ok_or_else(|| usage("need d <= 2n"))?;
            let spec = RSSpec::new(p.q, p.n, k, alpha)?;
            construct_insdel_code_rs(&spec, p.d, lambda, order)?
        }
    };
    let report = verify_code_distance(&code, p.d as usize)?;
    if !report.ok {
        bail!("internal: constructed code fails distance {} (min {})", p.d, report.min_distance);
    }
    println!("n={} q={} d={} method={}", p.n, p.q, p.d, code.provenance);
    println!("size {}, verified minimum distance {}", code.len(), witness_distance(&code));
    let gv = gv_lower(&p);
    let main = matching_main_term(&p);
    let gv_text = gv.rational().map_or("n/a".into(), |v| format!("{} (ceil {})", v, ceil(v)));
    let main_text = main.value.as_ref().map_or("n/a".into(), |v| v.to_string());
    println!("gv_lower {gv_text}; matching_main_term {main_text} (estimate)");
    let text = write_code_file(&code, Some(p.d as usize));
    match out {
        Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("\n{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(file: &PathBuf, d: Option<usize>) -> Result<ExitCode> {
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let (code, header_d) = read_code_file(&text).with_context(|| format!("parsing {}", file.display()))?;
    let d = d.or(header_d).ok_or_else(|| usage("no distance given: pass --d or put it in the header"))?;
    let r = verify_code_distance(&code, d)?;
    println!("{} codewords, n={} q={}", code.len(), code.n, code.q);
    println!("minimum edit distance {}", r.min_distance);
    if r.ok {
        println!("ok: distance >= {d}");
        return Ok(ExitCode::SUCCESS);
    }
    match r.witness {
        Some((i, j)) => println!(
            "FAIL: words {} and {} are at distance {}: [{}] [{}]",
            i + 1,
            j + 1,
            r.min_distance,
            code.words[i],
            code.words[j]
        ),
        None => println!("FAIL: distance below {d}"),
    }
    Ok(ExitCode::from(EXIT_VERIFY))
}

/// `a` or `a..b`, inclusive.
fn parse_range(s: &str, what: &str) -> Result<Vec<u64>> {
    let bad = || usage(format!("--{what}: expected a number or a range like 4..6, got {s:?}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(usage(format!("--{what}: empty range {s:?}")));
    }
    Ok((lo..=hi).collect())
}

fn cmd_table(n: &str, q: &str, d: &str, format: Format, compare: bool, only: bool) -> Result<ExitCode> {
    let (ns, qs, ds) = (parse_range(n, "n")?, parse_range(q, "q")?, parse_range(d, "d")?);
    let mut points = Vec::new();
    for &n in &ns {
        for &q in &qs {
            for &d in &ds {
                if d % 2 == 0 && n >= 2 && q >= 2 && (2..=2 * n).contains(&d) {
                    points.push(Params::new(n, q, d)?);
                }
            }
        }
    }
    if points.is_empty() {
        return Err(usage("no valid (n, q, d) in the given ranges"));
    }
    if compare {
        let rows: Vec<_> = points.par_iter().map(comparison).collect();
        match format {
            Format::Json => println!("{}", serde_json::to_string_pretty(&rows)?),
            _ => print!("{}", comparisons_to_csv(&rows)?),
        }
        return Ok(ExitCode::SUCCESS);
    }
    let cached = Cache::from_env().load()?;
    let records: Vec<ResultRecord> = points
        .par_iter()
        .map(|p| -> Result<ResultRecord> {
            let mut bounds = all_bounds(p)?;
            if only {
                bounds = certified_only(bounds);
            }
            let mut r = ResultRecord::new(p, bounds);
            let key = PointParams::from(p);
            r.exact = cached.iter().rev().find(|c| c.params == key && c.exact.is_some()).and_then(|c| c.exact);
            Ok(r)
        })
        .collect::<Result<_>>()?;
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&records)?),
        Format::Csv => print!("{}", records_to_csv(&records)?),
        Format::Table => {
            for (r, p) in records.iter().zip(&points) {
                print!("{}", bounds_table(p, &r.bounds));
                if let Some(v) = r.exact {
                    println!("exact (cached): {v}");
                }
                println!();
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
