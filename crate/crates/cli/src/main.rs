use std::io::Read;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use lucasdep::bounds::HeightPolicy;
use lucasdep::cfrac::{convergents, default_bits, expand, named_constant, rational_quotients, ContinuedFraction};
use lucasdep::config::{cache_dir, CACHE_DIR_ENV};
use lucasdep::interval::{format_sci, parse_decimal, Interval};
use lucasdep::lattice::{de_weger_lower_bound, lll_reduce, LatticeBasis};
use lucasdep::mdep::{closure_search, search, SearchWindow};
use lucasdep::pipeline::certificate::to_canonical_json;
use lucasdep::pipeline::{prove, replay, validate, ProveConfig};
use lucasdep::sequences::{lucas_term, SequenceParams};

#[derive(Parser)]
#[command(name = "lucasdep", version, about = "Multiplicative dependence of k-generalized Lucas numbers")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the proof for a range of k and write certificates.
    Prove {
        /// Range A..B (inclusive).
        #[arg(long, default_value = "2..25")]
        k_range: String,
        /// Every k in [2, 1000]; takes many hours.
        #[arg(long)]
        full: bool,
        #[arg(long, default_value_t = 256)]
        precision_bits: u32,
        /// Write the JSON certificates here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, env = CACHE_DIR_ENV)]
        cache_dir: Option<PathBuf>,
        /// Use A_2 = k log 3 for 2 alpha - 1 in the bound on n.
        #[arg(long)]
        certified_heights: bool,
        /// Re-run every recorded lattice pass after the proof.
        #[arg(long)]
        replay: bool,
    },
    /// Print L_n of order k.
    Lucas {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: i64,
    },
    /// Dependent pairs (m, n) with m_min <= m < n <= n_max, m, n != 1.
    Search {
        #[arg(long)]
        k_range: String,
        #[arg(long)]
        n_max: i64,
        #[arg(long, default_value_t = 0)]
        m_min: i64,
        /// Test every pair instead of grouping by primitive base.
        #[arg(long)]
        pairwise: bool,
        #[arg(long, env = CACHE_DIR_ENV)]
        cache_dir: Option<PathBuf>,
    },
    /// Continued fraction up to the first denominator above M.
    Cfrac {
        /// log3/log2, golden, sqrt2, or a decimal number.
        value: String,
        #[arg(long)]
        m: String,
        /// Starting precision in bits (doubled as needed).
        #[arg(long)]
        precision: Option<u32>,
    },
    /// LLL-reduce a basis given as {"dim": d, "columns": [[...], ...]} (file or stdin).
    Lll {
        input: Option<PathBuf>,
    },
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s.split_once("..").ok_or_else(|| anyhow!("expected a range A..B, got {s:?}"))?;
    let b = b.trim_start_matches('=');
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn parse_int(s: &str) -> Result<BigInt> {
    let q = parse_decimal(s)?;
    if !q.is_integer() {
        bail!("{s} is not an integer");
    }
    Ok(q.to_integer())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().cmd {
        Cmd::Prove { k_range, full, precision_bits, report, cache_dir: dir, certified_heights, replay: do_replay } => {
            let (a, b) = if full { (2, 1000) } else { parse_range(&k_range)? };
            let cfg = ProveConfig {
                precision_bits,
                cache_dir: cache_dir(dir),
                policy: if certified_heights { HeightPolicy::Certified } else { HeightPolicy::Nominal },
            };
            let certs = prove(a, b, &cfg)?;
            let mut ok = true;
            for c in &certs {
                let problems = validate(c);
                let sols: Vec<String> = c.solutions.iter().map(|s| format!("({}, {})", s.m, s.n)).collect();
                eprintln!(
                    "k = {:>4}: m <= {}, n <= {}, solutions [{}]{}",
                    c.k,
                    c.m_bound_after_lll.map_or("-".into(), |m| m.to_string()),
                    c.n_bound_final,
                    sols.join(", "),
                    if problems.is_empty() { String::new() } else { format!(", INVALID: {problems:?}") }
                );
                ok &= problems.is_empty();
                if do_replay {
                    let bad = replay(c, cfg.cache_dir.as_deref())?;
                    if !bad.is_empty() {
                        eprintln!("k = {}: passes not reproduced: {bad:?}", c.k);
                        ok = false;
                    }
                }
            }
            let text = to_canonical_json(&certs)?;
            match report {
                Some(p) => std::fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?,
                None => println!("{text}"),
            }
            if !ok {
                bail!("certificate validation failed");
            }
        }
        Cmd::Lucas { k, n } => {
            println!("{}", lucas_term(SequenceParams::lucas(k)?, n)?);
        }
        Cmd::Search { k_range, n_max, m_min, pairwise, cache_dir: dir } => {
            let (a, b) = parse_range(&k_range)?;
            let w = SearchWindow::new(a, b, n_max, m_min)?;
            let dir = cache_dir(dir);
            let hits = if pairwise { search(&w, dir.as_deref())? } else { closure_search(&w, dir.as_deref())? };
            println!("{}", serde_json::to_string_pretty(&serde_json::to_value(&hits)?)?);
        }
        Cmd::Cfrac { value, m, precision } => {
            let m = parse_int(&m)?;
            let cf = match value.as_str() {
                "log3/log2" | "golden" | "sqrt2" => expand(|b| named_constant(&value, b), &m, precision.unwrap_or_else(|| default_bits(&m)))?,
                v => {
                    // a decimal is rational: expand exactly and stop at the first q > M
                    let q = parse_decimal(v)?;
                    let all = rational_quotients(&q);
                    let conv = convergents(&all);
                    let n = conv.iter().position(|(_, d)| *d > m).unwrap_or(all.len() - 1);
                    ContinuedFraction::from_quotients(Interval::from_rational(&q, 64), all[..=n].to_vec())
                }
            };
            println!("{}", serde_json::to_string_pretty(&cf.summary())?);
        }
        Cmd::Lll { input } => {
            let text = match input {
                Some(p) => std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?,
                None => {
                    let mut s = String::new();
                    std::io::stdin().read_to_string(&mut s)?;
                    s
                }
            };
            println!("{}", serde_json::to_string_pretty(&run_lll(&text)?)?);
        }
    }
    Ok(())
}

fn run_lll(text: &str) -> Result<Value> {
    let v: Value = serde_json::from_str(text)?;
    let dim = v["dim"].as_u64().ok_or_else(|| anyhow!("missing \"dim\""))? as usize;
    let cols = v["columns"].as_array().ok_or_else(|| anyhow!("missing \"columns\""))?;
    let entry = |x: &Value| -> Result<BigInt> {
        match x {
            Value::String(s) => parse_int(s),
            Value::Number(n) => parse_int(&n.to_string()),
            _ => bail!("column entries must be integers or decimal strings"),
        }
    };
    let columns: Vec<Vec<BigInt>> = cols
        .iter()
        .map(|c| c.as_array().ok_or_else(|| anyhow!("each column must be an array"))?.iter().map(entry).collect())
        .collect::<Result<_>>()?;
    if columns.len() != dim || columns.iter().any(|c| c.len() != dim) {
        bail!("expected {dim} columns of length {dim}");
    }
    let y: Vec<BigInt> = match v.get("target") {
        Some(Value::Array(t)) => t.iter().map(entry).collect::<Result<_>>()?,
        _ => vec![BigInt::from(0); dim],
    };
    let reduced = lll_reduce(&LatticeBasis::new(columns)?)?;
    let out = de_weger_lower_bound(&reduced, &y)?;
    let c1 = Interval::from_rational(&out.c1_sq, 64).sqrt()?;
    Ok(json!({
        "dim": dim,
        "columns": reduced.basis.columns().iter().map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "c1": format_sci(&c1.mid(), 12),
        "delta": format_sci(&out.delta().mid(), 12),
    }))
}
