//! `rmm`: validate, build, query and benchmark parentheses structures.

mod bench;
mod input;
mod script;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rmm_core::{OrdinalTree, StaticRmm, StaticRmmConfig};
use serde_json::json;

const ABOUT: &str = "Range min-max tree tools for balanced parentheses.

Input files hold '(' and ')' (or '1' and '0') with whitespace ignored, or a
binary RMMT structure written by `build`. Positions are 0-based bit
positions; ranks are 1-based.

Exit codes: 0 ok, 1 usage, 2 validation failure, 3 I/O.";

#[derive(Parser)]
#[command(name = "rmm", version, about = ABOUT)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check balance and print a JSON report.
    Validate { file: PathBuf },
    /// Build a static structure and write it in RMMT format.
    Build {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Bits per leaf chunk (power of two, at least 64).
        #[arg(long, default_value_t = 512)]
        chunk_bits: usize,
        /// Children per internal node (power of two, at least 2).
        #[arg(long, default_value_t = 32)]
        arity: usize,
    },
    /// Run a query script: one `op arg...` per line, one result per line.
    ///
    /// Failing queries print `ERR <message>` and the run continues. Missing
    /// relatives print `none`. Range queries print `position value`.
    Query { structure: PathBuf, script: PathBuf },
    /// Time operations and print CSV (op,n,samples,p50_ns,p99_ns).
    Bench {
        structure: PathBuf,
        /// Comma-separated operation names.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "find_close,find_open,enclose,lca,rmqi,excess"
        )]
        ops: Vec<String>,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Drive a dynamic structure with alternating inserts and deletes.
        #[arg(long)]
        dynamic: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// List the operation names accepted by `query` and `bench`.
    Ops,
}

pub enum Failure {
    Usage(String),
    Invalid(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Invalid(m) | Failure::Io(m) => m,
        }
    }
}

fn validate(file: PathBuf) -> Result<(), Failure> {
    let bits = input::load(&file)?.bits;
    let (mut e, mut depth) = (0i64, 0i64);
    for b in bits.iter() {
        e += if b { 1 } else { -1 };
        depth = depth.max(e);
    }
    let violation = bits.first_violation();
    let mut report = json!({
        "length": bits.len(),
        "balanced": violation.is_none(),
        "max_depth": depth,
        "nodes": bits.count_ones(),
    });
    if let Some(pos) = violation {
        report["first_violation"] = json!(pos);
    }
    println!("{report}");
    match violation {
        Some(pos) => Err(Failure::Invalid(format!("unbalanced at position {pos}"))),
        None => Ok(()),
    }
}

fn build(input: PathBuf, output: PathBuf, chunk_bits: usize, arity: usize) -> Result<(), Failure> {
    let config =
        StaticRmmConfig::new(chunk_bits, arity).map_err(|e| Failure::Usage(e.to_string()))?;
    let bits = input::load(&input)?.bits;
    let s = StaticRmm::build(bits, config).map_err(|e| Failure::Invalid(e.to_string()))?;
    std::fs::write(&output, s.to_bytes())
        .map_err(|e| Failure::Io(format!("{}: {e}", output.display())))?;
    let total = s.size_in_bits();
    let len = s.bits().len();
    println!(
        "{}",
        json!({
            "length": len,
            "nodes": s.bits().count_ones(),
            "total_bits": total,
            "bits_per_node": s.bits_per_node(),
            "overhead_fraction": (total - len) as f64 / len as f64,
        })
    );
    Ok(())
}

fn structure(path: &Path) -> Result<StaticRmm, Failure> {
    let loaded = input::load(path)?;
    StaticRmm::build(loaded.bits, loaded.config.unwrap_or_default())
        .map_err(|e| Failure::Invalid(e.to_string()))
}

fn query(structure_path: PathBuf, script_path: PathBuf) -> Result<(), Failure> {
    let s = structure(&structure_path)?;
    let text = String::from_utf8(input::read(&script_path)?)
        .map_err(|_| Failure::Invalid(format!("{}: not UTF-8 text", script_path.display())))?;
    let queries = script::parse(&text)
        .map_err(|e| Failure::Invalid(format!("{}: {e}", script_path.display())))?;
    let tree = OrdinalTree::new(&s).ok();
    let mut out = String::new();
    for q in &queries {
        match script::eval(&s, tree.as_ref(), q) {
            Ok(v) => out.push_str(&v.to_string()),
            Err(e) => {
                out.push_str("ERR ");
                out.push_str(&e.to_string());
            }
        }
        out.push('\n');
    }
    print!("{out}");
    Ok(())
}

fn bench_cmd(
    path: PathBuf,
    ops: Vec<String>,
    samples: usize,
    dynamic: bool,
    seed: u64,
) -> Result<(), Failure> {
    let ops = ops
        .iter()
        .map(|n| {
            script::Op::parse(n.trim())
                .ok_or_else(|| Failure::Usage(format!("unknown operation {n:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let loaded = input::load(&path)?;
    let opts = bench::Options {
        ops,
        samples,
        dynamic,
        seed,
    };
    let csv = bench::run(loaded.bits, loaded.config.unwrap_or_default(), &opts)
        .map_err(|e| Failure::Invalid(e.to_string()))?;
    print!("{csv}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Validate { file } => validate(file),
        Command::Build {
            input,
            output,
            chunk_bits,
            arity,
        } => build(input, output, chunk_bits, arity),
        Command::Query { structure, script } => query(structure, script),
        Command::Bench {
            structure,
            ops,
            samples,
            dynamic,
            seed,
        } => bench_cmd(structure, ops, samples, dynamic, seed),
        Command::Ops => {
            for op in script::Op::all() {
                println!("{} {}", op.name(), op.args().len());
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("rmm: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
