//! `hkcert` — certify, tabulate, sweep and verify lattice certificates from
//! the command line.
//!
//! Exit codes: 0 general type (constructed or from the literature),
//! 2 non-negative Kodaira dimension, 3 open or inconclusive, 4 empty moduli
//! space, 5 certificate rejected by `verify`, 1 usage or internal error.

mod output;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hkcert::certify::{certify_all, verify_certificate, Certificate, CertifyOptions, Family, ModuliQuery, DEFAULT_BUDGET};
use hkcert::diophantine::{solve_parity, ParityMode};
use hkcert::squares::{
    four_squares_constrained, three_distinct_coprime_of_n_or_n_minus_2, three_squares_distinct_coprime,
    three_squares_positive_coprime, FourSquareMode,
};
use hkcert::tables::{k32_table, og10_table};

use crate::output::{write_atomic, write_table_csv};
use crate::sweep::{run_sweep, SweepSpec, ValueRange};

/// Exit code for usage and internal errors.
const EXIT_ERROR: u8 = 1;
/// Exit code when `verify` rejects a certificate.
const EXIT_REJECTED: u8 = 5;

#[derive(Debug, Parser)]
#[command(name = "hkcert", version, about = "Lattice certificates for moduli of polarized hyperkähler manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certify one moduli space (every component unless --a is given).
    Certify(CertifyArgs),
    /// Reproduce the low-t embedding table of a family.
    Table(TableArgs),
    /// Certify a grid of moduli spaces in parallel.
    Sweep(SweepArgs),
    /// Verify a certificate file (one certificate or a JSON array).
    Verify(VerifyArgs),
    /// Decompose an integer as a constrained sum of squares.
    Decompose(DecomposeArgs),
    /// Solve α₁X₁ + α₂X₂ + α₃X₃ = K with a parity constraint and minimal norm.
    Solve(SolveArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    K3n,
    Og10,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::K3n => Family::K3n,
            FamilyArg::Og10 => Family::Og10,
        }
    }
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Enable the budgeted exhaustive embedding search as a fallback.
    #[arg(long)]
    exhaustive: bool,
    /// Node budget of the exhaustive search.
    #[arg(long, env = "HKCERT_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

impl SearchArgs {
    fn options(&self) -> CertifyOptions {
        CertifyOptions {
            exhaustive: self.exhaustive,
            budget: self.budget,
        }
    }
}

#[derive(Debug, Args)]
struct CertifyArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// n for K3^[n].
    #[arg(long)]
    n: Option<u64>,
    /// The degree d, where h² = 2d.
    #[arg(long, conflicts_with = "two_d", required_unless_present = "two_d")]
    d: Option<u64>,
    /// The degree given as 2d (must be even).
    #[arg(long = "two-d")]
    two_d: Option<u64>,
    /// Divisibility γ of the polarization.
    #[arg(long)]
    gamma: u64,
    /// Component label a.
    #[arg(long)]
    a: Option<u64>,
    #[command(flatten)]
    search: SearchArgs,
    /// Write the certificate JSON to this file instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableFamilyArg {
    K32,
    Og10,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long, value_enum)]
    family: TableFamilyArg,
    #[arg(long)]
    t_min: u64,
    #[arg(long)]
    t_max: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: TableFormat,
    /// Output file (stdout by default).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// n values, as `N` or `A..B` (inclusive); K3^[n] only.
    #[arg(long)]
    n: Option<ValueRange>,
    /// γ values, as `G` or `A..B` (inclusive).
    #[arg(long)]
    gamma: ValueRange,
    /// d values, as `D` or `A..B` (inclusive).
    #[arg(long, conflicts_with = "two_d", required_unless_present = "two_d")]
    d: Option<ValueRange>,
    /// 2d values, as `X` or `A..B` (inclusive); odd values are skipped.
    #[arg(long = "two-d")]
    two_d: Option<ValueRange>,
    /// Number of worker threads.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[command(flatten)]
    search: SearchArgs,
    /// Summary CSV path (stdout by default).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory receiving one certificate JSON per query.
    #[arg(long)]
    certs_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    path: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DecomposeMode {
    ThreeDistinctCoprime,
    ThreePositiveCoprime,
    NOrNMinus2,
    FourCoprime,
    FourGamma1,
    FourK32,
    FourPositiveCoprime,
    FourDistinctPositiveCoprime,
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    n: u64,
    #[arg(long, value_enum)]
    mode: DecomposeMode,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ParityArg {
    AllOdd,
    OneEven,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// The coefficients α₁,α₂,α₃.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    alphas: Vec<i64>,
    /// The right-hand side K.
    #[arg(long, allow_negative_numbers = true)]
    k: i64,
    /// Parity pattern (derived from K when omitted).
    #[arg(long, value_enum)]
    mode: Option<ParityArg>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Certify(args) => cmd_certify(args),
        Command::Table(args) => cmd_table(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Decompose(args) => cmd_decompose(args),
        Command::Solve(args) => cmd_solve(args),
    }
}

fn resolve_d(d: Option<u64>, two_d: Option<u64>) -> Result<u64, String> {
    match (d, two_d) {
        (Some(d), None) => Ok(d),
        (None, Some(x)) if x % 2 == 0 => Ok(x / 2),
        (None, Some(x)) => Err(format!("2d = {x} is odd")),
        _ => Err("pass exactly one of --d and --two-d".into()),
    }
}

fn summary_line(cert: &Certificate) -> String {
    let q = &cert.query;
    let space = match q.family {
        Family::K3n => format!("K3^[{}]", q.n.unwrap_or(0)),
        Family::Og10 => "OG10".to_string(),
    };
    let a = q.a.map_or("-".to_string(), |a| a.to_string());
    format!(
        "{space} d = {} (2d = {}) γ = {} a = {a}: {}",
        q.d,
        2 * q.d as u128,
        q.gamma,
        cert.verdict.name()
    )
}

fn cmd_certify(args: CertifyArgs) -> Result<u8, String> {
    let d = resolve_d(args.d, args.two_d)?;
    let query = ModuliQuery {
        family: args.family.into(),
        n: args.n,
        d,
        gamma: args.gamma,
        a: args.a,
    };
    let certs = certify_all(&query, &args.search.options()).map_err(|e| e.to_string())?;
    for c in &certs {
        eprintln!("{}", summary_line(c));
    }
    let json = if certs.len() == 1 {
        serde_json::to_string_pretty(&certs[0])
    } else {
        serde_json::to_string_pretty(&certs)
    }
    .map_err(|e| e.to_string())?;
    match &args.json {
        Some(path) => write_atomic(path, format!("{json}\n").as_bytes()).map_err(|e| e.to_string())?,
        None => println!("{json}"),
    }
    let weakest = certs
        .iter()
        .min_by_key(|c| c.verdict.rank())
        .expect("certify_all returns at least one certificate");
    Ok(weakest.verdict.exit_code() as u8)
}

fn cmd_table(args: TableArgs) -> Result<u8, String> {
    let rows = match args.family {
        TableFamilyArg::K32 => k32_table(args.t_min, args.t_max),
        TableFamilyArg::Og10 => og10_table(args.t_min, args.t_max),
    }
    .map_err(|e| e.to_string())?;
    let bytes = match args.format {
        TableFormat::Csv => write_table_csv(&rows).map_err(|e| e.to_string())?,
        TableFormat::Json => {
            let mut s = serde_json::to_string_pretty(&rows).map_err(|e| e.to_string())?;
            s.push('\n');
            s.into_bytes()
        }
    };
    emit(args.out.as_deref(), &bytes)?;
    Ok(0)
}

fn emit(path: Option<&std::path::Path>, bytes: &[u8]) -> Result<(), String> {
    match path {
        Some(p) => write_atomic(p, bytes).map_err(|e| e.to_string()),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes).map_err(|e| e.to_string())
        }
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<u8, String> {
    let d = match (args.d, args.two_d) {
        (Some(d), None) => d.values(),
        (None, Some(x)) => x.values().into_iter().filter(|v| v % 2 == 0).map(|v| v / 2).collect(),
        _ => return Err("pass exactly one of --d and --two-d".into()),
    };
    let family: Family = args.family.into();
    let n = match (family, args.n) {
        (Family::K3n, Some(n)) => n.values().into_iter().map(Some).collect(),
        (Family::K3n, None) => return Err("K3^[n] sweeps need --n".into()),
        (Family::Og10, None) => vec![None],
        (Family::Og10, Some(_)) => return Err("OG10 sweeps take no --n".into()),
    };
    let spec = SweepSpec {
        family,
        n,
        gamma: args.gamma.values(),
        d,
        workers: args.workers,
        options: args.search.options(),
        certs_dir: args.certs_dir,
    };
    let summary = run_sweep(&spec)?;
    emit(args.out.as_deref(), &summary)?;
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, String> {
    let text = std::fs::read_to_string(&args.path).map_err(|e| format!("{}: {e}", args.path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| format!("parse error: {e}"))?;
    let certs: Vec<Certificate> = if value.is_array() {
        serde_json::from_value(value)
    } else {
        serde_json::from_value(value).map(|c| vec![c])
    }
    .map_err(|e| format!("not a certificate: {e}"))?;
    if certs.is_empty() {
        return Err("no certificate in file".into());
    }
    let mut all = true;
    for c in &certs {
        let ok = verify_certificate(c).map_err(|e| e.to_string())?;
        eprintln!("{}: {}", summary_line(c), if ok { "verified" } else { "REJECTED" });
        all &= ok;
    }
    Ok(if all { 0 } else { EXIT_REJECTED })
}

fn cmd_decompose(args: DecomposeArgs) -> Result<u8, String> {
    let n = args.n;
    let (target, dec) = match args.mode {
        DecomposeMode::ThreeDistinctCoprime => (n, three_squares_distinct_coprime(n).map_err(|e| e.to_string())?),
        DecomposeMode::ThreePositiveCoprime => (n, three_squares_positive_coprime(n).map_err(|e| e.to_string())?),
        DecomposeMode::NOrNMinus2 => match three_distinct_coprime_of_n_or_n_minus_2(n).map_err(|e| e.to_string())? {
            Some((m, d)) => (m, Some(d)),
            None => (n, None),
        },
        DecomposeMode::FourCoprime => (n, four_squares_constrained(n, FourSquareMode::Coprime)),
        DecomposeMode::FourGamma1 => (n, four_squares_constrained(n, FourSquareMode::Gamma1)),
        DecomposeMode::FourK32 => (n, four_squares_constrained(n, FourSquareMode::K32)),
        DecomposeMode::FourPositiveCoprime => (n, four_squares_constrained(n, FourSquareMode::PositiveCoprime)),
        DecomposeMode::FourDistinctPositiveCoprime => {
            (n, four_squares_constrained(n, FourSquareMode::DistinctPositiveCoprime))
        }
    };
    let out = serde_json::json!({
        "n": n,
        "mode": format!("{:?}", args.mode),
        "target": target,
        "decomposition": dec,
    });
    println!("{}", serde_json::to_string_pretty(&out).map_err(|e| e.to_string())?);
    Ok(0)
}

fn cmd_solve(args: SolveArgs) -> Result<u8, String> {
    let alphas: [i64; 3] = args
        .alphas
        .as_slice()
        .try_into()
        .map_err(|_| "pass exactly three coefficients".to_string())?;
    let mode = match args.mode {
        Some(ParityArg::AllOdd) => ParityMode::AllOdd,
        Some(ParityArg::OneEven) => ParityMode::OneEven,
        None => ParityMode::for_rhs(args.k),
    };
    let sol = solve_parity(alphas, args.k, mode).map_err(|e| e.to_string())?;
    println!("{}", serde_json::to_string_pretty(&sol).map_err(|e| e.to_string())?);
    Ok(0)
}
